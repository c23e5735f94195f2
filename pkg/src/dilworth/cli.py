"""Command-line driver.

Exit codes: 0 success, 1 a computed value disagreed with its check,
2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io
from .amoeba import ConjSpaceRep, amoeba_dim_combinatorial, amoeba_dim_trials
from .counterexamples import verify_counterexample1, verify_counterexample2
from .errors import InputError, TransversalityError, VerificationFailure
from .field import DEFAULT_PRIME, DEFAULT_TRIALS, check_prime, hstack, mat_left_kernel, mat_rank
from .geodil import verify_section_dilworth
from .hadamard import (
    HadamardInstance,
    conjecture_value,
    generic_dimension,
    generic_witness,
    min_nested_upper_bound,
    nested_upper_bound,
    numeric_rank_trials,
    pair_matroid_rank,
)
from .matroids import CountFunction, pebble_game_basis
from .setfunc import (
    DEFAULT_CAP,
    bits,
    dilworth_matroid_witness,
    dilworth_partition,
    full_mask,
    induced_independent,
    to_mask,
)


class Failed(Exception):
    """Raised by a subcommand whose report records a failed check."""

    def __init__(self, report):
        super().__init__("verification failed")
        self.report = report


def _subset(text, m):
    if text is None:
        return full_mask(m)
    try:
        elems = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--subset must be comma separated integers, got {text!r}", field="subset") from None
    for e in elems:
        if not 0 <= e < m:
            raise InputError(f"--subset element {e} outside 0..{m - 1}", field="subset")
    return to_mask(elems)


def _int_list(text, name):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--{name} must be comma separated integers, got {text!r}", field=name) from None


# --------------------------------------------------------------------------
# subcommands; each returns a JSON-able report and the scalar shown in human mode


def cmd_rank_matrix(args):
    M = io.read(args.input, io.parse_matrix, p=args.prime)
    rank = mat_rank(M)
    report = {"rows": M.rows, "cols": M.cols, "rank": rank}
    if args.left_kernel:
        report["left_kernel"] = mat_left_kernel(M)
    return report, rank


def cmd_dilworth(args):
    f = io.read(args.function, io.parse_set_function, p=args.prime)
    F = _subset(args.subset, f.m)
    report = {"mode": args.mode, "method": args.method, "subset": bits(F)}
    if args.mode == "truncation":
        value, blocks = dilworth_partition(f, F, args.cap, args.method)
        report.update(value=value, partition=[bits(B) for B in blocks])
    elif args.mode == "matroid":
        value, F0, blocks = dilworth_matroid_witness(f, F, args.cap, args.method)
        report.update(value=value, singletons=bits(F0), partition=[bits(B) for B in blocks])
    else:
        value = induced_independent(f, F, args.cap, fast=args.method == "dp")
        report.update(value=value)
    return report, report["value"]


def cmd_sparsity(args):
    G = io.read(args.graph, io.parse_graph)
    c = CountFunction(G, args.k, args.l)
    F = _subset(args.subset, G.edge_count)
    basis = pebble_game_basis(c, F)
    report = {"k": args.k, "l": args.l, "edges": G.edge_count, "rank": len(basis), "basis": basis}
    return report, len(basis)


def _grouping(text, d):
    if text is None:
        return None
    try:
        g = json.loads(text)
    except json.JSONDecodeError:
        raise InputError(f"--grouping must be a JSON nested list, got {text!r}", field="grouping") from None

    def tup(node):
        return tuple(tup(x) for x in node) if isinstance(node, list) else node

    return tup(g)


def _freeze(node):
    return [_freeze(x) for x in node] if isinstance(node, tuple) else node


def cmd_hadamard_dim(args):
    mats = [io.read(path, io.parse_matrix, p=args.prime, where=f"spaces[{i}]") for i, path in enumerate(args.spaces)]
    inst = HadamardInstance.of(*mats)
    F = _subset(args.subset, inst.m)
    report = {"method": args.method, "subset": bits(F), "dims": list(inst.dims), "trials": []}
    if args.method == "numeric":
        trials = numeric_rank_trials(inst, F, args.seed, args.trials)
        report.update(rank=max(trials), trials=trials)
    elif args.method == "pair":
        if inst.d != 2:
            raise InputError(f"method 'pair' needs exactly two spaces, got {inst.d}", field="spaces")
        r1, r2 = inst.rank_functions()
        report["rank"] = pair_matroid_rank(r1, r2, F, args.cap)
    elif args.method == "bound":
        kw = dict(seed=args.seed, trials=args.trials, cap=args.cap)
        g = _grouping(args.grouping, inst.d)
        if g is None:
            value, g = min_nested_upper_bound(inst, F, **kw)
        else:
            value = nested_upper_bound(inst, F, g, **kw)
        report.update(rank=value, grouping=_freeze(g))
    else:
        report["rank"] = conjecture_value(inst.rank_functions(), F, args.cap)
    return report, report["rank"]


def cmd_amoeba_dim(args):
    rep = ConjSpaceRep(io.read(args.space, io.parse_conj_matrix, p=args.prime))
    report = {"method": args.method, "m": rep.m, "n": rep.n}
    if args.method in ("both", "combinatorial"):
        report["combinatorial"] = amoeba_dim_combinatorial(rep.rank_function(), args.cap)
    if args.method in ("both", "numeric"):
        trials = amoeba_dim_trials(rep, args.seed, args.trials)
        report.update(numeric=max(trials), trials=trials)
    if args.method == "both":
        report["agree"] = report["combinatorial"] == report["numeric"]
        report["dimension"] = report["combinatorial"]
        if not report["agree"]:
            raise Failed(report)
    else:
        report["dimension"] = report[args.method]
    return report, report["dimension"]


def cmd_generic_witness(args):
    dims = _int_list(args.dims, "dims")
    mats = generic_witness(dims, args.m, args.prime)
    rank = mat_rank(hstack(mats))
    expected = generic_dimension(dims, args.m)
    report = {
        "dims": dims,
        "m": args.m,
        "matrices": [io.matrix_to_json(M) for M in mats],
        "rank": rank,
        "expected": expected,
        "ok": rank == expected,
    }
    if rank != expected:
        raise Failed(report)
    return report, rank


def cmd_section_check(args):
    fam = io.read(args.family, io.parse_family, p=args.prime)
    seeds = np.random.SeedSequence(args.seed).spawn(args.trials)
    runs = [
        verify_section_dilworth(fam, args.codim, int(child.generate_state(1)[0]), args.cap)
        for child in seeds
    ]
    report = {"codim": args.codim, "members": fam.size, "runs": runs, "ok": all(r["ok"] for r in runs)}
    if not report["ok"]:
        raise Failed(report)
    return report, "pass"


def cmd_verify(which):
    fn = verify_counterexample1 if which == 1 else verify_counterexample2

    def run(args):
        report = fn(seed=args.seed, trials=args.trials, p=args.prime)
        if not report["ok"]:
            raise Failed(report)
        return report, report["verdict"]

    return run


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME, help="prime modulus, 1 mod 4")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="random evaluations per generic rank")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest ground set for exhaustive search")
    common.add_argument("--json", action="store_true", help="print the full JSON report")

    parser = argparse.ArgumentParser(prog="dilworth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank-matrix", parents=[common], help="rank of a matrix over GF(p)")
    p.add_argument("--input", required=True)
    p.add_argument("--left-kernel", action="store_true")
    p.set_defaults(run=cmd_rank_matrix)

    p = sub.add_parser("dilworth", parents=[common], help="Dilworth truncation of a set function")
    p.add_argument("--function", required=True)
    p.add_argument("--subset")
    p.add_argument("--mode", choices=["truncation", "matroid", "independent"], default="matroid")
    p.add_argument("--method", choices=["dp", "enumerate"], default="dp")
    p.set_defaults(run=cmd_dilworth)

    p = sub.add_parser("sparsity", parents=[common], help="(k,l)-count matroid rank by the pebble game")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--subset")
    p.set_defaults(run=cmd_sparsity)

    p = sub.add_parser("hadamard-dim", parents=[common], help="rank in the matroid of a Hadamard product")
    p.add_argument("--spaces", nargs="+", required=True)
    p.add_argument("--subset")
    p.add_argument("--method", choices=["numeric", "pair", "bound", "conjecture"], default="numeric")
    p.add_argument("--grouping", help='bracketing as JSON, e.g. "[[0,1],2]"; default: best of all')
    p.set_defaults(run=cmd_hadamard_dim)

    p = sub.add_parser("amoeba-dim", parents=[common], help="dimension of the amoeba of a linear space")
    p.add_argument("--space", required=True)
    p.add_argument("--method", choices=["both", "combinatorial", "numeric"], default="both")
    p.set_defaults(run=cmd_amoeba_dim)

    p = sub.add_parser("generic-witness", parents=[common], help="0/1 spaces of generic Hadamard dimension")
    p.add_argument("--dims", required=True, help="comma separated n_1,...,n_d")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(run=cmd_generic_witness)

    p = sub.add_parser("section-check", parents=[common], help="random sections against the truncation formula")
    p.add_argument("--family", required=True)
    p.add_argument("--codim", type=int, default=1)
    p.set_defaults(run=cmd_section_check)

    p = sub.add_parser("verify-ce1", parents=[common], help="first counterexample")
    p.set_defaults(run=cmd_verify(1))
    p = sub.add_parser("verify-ce2", parents=[common], help="second counterexample")
    p.set_defaults(run=cmd_verify(2))
    return parser


def _emit(report, value, as_json, out):
    if as_json:
        out.write(io.dumps(report) + "\n")
    else:
        out.write(f"{json.dumps(value) if not isinstance(value, str) else value}\n")


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        check_prime(args.prime)
        if args.trials < 1:
            raise InputError("--trials must be at least 1", field="trials")
        if args.cap < 1:
            raise InputError("--cap must be at least 1", field="cap")
        report, value = args.run(args)
    except Failed as exc:
        _emit(exc.report, "fail", args.json, out)
        failed = exc.report.get("failed")
        err.write(f"verification failed{': ' + ', '.join(failed) if failed else ''}\n")
        return 1
    except (VerificationFailure, TransversalityError) as exc:
        err.write(f"verification failed: {exc}\n")
        return 1
    except InputError as exc:
        field = f" [{exc.field}]" if exc.field else ""
        err.write(f"input error{field}: {exc}\n")
        return 2
    _emit(report, value, args.json, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
