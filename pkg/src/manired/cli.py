"""Command-line surface: oracle queries, reductions, solving, verification.

Machine-readable JSON (or CSV via -o) goes to stdout, prose to stderr,
so the tool composes in pipelines.  All randomness is seeded through
explicit arguments, and identical invocations produce byte-identical
stdout.  Exit codes: 0 success or verification pass, 1 verification
failure, 2 usage/parse error, 3 capacity (instance too large for an
exact enumeration).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import closedform, corpus, graphs, reductions, riemannian
from .errors import CapacityError, ManiredError, ParseError, PreconditionError
from .manifolds import FlagSignature, grassmann_to_flag
from .rng import XorShift64Star

_THEOREM_KEYS = {
    "stiefel-lp": "stiefel_lp",
    "grassmann-feas": "grassmann_feas",
    "flag-feas": "flag_feas",
    "stiefel-qp": "stiefel_qp",
    "flag-qp": "flag_qp",
}


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _encode(v):
    if isinstance(v, bool) or v is None or isinstance(v, (int, float, str)):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else [v.numerator, v.denominator]
    raise TypeError(f"cannot encode {v!r}")


def _parse_sig(text: str) -> FlagSignature:
    try:
        return FlagSignature.from_json(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad signature JSON: {exc}") from exc


def _load_instance(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read instance file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"instance file {path!r} is not JSON: {exc}") from exc
    return reductions.instance_from_json(obj)


# ---------------------------------------------------------------------------
# Subcommand handlers (each returns the exit code)

def _cmd_oracle(args) -> int:
    _, graph = corpus.parse_graph_spec(args.graph)
    if args.which == "alpha":
        value, cert = graphs.stability_number(graph)
        out = {"value": value, "witness": list(cert.vertices)}
    elif args.which == "kappa":
        value, cert = graphs.max_cut(graph)
        out = {"value": value, "witness": list(cert.vertices)}
    elif args.which == "omega":
        value, cert = graphs.clique_number(graph)
        out = {"value": value, "witness": list(cert.vertices)}
    else:  # ms
        _, cert = graphs.clique_number(graph)
        out = {
            "value": _encode(graphs.motzkin_straus_value(graph)),
            "witness": list(cert.vertices),
        }
    _emit(out)
    return 0


def _build_instance(graph, key, args):
    if key == "stiefel_lp":
        return reductions.build_stiefel_lp(graph, graph.m if args.n is None else args.n)
    if key == "stiefel_qp":
        return reductions.build_stiefel_qp(graph, graph.m if args.n is None else args.n)
    if key == "grassmann_feas":
        if args.k is None:
            raise ParseError("grassmann-feas needs --k")
        return reductions.build_grassmann_feasibility(graph, args.k)
    if key == "flag_feas":
        if args.sig is None:
            raise ParseError("flag-feas needs --sig")
        return reductions.build_flag_feasibility(graph, _parse_sig(args.sig))
    if args.sig is None:
        raise ParseError("flag-qp needs --sig")
    return reductions.build_flag_qp(graph, _parse_sig(args.sig))


def _cmd_reduce(args) -> int:
    _, graph = corpus.parse_graph_spec(args.graph)
    key = _THEOREM_KEYS[args.theorem]
    try:
        inst = _build_instance(graph, key, args)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    payload = reductions.instance_to_json(inst)
    if args.output is not None:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")
        print(f"wrote instance to {args.output}", file=sys.stderr)
    _emit(payload)
    return 0


def _cmd_solve_exact(args) -> int:
    inst = _load_instance(args.instance)
    family, _ = reductions.classify_instance(inst)
    if family in ("stiefel_lp", "stiefel_qp"):
        value, x = reductions.solve_stiefel_diag_exact(inst)
        cert = reductions.decode_certificate(inst, x)
        k = inst.manifold.k
        out = {
            "family": family,
            "value": _encode(value),
            "witness_diagonal": [int(round(x[i, i])) for i in range(k)],
            "certificate": cert.to_json(),
        }
    elif family in ("grassmann_feas", "flag_feas"):
        diag = reductions.feasible_diag_exact(inst)
        out = {"family": family, "feasible": diag is not None}
        if diag is not None:
            x = np.diag([float(a) for a in diag])
            cert = reductions.decode_certificate(inst, x)
            out["witness_diagonal"] = [_encode(a) for a in diag]
            out["certificate"] = cert.to_json()
        else:
            out["witness_diagonal"] = None
            out["certificate"] = None
    else:  # flag_qp: the witness construction is itself exact
        graph = reductions.instance_graph(inst)
        man = inst.manifold
        sig = man.sig if hasattr(man, "sig") else grassmann_to_flag(man)
        value = reductions.flag_qp_value(graph, sig)
        diag = reductions.flag_qp_witness_exact(graph, sig)
        x = np.diag([float(a) for a in diag])
        out = {
            "family": family,
            "value": _encode(value),
            "witness_diagonal": [_encode(a) for a in diag],
            "certificate": reductions.decode_certificate(inst, x).to_json(),
        }
    _emit(out)
    return 0


def _cmd_solve_riemannian(args) -> int:
    inst = _load_instance(args.instance)
    cfg = riemannian.AscentConfig(
        step=args.step,
        max_iters=args.max_iters,
        grad_tol=args.grad_tol,
        restarts=args.restarts,
        seed=args.seed,
    )
    trace = riemannian.ascend(inst, cfg)
    _emit(trace.to_json())
    return 0


def _cmd_closed_form(args) -> int:
    sig = _parse_sig(args.sig)
    if args.matrix is not None:
        try:
            with open(args.matrix, "r", encoding="utf-8") as fh:
                rows = json.load(fh)
            a = np.array(rows, dtype=float)
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            raise ParseError(f"cannot read matrix from {args.matrix!r}: {exc}") from exc
    else:
        if args.random_dim is None:
            raise ParseError("closed-form needs --matrix FILE or --random-dim N")
        gen = XorShift64Star(args.seed)
        a = gen.gaussian_matrix(args.random_dim, args.random_dim)
    value, x_star = closedform.solve_flag_lp(a, sig)
    out = {
        "value": value,
        "X": [list(map(float, row)) for row in x_star],
        "residuals": closedform.flag_lp_residuals(a, sig, value, x_star),
    }
    _emit(out)
    return 0


def _verify_rows(graph, gid, key, args):
    """Reports for one graph under one theorem; sweeps the parameter grid
    unless a specific parameter was pinned on the command line."""
    rows = []
    if key in ("stiefel_lp", "stiefel_qp"):
        ns = [args.n] if args.n is not None and not args.all_k else [graph.m, graph.m + 2]
        for n in ns:
            rows.append(
                reductions.verify_theorem(graph, key, n=n, graph_id=gid)
            )
    elif key == "grassmann_feas":
        ks = [args.k] if args.k is not None and not args.all_k else range(1, graph.m + 1)
        for k in ks:
            rows.append(reductions.verify_theorem(graph, key, k=k, graph_id=gid))
    elif key == "flag_feas":
        if args.sig is not None and not args.all_k:
            sigs = [_parse_sig(args.sig)]
        else:
            sigs = corpus.feasibility_signatures(graph.m) if graph.m >= 2 else []
        for sig in sigs:
            rows.append(reductions.verify_theorem(graph, key, sig=sig, graph_id=gid))
    else:  # flag_qp
        if args.sig is not None and not args.all_k:
            sigs = [_parse_sig(args.sig)]
        else:
            omega, _ = graphs.clique_number(graph)
            sigs = [
                sig
                for sig in (
                    corpus.feasibility_signatures(graph.m) if graph.m >= 2 else []
                )
                if reductions.threshold_k(sig) < omega
            ]
        for sig in sigs:
            rows.append(reductions.verify_theorem(graph, key, sig=sig, graph_id=gid))
    return rows


def _family_or_single(args):
    if args.family is not None:
        return corpus.parse_family_spec(args.family)
    if args.graph is None:
        raise ParseError("give a graph spec or --family")
    return [corpus.parse_graph_spec(args.graph)]


def _map_jobs(fn, items, jobs):
    if jobs <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _cmd_verify(args) -> int:
    key = _THEOREM_KEYS[args.theorem]
    pairs = _family_or_single(args)
    row_lists = _map_jobs(
        lambda pair: _verify_rows(pair[1], pair[0], key, args), pairs, args.jobs
    )
    reports = [r for rows in row_lists for r in rows]
    all_pass = all(r.passed for r in reports)
    _emit(
        {
            "theorem": args.theorem,
            "graphs": len(pairs),
            "rows": len(reports),
            "pass": all_pass,
            "reports": [r.to_json() for r in reports],
        }
    )
    if not all_pass:
        failing = sum(1 for r in reports if not r.passed)
        print(f"{failing} of {len(reports)} checks failed", file=sys.stderr)
        return 1
    return 0


def _cmd_report(args) -> int:
    pairs = corpus.parse_family_spec(args.family)

    class _Shim:
        n = None
        k = None
        sig = None
        all_k = True

    shim = _Shim()
    keys = list(_THEOREM_KEYS.values())

    def rows_for(pair):
        gid, graph = pair
        out = []
        for key in keys:
            out.extend(_verify_rows(graph, gid, key, shim))
        return out

    row_lists = _map_jobs(rows_for, pairs, args.jobs)
    reports = [r for rows in row_lists for r in rows]
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(reductions.CSV_HEADER)
        for r in reports:
            writer.writerow(r.csv_row())
    all_pass = all(r.passed for r in reports)
    _emit(
        {
            "graphs": len(pairs),
            "rows": len(reports),
            "pass": all_pass,
            "csv": args.output,
        }
    )
    return 0 if all_pass else 1


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="manired",
        description="Build, solve, and verify graph-to-manifold reductions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("oracle", help="exact graph oracles")
    p.add_argument("graph")
    p.add_argument("--which", required=True, choices=["alpha", "kappa", "omega", "ms"])
    p.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("reduce", help="build an instance from a graph")
    p.add_argument("graph")
    p.add_argument("--theorem", required=True, choices=sorted(_THEOREM_KEYS))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--sig", default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=_cmd_reduce)

    p = sub.add_parser("solve-exact", help="exact solve of a built instance")
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_solve_exact)

    p = sub.add_parser("solve-riemannian", help="gradient-ascent cross-check")
    p.add_argument("instance")
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--grad-tol", type=float, default=1e-8)
    p.set_defaults(handler=_cmd_solve_riemannian)

    p = sub.add_parser("closed-form", help="closed-form flag LP")
    p.add_argument("--matrix", default=None, help="JSON file with dense rows")
    p.add_argument("--random-dim", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sig", required=True)
    p.set_defaults(handler=_cmd_closed_form)

    p = sub.add_parser("verify", help="end-to-end theorem verification")
    p.add_argument("graph", nargs="?", default=None)
    p.add_argument("--family", default=None)
    p.add_argument("--theorem", required=True, choices=sorted(_THEOREM_KEYS))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--sig", default=None)
    p.add_argument("--all-k", action="store_true", help="sweep the full parameter grid")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("report", help="CSV report over a graph family")
    p.add_argument("--family", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(handler=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.handler(args)
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return 3
    except (ParseError, PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ManiredError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
