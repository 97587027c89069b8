"""Command-line interface: enumerate, verify, lattice, walk, selfcheck, fourier.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
State files are JSON objects {"k": k, "alpha": [[[re, im], ...], ...], "kappa": ...}.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import List, Optional

import numpy as np

from .algebra import DEFAULT_TOL
from .functionals import Functional, fourier_all, idempotency_report, is_state
from .idempotents import classify, enumerate_catalog
from .lattice import build_order, export_dot, export_json, hasse
from .selfcheck import run_selfcheck
from .serialize import StateFileError, catalog_to_dict, functional_to_dict, load_state
from .walks import MAX_STEPS, WALK_TOL, cesaro, cesaro_limit, walk

__all__ = ["main", "build_parser", "format_scalar"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CESARO_N = 10**4

log = logging.getLogger("sekine")


class UsageError(Exception):
    pass


def format_real(x: float, k: int, tol: float = DEFAULT_TOL) -> str:
    frac = Fraction(x).limit_denominator(4 * k * k)
    if abs(float(frac) - x) < tol:
        return str(frac)
    return f"{x:.12g}"


def format_scalar(z: complex, k: int, tol: float = DEFAULT_TOL) -> str:
    """Small rationals print as fractions ("1/8"), everything else as floats."""
    z = complex(z)
    re = format_real(z.real, k, tol) if abs(z.real) >= tol else "0"
    if abs(z.imag) < tol:
        return re
    im = format_real(abs(z.imag), k, tol)
    sign = "-" if z.imag < 0 else "+"
    return f"{im}i" if re == "0" and sign == "+" else (f"-{im}i" if re == "0" else f"{re}{sign}{im}i")


def _nonzero_terms(f: Functional, k: int, tol: float) -> List[str]:
    out = []
    for name, arr, sym in (("alpha", f.alpha, "d"), ("kappa", f.kappa, "e")):
        for i, j in zip(*np.nonzero(np.abs(arr) > tol)):
            out.append(f"{format_scalar(arr[i, j], k, tol)} {sym}~{i},{j}")
    return out


def _print_json(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def _check_k_arg(k: int) -> int:
    if k < 2:
        raise UsageError(f"k must be >= 2, got {k}")
    return k


def _load(path: str, k: Optional[int]) -> Functional:
    f = load_state(path)
    if k is not None and f.k != k:
        raise StateFileError(f"{path}: file has k={f.k} but --k {k} was given")
    return f


# ---------------------------------------------------------------------------
# commands


def cmd_enumerate(args) -> int:
    k = _check_k_arg(args.k)
    catalog = enumerate_catalog(k, verify=False, tol=args.tol)
    doc = catalog_to_dict(catalog, args.tol)
    ok = all(m["residuals"]["passed"] for m in doc["members"])
    if args.format == "json":
        _print_json(doc)
    else:
        print(f"k={k}: {len(catalog)} idempotent states")
        for entry, member in zip(catalog, doc["members"]):
            res = member["residuals"]
            print(f"{entry.label:<24} {entry.descriptor.family:<5} max residual {max(res['residual_A'], res['residual_B'], res['residual_C']):.1e}")
            print("    " + " + ".join(_nonzero_terms(entry.functional, k, args.tol)))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    f = _load(args.state, args.k)
    state = is_state(f, args.tol)
    report = idempotency_report(f, args.tol)
    doc = {"k": f.k, "is_state": state.passed, "state_failures": state.failures(), **report.as_dict()}
    if report.passed:
        match = classify(f, enumerate_catalog(f.k, verify=False))
        doc["descriptor"] = match.label if match is not None else None
    _print_json(doc)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_lattice(args) -> int:
    k = _check_k_arg(args.k)
    catalog = enumerate_catalog(k, tol=args.tol)
    orders = {m: build_order(catalog, m) for m in ("convolution", "fourier", "theory")}
    base = orders["convolution"].rel
    mismatched = [m for m, o in orders.items() if not np.array_equal(o.rel, base)]
    if mismatched:
        for m in mismatched:
            bad = np.argwhere(orders[m].rel != base)
            for i, j in bad[:10]:
                log.error("%s disagrees with convolution on (%s, %s)", m, catalog.labels[i], catalog.labels[j])
        return EXIT_FAIL
    hd = hasse(orders["convolution"])
    sys.stdout.write(export_dot(hd) if args.format == "dot" else export_json(hd, k) + "\n")
    return EXIT_OK


def cmd_walk(args) -> int:
    mu = _load(args.state, args.k)
    if not is_state(mu, args.tol).passed:
        log.error("input is not a state: %s", "; ".join(is_state(mu, args.tol).failures()))
        return EXIT_FAIL
    catalog = enumerate_catalog(mu.k, verify=False)
    report = walk(mu, max_steps=args.max_steps, tol=args.walk_tol, catalog=catalog)
    doc = report.to_dict()
    if args.cesaro:
        limit = cesaro_limit(mu)
        match = classify(limit, catalog)
        average = cesaro(mu, args.cesaro_n)
        doc["cesaro"] = {
            "limit": functional_to_dict(limit),
            "limit_descriptor": match.label if match is not None else None,
            "average_n": args.cesaro_n,
            "average_distance_to_limit": average.distance(limit),
        }
    _print_json(doc)
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    k = _check_k_arg(args.k)
    results = run_selfcheck(k, seed=args.seed)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"selfcheck k={k}: FAILED ({', '.join(failed)})")
        return EXIT_FAIL
    print(f"selfcheck k={k}: all {len(results)} checks passed")
    return EXIT_OK


def cmd_fourier(args) -> int:
    f = _load(args.state, args.k)
    hats = fourier_all(f)
    if args.format == "json":
        _print_json({f"{p},{q}": [[[z.real, z.imag] for z in row] for row in fm.matrix] for (p, q), fm in hats.items()})
        return EXIT_OK
    width = 1
    cells = {}
    for lab, fm in hats.items():
        cells[lab] = [[format_scalar(z, f.k, args.tol) for z in row] for row in fm.matrix]
        width = max(width, *(len(c) for row in cells[lab] for c in row))
    for (p, q), rows in cells.items():
        print(f"({p},{q})  [{rows[0][0]:>{width}} {rows[0][1]:>{width}}]")
        print(f"{'':{len(f'({p},{q})')}}  [{rows[1][0]:>{width}} {rows[1][1]:>{width}}]")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sekine", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="numerical tolerance (default 1e-9)")
        p.set_defaults(func=func)
        return p

    p = add("enumerate", cmd_enumerate, "list every idempotent state of A_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--format", choices=["json", "table"], default="table")

    p = add("verify", cmd_verify, "check that a state file is an idempotent state")
    p.add_argument("state")
    p.add_argument("--k", type=int)

    p = add("lattice", cmd_lattice, "Hasse diagram of the idempotent states, cross-checked three ways")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--format", choices=["dot", "json"], default="dot")

    p = add("walk", cmd_walk, "convolution powers of a state")
    p.add_argument("state")
    p.add_argument("--k", type=int)
    p.add_argument("--max-steps", type=int, default=MAX_STEPS)
    p.add_argument("--walk-tol", type=float, default=WALK_TOL, help="convergence threshold (default 1e-10)")
    p.add_argument("--cesaro", action="store_true", help="also report the Cesaro limit and its classification")
    p.add_argument("--cesaro-n", type=int, default=CESARO_N, help="length of the finite average reported alongside")

    p = add("selfcheck", cmd_selfcheck, "run the algebra, representation and Fourier invariant suites")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = add("fourier", cmd_fourier, "Fourier matrices of a functional at every label")
    p.add_argument("state")
    p.add_argument("--k", type=int)
    p.add_argument("--format", choices=["table", "json"], default="table")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, StateFileError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
