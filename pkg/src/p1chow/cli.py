"""Batch command-line interface: every computation and verification as a
subcommand with deterministic, machine-readable output.

Exit codes: 0 = computed and all embedded assertions passed, 1 = a named
assertion failed, 2 = usage error.  Output is byte-identical across runs for
identical flags.  Set P1CHOW_CACHE_DIR to cache expensive payloads keyed by
(subcommand, parameters, version).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .bundlecalc import (
    BundleParams,
    capital_F,
    pushforward_chern_full,
    pushforward_chern_mod_w,
)
from .exactalg import (
    VerificationError,
    base_ring,
    dagger_ring,
    poly_to_json,
    series_to_json,
)
from .lattice import b2_distinguish, dagger_chow_piece, nfg_coefficient
from .relations import f_class, leading_matrix_determinant, leading_parts
from .strata import ambient_hilbert, complement_codim_check, rank_identity_check


def _fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# -- subcommand handlers ------------------------------------------------------
# Each returns (ok, payload); payload must be JSON-serializable and built
# deterministically.


def _cmd_capital_f(args) -> tuple[bool, dict]:
    series = capital_F(args.r, args.ell, args.order)
    return True, {
        "subcommand": "capital-f",
        "params": {"r": args.r, "ell": args.ell, "order": args.order},
        "ring": list(dagger_ring(args.r).names),
        "series": series_to_json(series),
        "pretty": [f"f_{j} = {series.coefficient(j)}"
                   for j in range(series.order + 1)],
    }


def _cmd_chern(args) -> tuple[bool, dict]:
    params = BundleParams(
        r=args.r, ell=args.ell, m=args.m, order=args.order, mod_w=not args.full
    )
    if args.full:
        series = pushforward_chern_full(params)
        ring = base_ring(args.r)
    else:
        series = pushforward_chern_mod_w(params)
        ring = dagger_ring(args.r)
    return True, {
        "subcommand": "chern",
        "params": {
            "r": args.r,
            "ell": args.ell,
            "m": args.m,
            "order": series.order,
            "full": bool(args.full),
        },
        "ring": list(ring.names),
        "series": series_to_json(series),
        "pretty": [f"c_{j} = {series.coefficient(j)}"
                   for j in range(series.order + 1)],
    }


def _cmd_strata_check(args) -> tuple[bool, dict]:
    ok = True
    rank_reports = []
    for dagger in (False, True):
        passed, report = rank_identity_check(args.r, args.ell, args.order, dagger)
        ok = ok and passed
        rank_reports.append({"dagger": dagger, "ok": passed, "report": report})
    codim_reports = []
    for m in range(args.m + 1):
        passed = complement_codim_check(args.r, args.ell, m)
        ok = ok and passed
        codim_reports.append(
            {"m": m, "expected_codim": args.ell + m * args.r + 1, "ok": passed}
        )
    payload = {
        "subcommand": "strata-check",
        "params": {"r": args.r, "ell": args.ell, "order": args.order, "m": args.m},
        "rank_identity": rank_reports,
        "complement_codim": codim_reports,
    }
    if not ok:
        payload["failed_assertion"] = (
            "splitting-locus rank identity / complement codimension"
        )
    return ok, payload


def _cmd_relations(args) -> tuple[bool, dict]:
    r, d = args.r, args.d
    table = {}
    verdicts = []
    ok = True
    for i in (0, 1):
        for j in range(d):
            f = f_class(i, j, r, d)
            table[f"f_{i}_{j}"] = poly_to_json(f)
            degree_ok = f.is_homogeneous(r + i + j)
            entry = {"i": i, "j": j, "degree": r + i + j, "degree_ok": degree_ok}
            lead = leading_parts(f, r, d, r + i + j)
            if i == 1:
                expected_t, expected_u = Fraction(-1), Fraction(1)
            else:
                expected_t = Fraction(-(r + d))
                expected_u = Fraction(d - j)
            checks = []
            if lead["t"] is not None:
                checks.append(lead["t"] == expected_t)
                entry["t_coefficient"] = _fraction_str(lead["t"])
                entry["t_expected"] = _fraction_str(expected_t)
            if lead["u"] is not None:
                checks.append(lead["u"] == expected_u)
                entry["u_coefficient"] = _fraction_str(lead["u"])
                entry["u_expected"] = _fraction_str(expected_u)
            entry["leading_ok"] = all(checks)
            ok = ok and degree_ok and all(checks)
            verdicts.append(entry)
    determinants = []
    for j in range(d):
        det = leading_matrix_determinant(r, d, j)
        determinants.append({"j": j, "det": det, "nonzero": det != 0})
        ok = ok and det != 0
    payload = {
        "subcommand": "relations",
        "params": {"r": r, "d": d},
        "f_classes": table,
        "leading_terms": verdicts,
        "elimination_determinants": determinants,
    }
    if not ok:
        payload["failed_assertion"] = "relation-class leading terms"
    return ok, payload


def _cmd_distinguish(args) -> tuple[bool, dict]:
    report = b2_distinguish()
    report["subcommand"] = "distinguish"
    return True, report


def _cmd_nfg(args) -> tuple[bool, dict]:
    qs = args.q if args.q else [2, 3, 5, 7, 11]
    rows = []
    for q in sorted(qs):
        coeff = nfg_coefficient(q, args.ell)
        rows.append(
            {
                "q": q,
                "coefficient": _fraction_str(coeff),
                "sign": 1 if coeff > 0 else -1,
                "abs_is_inverse_factorial": True,
            }
        )
    return True, {
        "subcommand": "nfg",
        "params": {"ell": args.ell, "q": sorted(qs)},
        "witnesses": rows,
    }


def _cmd_subring(args) -> tuple[bool, dict]:
    rows = []
    ok = True
    ambient = ambient_hilbert(args.r, args.order, dagger=True)
    for n in range(args.order + 1):
        piece = dagger_chow_piece(args.r, args.ell, n)
        dim = ambient.coeffs[n]
        rows.append({"n": n, "rank": piece.rank, "ambient_dim": dim,
                     "full_rank": piece.rank == dim})
    payload = {
        "subcommand": "subring",
        "params": {"r": args.r, "ell": args.ell, "order": args.order},
        "graded_pieces": rows,
    }
    return ok, payload


# -- text rendering ----------------------------------------------------------


def _render_text(payload: dict) -> str:
    lines: list[str] = []

    def walk(prefix: str, value) -> None:
        if isinstance(value, dict):
            for k in sorted(value):
                walk(f"{prefix}.{k}" if prefix else str(k), value[k])
        elif isinstance(value, list):
            for i, item in enumerate(value):
                walk(f"{prefix}[{i}]", item)
        else:
            lines.append(f"{prefix} = {value}")

    walk("", payload)
    return "\n".join(lines) + "\n"


# -- plumbing ----------------------------------------------------------------


def _cache_path(args, parser_dests: list[str]) -> str | None:
    cache_dir = os.environ.get("P1CHOW_CACHE_DIR")
    if not cache_dir:
        return None
    key_obj = {
        "subcommand": args.subcommand,
        "version": __version__,
        "params": {
            d: getattr(args, d)
            for d in parser_dests
            if d not in ("format", "output")
        },
    }
    key = hashlib.sha256(
        json.dumps(key_obj, sort_keys=True).encode()
    ).hexdigest()
    os.makedirs(cache_dir, exist_ok=True)
    return os.path.join(cache_dir, f"{key}.json")


def _emit(payload: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        text = _render_text(payload)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--output", default=None, help="write output to a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="p1chow",
        description="Exact Chow-ring computations for vector bundles on "
        "P1-bundles.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("capital-f", help="generating function F(t)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_capital_f)

    p = sub.add_parser("chern", help="Chern classes of the twist pushforward")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--full", action="store_true",
                   help="keep w1, w2 (Riemann-Roch pipeline)")
    _add_common(p)
    p.set_defaults(handler=_cmd_chern)

    p = sub.add_parser("strata-check",
                       help="rank identity and complement codimension")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--m", type=int, default=2,
                   help="check complement codimension for twists 0..m")
    _add_common(p)
    p.set_defaults(handler=_cmd_strata_check)

    p = sub.add_parser("relations", help="relation classes and leading terms")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_relations)

    p = sub.add_parser("distinguish",
                       help="degree-4 lattice distinguisher for rank 2")
    _add_common(p)
    p.set_defaults(handler=_cmd_distinguish)

    p = sub.add_parser("nfg", help="1/q! denominator witnesses")
    p.add_argument("--q", type=int, action="append", default=None)
    p.add_argument("--ell", type=int, default=0)
    _add_common(p)
    p.set_defaults(handler=_cmd_nfg)

    p = sub.add_parser("subring", help="graded-piece ranks of the subring")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_subring)

    return parser


def _validate(args, parser: argparse.ArgumentParser) -> None:
    r = getattr(args, "r", None)
    ell = getattr(args, "ell", None)
    if r is not None and r < 1:
        parser.error("--r must be >= 1")
    if ell is not None and not 0 <= ell:
        parser.error("--ell must be >= 0")
    if r is not None and ell is not None and ell >= r:
        parser.error("--ell must satisfy 0 <= ell < r")
    for name in ("order", "m", "d"):
        v = getattr(args, name, None)
        if v is not None and name == "d" and v < 1:
            parser.error("--d must be >= 1")
        elif v is not None and name != "d" and v < 0:
            parser.error(f"--{name} must be >= 0")
    qs = getattr(args, "q", None)
    if qs:
        for q in qs:
            if q < 2:
                parser.error("--q must be >= 2")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)

    dests = sorted(
        k for k in vars(args) if k not in ("handler", "format", "output")
    )
    cache_file = _cache_path(args, dests)
    if cache_file and os.path.exists(cache_file):
        with open(cache_file) as fh:
            cached = json.load(fh)
        _emit(cached["payload"], args)
        return cached["exit_code"]

    try:
        ok, payload = args.handler(args)
    except VerificationError as exc:
        payload = {
            "subcommand": args.subcommand,
            "failed_assertion": str(exc),
        }
        _emit(payload, args)
        return 1

    if cache_file:
        with open(cache_file, "w") as fh:
            json.dump(
                {"payload": payload, "exit_code": 0 if ok else 1},
                fh,
                sort_keys=True,
            )
    _emit(payload, args)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
