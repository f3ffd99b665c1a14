"""Command-line front end: analysis pipelines over the map catalog.

JSON is the interchange format; the text rendering is derived from the same
report dict.  Exit codes: 0 success, 1 malformed input, 2 validation failure
(not a sphere map), 3 inconclusive analysis (jet order cap hit).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from .scalars import ComplexRadical
from .polys import BiPoly, on_unit_sphere
from .maps import SphereMap, example_46, example_47
from .reflection import build_reflection
from .degeneracy import (
    CertificationError,
    classify_map,
    generic_rank,
    jet_degeneracy,
    kernel_at_point,
    stratify,
    x_classify,
    x_fiber,
)
from .deformations import (
    aut_basis,
    in_hol,
    is_trivial_deformation,
    solve_hol,
)
from . import catalog

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_NOT_SPHERE_MAP = 2
EXIT_INCONCLUSIVE = 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _resolve_map(spec: str, args) -> SphereMap:
    if spec == "example-4.7" and (args.cos or args.sin):
        try:
            return example_47(Fraction(args.cos or "3/5"), Fraction(args.sin or "4/5"))
        except (ValueError, ZeroDivisionError) as exc:
            raise CliError(str(exc), EXIT_MALFORMED)
    try:
        return catalog.resolve(spec)
    except KeyError:
        pass
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(str(exc), EXIT_MALFORMED)
    path = Path(spec)
    if path.exists():
        try:
            data = json.loads(path.read_text())
            return SphereMap.from_json(data)
        except (ValueError, KeyError) as exc:
            raise CliError(f"bad map file {spec}: {exc}", EXIT_MALFORMED)
    raise CliError(f"cannot resolve map {spec!r}", EXIT_MALFORMED)


def _parse_point(text: str, n: int):
    try:
        parts = [Fraction(p) for p in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise CliError(f"bad point {text!r}", EXIT_MALFORMED)
    if len(parts) != 2 * n:
        raise CliError(
            f"point needs {2*n} rational entries (re,im per coordinate)", EXIT_MALFORMED
        )
    pt = tuple(
        ComplexRadical.from_rational(parts[2 * j], parts[2 * j + 1]) for j in range(n)
    )
    if not on_unit_sphere(pt):
        raise CliError("point is not exactly on the unit sphere", EXIT_MALFORMED)
    return pt


def _require_valid(h: SphereMap):
    if not h.validate():
        raise CliError(f"{h.name or 'map'} is not a sphere map", EXIT_NOT_SPHERE_MAP)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_validate(args) -> tuple[dict, int]:
    h = _resolve_map(args.map, args)
    valid = h.validate()
    report = {
        "map": h.name,
        "n": h.n,
        "m": h.m,
        "degree": h.degree,
        "valid": valid,
        "denominator_certified": h.denominator_certificate(),
    }
    return report, EXIT_OK if valid else EXIT_NOT_SPHERE_MAP


def cmd_reflection_matrix(args) -> tuple[dict, int]:
    h = _resolve_map(args.map, args)
    _require_valid(h)
    r = build_reflection(h)
    report = {
        "map": h.name,
        "degree": r.d,
        "shape": list(r.shape),
        "row_labels": [list(a) for a in r.basis],
        "v": r.v.to_json(),
        "vh": r.vh.to_json(),
        "text": _matrix_text(r),
    }
    return report, EXIT_OK


def _matrix_text(r) -> list[str]:
    cells = [[str(e) for e in row] for row in r.v.rows]
    labels = ["zbar^" + "".join(str(x) for x in a) for a in r.basis]
    width = max(len(c) for row in cells for c in row)
    lw = max(len(l) for l in labels)
    return [
        f"{lab:<{lw}} | " + "  ".join(f"{c:<{width}}" for c in row)
        for lab, row in zip(labels, cells)
    ]


def cmd_classify(args) -> tuple[dict, int]:
    h = _resolve_map(args.map, args)
    _require_valid(h)
    r = build_reflection(h)
    try:
        c = classify_map(h, r)
    except CertificationError as exc:
        return {"map": h.name, "error": str(exc)}, EXIT_INCONCLUSIVE
    report = {"map": h.name, "classification": c.to_json()}
    return report, EXIT_OK


def cmd_degeneracy(args) -> tuple[dict, int]:
    h = _resolve_map(args.map, args)
    _require_valid(h)
    if not args.point:
        raise CliError("degeneracy needs --point", EXIT_MALFORMED)
    pt = _parse_point(args.point, h.n)
    r = build_reflection(h)
    refl = kernel_at_point(r, pt)
    jet = jet_degeneracy(h, pt, max_order=args.max_order)
    code = EXIT_OK if jet.conclusive else EXIT_INCONCLUSIVE
    report = {
        "map": h.name,
        "reflection": refl.to_json(),
        "jet": jet.to_json(),
        "agree": refl.kernel_dim == jet.kernel_dim,
    }
    return report, code


def cmd_stratify(args) -> tuple[dict, int]:
    h = _resolve_map(args.map, args)
    _require_valid(h)
    r = build_reflection(h)
    rep = stratify(r, seed=args.seed)
    return {"map": h.name, "stratification": rep.to_json()}, EXIT_OK


def cmd_xfiber(args) -> tuple[dict, int]:
    h = _resolve_map(args.map, args)
    _require_valid(h)
    if not args.point:
        raise CliError("xfiber needs --point", EXIT_MALFORMED)
    pt = _parse_point(args.point, h.n)
    r = build_reflection(h)
    fib = x_fiber(r, pt)
    return {"map": h.name, "fiber": fib.to_json()}, EXIT_OK


def cmd_hol(args) -> tuple[dict, int]:
    h = _resolve_map(args.map, args)
    _require_valid(h)
    r = build_reflection(h)
    hol = solve_hol(h, r)
    report = {
        "map": h.name,
        "real_dimension": hol.real_dimension,
        "q_power": hol.q_power,
        "infinite": hol.infinite,
    }
    if hol.infinite:
        report["label"] = hol.label
    else:
        aut = aut_basis(h)
        hol.aut_dimension = aut.real_dimension
        report["aut_dimension"] = aut.real_dimension
        report["nontrivial_dimension"] = hol.nontrivial_dimension
        report["rigid"] = hol.real_dimension == aut.real_dimension
        report["stabilizer_dimension"] = aut.stabilizer_dimension
    if args.basis:
        report["basis"] = [[p.to_json() for p in vec] for vec in hol.basis]
    if args.check:
        report["check"] = _check_vector(h, args.check)
    return report, EXIT_OK


def _check_vector(h: SphereMap, path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
        vec = tuple(BiPoly.from_json(h.n, t) for t in data["numerator"])
        e = int(data.get("q_power", 0 if h.is_polynomial() else 1))
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(f"bad vector file {path}: {exc}", EXIT_MALFORMED)
    if len(vec) != h.m:
        raise CliError("vector component count mismatch", EXIT_MALFORMED)
    member = in_hol(h, vec, e)
    out = {"member": member}
    if member:
        out["trivial"] = is_trivial_deformation(h, vec, e)
    return out


def cmd_xclassify(args) -> tuple[dict, int]:
    h = _resolve_map(args.map, args)
    _require_valid(h)
    r = build_reflection(h)
    verdict = x_classify(r, seed=args.seed)
    code = EXIT_OK if verdict.kind != "inconclusive" else EXIT_INCONCLUSIVE
    return {"map": h.name, "x_variety": verdict.to_json()}, code


def _analyze_one(h: SphereMap, seed: int) -> tuple[dict, int]:
    t0 = time.monotonic()
    report: dict = {"map": h.name, "n": h.n, "m": h.m, "degree": h.degree}
    if not h.validate():
        report["valid"] = False
        return report, EXIT_NOT_SPHERE_MAP
    report["valid"] = True
    r = build_reflection(h)
    report["reflection_shape"] = list(r.shape)
    cls = classify_map(h, r)
    report["classification"] = cls.to_json()
    strat = stratify(r, seed=seed)
    report["stratification"] = strat.to_json()
    report["x_variety"] = x_classify(r, seed=seed).to_json()
    hol = solve_hol(h, r)
    report["hol"] = {
        "real_dimension": hol.real_dimension,
        "infinite": hol.infinite,
    }
    if hol.infinite:
        report["hol"]["label"] = hol.label
    else:
        aut = aut_basis(h)
        rigid = hol.real_dimension == aut.real_dimension
        report["hol"]["aut_dimension"] = aut.real_dimension
        report["hol"]["nontrivial_dimension"] = hol.real_dimension - aut.real_dimension
        report["hol"]["rigid"] = rigid
        if rigid and hol.real_dimension - aut.real_dimension != 0:
            raise AssertionError("inconsistent rigidity report")
    report["elapsed_s"] = round(time.monotonic() - t0, 3)
    return report, EXIT_OK


def cmd_analyze(args) -> tuple[dict, int]:
    if args.all:
        keys = list(catalog.DEFAULT_KEYS)
        threads = int(os.environ.get("SPHEREMAP_THREADS", "1"))
        maps = [catalog.resolve(k) for k in keys]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(lambda m: _analyze_one(m, args.seed), maps))
        else:
            results = [_analyze_one(m, args.seed) for m in maps]
        code = max((c for _, c in results), default=EXIT_OK)
        return {"reports": [rep for rep, _ in results]}, code
    h = _resolve_map(args.map, args)
    return _analyze_one(h, args.seed)


def cmd_catalog(args) -> tuple[dict, int]:
    entries = []
    for key in catalog.DEFAULT_KEYS:
        h = catalog.resolve(key)
        entries.append(
            {
                "key": key,
                "n": h.n,
                "m": h.m,
                "degree": h.degree,
                "valid": h.validate(),
                "note": catalog.entry_note(key),
            }
        )
    return {"entries": entries}, EXIT_OK


# ---------------------------------------------------------------------------
# rendering and entry point
# ---------------------------------------------------------------------------


def _render_text(data, indent: int = 0, out=None):
    pad = "  " * indent
    if isinstance(data, dict):
        for k in data:
            v = data[k]
            if isinstance(v, (dict, list)) and v and not _is_scalar_list(v):
                print(f"{pad}{k}:", file=out)
                _render_text(v, indent + 1, out)
            elif (
                isinstance(v, list)
                and v
                and all(isinstance(x, str) for x in v)
                and sum(map(len, v)) > 60
            ):
                print(f"{pad}{k}:", file=out)
                for x in v:
                    print(f"{pad}  {x}", file=out)
            else:
                print(f"{pad}{k}: {_fmt(v)}", file=out)
    elif isinstance(data, list):
        for item in data:
            if isinstance(item, (dict, list)):
                _render_text(item, indent + 1, out)
                print(f"{pad}-", file=out)
            else:
                print(f"{pad}{_fmt(item)}", file=out)


def _is_scalar_list(v) -> bool:
    return isinstance(v, list) and all(
        not isinstance(x, (dict, list)) for x in v
    )


def _fmt(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    return str(v)


COMMANDS = {
    "validate": cmd_validate,
    "reflection-matrix": cmd_reflection_matrix,
    "classify": cmd_classify,
    "degeneracy": cmd_degeneracy,
    "stratify": cmd_stratify,
    "xfiber": cmd_xfiber,
    "x-classify": cmd_xclassify,
    "hol": cmd_hol,
    "analyze": cmd_analyze,
    "catalog": cmd_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spheremap",
        description="Exact analysis of rational sphere maps: reflection "
        "matrices, degeneracy, X-varieties and infinitesimal deformations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name not in ("catalog",):
            p.add_argument(
                "map",
                nargs="?" if name == "analyze" else None,
                help="catalog key (e.g. 'H(2,3)', 'example-4.4') or JSON file",
            )
        p.add_argument("--json", action="store_true", help="emit the JSON report")
        p.add_argument("--point", help="sphere point: re,im per coordinate")
        p.add_argument("--max-order", type=int, default=None, dest="max_order")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cos", help="cosine parameter for example-4.7")
        p.add_argument("--sin", help="sine parameter for example-4.7")
        if name == "hol":
            p.add_argument("--basis", action="store_true", help="include the basis")
            p.add_argument("--check", help="JSON vector file to test for membership")
        if name == "analyze":
            p.add_argument("--all", action="store_true", help="whole catalog")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "analyze" and not args.all and not args.map:
        print("analyze needs a map key or --all", file=sys.stderr)
        return EXIT_MALFORMED
    try:
        report, code = COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    report = {"schema_version": SCHEMA_VERSION, "command": args.command, **report}
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        _render_text(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
