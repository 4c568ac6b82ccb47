"""Command-line entry point.

Exit codes: 0 success, 1 bad input, 2 criterion/oracle disagreement,
3 undecided oracle searches, 4 quiver is not Dynkin, 5 window too wide.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from . import aisles as al
from . import verdict as vd
from .derivedcat import DerivedCat, derived_cat
from .errors import (
    DerivedEqError,
    NotRepresentationFinite,
    OracleDisagreement,
    ParseError,
    WindowTooWide,
)
from .exactlin import check_prime, load_quiver

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DISAGREE = 2
EXIT_UNDECIDED = 3
EXIT_NOT_DYNKIN = 4
EXIT_TOO_WIDE = 5


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_window(text: str) -> Tuple[int, int]:
    m = re.fullmatch(r"\s*(-?\d+)\s*:\s*(-?\d+)\s*", text)
    if not m:
        raise ParseError(f"window must look like lo:hi, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if not lo <= 0 <= hi:
        raise ParseError("window must contain 0")
    return lo, hi


def parse_subcat(cat: DerivedCat, text: str) -> frozenset:
    """``all``, ``{}``/``0`` or ``{name, name, ...}`` of degree-0 objects."""
    text = text.strip()
    if text == "all":
        return cat.A.all
    if text in ("0", "{}"):
        return frozenset()
    if not (text.startswith("{") and text.endswith("}")):
        raise ParseError(f"expected a set in braces, got {text!r}")
    body = text[1:-1].strip()
    if not body:
        return frozenset()
    out = set()
    for part in _split_top(body, ","):
        X = cat.parse(part)
        if len(X) != 1 or X.stalks[0][1] != 0:
            raise ParseError(f"{part.strip()!r} is not a single module")
        out.add(X.stalks[0][0])
    return frozenset(out)


def _split_top(text: str, sep: str) -> List[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


def parse_torsion(cat: DerivedCat, text: str) -> Tuple[frozenset, Optional[frozenset]]:
    fields = _fields(text, {"T", "F"})
    if "T" not in fields:
        raise ParseError("torsion class must be given as T={...}")
    T = parse_subcat(cat, fields["T"])
    F = parse_subcat(cat, fields["F"]) if "F" in fields else None
    return T, F


def _fields(text: str, allowed: set) -> Dict[str, str]:
    out = {}
    for part in _split_top(text, ";") if ";" in text else _split_top(text, ","):
        if not part.strip():
            continue
        if "=" not in part:
            raise ParseError(f"expected key=value, got {part.strip()!r}")
        k, v = part.split("=", 1)
        k = k.strip()
        if k not in allowed:
            raise ParseError(f"unknown key {k!r}")
        out[k] = v.strip()
    return out


def parse_sequence(cat: DerivedCat, text: str) -> al.RefinedTSeq:
    """``n:W={..},t={..};n+1:W=...``; degrees must be consecutive."""
    entries: Dict[int, Tuple[frozenset, frozenset]] = {}
    for chunk in _split_top(text, ";"):
        if not chunk.strip():
            continue
        m = re.fullmatch(r"\s*(-?\d+)\s*:(.*)", chunk, re.S)
        if not m:
            raise ParseError(f"expected n:W=...,t=..., got {chunk.strip()!r}")
        n = int(m.group(1))
        if n in entries:
            raise ParseError(f"degree {n} given twice")
        parts = {}
        for item in _split_top(m.group(2), ","):
            if "=" not in item:
                raise ParseError(f"expected key=value, got {item.strip()!r}")
            k, v = item.split("=", 1)
            if k.strip() not in ("W", "t"):
                raise ParseError(f"unknown key {k.strip()!r}")
            parts[k.strip()] = parse_subcat(cat, v)
        if "W" not in parts:
            raise ParseError(f"degree {n} has no W")
        entries[n] = (parts["W"], parts.get("t", frozenset()))
    if not entries:
        raise ParseError("empty sequence")
    lo, hi = min(entries), max(entries)
    missing = [n for n in range(lo, hi + 1) if n not in entries]
    if missing:
        raise ParseError(f"degrees must be consecutive; missing {missing[0]}")
    ws = tuple(entries[n][0] for n in range(lo, hi + 1))
    ts = tuple(entries[n][1] for n in range(lo, hi + 1))
    return al.RefinedTSeq((lo, hi), ws, ts, cat.A.all)


# -- reports -----------------------------------------------------------------


def indecs_report(cat: DerivedCat) -> dict:
    A = cat.A
    rows = []
    for i in range(cat.m):
        t = A.tau_idx[i]
        ti = A.tau_inv_idx[i]
        rows.append(
            {
                "ordinal": i,
                "name": A.name(i),
                "dimvec": list(A.dimvecs[i]),
                "orbit": A.orbit_label(i),
                "projective": A.is_projective(i),
                "injective": A.is_injective(i),
                "tau": A.name(t) if t is not None else None,
                "tau_inverse": A.name(ti) if ti is not None else None,
            }
        )
    return {"quiver": cat.q.name, "field": cat.p, "count": len(rows), "indecomposables": rows}


def aisle_report(a: al.Aisle, v: vd.Verdict, name: str) -> dict:
    out = v.to_json(a, name)
    out["aisle"] = a.to_json()
    if a.is_bounded():
        out["heart"] = al.heart(a).to_json(a.cat)
    return out


def survey_report(cat: DerivedCat, window: Tuple[int, int], cap: int) -> Tuple[dict, int]:
    aisles = vd.enumerate_aisles(cat, window)
    seqs = vd.enumerate_refined_sequences(cat, window)
    if len(seqs) != len(aisles):
        raise OracleDisagreement("aisle count differs from refined-sequence count", witness=(len(aisles), len(seqs)))
    closed = agree = undecided = 0
    for a in aisles:
        v = vd.main_theorem_check(a, oracle=True, cap=cap)
        closed += v.derived_equivalent
        if v.oracle.result is None:
            undecided += 1
        elif v.oracle_agreement:
            agree += 1
    silt = vd.enumerate_two_term_silting(cat)
    tilting = sum(1 for _, t in silt if t)
    decided = len(aisles) - undecided
    pct = 100.0 if decided == 0 else round(100.0 * agree / decided, 2)
    report = {
        "quiver": cat.q.name,
        "window": list(window),
        "aisles": len(aisles),
        "serre_closed": closed,
        "oracle": {"agreement_percent": pct, "undecided": undecided},
        "two_term_silting": {
            "total": len(silt),
            "tilting": tilting,
            "non_tilting": len(silt) - tilting,
            "non_tilting_objects": [cat.format(E) for E, t in silt if not t],
        },
    }
    code = EXIT_OK
    if agree != decided:
        code = EXIT_DISAGREE
    elif undecided:
        code = EXIT_UNDECIDED
    return report, code


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _flat_list(item):
                lines.append(f"{pad}-")
                lines.append(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return "\n".join(lines)


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat_list(x) for x in v)


def _scalar(v) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def emit(obj: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")
    else:
        sys.stdout.write(render_text(obj) + "\n")


# -- argument handling -----------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("quiver", help="path to a .quiver file")
    common.add_argument("--field", type=int, default=None, help="prime p of the ground field F_p")
    common.add_argument("--window", default="0:2", help="degree window lo:hi (must contain 0)")
    common.add_argument("--oracle", action="store_true", help="also run the brute-force oracle")
    common.add_argument("--cap", type=int, default=4, help="multiplicity cap for oracle searches")
    common.add_argument("--format", choices=("json", "text"), default="json")

    p = _Parser(prog="derivedeq", description="Aisles and derived equivalences for Dynkin quivers.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("indecs", parents=[common], help="list indecomposable representations")
    ap = sub.add_parser("aisle", parents=[common], help="analyse one aisle")
    ap.add_argument("source", choices=("standard", "generators", "torsion", "sequence"))
    ap.add_argument("spec", nargs="?", default=None, help="generators, T={...} or a refined sequence")
    ap.add_argument("--trace", action="store_true", help="run the simple-top reduction")
    sub.add_parser("survey", parents=[common], help="exhaustive survey over a window")
    return p


def _load(args) -> DerivedCat:
    q = load_quiver(args.quiver)
    if args.field is not None:
        check_prime(args.field)
        q = q.with_field(args.field)
    if args.cap < 1:
        raise ParseError("cap must be at least 1")
    return derived_cat(q)


def _build_aisle(cat: DerivedCat, args, window: Tuple[int, int]) -> al.Aisle:
    src = args.source
    if src != "standard" and not args.spec:
        raise ParseError(f"'{src}' needs an argument")
    if src == "standard":
        return al.aisle_standard(cat, window)
    if src == "generators":
        return al.aisle_from_generators(cat, [cat.parse(args.spec)], window)
    if src == "torsion":
        T, F = parse_torsion(cat, args.spec)
        return al.aisle_from_torsion_pair(cat, T, F, window)
    seq = parse_sequence(cat, args.spec)
    return al.aisle_from_refined_sequence(cat, seq, window)


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        window = parse_window(args.window)
        cat = _load(args)
        if args.command == "indecs":
            emit(indecs_report(cat), args.format)
            return EXIT_OK
        if args.command == "aisle":
            a = _build_aisle(cat, args, window)
            v = vd.main_theorem_check(a, oracle=args.oracle, cap=args.cap, trace_reduction=args.trace)
            emit(aisle_report(a, v, cat.q.name), args.format)
            if v.oracle is not None:
                if v.oracle.result is None:
                    return EXIT_UNDECIDED
                if not v.oracle_agreement:
                    return EXIT_DISAGREE
            return EXIT_OK
        report, code = survey_report(cat, window, args.cap)
        emit(report, args.format)
        return code
    except NotRepresentationFinite as exc:
        return _fail(exc, EXIT_NOT_DYNKIN)
    except WindowTooWide as exc:
        return _fail(exc, EXIT_TOO_WIDE)
    except OracleDisagreement as exc:
        return _fail(exc, EXIT_DISAGREE)
    except (DerivedEqError, OSError) as exc:
        return _fail(exc, EXIT_USAGE)


def _fail(exc: Exception, code: int) -> int:
    msg = f"error: {exc}"
    w = getattr(exc, "witness", None)
    if w is not None:
        msg += f" (witness: {w})"
    sys.stderr.write(msg + "\n")
    return code


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
