"""Command-line entry point.

Exit codes: 0 success or PASS, 1 a check FAILed, 2 input errors.  Words
are 1-based letter lists (``2,1`` or ``21``), weights are ``L1+2*L3`` or a
JSON vector of pairings.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .algebra import AlgebraError, RationalFunction
from .birational import apply_word
from .cartan import CartanError, act_weight
from .expression import ExpressionError, parse_expression
from .poisson import PoissonStructure, StructureError, load_structure, preset
from .report import CheckError, Report
from .tau import (
    OracleMismatch,
    check_integrality,
    cocycle,
    format_weight,
    normalization_cocycle,
    tau_action,
    tau_term,
)
from .verify import FIXTURE_PRESETS, PropertyConfig, run_fixture_suite, run_property_suite

__all__ = ["main", "parse_expression", "parse_word", "parse_weight"]


class InputError(ValueError):
    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}: {detail}" if detail else code)
        self.code = code


def parse_word(text: str, n: int) -> Tuple[int, ...]:
    """``"2,1"`` or ``"21"`` -> 0-based letters ``(1, 0)``; ``""`` or ``"1"``... see below.

    An empty string (or ``e``) is the identity word.
    """
    text = text.strip()
    if text in ("", "e", "[]"):
        return ()
    if text.startswith("["):
        try:
            items = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError("BAD_WORD", str(e)) from None
    elif "," in text or " " in text:
        items = [t for t in re.split(r"[,\s]+", text) if t]
    else:
        items = list(text)
    out = []
    for t in items:
        try:
            k = int(t)
        except (TypeError, ValueError):
            raise InputError("BAD_WORD", f"letter {t!r} is not an integer") from None
        if not 1 <= k <= n:
            raise InputError("BAD_WORD", f"letter {k} outside 1..{n}")
        out.append(k - 1)
    return tuple(out)


_WEIGHT_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*?\s*)?L(\d+)\s*")


def parse_weight(text: str, n: int) -> Tuple[int, ...]:
    """``"L1+2*L3"`` or ``"[1,0,2]"`` -> pairings with the simple coroots."""
    text = text.strip()
    if text.startswith("["):
        try:
            vec = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError("BAD_WEIGHT", str(e)) from None
        if len(vec) != n or not all(isinstance(v, int) for v in vec):
            raise InputError("BAD_WEIGHT", f"expected {n} integers")
        return tuple(vec)
    if text == "0":
        return (0,) * n
    out = [0] * n
    pos = 0
    first = True
    while pos < len(text):
        m = _WEIGHT_TERM.match(text, pos)
        if m is None or m.end() == pos or (not first and m.group(1) is None):
            raise InputError("BAD_WEIGHT", f"cannot parse {text!r} at position {pos}")
        k = int(m.group(3))
        if not 1 <= k <= n:
            raise InputError("BAD_WEIGHT", f"L{k} outside L1..L{n}")
        c = int(m.group(2)) if m.group(2) else 1
        out[k - 1] += -c if m.group(1) == "-" else c
        pos = m.end()
        first = False
    if first:
        raise InputError("BAD_WEIGHT", "empty weight")
    return tuple(out)


def _structure(args) -> PoissonStructure:
    if getattr(args, "structure", None):
        try:
            text = Path(args.structure).read_text(encoding="utf-8")
        except OSError as e:
            raise InputError("IO_ERROR", str(e)) from None
        return load_structure(text)
    return preset(args.preset or "A2")


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _emit_report(args, rep: Report) -> int:
    if args.format == "json":
        print(json.dumps(rep.to_json(timing=args.timing), indent=2, sort_keys=True))
    else:
        for e in rep.entries:
            line = f"{e.status:7} {e.name}"
            if e.status != "PASS":
                if e.expected is not None:
                    line += f"\n        expected: {e.expected}"
                if e.actual is not None:
                    line += f"\n        actual:   {e.actual}"
                if e.detail:
                    line += f"\n        {e.detail}"
            if args.verbose or e.status != "PASS":
                print(line)
        print(rep.summary() + (f" in {rep.wall_time:.2f}s" if args.timing else ""))
    return 0 if rep.ok else 1


def cmd_bracket(args) -> int:
    ps = _structure(args)
    f = parse_expression(args.f, ps.table)
    g = parse_expression(args.g, ps.table)
    val = ps.bracket(f, g)
    _emit(args, val.to_text(), {"bracket": val.to_text()})
    return 0


def cmd_act(args) -> int:
    ps = _structure(args)
    word = parse_word(args.word, ps.n)
    val = apply_word(ps, word, parse_expression(args.expr, ps.table))
    _emit(args, val.to_text(), {"word": [j + 1 for j in word], "image": val.to_text()})
    return 0


def cmd_tau(args) -> int:
    ps = _structure(args)
    word = parse_word(args.word, ps.n)
    weight = parse_weight(args.weight, ps.n)
    t = tau_action(ps, word, tau_term(ps, weight))
    text = f"coefficient: {t.coeff.to_text()}\nweight: {format_weight(t.weight)}"
    _emit(args, text, {"word": [j + 1 for j in word], "weight": list(weight),
                       "coefficient": t.coeff.to_text(), "result_weight": list(t.weight),
                       "result_weight_text": format_weight(t.weight)})
    return 0


def cmd_cocycle(args) -> int:
    ps = _structure(args)
    word = parse_word(args.word, ps.n)
    weight = parse_weight(args.weight, ps.n)
    val = cocycle(ps, word, weight, cross_check=True)
    status = 0
    lines = [val.value.to_text()]
    data = val.to_json()
    if args.certify_polynomial:
        ok = val.polynomial_form is not None
        lines.append("polynomial: PASS" if ok else "polynomial: FAIL (NOT_POLYNOMIAL)")
        data["certified_polynomial"] = ok
        status = max(status, 0 if ok else 1)
    if args.check_integrality:
        try:
            rep = check_integrality(ps, word, weight)
            ok = rep.ok
            lines.append("integrality: PASS" if ok else "integrality: FAIL (INTEGRALITY_FAIL)")
            data["integrality"] = "PASS" if ok else "INTEGRALITY_FAIL"
        except CheckError as e:
            ok = False
            lines.append(f"integrality: FAIL ({e.code}: {e.detail})")
            data["integrality"] = e.code
        status = max(status, 0 if ok else 1)
    _emit(args, "\n".join(lines), data)
    return status


def cmd_normalization(args) -> int:
    ps = _structure(args)
    word = parse_word(args.word, ps.n)
    weight = parse_weight(args.weight, ps.n)
    val = normalization_cocycle(ps.cartan, word, weight, ps.table, ps.lambdas)
    poly = val.to_polynomial()
    _emit(args, val.to_text(), {"word": [j + 1 for j in word], "weight": list(weight),
                                "value": val.to_text(), "polynomial": poly is not None})
    return 0


def cmd_verify(args) -> int:
    if args.suite == "fixtures":
        if args.structure:
            raise InputError("BAD_ARGUMENTS", "fixture suites run on presets only")
        names = FIXTURE_PRESETS if args.preset in (None, "all") else (args.preset,)
        status = 0
        reports = []
        for name in names:
            if name not in FIXTURE_PRESETS:
                raise InputError("UNKNOWN_PRESET", f"{name} (fixtures exist for {', '.join(FIXTURE_PRESETS)})")
            reports.append(run_fixture_suite(name))
        if args.format == "json" and len(reports) > 1:
            print(json.dumps([r.to_json(timing=args.timing) for r in reports], indent=2, sort_keys=True))
            return 0 if all(r.ok for r in reports) else 1
        for rep in reports:
            status = max(status, _emit_report(args, rep))
        return status
    ps = _structure(args)
    cfg = PropertyConfig(random_pairs=args.random_pairs, relation_samples=args.samples)
    return _emit_report(args, run_property_suite(ps, args.max_len, args.seed, cfg))


def cmd_validate(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError("IO_ERROR", str(e)) from None
    ps = load_structure(text)
    msg = f"OK: rank {ps.n}, generators {', '.join(ps.generator_names)}"
    _emit(args, msg, {"status": "OK", "rank": ps.n, "generators": list(ps.generator_names)})
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--preset", help="built-in structure: 2A1, A2, B2, G2, A2(1) (default A2)")
    src.add_argument("--structure", metavar="FILE", help="JSON structure file")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--timing", action="store_true", help="include wall times in reports")
    common.add_argument("-v", "--verbose", action="store_true", help="list passing checks too")

    p = argparse.ArgumentParser(prog="birweyl", description="Birational Weyl group actions from nilpotent Poisson algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bracket", parents=[common], help="Poisson bracket of two expressions")
    s.add_argument("f")
    s.add_argument("g")
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("act", parents=[common], help="apply a Weyl word to an expression")
    s.add_argument("--word", required=True)
    s.add_argument("expr")
    s.set_defaults(func=cmd_act)

    s = sub.add_parser("tau", parents=[common], help="act on tau^weight")
    s.add_argument("--word", required=True)
    s.add_argument("--weight", required=True)
    s.set_defaults(func=cmd_tau)

    s = sub.add_parser("cocycle", parents=[common], help="the tau-cocycle phi_w(weight)")
    s.add_argument("--word", required=True)
    s.add_argument("--weight", required=True)
    s.add_argument("--certify-polynomial", action="store_true")
    s.add_argument("--check-integrality", action="store_true")
    s.set_defaults(func=cmd_cocycle)

    s = sub.add_parser("normalization", parents=[common], help="the normalization cocycle N_w(weight)")
    s.add_argument("--word", required=True)
    s.add_argument("--weight", required=True)
    s.set_defaults(func=cmd_normalization)

    s = sub.add_parser("verify", parents=[common], help="run the fixture or property suite")
    s.add_argument("suite", choices=("fixtures", "properties"))
    s.add_argument("--max-len", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, default=20, help="random cocycle-relation tuples")
    s.add_argument("--random-pairs", type=int, default=10, help="random pairs per canonical check")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("validate", parents=[common], help="validate a structure file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ExpressionError as e:
        print(f"error: {e.code} at position {e.position}: {e.detail}", file=sys.stderr)
    except StructureError as e:
        for code, detail in e.issues:
            print(f"error: {code}: {detail}", file=sys.stderr)
    except (InputError, CartanError, CheckError) as e:
        print(f"error: {e}", file=sys.stderr)
    except OracleMismatch as e:
        print(f"FAIL: {e}", file=sys.stderr)
        return 1
    except (AlgebraError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
