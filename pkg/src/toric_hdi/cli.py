"""Command-line interface.

Every subcommand prints one JSON document (keys sorted, so output is
byte-identical across runs). Domain errors exit with status 1 and print
``{"error": ..., "message": ...}`` on stderr.

Examples::

    toric-hdi fixtures
    toric-hdi validate --fixture b3
    toric-hdi cohomology --fixture f1 --divisor "[0,5,0,0]"
    toric-hdi characters --fixture b4
    toric-hdi hdi --fixture b2 --i 1
    toric-hdi hdi --fixture b3 --format table
    toric-hdi check-cover --morphism my_map.json
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import _kernels
from .cells import build_P, fibre_subcomplex, subcomplex_cohomology, verify_cover_axioms
from .characters import divisor_pairs, require_fibration
from .complex import build_complex, ideal_table, module_report
from .fan import Fan, ToricMorphism, all_cones, check_fan, is_complete, is_smooth, validate_morphism
from .fixtures import Fixture, fixtures, get_fixture
from .negsets import h_i


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("UsageError", message)


def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise CliError("MalformedJSON", f"{what}: {e}") from e


def _load_file(path: str, what: str):
    try:
        with open(path) as fh:
            return _json_arg(fh.read(), f"{what} file {path}")
    except OSError as e:
        raise CliError("FileError", f"cannot read {what} file {path}: {e.strerror}") from e


def _resolve(args) -> tuple[Fixture | None, Fan | None, ToricMorphism | None]:
    if getattr(args, "fixture", None):
        try:
            fx = get_fixture(args.fixture)
        except KeyError as e:
            raise CliError("UnknownFixture", e.args[0]) from e
        return fx, fx.source, fx.morphism
    if getattr(args, "morphism", None):
        phi = ToricMorphism.from_dict(_load_file(args.morphism, "morphism"))
        return None, phi.source, phi
    if getattr(args, "fan", None):
        return None, Fan.from_dict(_load_file(args.fan, "fan")), None
    raise CliError("UsageError", "one of --fixture, --fan or --morphism is required")


def _divisor(args, fx: Fixture | None, s: int) -> tuple[int, ...]:
    if args.divisor is not None:
        D = _json_arg(args.divisor, "--divisor")
        if not isinstance(D, list) or not all(isinstance(x, int) for x in D):
            raise CliError("InvalidDivisor", "--divisor must be a JSON array of integers")
    elif fx is not None and fx.divisor is not None:
        D = list(fx.divisor)
    else:
        raise CliError("InvalidDivisor", "--divisor is required")
    if len(D) != s:
        raise CliError("InvalidDivisor", f"divisor has {len(D)} entries but the source fan has {s} rays")
    return tuple(D)


def _degree(args, fx):
    if args.i is not None:
        return args.i
    return fx.i if fx is not None else 1


def _need_morphism(phi):
    if phi is None:
        raise CliError("UsageError", "this subcommand needs a morphism (--morphism or a morphism fixture)")
    return phi


def cmd_fixtures(args):
    return {"fixtures": [fx.to_dict() for fx in fixtures()]}


def _fan_report(F: Fan) -> dict:
    return {
        "rays": F.s,
        "cones": len(all_cones(F)),
        "smooth": is_smooth(F),
        "complete": is_complete(F),
        "problems": check_fan(F),
        "f_vector": list(build_P(F).f_vector),
    }


def cmd_validate(args):
    fx, F, phi = _resolve(args)
    out = {}
    ok = True
    if phi is not None:
        out["source"] = _fan_report(phi.source)
        out["target"] = _fan_report(phi.target)
        out["morphism"] = validate_morphism(phi).to_dict()
        ok = not out["source"]["problems"] and not out["target"]["problems"] and out["morphism"]["maps_cones"]
    else:
        out["fan"] = _fan_report(F)
        ok = not out["fan"]["problems"]
    out["ok"] = ok
    if not ok:
        raise CliError("ValidationFailed", json.dumps(out, sort_keys=True))
    return out


def cmd_cohomology(args):
    fx, F, _ = _resolve(args)
    D = _divisor(args, fx, F.s)
    if not (is_smooth(F) and is_complete(F)):
        raise CliError("NotSmoothComplete", "cohomology needs a smooth complete fan")
    return h_i(F, D).to_dict()


def cmd_characters(args):
    fx, _, phi = _resolve(args)
    phi = _need_morphism(phi)
    D = _divisor(args, fx, phi.source.s)
    require_fibration(phi)
    pairs = divisor_pairs(phi, D, _degree(args, fx))
    return {"C": [list(p.mu) for p in pairs], "pairs": [p.to_dict() for p in pairs]}


def cmd_hdi(args):
    fx, _, phi = _resolve(args)
    phi = _need_morphism(phi)
    D = _divisor(args, fx, phi.source.s)
    i = _degree(args, fx)
    if args.degree_grid is not None:
        grid = _json_arg(args.degree_grid, "--degree-grid")
        grid = [tuple(d) if isinstance(d, list) else (d,) for d in grid]
    elif fx is not None:
        grid = list(fx.degree_grid)
    else:
        grid = []
    if args.gen_box is not None:
        box = _json_arg(args.gen_box, "--gen-box")
    else:
        box = fx.gen_box if fx is not None else 3
    C = build_complex(phi, D, i)
    rep = module_report(C, grid, box)
    rep["ideal_tables"] = {
        ",".join(map(str, mu)): {str(k): v for k, v in sorted(ideal_table(C, mu).items())} for mu in C.characters
    }
    return rep


def cmd_check_cover(args):
    fx, F, phi = _resolve(args)
    out = {}
    P = build_P(F)
    rep = verify_cover_axioms(P)
    out["P"] = rep.to_dict()
    ok = rep.ok and P.check_d_squared()
    if phi is not None:
        fibres = {}
        for tau in all_cones(phi.target):
            mask = fibre_subcomplex(phi, tau, P)
            r = verify_cover_axioms(P, mask)
            fibres[",".join(map(str, tau))] = {
                "f_vector": list(mask.f_vector(P.n)),
                "cohomology": list(subcomplex_cohomology(P, mask)),
                **r.to_dict(),
            }
            ok = ok and r.ok
        out["fibres"] = fibres
    out["ok"] = ok
    if not ok:
        raise CliError("CoverAxiomsFailed", json.dumps(out, sort_keys=True))
    return out


def _table(rep: dict) -> str:
    lines = [f"R^{rep['i']}: characters C = {rep['C']}"]
    for comp in rep["components"]:
        mu = ",".join(map(str, comp["mu"]))
        lines.append(f"mu = {mu}: D = {comp['D']}  E = {comp['E']}  twist class {comp['twist_class']}")
        table = rep["ideal_tables"].get(mu, {})
        for k, name in (("0", "vertices"), ("1", "edges"), ("2", "faces"), ("3", "cells3")):
            if k in table:
                cells = ", ".join(f"{lab} x{n}" for lab, n in sorted(table[k].items()))
                lines.append(f"  {name:<9}{cells}")
        gens = ", ".join(f"{g['f']}" + (f" x{g['count']}" if g["count"] > 1 else "") for g in comp["generators"])
        lines.append(f"  generators (box {rep['gen_box']}): {gens or '-'}")
    lines.append("Hilbert function:")
    for h in rep["hilbert"]:
        lines.append(f"  d = {h['degree']}: {h['total']}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toric-hdi", description=__doc__.split("\n\n")[0])
    p.add_argument("--threads", type=int, default=None, help="worker threads for compiled kernels")
    p.add_argument("--output", "-o", default=None, help="write the JSON report to this path")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def source_opts(sp, morphism=True):
        sp.add_argument("--fixture", help="name of a shipped example")
        sp.add_argument("--fan", help="path to a fan JSON file")
        if morphism:
            sp.add_argument("--morphism", help="path to a morphism JSON file")

    sub.add_parser("fixtures", help="list shipped examples")
    sp = sub.add_parser("validate", help="check a fan or morphism")
    source_opts(sp)
    sp = sub.add_parser("cohomology", help="cohomology of O(D) on a smooth complete fan")
    source_opts(sp)
    sp.add_argument("--divisor", help="JSON array, one entry per ray")
    for name, hlp in (("characters", "C(L,i) and the divisor pairs"), ("hdi", "higher direct image module report")):
        sp = sub.add_parser(name, help=hlp)
        source_opts(sp)
        sp.add_argument("--divisor", help="JSON array, one entry per source ray")
        sp.add_argument("--i", type=int, default=None, help="cohomological degree")
        if name == "hdi":
            sp.add_argument("--degree-grid", help="JSON list of class vectors of the target")
            sp.add_argument("--gen-box", help="exponent bound (integer or JSON list)")
            sp.add_argument("--format", choices=("json", "table"), default="json")
    sp = sub.add_parser("check-cover", help="check the cover axioms on P and on fibres")
    source_opts(sp)
    return p


COMMANDS = {
    "fixtures": cmd_fixtures,
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "characters": cmd_characters,
    "hdi": cmd_hdi,
    "check-cover": cmd_check_cover,
}


def _emit_error(kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}, sort_keys=True) + "\n")
    return 1


def run(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return the exit code."""
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise CliError("UsageError", f"a subcommand is required: {', '.join(COMMANDS)}")
        threads = args.threads or os.environ.get("TORIC_HDI_THREADS")
        _kernels.set_threads(int(threads) if threads else None)
        result = COMMANDS[args.command](args)
        if getattr(args, "format", "json") == "table":
            text = _table(result)
        else:
            text = json.dumps(result, sort_keys=True, indent=2)
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text + "\n")
        else:
            sys.stdout.write(text + "\n")
        return 0
    except CliError as e:
        return _emit_error(e.kind, str(e))
    except ValueError as e:
        # domain errors from the library (InvalidFan, TorsionCokernel, ...)
        return _emit_error(type(e).__name__, str(e))


def main() -> None:
    sys.exit(run())
