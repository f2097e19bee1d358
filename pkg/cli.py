#!/usr/bin/env python3
"""
Sesquiad engine command line.

Reads a sesquiad document, dispatches one command to the owning engine
module and prints a report (text, ``--json`` or ``--dot``).  Exit codes:
0 success, 1 usage error, 2 domain error, 3 size or budget limit.
"""

import argparse
import json
import re
import sys
import uuid
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath

from arithmetic_family import xb_points, zeta_eval, zeta_factors, zeta_factors_xb
from domains import fibers, semi_closed_kernel
from engine_errors import DomainError, EngineError, UsageError, error_report
from engine_settings import get_settings, set_settings
from logging_config import get_logger, setup_logging
from presented_f1 import PresentedSesquiad, f1_points, weyl_order, weyl_report
from sesquiad import (Sesquiad, defined_sum, describe_relation, is_embedding, is_local, tensor,
                      validate_morphism)
from sesquiad_document import SesquiadDocument, load
from sheaf import (essential_spectrum, gamma_morphism, global_sections, is_conservative, is_tame,
                   materialize, o_of_subset, sections, stalk)
from spectrum import (SpectrumC, basic_open, closed_points, closure, covering_edges,
                      generic_point, is_irreducible, minimal_open, nilpotent_congruence,
                      nilradical, reduce, spec_c)

ENGINE_VERSION = "1.0.0"
DEFAULT_MAX_N = 10

# Published statements about specific morphisms, keyed by
# (source moduli, source subset, target moduli) of pair documents.
REFERENCE_CLAIMS = {
    ((6,), ((0,), (1,), (5,)), (3,)): {
        "quote": ("We give an example of a sesquiad morphism φ: A → B which is injective, "
                  "but the induced morphism on sections φ_Γ: ΓA → ΓB is not injective."),
        "injective": True,
        "gamma_injective": False,
    },
}


def emit_dot(s: SpectrumC) -> str:
    """Specialization order as a digraph, one edge per covering relation"""
    lines = ["digraph spectrum {"]
    for i in range(len(s)):
        label = s.label(i).replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  p{i} [label="{label}"];')
    for i, j in covering_edges(s):
        lines.append(f"  p{i} -> p{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_text(value: Any, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.extend(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(item)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}-")
                lines.extend(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")
    return lines


def _scalar(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (dict, list)):
        return "{}" if isinstance(value, dict) else "[]"
    return str(value)


class SesquiadEngineCLI:
    """Command table and dispatch for one engine invocation"""

    def __init__(self):
        self.logger = get_logger()
        self.commands = self._define_commands()

    def _define_commands(self) -> List[Dict]:
        """Define available commands"""
        return [
            {"name": "validate", "description": "Check a document and describe what it defines",
             "document": "required"},
            {"name": "uring", "description": "Universal ring R_A: coordinates, invariants and images",
             "document": "required"},
            {"name": "spectrum", "description": "Prime congruences and their specialization order",
             "document": "required"},
            {"name": "closure", "description": "Closure and minimal open set of one point (--point)",
             "document": "required"},
            {"name": "nilradical", "description": "Nilradical, cross-checked against nilpotent differences",
             "document": "required"},
            {"name": "reduce", "description": "The reduction A/Nil(A)", "document": "required"},
            {"name": "stalk", "description": "Stalk at one point (--point)", "document": "required"},
            {"name": "gamma", "description": "Sections over the whole space or an open set (--points)",
             "document": "required"},
            {"name": "conservative", "description": "Whether A -> ΓA is an isomorphism",
             "document": "required"},
            {"name": "essential", "description": "Points whose quotient has integral global sections",
             "document": "required"},
            {"name": "tame", "description": "Tameness of --points, or of the space and all basic opens",
             "document": "required"},
            {"name": "sk", "description": "Semi-closed kernel of an open set (--points), monoids only",
             "document": "required"},
            {"name": "fibers", "description": "Zero-class fibres and their subgroup tags, monoids only",
             "document": "required"},
            {"name": "zeta", "description": "Zeta factor list of a document or of --family xb",
             "document": "optional"},
            {"name": "xb", "description": "Points of the X_b family up to --max-n", "document": "optional"},
            {"name": "tits", "description": "F1-points of a presentation or of --group/--n",
             "document": "optional"},
            {"name": "tensor", "description": "Tensor product with --second", "document": "required"},
            {"name": "morphism", "description": "Check --map into --second and its effect on sections",
             "document": "required"},
        ]

    def command_names(self) -> List[str]:
        return [c["name"] for c in self.commands]

    def handle_command(self, command: str, text: Optional[str] = None,
                       flags: Optional[Dict[str, Any]] = None) -> Tuple[Dict, int]:
        """Run one command; returns (report, exit code)"""
        flags = dict(flags or {})
        run_id = str(uuid.uuid4())
        previous = get_settings()
        try:
            set_settings(previous.override(
                depth=flags.get("depth"),
                budget=flags.get("budget"),
                workers=flags.get("workers"),
                max_elements=flags.get("max_elements"),
                allow_large=True if flags.get("force") else None,
            ))
            entry = next((c for c in self.commands if c["name"] == command), None)
            if entry is None:
                raise UsageError("UnknownCommand", f"unknown command {command!r}", command=command)
            loaded = self._load(entry, text, flags)
            result = self._handle_command(command, loaded, flags)
            report = {"status": "success", "command": command, "result": result}
            code = 0
        except EngineError as e:
            self.logger.warning("Command rejected", command=command, kind=e.kind.name, code=e.code)
            report = error_report(e, command)
            code = e.kind.exit_code
        except Exception as e:
            self.logger.exception("Command failed", command=command)
            report = {"status": "error", "command": command,
                      "error": {"kind": "usage", "code": "InternalError", "message": str(e)}}
            code = 1
        finally:
            set_settings(previous)
        report["engine_version"] = ENGINE_VERSION
        self.logger.log_command(command, run_id, exit_code=code)
        return report, code

    def _load(self, entry: Dict, text: Optional[str], flags: Dict) -> Optional[Tuple[SesquiadDocument, Any]]:
        if text is None:
            if entry["document"] == "required":
                raise UsageError("MissingDocument", f"{entry['name']} needs a document")
            return None
        loaded = load(text)
        if flags.get("second") is not None:
            flags["second_loaded"] = load(flags["second"])
        return loaded

    def _handle_command(self, command: str, loaded, flags: Dict) -> Dict:
        if command == "validate":
            return self._cmd_validate(loaded, flags)
        elif command == "uring":
            return self._cmd_uring(loaded, flags)
        elif command == "spectrum":
            return self._cmd_spectrum(loaded, flags)
        elif command == "closure":
            return self._cmd_closure(loaded, flags)
        elif command == "nilradical":
            return self._cmd_nilradical(loaded, flags)
        elif command == "reduce":
            return self._cmd_reduce(loaded, flags)
        elif command == "stalk":
            return self._cmd_stalk(loaded, flags)
        elif command == "gamma":
            return self._cmd_gamma(loaded, flags)
        elif command == "conservative":
            return self._cmd_conservative(loaded, flags)
        elif command == "essential":
            return self._cmd_essential(loaded, flags)
        elif command == "tame":
            return self._cmd_tame(loaded, flags)
        elif command == "sk":
            return self._cmd_sk(loaded, flags)
        elif command == "fibers":
            return self._cmd_fibers(loaded, flags)
        elif command == "zeta":
            return self._cmd_zeta(loaded, flags)
        elif command == "xb":
            return self._cmd_xb(loaded, flags)
        elif command == "tits":
            return self._cmd_tits(loaded, flags)
        elif command == "tensor":
            return self._cmd_tensor(loaded, flags)
        elif command == "morphism":
            return self._cmd_morphism(loaded, flags)
        raise UsageError("UnknownCommand", f"unknown command {command!r}", command=command)

    # helpers

    def _sesquiad(self, loaded) -> Sesquiad:
        doc, obj = loaded
        if not isinstance(obj, Sesquiad):
            raise UsageError("WrongKind", f"a {doc.kind} document does not describe a finite sesquiad",
                             kind=doc.kind)
        return obj

    def _spectrum(self, a: Sesquiad, flags: Dict) -> SpectrumC:
        return spec_c(a, flags.get("strategy") or "auto")

    def _point(self, s: SpectrumC, flags: Dict) -> int:
        value = flags.get("point")
        if value is None:
            raise UsageError("MissingPoint", "this command needs --point INDEX|LABEL")
        value = str(value)
        return s.index(int(value) if value.isdigit() else value)

    def _points(self, s: SpectrumC, value: Optional[str]) -> Optional[frozenset]:
        """--points: comma-separated indices or ';'-separated labels"""
        if value is None:
            return None
        value = str(value).strip()
        if not value:
            return frozenset()
        if re.fullmatch(r"\d+(\s*,\s*\d+)*", value):
            return frozenset(s.index(int(v)) for v in value.split(","))
        return frozenset(s.index(v.strip()) for v in value.split(";"))

    def _labels(self, s: SpectrumC, points) -> List[str]:
        return [s.label(i) for i in sorted(points)]

    def _second(self, flags: Dict) -> Sesquiad:
        if "second_loaded" not in flags:
            raise UsageError("MissingSecond", "this command needs --second FILE")
        return self._sesquiad(flags["second_loaded"])

    def _mapping(self, a: Sesquiad, b: Sesquiad, value: Optional[str]) -> List[int]:
        """--map x=y,...; zero and one default to zero and one"""
        mapping = [-1] * a.size
        mapping[a.table.zero] = b.table.zero
        mapping[a.table.one] = b.table.one
        for item in (value or "").split(","):
            if not item.strip():
                continue
            left, eq, right = item.partition("=")
            if not eq:
                raise UsageError("BadMap", f"expected x=y, got {item!r}")
            mapping[a.table.index(left.strip())] = b.table.index(right.strip())
        return mapping

    def _sections_report(self, gamma) -> Dict:
        return {
            "points": self._labels(gamma.spectrum, gamma.points),
            "sections": gamma.size,
            "names": list(gamma.names),
            "constant_map": {gamma.sesquiad.name(a): gamma.names[i] for a, i in enumerate(gamma.constant)},
            "exact": gamma.exact,
            "depth": gamma.depth,
            "shortcut": gamma.shortcut,
        }

    # commands

    def _cmd_validate(self, loaded, flags: Dict) -> Dict:
        doc, obj = loaded
        result: Dict[str, Any] = {"kind": doc.kind, "name": doc.name}
        if isinstance(obj, Sesquiad):
            result.update({
                "elements": list(obj.elements),
                "zero": obj.name(obj.table.zero),
                "one": obj.name(obj.table.one),
                "relations": [describe_relation(obj, r) for r in obj.relations],
                "notes": list(obj.notes),
                "ring": obj.ring.describe(),
            })
        elif isinstance(obj, PresentedSesquiad):
            result.update({"generators": len(obj.generators), "relations": len(obj.relations),
                           "named_sums": [name for name, _ in obj.named_sums]})
        else:
            result["base"] = obj
        return result

    def _cmd_uring(self, loaded, flags: Dict) -> Dict:
        a = self._sesquiad(loaded)
        ring = a.ring
        result = ring.describe()
        result["images"] = {a.name(x): list(ring.images[x]) for x in range(a.size)}
        result["relation_lattice"] = [list(r) for r in ring.lattice.basis]
        return result

    def _cmd_spectrum(self, loaded, flags: Dict) -> Dict:
        a = self._sesquiad(loaded)
        s = self._spectrum(a, flags)
        result = {
            "strategy": s.strategy,
            "points": [{"index": i, "label": s.label(i), "classes": p.num_classes}
                       for i, p in enumerate(s.points)],
            "order": [[s.label(i), s.label(j)] for i, j in covering_edges(s)],
            "closed": self._labels(s, closed_points(s)),
        }
        if flags.get("dot"):
            result["dot"] = emit_dot(s)
        return result

    def _cmd_closure(self, loaded, flags: Dict) -> Dict:
        a = self._sesquiad(loaded)
        s = self._spectrum(a, flags)
        i = self._point(s, flags)
        closed = closure(s, i)
        return {
            "point": s.label(i),
            "closure": self._labels(s, closed),
            "minimal_open": self._labels(s, minimal_open(s, i)),
            "generic_point": s.label(generic_point(s, closed)),
            "is_closed": i in closed_points(s),
        }

    def _cmd_nilradical(self, loaded, flags: Dict) -> Dict:
        a = self._sesquiad(loaded)
        s = self._spectrum(a, flags)
        nil = nilradical(a, s)
        ring_side = nilpotent_congruence(a)
        return {
            "nilradical": nil.signature(a),
            "nilpotent_differences": ring_side.signature(a),
            "agree": nil == ring_side,
            "reduced": nil.is_diagonal(),
            "irreducible": is_irreducible(a, s),
        }

    def _cmd_reduce(self, loaded, flags: Dict) -> Dict:
        a = self._sesquiad(loaded)
        s = self._spectrum(a, flags)
        red = reduce(a, s)
        reduced_points = len(spec_c(red))
        return {
            "elements": list(red.elements),
            "size": red.size,
            "points": len(s),
            "reduced_points": reduced_points,
            "spectrum_preserved": reduced_points == len(s),
        }

    def _cmd_stalk(self, loaded, flags: Dict) -> Dict:
        a = self._sesquiad(loaded)
        s = self._spectrum(a, flags)
        i = self._point(s, flags)
        st = stalk(a, s.points[i], flags.get("depth"))
        return {
            "point": s.label(i),
            "denominators": [f"{a.name(x)}-{a.name(y)}" for x, y in st.denominators.pairs],
            "size": st.size,
            "values": [st.label(v) for v in st.values],
            "zero_ring": st.is_zero_ring(),
            "exact": st.exact,
            "depth": st.depth,
            "stabilized_at": st.stabilized_at,
        }

    def _cmd_gamma(self, loaded, flags: Dict) -> Dict:
        a = self._sesquiad(loaded)
        s = self._spectrum(a, flags)
        u = self._points(s, flags.get("points"))
        if u is None:
            gamma = global_sections(a, flags.get("depth"), s)
        else:
            gamma = sections(a, u, flags.get("depth"), s)
        result = self._sections_report(gamma)
        try:
            m = materialize(gamma)
        except DomainError as e:
            result["materialized"] = {"error": e.code}
            return result
        g = m.sesquiad
        sums = []
        for x in range(g.size):
            for y in range(x, g.size):
                if g.table.zero in (x, y):
                    continue
                total = defined_sum(g, ((1, x), (1, y)))
                if total is not None:
                    sums.append(f"{g.name(x)} + {g.name(y)} = {g.name(total)}")
        result["materialized"] = {
            "elements": g.size,
            "ring": g.ring.describe(),
            "defined_sums": sums,
            "exact": m.exact,
        }
        return result

    def _cmd_conservative(self, loaded, flags: Dict) -> Dict:
        a = self._sesquiad(loaded)
        gamma = global_sections(a, flags.get("depth"))
        return {
            "verdict": is_conservative(a, flags.get("depth")).value,
            "elements": a.size,
            "sections": gamma.size,
            "exact": gamma.exact,
            "depth": gamma.depth,
        }

    def _cmd_essential(self, loaded, flags: Dict) -> Dict:
        a = self._sesquiad(loaded)
        s = self._spectrum(a, flags)
        ess = essential_spectrum(a, flags.get("depth"), s)
        return {"points": self._labels(s, ess.points),
                "excluded": self._labels(s, s.all_points() - ess.points - ess.undecided),
                "undecided": self._labels(s, ess.undecided),
                "exact": ess.exact}

    def _cmd_tame(self, loaded, flags: Dict) -> Dict:
        a = self._sesquiad(loaded)
        s = self._spectrum(a, flags)
        chosen = self._points(s, flags.get("points"))
        if chosen is not None:
            candidates = [chosen]
        else:
            candidates = [s.all_points()]
            for x in range(a.size):
                for y in range(x + 1, a.size):
                    d = basic_open(s, ((x, y),))
                    if d and d not in candidates:
                        candidates.append(d)
        sets = []
        for t in candidates:
            local = o_of_subset(a, t, flags.get("depth"), s)
            sets.append({
                "points": self._labels(s, t),
                "verdict": is_tame(a, t, flags.get("depth"), s).value,
                "sections": local.sesquiad.size,
                "exact": local.exact,
            })
        return {"sets": sets}

    def _cmd_sk(self, loaded, flags: Dict) -> Dict:
        a = self._sesquiad(loaded)
        s = self._spectrum(a, flags)
        u = self._points(s, flags.get("points"))
        if u is None:
            raise UsageError("MissingPoints", "sk needs --points")
        return {"open": self._labels(s, u), "kernel": self._labels(s, semi_closed_kernel(a, u, s))}

    def _cmd_fibers(self, loaded, flags: Dict) -> Dict:
        a = self._sesquiad(loaded)
        s = self._spectrum(a, flags)
        out = []
        for f in fibers(a, s):
            out.append({
                "zero_class": [a.name(x) for x in f.base],
                "points": self._labels(s, f.points),
                "subgroups": f.subgroup_count,
                "bijective": f.bijective,
                "tags": {s.label(i): list(h) for i, h in f.tags},
            })
        return {"fibers": out}

    def _cmd_zeta(self, loaded, flags: Dict) -> Dict:
        if flags.get("family"):
            if flags["family"] != "xb":
                raise UsageError("BadFamily", f"unknown family {flags['family']!r}")
            base = flags.get("base") or (loaded[1] if loaded and loaded[0].kind == "xb" else None)
            if base is None:
                raise UsageError("MissingBase", "--family xb needs --base")
            z = zeta_factors_xb(int(base), flags.get("max_n") or DEFAULT_MAX_N, flags.get("budget"))
        elif loaded is None:
            raise UsageError("MissingDocument", "zeta needs a document or --family xb")
        elif loaded[0].kind == "xb":
            z = zeta_factors_xb(loaded[1], flags.get("max_n") or DEFAULT_MAX_N, flags.get("budget"))
        else:
            z = zeta_factors(self._sesquiad(loaded))
        result = {
            "factors": [{"point": f.point, "norm": f.norm} for f in z.factors],
            "finite": z.finite(),
            "unbounded": list(z.unbounded),
            "exact": z.exact,
        }
        if flags.get("s") is not None:
            dps = get_settings().zeta_dps
            result["value"] = mpmath.nstr(zeta_eval(z, flags["s"], dps), dps)
        return result

    def _cmd_xb(self, loaded, flags: Dict) -> Dict:
        base = flags.get("base") or (loaded[1] if loaded and loaded[0].kind == "xb" else None)
        if base is None:
            raise UsageError("MissingBase", "xb needs --base or an xb document")
        points = xb_points(int(base), flags.get("max_n") or DEFAULT_MAX_N, flags.get("budget"))
        return {
            "base": int(base),
            "points": [{"label": p.label, "in_spectrum": p.in_spectrum, "closed": p.is_closed,
                        "z_closed": p.is_z_closed, "residue_size": p.residue_size,
                        "gcd_check": p.gcd_check} for p in points],
            "closed": [p.label for p in points if p.in_spectrum and p.is_closed],
        }

    def _cmd_tits(self, loaded, flags: Dict) -> Dict:
        if flags.get("group"):
            if flags.get("n") is None:
                raise UsageError("MissingN", "--group needs --n")
            return weyl_report(flags["group"], int(flags["n"]))
        if loaded is None or loaded[0].kind != "presented":
            raise UsageError("MissingDocument", "tits needs a presented document or --group/--n")
        doc, p = loaded
        points = f1_points(p)
        result = {"generators": len(p.generators), "count": len(points),
                  "points": [dict(pt.assignment) for pt in points]}
        if doc.model:
            result["reference"] = weyl_order(*doc.model)
            result["match"] = len(points) == result["reference"]
        return result

    def _cmd_tensor(self, loaded, flags: Dict) -> Dict:
        a = self._sesquiad(loaded)
        b = self._second(flags)
        t = tensor(a, b)
        return {"elements": list(t.elements), "size": t.size, "ring": t.ring.describe()}

    def _cmd_morphism(self, loaded, flags: Dict) -> Dict:
        a = self._sesquiad(loaded)
        b = self._second(flags)
        m = validate_morphism(a, b, self._mapping(a, b, flags.get("map")))
        g = gamma_morphism(m, flags.get("depth"))
        result = {
            "map": {a.name(x): b.name(m(x)) for x in range(a.size)},
            "injective": len({m(x) for x in range(a.size)}) == a.size,
            "local": is_local(m),
            "embedding": is_embedding(m),
            "gamma": {
                "source_sections": g.source.size,
                "target_sections": g.target.size,
                "mapping": [g.target.names[j] if j is not None else None for j in g.mapping],
                "injective": g.injective,
                "surjective": g.surjective,
                "exact": g.exact,
            },
        }
        expected = flags.get("expect_gamma_injective")
        if expected is not None:
            claim = expected if isinstance(expected, bool) else str(expected).lower() in ("yes", "true")
            result["claim"] = {
                "statement": "φ_Γ is injective" if claim else "φ_Γ is not injective",
                "computed": "φ_Γ is injective" if g.injective else "φ_Γ is not injective",
                "agrees": claim == g.injective,
            }
        reference = _reference_claim(loaded[0], flags["second_loaded"][0])
        if reference is not None:
            result["reference"] = {
                "quote": reference["quote"],
                "claimed": {"injective": reference["injective"],
                            "gamma_injective": reference["gamma_injective"]},
                "computed": {"injective": result["injective"], "gamma_injective": g.injective},
                "agrees": (reference["injective"] == result["injective"]
                           and reference["gamma_injective"] == g.injective),
            }
        return result


def _reference_claim(source: SesquiadDocument, target: SesquiadDocument) -> Optional[Dict]:
    if source.kind != "pair" or target.kind != "pair":
        return None
    return REFERENCE_CLAIMS.get((source.moduli, source.subset, target.moduli))


_cli_instance: Optional[SesquiadEngineCLI] = None


def get_cli() -> SesquiadEngineCLI:
    global _cli_instance
    if _cli_instance is None:
        _cli_instance = SesquiadEngineCLI()
    return _cli_instance


def run(command: str, document: Optional[str] = None, **flags) -> Tuple[Dict, int]:
    """Run a command on document text; returns (report, exit code)"""
    return get_cli().handle_command(command, document, flags)


def format_report(report: Dict, as_json: bool = False) -> str:
    if as_json:
        return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    return "\n".join(render_text(report)) + "\n"


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("BadArguments", message)


def build_parser(commands: Sequence[str]) -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="sesquiad", description="Exact computations on finite sesquiads")
    parser.add_argument("command", choices=list(commands))
    parser.add_argument("file", nargs="?", help="sesquiad document")
    parser.add_argument("--depth", type=int, help="denominator word depth for bounded stalks")
    parser.add_argument("--max-n", dest="max_n", type=int, help="largest n for the X_b family")
    parser.add_argument("--budget", type=int, help="factorization budget")
    parser.add_argument("--dot", action="store_true", help="print the spectrum as a DOT digraph")
    parser.add_argument("--json", action="store_true", help="print the report as JSON")
    parser.add_argument("--point", help="point index or label")
    parser.add_argument("--points", help="comma-separated indices or ';'-separated labels")
    parser.add_argument("--map", help="morphism as x=y pairs, comma separated")
    parser.add_argument("--second", help="second document for tensor and morphism")
    parser.add_argument("--expect-gamma-injective", dest="expect_gamma_injective",
                        choices=["yes", "no"], help="claim to compare against the computed φ_Γ")
    parser.add_argument("--family", choices=["xb"])
    parser.add_argument("--base", type=int)
    parser.add_argument("--group", choices=["gl", "sp", "o"])
    parser.add_argument("--n", type=int)
    parser.add_argument("--s", help="evaluate the zeta product at this real s")
    parser.add_argument("--strategy", choices=["auto", "ring", "group", "partitions"])
    parser.add_argument("--max-elements", dest="max_elements", type=int)
    parser.add_argument("--force", action="store_true", help="lift the hard element cap")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--log-level", dest="log_level")
    return parser


def _read(path: Optional[str], what: str) -> Optional[str]:
    if path is None:
        return None
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        get_logger().error("Unreadable file", path=path, reason=e.strerror)
        raise UsageError("UnreadableFile", f"cannot read {what} {path}: {e.strerror}", path=path)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point"""
    cli = get_cli()
    try:
        args = build_parser(cli.command_names()).parse_args(argv)
        setup_logging(args.log_level)
        text = _read(args.file, "document")
        second = _read(args.second, "second document")
    except UsageError as e:
        report = error_report(e)
        report["engine_version"] = ENGINE_VERSION
        sys.stdout.write(format_report(report, as_json=True))
        return e.kind.exit_code

    flags = {k: v for k, v in vars(args).items() if k not in ("command", "file", "json", "log_level")}
    flags["second"] = second
    report, code = cli.handle_command(args.command, text, flags)
    if args.dot and code == 0 and "dot" in report["result"]:
        sys.stdout.write(report["result"]["dot"])
    else:
        sys.stdout.write(format_report(report, as_json=args.json))
    return code


if __name__ == "__main__":
    sys.exit(main())
