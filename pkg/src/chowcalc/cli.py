"""Command line front end: ``chowcalc run <config.json>``.

Exit codes: 0 success, 2 input error, 3 hypotheses not met (the E2 page
is reported instead), 4 internal inconsistency such as ``d o d != 0``
found after loading.

The machine-readable output (``--json``) is deterministic: sorted keys,
no timings, so identical input gives identical bytes. Set
``CHOWCALC_LOG`` to a logging level name for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from .abelian import PresentedGroup, int_matrix
from .calculator import (
    ChowResult,
    D1NotComplex,
    HypothesisFailed,
    InvalidResolutionData,
    MixedGroup,
    PicData,
    ResolutionData,
    chc1_divisor,
    chc1_smooth_2resolution,
    chc1_surface,
    chc1_variety,
)
from .complexes import NotAComplexError
from .dualcomplex import DualComplex, DualComplexError, Stratum, build_dual_complex, export_dot
from .spectral import Page

__all__ = [
    "Config",
    "ConfigError",
    "ConsistencyError",
    "EXIT_HYPOTHESIS",
    "EXIT_INPUT",
    "EXIT_INTERNAL",
    "EXIT_OK",
    "ParseError",
    "Report",
    "SchemaError",
    "load_config",
    "load_schema",
    "main",
    "parse_machine_output",
    "run",
]

log = logging.getLogger("chowcalc")

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_INTERNAL = 0, 2, 3, 4
SCHEMA_VERSION = 1


class ConfigError(Exception):
    """Input problem; ``location`` is a dotted path into the document."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class ParseError(ConfigError):
    pass


class SchemaError(ConfigError):
    pass


class ConsistencyError(ConfigError):
    pass


def load_schema() -> dict:
    return json.loads(resources.files("chowcalc").joinpath("schema.json").read_text())


@dataclass(frozen=True)
class Config:
    mode: str
    dimension: int
    data: ResolutionData | None
    gamma: DualComplex | None
    smooth_2res: Mapping[str, Any] | None = None
    output: Mapping[str, str] = field(default_factory=dict)
    source: str = ""


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def _pic(raw: Mapping, where: str) -> PresentedGroup:
    n = raw["generators"]
    rels = raw.get("relations", [])
    for i, r in enumerate(rels):
        if len(r) != n:
            raise ConsistencyError(f"relation has {len(r)} entries for {n} generators",
                                   f"{where}.relations[{i}]")
    return PresentedGroup.from_relation_vectors(n, rels)


def _matrix(raw, rows: int, cols: int, where: str):
    try:
        return int_matrix(raw, rows=rows, cols=cols)
    except ValueError as exc:
        raise ConsistencyError(f"{exc} (expected shape {rows}x{cols})", where) from exc


def _build_gamma(doc: Mapping) -> DualComplex:
    strata = []
    ids = {s["id"] for s in doc.get("strata", [])}
    for i, s in enumerate(doc.get("strata", [])):
        for k, face in s.get("faces", {}).items():
            if face not in ids:
                raise ConsistencyError(f"unknown stratum {face!r}", f"strata[{i}].faces.{k}")
        try:
            strata.append(Stratum(s["id"], tuple(s["indices"]), s.get("irreducible", True),
                                  {int(k): v for k, v in s.get("faces", {}).items()}))
        except DualComplexError as exc:
            raise ConsistencyError(str(exc), f"strata[{i}]") from exc
    try:
        return build_dual_complex(strata)
    except DualComplexError as exc:
        raise ConsistencyError(str(exc), "strata") from exc


def _resolution_data(doc: Mapping, gamma: DualComplex) -> ResolutionData:
    groups, continuous = {}, {}
    for i, s in enumerate(doc.get("strata", [])):
        if "pic" in s:
            groups[s["id"]] = _pic(s["pic"], f"strata[{i}].pic")
            if "continuous_part" in s["pic"]:
                continuous[s["id"]] = s["pic"]["continuous_part"]
    restrictions = {}
    for i, r in enumerate(doc.get("restrictions", [])):
        where = f"restrictions[{i}]"
        for key in ("from", "to"):
            if r[key] not in gamma.strata:
                raise ConsistencyError(f"unknown stratum {r[key]!r}", f"{where}.{key}")
        pair = (r["from"], r["to"])
        if pair in restrictions:
            raise ConsistencyError(f"duplicate restriction {pair[0]} -> {pair[1]}", where)
        src = groups.get(r["from"], PresentedGroup.free(0))
        dst = groups.get(r["to"], PresentedGroup.free(0))
        restrictions[pair] = _matrix(r["matrix"], dst.generators, src.generators,
                                     f"{where}.matrix")
    resolution, to_components = None, None
    if "resolution" in doc:
        resolution = _pic(doc["resolution"]["pic"], "resolution.pic")
        to_components = {}
        for v, M in doc["resolution"].get("to_components", {}).items():
            where = f"resolution.to_components.{v}"
            if v not in gamma.strata:
                raise ConsistencyError(f"unknown stratum {v!r}", where)
            rows = groups.get(v, PresentedGroup.free(0)).generators
            to_components[v] = _matrix(M, rows, resolution.generators, where)
    pic = PicData(groups, restrictions, resolution, to_components, continuous)
    try:
        return ResolutionData(doc["dimension"], gamma, pic, doc.get("singular_points", 1),
                              doc.get("irreducible_intersections"), doc.get("contractible"),
                              doc.get("incidence"))
    except InvalidResolutionData as exc:
        raise ConsistencyError(str(exc), "strata") from exc


def load_config(path) -> Config:
    """Parse, schema-check and cross-check a configuration file.

    Raises:
        ParseError: unreadable file or invalid JSON.
        SchemaError: the document violates the schema (missing or extra fields).
        ConsistencyError: dangling ids, shape mismatches, invalid geometry data.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ParseError(str(exc), str(path)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") \
            from exc
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        raise SchemaError(e.message, _path(e.absolute_path))
    mode, d = doc["mode"], doc["dimension"]
    if mode == "surface" and d != 2:
        raise ConsistencyError("surface mode needs dimension 2", "dimension")
    if mode == "smooth-2res":
        if "smooth_2res" not in doc:
            raise SchemaError("smooth-2res mode needs a 'smooth_2res' section", "smooth_2res")
        gamma = _build_gamma(doc) if doc.get("strata") else None
        return Config(mode, d, None, gamma, _smooth_2res(doc["smooth_2res"]),
                      doc.get("output", {}), str(path))
    if not doc.get("strata"):
        raise SchemaError(f"{mode} mode needs a non-empty 'strata' list", "strata")
    if mode in ("variety", "surface") and "resolution" not in doc:
        raise SchemaError(f"{mode} mode needs a 'resolution' section", "resolution")
    gamma = _build_gamma(doc)
    data = _resolution_data(doc, gamma)
    return Config(mode, d, data, gamma, None, doc.get("output", {}), str(path))


def _smooth_2res(raw: Mapping) -> dict:
    xt = _pic(raw["pic_xtilde"], "smooth_2res.pic_xtilde")
    xs = _pic(raw["pic_xsing"], "smooth_2res.pic_xsing")
    e = _pic(raw["pic_e"], "smooth_2res.pic_e")
    out = {
        "pic_xtilde": xt, "pic_xsing": xs, "pic_e": e,
        "maps": (_matrix(raw["map_xtilde"], e.generators, xt.generators, "smooth_2res.map_xtilde"),
                 _matrix(raw["map_xsing"], e.generators, xs.generators, "smooth_2res.map_xsing")),
        "units_pi0": tuple(raw["units_pi0"]),
        "units_matrix": None,
    }
    if "units_matrix" in raw:
        a, b, c = out["units_pi0"]
        out["units_matrix"] = _matrix(raw["units_matrix"], c, a + b, "smooth_2res.units_matrix")
    return out


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------

@dataclass
class Report:
    exit_code: int
    machine: dict
    text: str
    dot: str | None = None
    elapsed: float = 0.0

    def machine_json(self) -> str:
        return json.dumps(self.machine, sort_keys=True, indent=2) + "\n"


def _page_dict(page: Page | None) -> list:
    if page is None:
        return []
    return [{"p": p, "q": q, "group": str(g)} for (p, q), g in sorted(page.entries.items())]


def _table(result: ChowResult, lo: int, hi: int) -> list:
    return [{"m": m, "rule": result.rules.get(m, ""), **result[m].to_dict()}
            for m in range(hi, lo - 1, -1)]


def _sequence_dict(seq) -> dict:
    return {"label": seq.label, "rank_balance": seq.rank_balance(),
            "torsion_consistent": seq.torsion_consistent(),
            "terms": [{"name": n, "group": str(g)} for n, g in seq.terms]}


def _dispatch(cfg: Config) -> ChowResult:
    if cfg.mode == "divisor":
        return chc1_divisor(cfg.data)
    if cfg.mode == "variety":
        return chc1_variety(cfg.data)
    if cfg.mode == "surface":
        return chc1_surface(cfg.data)
    s = cfg.smooth_2res
    return chc1_smooth_2resolution(s["pic_xtilde"], s["pic_xsing"], s["pic_e"], s["maps"],
                                   s["units_pi0"], s["units_matrix"])


def run(cfg: Config) -> Report:
    """Compute every degree ``m`` in ``[1 - d, 1]`` (plus the boundary zeros)."""
    start = time.perf_counter()
    d = cfg.dimension
    target = "E" if cfg.mode == "divisor" else "X"
    machine: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "mode": cfg.mode,
                               "dimension": d, "target": target}
    dot = export_dot(cfg.gamma) if cfg.gamma is not None else None
    try:
        result = _dispatch(cfg)
    except HypothesisFailed as exc:
        machine.update(status="hypothesis_failed", message=str(exc),
                       checklist=dict(sorted(exc.checklist.items())),
                       e2_page=_page_dict(exc.page),
                       partial=[{"m": m, **g.to_dict()} for m, g in sorted(exc.partial.items(),
                                                                          reverse=True)],
                       indeterminate=True)
        elapsed = time.perf_counter() - start
        return Report(EXIT_HYPOTHESIS, machine, _render(machine, elapsed), dot, elapsed)
    except (D1NotComplex, NotAComplexError, AssertionError) as exc:
        machine.update(status="internal_error", message=str(exc))
        elapsed = time.perf_counter() - start
        return Report(EXIT_INTERNAL, machine, _render(machine, elapsed), dot, elapsed)
    except (InvalidResolutionData, ValueError) as exc:
        machine.update(status="input_error", message=str(exc))
        elapsed = time.perf_counter() - start
        return Report(EXIT_INPUT, machine, _render(machine, elapsed), dot, elapsed)
    lo = min(result.values) if result.values else 1 - d
    hi = max(result.values) if result.values else 1
    machine.update(
        status="ok",
        rule=result.report.rule,
        checklist=dict(sorted(result.report.checklist.items())),
        caveats=list(result.report.caveats),
        groups=_table(result, lo, hi),
        sequences=[_sequence_dict(s) for s in result.report.sequences],
        e2_page=_page_dict(result.page),
    )
    if result.divisor is not None:
        dv = result.divisor
        machine["divisor_groups"] = _table(dv, min(dv.values), max(dv.values))
    elapsed = time.perf_counter() - start
    return Report(EXIT_OK, machine, _render(machine, elapsed), dot, elapsed)


def _render(machine: Mapping, elapsed: float) -> str:
    lines = [f"chowcalc report: mode {machine['mode']}, dimension {machine['dimension']}"]
    status = machine["status"]
    if status != "ok":
        lines.append(f"status: {status}: {machine.get('message', '')}")
    if "rule" in machine:
        lines.append(f"rule: {machine['rule']}")
    if machine.get("checklist"):
        lines.append("hypotheses:")
        lines += [f"  [{'x' if v else ' '}] {k}" for k, v in machine["checklist"].items()]
    target = machine["target"]
    for key, name in (("groups", target), ("divisor_groups", "E")):
        if key in machine:
            lines.append(f"CHC^1({name}, m):")
            width = max(len(r["text"]) for r in machine[key])
            lines += [f"  m = {r['m']:>3}  {r['text']:<{width}}  ({r['rule']})"
                      for r in machine[key]]
    if machine.get("partial"):
        lines.append("values that do not depend on the failed hypotheses:")
        lines += [f"  m = {r['m']:>3}  {r['text']}" for r in machine["partial"]]
    if machine.get("sequences"):
        lines.append("exact sequences:")
        for s in machine["sequences"]:
            terms = " -> ".join(f"{t['name']} = {t['group']}" for t in s["terms"])
            lines.append(f"  {s['label']}: 0 -> {terms} -> 0")
    if machine.get("e2_page"):
        label = "E2 page (indeterminate)" if machine.get("indeterminate") else "E2 page"
        lines.append(label + ":")
        lines += [f"  E2^({e['p']},{e['q']}) = {e['group']}" for e in machine["e2_page"]]
    for c in machine.get("caveats", []):
        lines.append(f"caveat: {c}")
    lines.append(f"elapsed: {elapsed:.3f} s")
    return "\n".join(lines) + "\n"


def parse_machine_output(text: str) -> dict[int, MixedGroup]:
    """Group values ``m -> CHC^1`` from a ``--json`` file."""
    doc = json.loads(text)
    return {int(r["m"]): MixedGroup.from_dict(r) for r in doc.get("groups", [])}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _setup_logging(verbose: bool):
    level_name = os.environ.get("CHOWCALC_LOG", "INFO" if verbose else "WARNING").upper()
    level = getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="chowcalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="compute CHC^1 from a configuration file")
    p.add_argument("config")
    p.add_argument("--out", help="write the text report here instead of stdout")
    p.add_argument("--json", dest="json_out", help="write the machine-readable report")
    p.add_argument("--dot", help="write the 1-skeleton of the dual complex as DOT")
    p.add_argument("--verbose", action="store_true")
    args = parser.parse_args(argv)
    _setup_logging(args.verbose)

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    log.info("loaded %s (mode %s)", cfg.source, cfg.mode)
    report = run(cfg)
    out = args.out or cfg.output.get("report")
    json_out = args.json_out or cfg.output.get("json")
    dot_out = args.dot or cfg.output.get("dot")
    if out:
        Path(out).write_text(report.text)
    else:
        sys.stdout.write(report.text)
    if json_out:
        Path(json_out).write_text(report.machine_json())
    if dot_out:
        if report.dot is None:
            print("error: --dot needs strata in the configuration", file=sys.stderr)
            return EXIT_INPUT
        Path(dot_out).write_text(report.dot)
    log.info("exit code %d after %.3f s", report.exit_code, report.elapsed)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
