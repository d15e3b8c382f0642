"""Command-line front end: ``entropy-spaces {check,entropy,expansivity,laws} FILE``.

Exit codes: 0 all analyses passed, 2 parse or schema error, 3 an axiom,
classification or law check failed, 4 a step budget ran out (this includes
generator searches that gave up at their ``m`` budget).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import topo
from .axioms import check_cover_axioms, check_norm_axioms, classify_map
from .connections import Connection
from .constructions import projection
from .core import DEFAULT_BUDGET, BudgetExceeded, MapClass, PreconditionError, SpaceMap
from .descriptors import DescriptorError, System, decode_covers, load_file, parse_norm
from .entropy import entropy, entropy_bilateral, entropy_relative
from .expansivity import (
    DEFAULT_M_BUDGET,
    GeneratorCertificate,
    cofinal_descent,
    descent_entropy,
    generator_system_entropy,
    is_generator_system,
)
from .extreal import DEFAULT_TOL, ext_eq
from .laws import (
    LawResult,
    comparison_law,
    coproduct_additivity,
    f_product_law,
    log_law,
    product_additivity,
    shift_law,
)

EXIT_OK, EXIT_SCHEMA, EXIT_FAILED, EXIT_BUDGET = 0, 2, 3, 4
DEFAULT_HORIZON = 16
DEFAULT_SAMPLE = 48


@dataclass
class Options:
    horizon: Optional[int] = None
    budget: int = DEFAULT_BUDGET
    tolerance: float = DEFAULT_TOL
    seed: int = 0
    as_json: bool = False
    timings: bool = False


@dataclass
class Report:
    command: str
    system: str
    analyses: list = field(default_factory=list)

    def add(self, name: str, status: str, result: dict, seconds: Optional[float] = None) -> None:
        entry = {"analysis": name, "status": status, "result": result}
        if seconds is not None:
            entry["seconds"] = round(seconds, 6)
        self.analyses.append(entry)

    @property
    def exit_code(self) -> int:
        statuses = {a["status"] for a in self.analyses}
        if "budget-exceeded" in statuses:
            return EXIT_BUDGET
        if "fail" in statuses:
            return EXIT_FAILED
        return EXIT_OK

    def as_dict(self) -> dict:
        return {"schema": 1, "command": self.command, "system": self.system, "analyses": self.analyses,
                "exit_code": self.exit_code}


def _clean(x):
    """Make a report JSON-safe: infinities become strings and tuples lists."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return x
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if x is None or isinstance(x, (bool, int, str)):
        return x
    return repr(x)


def _run(report: Report, opts: Options, name: str, fn: Callable[[], tuple[str, dict]]) -> None:
    t0 = time.perf_counter()
    try:
        status, result = fn()
    except BudgetExceeded as e:
        status, result = "budget-exceeded", {"error": str(e)}
    except PreconditionError as e:
        status, result = "skipped", {"reason": str(e)}
    report.add(name, status, result, time.perf_counter() - t0 if opts.timings else None)


def _horizon(sysm: System, opts: Options, key: str = "horizon") -> int:
    if opts.horizon is not None:
        return opts.horizon
    h = sysm.analysis.get(key, sysm.analysis.get("horizon", DEFAULT_HORIZON))
    if isinstance(h, bool) or not isinstance(h, int) or h < 1:
        raise DescriptorError(f"analysis.{key}", "expected a positive integer")
    return h


def _sample(sysm: System, seed: int) -> list:
    """The analysis sample, the whole space, or a seeded subset of the defaults."""
    raw = sysm.analysis.get("sample")
    if raw is not None:
        return decode_covers(sysm, raw, "sample")
    if sysm.space.elements is not None:
        return list(sysm.space.elements)
    covers = list(sysm.covers)
    if len(covers) <= DEFAULT_SAMPLE:
        return covers
    idx = sorted(random.Random(seed).sample(range(len(covers)), DEFAULT_SAMPLE))
    return [covers[i] for i in idx]


# -- check ------------------------------------------------------------------


def cmd_check(sysm: System, opts: Options) -> Report:
    report = Report("check", sysm.name)
    sample = _sample(sysm, opts.seed)

    def cover_axioms():
        r = check_cover_axioms(sysm.space, sample, seed=opts.seed)
        return ("pass" if r.ok else "fail"), {"sampled": r.sampled, "axioms": r.summary()}

    def norm_axioms():
        r = check_norm_axioms(sysm.space, sample)
        return ("pass" if r.ok else "fail"), {"sampled": r.sampled, "axioms": r.summary()}

    def classification():
        r = classify_map(sysm.space, sysm.map, sample)
        declared = sysm.map.declared_class
        ok = r.has(declared)
        result = {
            "declared": declared.value,
            "declared_holds": ok,
            "classes": [c.value for c in r.classes],
            "strongest": r.strongest.value if r.strongest else None,
            "sampled": r.sampled,
            "axioms": r.summary(),
        }
        return ("pass" if ok else "fail"), result

    _run(report, opts, "cover axioms", cover_axioms)
    _run(report, opts, "norm axioms", norm_axioms)
    _run(report, opts, "map classification", classification)
    return report


# -- entropy ----------------------------------------------------------------


def _estimate_dict(sysm: System, est) -> dict:
    d = est.as_dict()
    d["value"] = est.value
    if est.exact is None:
        d["note"] = "finite-horizon value; the limit is not certified"
    return d


def _family(sysm: System, raw):
    if isinstance(raw, dict) and set(raw) == {"cofinal"}:
        k = raw["cofinal"]
        if isinstance(k, bool) or not isinstance(k, int) or k < 1:
            raise DescriptorError("analysis.family.cofinal", "expected a positive integer")
        return k, True
    if raw == "all":
        if sysm.space.elements is None:
            raise DescriptorError("analysis.family", "'all' needs a finite space")
        return list(sysm.space.elements), True
    return decode_covers(sysm, raw, "family"), bool(sysm.analysis.get("family_cofinal", False))


def cmd_entropy(sysm: System, opts: Options) -> Report:
    report = Report("entropy", sysm.name)
    a = sysm.analysis
    horizon = _horizon(sysm, opts)
    covers = decode_covers(sysm, a.get("covers"), "covers") if "covers" in a else sysm.covers[:1]
    expect = a.get("expect_value")
    for c in covers:
        label = sysm.encode(c)

        def rel(c=c):
            est = entropy_relative(sysm.space, sysm.map, c, horizon, opts.budget)
            d = _estimate_dict(sysm, est)
            if expect is None:
                return "pass", d
            d["expected"] = parse_norm(expect, "analysis.expect_value")
            return ("pass" if ext_eq(est.value, d["expected"], sysm.space.tol) else "fail"), d

        _run(report, opts, f"relative entropy at {label}", rel)
        if a.get("bilateral"):

            def bil(c=c):
                est = entropy_bilateral(sysm.space, sysm.map, c, horizon, opts.budget)
                return "pass", _estimate_dict(sysm, est)

            _run(report, opts, f"bilateral entropy at {label}", bil)
    if "family" in a:
        fam, cofinal = _family(sysm, a["family"])

        def fam_entropy():
            res = entropy(sysm.space, sysm.map, fam, horizon, cofinal=cofinal, budget=opts.budget)
            return "pass", {"value": res.value, "label": res.label, "reason": res.reason,
                            "members": len(res.members)}

        _run(report, opts, "entropy over family", fam_entropy)
    return report


# -- expansivity ------------------------------------------------------------


def _targets(sysm: System, raw):
    if raw is None or raw == "all":
        if sysm.space.elements is not None:
            return None
        return list(sysm.covers)
    return decode_covers(sysm, raw, "targets")


def cmd_expansivity(sysm: System, opts: Options) -> Report:
    report = Report("expansivity", sysm.name)
    a = sysm.analysis
    if "generator" in a:
        system = [sysm.decode(a["generator"])]
    elif "generator_system" in a:
        system = decode_covers(sysm, a["generator_system"], "generator_system")
    elif "generator" in sysm.parts:
        system = [sysm.parts["generator"]]
    else:
        raise DescriptorError("analysis.generator", "missing")
    two_sided = bool(a.get("two_sided", False))
    m_budget = a.get("m_budget", DEFAULT_M_BUDGET)
    targets = _targets(sysm, a.get("targets"))
    horizon = _horizon(sysm, opts)
    state = {}

    def search():
        res = is_generator_system(sysm.space, sysm.map, system, targets, m_budget, two_sided, opts.budget)
        if not isinstance(res, GeneratorCertificate):
            return "budget-exceeded", {**res.as_dict(), "refused": sysm.encode(res.beta)}
        state["cert"] = res
        return "pass", res.as_dict()

    _run(report, opts, "generator search", search)
    if "cert" in state:

        def gen_entropy():
            res = generator_system_entropy(sysm.space, sysm.map, state["cert"], horizon)
            return "pass", {"value": res.value, "label": res.label, "reason": res.reason}

        _run(report, opts, "generator-system entropy", gen_entropy)
        if a.get("descent"):

            def descent():
                cert = cofinal_descent(sysm.space, sysm.map, state["cert"], a.get("depth", 16))
                est = descent_entropy(sysm.space, sysm.map, cert, horizon)
                d = cert.as_dict()
                d["beta"] = sysm.encode(cert.beta)
                d["entropy"] = _estimate_dict(sysm, est)
                ok = est.exact is not None and est.exact == 0.0
                return ("pass" if ok else "fail"), d

            _run(report, opts, "cofinal descent", descent)
    return report


# -- laws -------------------------------------------------------------------


def _identity_connection(sysm: System) -> Connection:
    ident = lambda c: c  # noqa: E731
    mu = SpaceMap(sysm.space, sysm.space, ident, "id", inverse_apply=ident, declared_class=MapClass.ISOMORPHISM)
    return Connection(mu, sysm.map, sysm.map)


def _default_laws(sysm: System) -> list[str]:
    op = sysm.parts.get("op")
    if op == "product":
        return ["product", "comparison"]
    if op == "f_product":
        return ["f_product"]
    if op == "coproduct":
        return ["coproduct"]
    if op in ("shift", "bernoulli"):
        return ["shift"]
    laws = ["comparison"]
    if sysm.map.is_lower and sysm.space.meet_space:
        laws.insert(0, "power")
    return laws


def _law_result(r: LawResult) -> tuple[str, dict]:
    return ("pass" if r.holds else "fail"), r.as_dict()


def cmd_laws(sysm: System, opts: Options) -> Report:
    report = Report("laws", sysm.name)
    a = sysm.analysis
    horizon = _horizon(sysm, opts, "law_horizon")
    laws = a.get("laws", _default_laws(sysm))
    cover = sysm.decode(a["law_cover"]) if "law_cover" in a else (sysm.covers[0] if sysm.covers else None)
    tol = sysm.space.tol
    for law in laws:
        if law == "power":
            for m in a.get("powers", [0, 1, 2, 3]):
                _run(report, opts, f"power law m={m}",
                     lambda m=m: _law_result(log_law(sysm.space, sysm.map, cover, m, horizon, tol)))
        elif law == "product":
            comps = sysm.parts["components"]

            def prod():
                return _law_result(product_additivity(sysm.space, sysm.map, [c.space for c in comps],
                                                      [c.map for c in comps], cover, horizon, tol))

            _run(report, opts, "product additivity", prod)
        elif law == "f_product":
            comps = sysm.parts["components"]

            def fprod():
                return _law_result(f_product_law(sysm.space, sysm.map, [c.space for c in comps],
                                                 [c.map for c in comps], cover, horizon, tol))

            _run(report, opts, "f-product max law", fprod)
        elif law == "coproduct":
            tup = sysm.decode(a["law_cover"]) if "law_cover" in a else max(sysm.covers, key=lambda t: len(t.entries))

            def coprod():
                return _law_result(coproduct_additivity(sysm.space, sysm.map, sysm.parts["base"],
                                                        sysm.parts["base_map"], tup, horizon, tol))

            _run(report, opts, "coproduct additivity", coprod)
        elif law == "shift":
            ss = sysm.parts["shift_system"]
            if ss is None:
                raise DescriptorError("analysis.laws", "shift law needs a shift construction")
            entry = cover.entries[0][1] if cover is not None and cover.entries else ss.base.unit
            _run(report, opts, "shift entropy", lambda: _law_result(shift_law(ss, entry, horizon, tol)))
        elif law == "comparison":
            for name, conn, covers in _connections(sysm):
                _run(report, opts, f"comparison via {name}", lambda conn=conn, covers=covers:
                     _law_result(comparison_law(conn, covers, horizon, _conn_sample(conn, covers))))
        else:
            raise DescriptorError("analysis.laws", f"unknown law {law!r}")
    return report


def _conn_sample(conn: Connection, covers):
    return None if conn.source.elements is not None else list(covers)


def _connections(sysm: System):
    out = [("identity", _identity_connection(sysm), sysm.covers[:4])]
    if sysm.parts.get("op") == "product":
        comps = sysm.parts["components"]
        mu = projection(sysm.space, comps[0].space, 0)
        out.append(("projection onto the first factor", Connection(mu, sysm.map, comps[0].map), sysm.covers[:4]))
    if sysm.kind == "topo" and "subspace" in sysm.analysis:
        top, T = sysm.parts["topology"], sysm.parts["T"]
        sub = topo.subspace(top, topo.bits(sysm.analysis["subspace"]))
        out.append(("restriction to a subspace", topo.restriction_connection(sub, T), sysm.covers))
        rest = topo.subspace(top, top.full & ~sub.mask)
        if rest.mask:
            out.append(("restriction to both pieces", topo.union_connection(sub, rest, T), sysm.covers))
    return out


COMMANDS = {"check": cmd_check, "entropy": cmd_entropy, "expansivity": cmd_expansivity, "laws": cmd_laws}


def format_text(report: Report) -> str:
    lines = [f"{report.command}: {report.system}"]
    for a in report.analyses:
        lines.append(f"  [{a['status']}] {a['analysis']}")
        r = a["result"]
        for key in ("value", "label", "reason", "declared", "strongest", "verdict", "justification",
                    "expected", "beta", "m", "gamma", "kind", "scope", "targets", "max_m", "refused", "holds", "error", "note"):
            if key in r and r[key] is not None:
                lines.append(f"      {key}: {r[key]}")
        if "axioms" in r:
            bad = {k: v["witness"] for k, v in r["axioms"].items() if not v["passed"]}
            lines.append(f"      axioms checked: {len(r['axioms'])}, failed: {len(bad)}")
            for k, w in bad.items():
                lines.append(f"        {k} witness {w}")
        if "witness" in r:
            lines.append(f"      witness: {r['witness']}")
        if "detail" in r:
            d = r["detail"]
            for key in ("verdict", "justification", "block_value", "value", "max_factor", "gap_at_horizon", "entropies"):
                if key in d:
                    lines.append(f"      {key}: {d[key]}")
        if "seconds" in a:
            lines.append(f"      seconds: {a['seconds']}")
    lines.append(f"exit code {report.exit_code}")
    return "\n".join(lines)


def _env_float(name: str, default: float) -> float:
    v = os.environ.get(name)
    return default if v is None else float(v)


def _env_int(name: str, default: int) -> int:
    v = os.environ.get(name)
    return default if v is None else int(v)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entropy-spaces", description="Entropy-space analyses of JSON system descriptors.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("file")
        s.add_argument("--horizon", type=int, default=None)
        s.add_argument("--budget", type=int, default=None, help="step budget (env ENTROPY_SPACES_BUDGET)")
        s.add_argument("--tolerance", type=float, default=None, help="absolute tolerance (env ENTROPY_SPACES_TOLERANCE)")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--json", action="store_true", dest="as_json")
        s.add_argument("--timings", action="store_true")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        budget = args.budget if args.budget is not None else _env_int("ENTROPY_SPACES_BUDGET", DEFAULT_BUDGET)
        tol = args.tolerance if args.tolerance is not None else _env_float("ENTROPY_SPACES_TOLERANCE", DEFAULT_TOL)
    except ValueError as e:
        print(f"error: bad environment override: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    opts = Options(args.horizon, budget, tol, args.seed, args.as_json, args.timings)
    try:
        sysm = load_file(args.file, tolerance=tol, budget=budget)
        report = COMMANDS[args.command](sysm, opts)
    except DescriptorError as e:
        print(f"schema error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    if opts.as_json:
        print(json.dumps(_clean(report.as_dict()), indent=2, ensure_ascii=False))
    else:
        print(format_text(report))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
