"""Execute claim manifests into structured pass/fail reports.

Every claim is evaluated through the corresponding library operation; an
evaluation error is recorded per-claim (status 'error') and never aborts the
run.  Narrative entries aggregate the statuses of the claims they cite: they
mark conclusions that follow from the listed computations plus imported
theory, and carry no computation of their own.

Reports are deterministic across runs except for the timing fields.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from .errors import KrError
from .geometry import classify_quadric, graph_variable_check, tangent_cone
from .groebner import member, singular_at, smooth_everywhere
from .morphism import exact_divide, verify_inverse_pair
from .derivation import nilpotency_certificate
from .parser import ClaimDecl, SourceUnit, eval_node, parse_unit
from .poly import render

PASS, FAIL, ERROR = "pass", "fail", "error"


@dataclass(frozen=True)
class ClaimResult:
    label: str
    kind: str
    status: str
    anchor: str | None
    millis: int
    detail: str = ""


@dataclass
class Report:
    source: str
    results: list[ClaimResult] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, ERROR: 0}
        for r in self.results:
            out[r.status] += 1
        return out

    @property
    def all_pass(self) -> bool:
        return all(r.status == PASS for r in self.results)

    def to_text(self) -> str:
        lines = [f"# {self.source}"]
        width = max((len(r.label) for r in self.results), default=0)
        kwidth = max((len(r.kind) for r in self.results), default=0)
        for r in self.results:
            line = (f"{r.status.upper():5} [{r.kind.ljust(kwidth)}] "
                    f"{r.label.ljust(width)} ({r.millis} ms)")
            if r.anchor:
                line += f"  -- {r.anchor}"
            lines.append(line)
            if r.detail and r.status != PASS:
                for chunk in r.detail.splitlines():
                    lines.append(f"      {chunk}")
        c = self.counts
        lines.append(f"{c[PASS]} passed, {c[FAIL]} failed, {c[ERROR]} errors")
        return "\n".join(lines)

    def to_json(self) -> str:
        payload = {
            "source": self.source,
            "claims": [
                {"label": r.label, "kind": r.kind, "status": r.status,
                 "anchor": r.anchor, "millis": r.millis, "detail": r.detail}
                for r in self.results
            ],
            "summary": self.counts | {"all_pass": self.all_pass},
        }
        return json.dumps(payload, indent=2, sort_keys=False)


def _eval_claim(unit: SourceUnit, claim: ClaimDecl) -> tuple[bool, str]:
    """Return (holds, detail); detail shows both sides for failed equalities."""
    table = unit.rings[claim.ring]
    env = unit.env
    p = claim.payload

    def ev(node):
        return eval_node(node, env, table)

    if claim.kind == "eq":
        lhs, rhs = ev(p["lhs"]), ev(p["rhs"])
        ok = lhs == rhs
        detail = "" if ok else f"lhs = {render(lhs)}\nrhs = {render(rhs)}"
        return ok, detail
    if claim.kind == "divides":
        f, g = ev(p["f"]), ev(p["g"])
        q = exact_divide(f, g)
        return q is not None, ("" if q is not None else
                               f"dividend = {render(f)}\ndivisor = {render(g)}")
    if claim.kind == "member":
        f = ev(p["f"])
        return member(f, list(p["gens"])), f"f = {render(f)}"
    if claim.kind == "nilpotent":
        _, d = env[p["derivation"]]
        if p["relation"] is not None:
            d = d.modulo(p["relation"])
        cert = nilpotency_certificate(d, p["bound"])
        orders = ", ".join(f"{v}:{k}" for v, k in cert.orders.items())
        if cert.complete:
            return True, f"orders {orders}"
        return False, f"bound exceeded at generator {cert.failed_generator!r}"
    if claim.kind == "cone_class":
        cone = tangent_cone(ev(p["f"]), p["point"])
        got = classify_quadric(cone, p["spec"])
        ok = got.tag == p["tag"]
        return ok, f"cone = {render(cone)}; classified {got.tag}, expected {p['tag']}"
    if claim.kind == "smooth_at_all":
        return smooth_everywhere(ev(p["f"])), ""
    if claim.kind == "singular_at":
        return singular_at(ev(p["f"]), p["point"]), ""
    if claim.kind == "inverse_pair":
        _, m1 = env[p["m1"]]
        _, m2 = env[p["m2"]]
        return verify_inverse_pair(m1.with_inverse(m2), p["mod1"], p["mod2"]), ""
    if claim.kind == "quasi_homogeneous":
        f = ev(p["f"])
        return f.is_weighted_homogeneous(p["weights"], p["degree"]), ""
    if claim.kind == "graph_variable":
        return graph_variable_check(ev(p["f"]), p["var"]), ""
    if claim.kind == "laurent_free":
        _, obj = env[p["name"]]
        images = obj.images
        bad = [v for v in sorted(images)
               if images[v].min_exponent(p["var"]) < 0]
        return not bad, ("" if not bad else
                         f"negative {p['var']}-exponents in images of {', '.join(bad)}")
    raise KrError(f"unknown claim kind {claim.kind!r}")


def _run_one(unit: SourceUnit, claim: ClaimDecl) -> ClaimResult:
    started = time.perf_counter()
    try:
        holds, detail = _eval_claim(unit, claim)
        status = PASS if holds == claim.expect else FAIL
        if status == FAIL and not detail:
            detail = f"evaluated {str(holds).lower()}, expected {str(claim.expect).lower()}"
    except (KrError, ZeroDivisionError, AssertionError) as exc:
        status, detail = ERROR, f"{type(exc).__name__}: {exc}"
    millis = int((time.perf_counter() - started) * 1000)
    return ClaimResult(claim.label, claim.kind, status, claim.anchor, millis, detail)


def run_unit(unit: SourceUnit, source: str = "<unit>", parallel: bool = False) -> Report:
    """Evaluate every claim (optionally on a thread pool), then the narratives."""
    report = Report(source)
    if parallel and len(unit.claims) > 1:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(lambda c: _run_one(unit, c), unit.claims))
    else:
        results = [_run_one(unit, c) for c in unit.claims]
    report.results.extend(results)
    by_label = {r.label: r for r in results}
    for narr in unit.narratives:
        ok = all(by_label[req].status == PASS for req in narr.requires)
        detail = "aggregate of: " + ", ".join(narr.requires)
        result = ClaimResult(narr.label, "narrative", PASS if ok else FAIL,
                             None, 0, detail)
        by_label[narr.label] = result
        report.results.append(result)
    return report


def run_text(text: str, source: str = "<input>", parallel: bool = False) -> Report:
    return run_unit(parse_unit(text), source, parallel)


def run_file(path, parallel: bool = False) -> Report:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return run_text(text, str(path), parallel)


SHIPPED_MANIFESTS = (
    "embeddings.krv",
    "autgroup.krv",
    "fibers.krv",
    "stable.krv",
    "cylinder.krv",
)


def manifest_path(name: str):
    """Filesystem path of a manifest shipped inside the package."""
    root = resources.files("krcubic").joinpath("manifests")
    path = root.joinpath(name)
    if not path.is_file():
        raise KrError(f"no shipped manifest named {name!r}")
    return path


def run_shipped(name: str, parallel: bool = False) -> Report:
    path = manifest_path(name)
    return run_text(path.read_text(encoding="utf-8"), name, parallel)
