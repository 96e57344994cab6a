"""Instance generation, theorem verification campaigns and negative controls."""

from __future__ import annotations

import concurrent.futures
import dataclasses
import hashlib
import random
import time
from pathlib import Path
from typing import Any

from . import limits
from .cutcensus import edge_connectivity, enumerate_cuts, hypothesis_check
from .errors import ZFlowError
from .flowsolve import (
    MOD3,
    Z3_TABLE,
    Certificate,
    all_boundaries,
    count_nz_zk_flows,
    find_mod3_orientation,
    find_nz3_flow,
    flow_polynomial,
    is_beta_orientation,
    verify_certificate,
    verify_flow,
    verify_mod3_orientation,
    z3_connected,
)
from .multigraph import Multigraph, complete_graph, k4_triangle_blowup, path_graph, petersen_graph
from .pipeline import augmentation_beta_orientation, augmentation_mod3_orientation

KINDS = ("uniform", "regular", "booster", "glued")
STRATEGIES = ("direct", "paper", "both")

CERTIFIED = "certified"
NOT_APPLICABLE = "not-applicable"
CANDIDATE = "CONJECTURE-CANDIDATE"
DISAGREEMENT = "strategy-disagreement"

# degree weights for the configuration-model generator, per theorem
PROFILES: dict[str, tuple[tuple[int, float], ...]] = {
    "1.12": ((2, 0.05), (3, 0.1), (4, 0.45), (5, 0.1), (6, 0.3)),
    "1.13": ((4, 0.5), (5, 0.15), (6, 0.35)),
    "1.14": ((2, 0.05), (3, 0.1), (4, 0.55), (6, 0.3)),
    "1.17": ((5, 0.1), (6, 0.6), (7, 0.2), (8, 0.1)),
}
MIN_CONNECTIVITY = {"1.12": 2, "1.13": 4, "1.14": 2, "1.17": 5}
N_RANGE = {"1.12": (3, 10), "1.13": (3, 10), "1.14": (3, 10), "1.17": (3, 8)}


class GenerationFailure(ZFlowError):
    """Retry budget exhausted before an acceptable graph was drawn."""


@dataclasses.dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int
    theorem: str | None = None
    min_connectivity: int = 2
    max_edges: int = 30
    seed: int = 0
    retries: int = 2000

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


def _random_pairs(rng: random.Random, n: int, count: int) -> list[tuple[int, int]]:
    out = []
    for _ in range(count):
        u, v = rng.sample(range(n), 2)
        out.append((u, v))
    return out


def _configuration(rng: random.Random, degrees: list[int]) -> list[tuple[int, int]] | None:
    stubs = [v for v, d in enumerate(degrees) for _ in range(d)]
    for _ in range(50):
        rng.shuffle(stubs)
        pairs = list(zip(stubs[::2], stubs[1::2]))
        if all(u != v for u, v in pairs):
            return pairs
    return None


def _draw(spec: GenSpec, rng: random.Random) -> Multigraph | None:
    n = spec.n
    if spec.kind == "uniform":
        m = rng.randint(n, max(n, min(spec.max_edges, 3 * n)))
        return Multigraph(n, tuple(_random_pairs(rng, n, m)))
    if spec.kind == "regular":
        profile = PROFILES.get(spec.theorem or "1.12", PROFILES["1.12"])
        values, weights = zip(*profile)
        degrees = [rng.choices(values, weights)[0] for _ in range(n)]
        if sum(degrees) % 2:
            degrees[rng.randrange(n)] += 1
        pairs = _configuration(rng, degrees)
        return Multigraph(n, tuple(pairs)) if pairs is not None else None
    if spec.kind == "booster":
        order = list(range(n))
        rng.shuffle(order)
        edges = [(order[i], order[(i + 1) % n]) for i in range(n)] if n > 2 else [(0, 1), (0, 1)]
        edges += _random_pairs(rng, n, rng.randint(0, n))
        for _ in range(rng.randint(1, n)):
            edges.append(rng.choice(edges))
        return Multigraph(n, tuple(edges))
    if spec.kind == "glued":
        if spec.theorem == "1.17":
            base = complete_graph(n) if n <= 7 else _k8_minus_matching()
            if n > 8:
                return None
            extra = _random_pairs(rng, n, rng.randint(0, 3))
            return base.add_edges(extra)
        # two cliques sharing one vertex, plus a few edges between them
        a = rng.randint(2, max(2, n - 1))
        b = n - a + 1
        left = [(u, v) for u in range(a) for v in range(u + 1, a)]
        right_ids = [a - 1] + list(range(a, n))
        right = [(right_ids[i], right_ids[j]) for i in range(b) for j in range(i + 1, b)]
        links = [(rng.randrange(a), rng.choice(right_ids)) for _ in range(rng.randint(0, 5))]
        edges = left + right + [(u, v) for u, v in links if u != v]
        for _ in range(rng.randint(0, 3)):
            edges.append(rng.choice(edges))
        return Multigraph(n, tuple(edges))
    raise ValueError(f"unknown generator kind {spec.kind!r}")


def _k8_minus_matching() -> Multigraph:
    return Multigraph(8, tuple(e for e in complete_graph(8).edges if not (e[0] % 2 == 0 and e[1] == e[0] + 1)))


def _accept(g: Multigraph, spec: GenSpec) -> bool:
    if g.m > spec.max_edges or g.n < 2 or not g.is_connected():
        return False
    if edge_connectivity(g) < spec.min_connectivity:
        return False
    return spec.theorem is None or hypothesis_check(g, spec.theorem).holds


def generate(spec: GenSpec) -> Multigraph:
    """Rejection sampling: draw from ``spec.kind`` until the filters accept."""
    if spec.kind not in KINDS:
        raise ValueError(f"unknown generator kind {spec.kind!r}")
    limits.check("generator", "census_max_n", spec.n)
    rng = random.Random(spec.seed)
    for _ in range(spec.retries):
        g = _draw(spec, rng)
        if g is not None and _accept(g, spec):
            return g
    raise GenerationFailure(f"no acceptable graph for {spec} within {spec.retries} draws")


def graph_hash(g: Multigraph) -> str:
    return hashlib.sha256(g.serialize().encode()).hexdigest()[:16]


@dataclasses.dataclass
class TheoremReport:
    theorem: str
    graph_hash: str
    n: int
    m: int
    three_cuts: int
    five_cuts: int
    edge_connectivity: int | None
    hypothesis: dict[str, bool]
    verdict: str
    conclusion: bool | None
    strategies: dict[str, dict[str, Any]]
    lemma_uses: int = 0
    lemma_violations: list[dict] = dataclasses.field(default_factory=list)
    failed_extensions: int = 0
    certificate: dict | None = None
    seed: int | None = None
    wall_time: float = 0.0
    graph: str = ""

    @property
    def flagged(self) -> bool:
        return self.verdict == CANDIDATE

    def to_json(self, timing: bool = False) -> dict:
        doc = dataclasses.asdict(self)
        if not timing:
            doc.pop("wall_time")
        return doc

    CSV_FIELDS = (
        "theorem", "graph_hash", "n", "m", "three_cuts", "five_cuts", "edge_connectivity",
        "verdict", "conclusion", "lemma_uses", "failed_extensions", "seed",
    )

    def csv_row(self) -> list:
        row = [getattr(self, f) for f in self.CSV_FIELDS]
        return row + [len(self.lemma_violations)]


def _direct_3flow(g: Multigraph) -> dict[str, Any]:
    cert = find_nz3_flow(g)
    ok = cert.exists and verify_flow(g, cert.payload, 3)
    out = {"found": cert.exists, "verified": bool(ok), "nodes_searched": cert.nodes_searched}
    if cert.exists:
        out["certificate"] = cert.to_json()
    return out


def _augmentation_3flow(g: Multigraph, reduce: bool, repair: bool) -> tuple[dict[str, Any], Any]:
    res = augmentation_mod3_orientation(g, reduce=reduce, repair=repair)
    ok = res.found and verify_mod3_orientation(g, res.orientation)
    out = {"found": res.found, "verified": bool(ok), "reductions": res.trace.reductions}
    if res.found:
        out["certificate"] = Certificate(MOD3, res.orientation).to_json()
    return out, [res.trace]


def _augmentation_z3(g: Multigraph, reduce: bool) -> tuple[dict[str, Any], Any]:
    traces = []
    table = []
    first_failure = None
    for beta in all_boundaries(g.n):
        res = augmentation_beta_orientation(g, beta, reduce=reduce)
        traces.append(res.trace)
        if res.found and is_beta_orientation(g, res.orientation, beta):
            table.append((beta, res.orientation))
        elif first_failure is None:
            first_failure = list(beta)
    total = len(traces)
    out = {
        "found": len(table) == total,
        "verified": len(table) == total,
        "boundaries": total,
        "boundaries_solved": len(table),
        "first_failure": first_failure,
    }
    if len(table) == total:
        out["certificate"] = Certificate(Z3_TABLE, tuple(table)).to_json()
    return out, traces


def verify_theorem(
    g: Multigraph,
    theorem_id: str,
    strategy: str = "both",
    seed: int | None = None,
    reduce: bool = True,
    repair: bool = False,
) -> TheoremReport:
    """Check one theorem on one graph, with a certificate for every positive answer.

    ``direct`` searches for the conclusion; ``paper`` runs the augmentation
    pipeline. Outside the hypotheses the verdict is ``not-applicable`` and the
    conclusion is still decided directly for reference.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    t0 = time.perf_counter()
    census = enumerate_cuts(g, 5) if g.n >= 1 and g.is_connected() else None
    hyp = hypothesis_check(g, theorem_id, census)
    report = TheoremReport(
        theorem=theorem_id,
        graph_hash=graph_hash(g),
        n=g.n,
        m=g.m,
        three_cuts=hyp.three_cuts,
        five_cuts=hyp.five_cuts,
        edge_connectivity=hyp.edge_connectivity,
        hypothesis=hyp.clauses,
        verdict=NOT_APPLICABLE,
        conclusion=None,
        strategies={},
        seed=seed,
        graph=g.serialize(),
    )
    use_direct = strategy in ("direct", "both") or not hyp.holds
    use_pipeline = strategy in ("paper", "both") and hyp.holds
    traces = []
    if theorem_id == "1.17":
        if use_direct:
            z3 = z3_connected(g)
            ok = z3.connected and verify_certificate(g, z3.certificate)
            report.strategies["direct"] = {
                "found": z3.connected,
                "verified": bool(ok),
                "boundaries": z3.boundaries_checked,
                "nodes_searched": z3.certificate.nodes_searched,
                "counterexample": list(z3.counterexample) if z3.counterexample else None,
            }
            report.certificate = z3.certificate.to_json()
        if use_pipeline:
            report.strategies["paper"], traces = _augmentation_z3(g, reduce)
            pipeline_cert = report.strategies["paper"].pop("certificate", None)
            if report.certificate is None:
                report.certificate = pipeline_cert
    else:
        if use_direct:
            report.strategies["direct"] = _direct_3flow(g)
            if report.strategies["direct"]["found"]:
                report.certificate = report.strategies["direct"].pop("certificate")
        if use_pipeline:
            report.strategies["paper"], traces = _augmentation_3flow(g, reduce, repair)
            pipeline_cert = report.strategies["paper"].pop("certificate", None)
            if report.certificate is None:
                report.certificate = pipeline_cert

    for tr in traces:
        report.lemma_uses += len(tr.lemma_uses)
        report.failed_extensions += len(tr.failed_extensions)
        for use in tr.violations:
            if len(report.lemma_violations) < 5:
                report.lemma_violations.append(use.to_json())
    if not report.lemma_violations and any(tr.violations for tr in traces):
        report.lemma_violations.append({"truncated": True})

    results = list(report.strategies.values())
    report.conclusion = all(r["found"] and r["verified"] for r in results)
    if hyp.holds:
        if report.conclusion:
            report.verdict = CERTIFIED
        elif any(r["found"] and r["verified"] for r in results):
            report.verdict = DISAGREEMENT
        else:
            report.verdict = CANDIDATE
    report.wall_time = time.perf_counter() - t0
    return report


def campaign_spec(theorem_id: str, seed: int, index: int, attempt: int = 0) -> GenSpec:
    """Reproducible generator spec for instance ``index`` of a campaign.

    ``attempt`` reseeds after a generation failure.
    """
    rng = random.Random((seed * 1_000_003 + index) * 101 + attempt)
    lo, hi = N_RANGE[theorem_id]
    kinds = ("regular", "booster", "uniform", "glued")
    kind = kinds[index % len(kinds)]
    if theorem_id == "1.17":
        kind = ("regular", "glued")[index % 2]
        lo = 6 if kind == "glued" else lo
    return GenSpec(
        kind=kind,
        n=rng.randint(lo, hi),
        theorem=theorem_id,
        min_connectivity=MIN_CONNECTIVITY[theorem_id],
        max_edges=30,
        seed=rng.getrandbits(32),
    )


def _campaign_instance(args: tuple) -> TheoremReport | dict:
    theorem_id, seed, index, strategy, reduce, repair = args
    if theorem_id == "1.17" and index < 2:
        g = complete_graph(7) if index == 0 else _k8_minus_matching()
        spec_seed = None
    else:
        g = None
        for attempt in range(5):
            spec = campaign_spec(theorem_id, seed, index, attempt)
            try:
                g = generate(spec)
                break
            except GenerationFailure as exc:
                failure = str(exc)
        if g is None:
            return {"index": index, "generation_failure": failure}
        spec_seed = spec.seed
    return verify_theorem(g, theorem_id, strategy, seed=spec_seed, reduce=reduce, repair=repair)


@dataclasses.dataclass
class CampaignResult:
    theorem: str
    seed: int
    strategy: str
    reports: list[TheoremReport]
    generation_failures: list[dict]

    @property
    def flags(self) -> int:
        return sum(r.flagged for r in self.reports)

    def summary(self) -> dict:
        verdicts: dict[str, int] = {}
        for r in self.reports:
            verdicts[r.verdict] = verdicts.get(r.verdict, 0) + 1
        return {
            "theorem": self.theorem,
            "seed": self.seed,
            "strategy": self.strategy,
            "instances": len(self.reports),
            "verdicts": dict(sorted(verdicts.items())),
            "conjecture_candidates": self.flags,
            "lemma_uses": sum(r.lemma_uses for r in self.reports),
            "instances_with_lemma_violations": sum(bool(r.lemma_violations) for r in self.reports),
            "failed_extensions": sum(r.failed_extensions for r in self.reports),
            "generation_failures": len(self.generation_failures),
        }


def run_campaign(
    theorem_id: str,
    count: int,
    seed: int = 0,
    strategy: str = "both",
    reduce: bool = True,
    repair: bool = False,
    workers: int = 1,
    archive_dir: str | Path | None = None,
) -> CampaignResult:
    """Generate and verify ``count`` instances; results are in instance order.

    For 1.17 the first two instances are K7 and K8 minus a perfect matching.
    """
    jobs = [(theorem_id, seed, i, strategy, reduce, repair) for i in range(count)]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(workers) as pool:
            outputs = list(pool.map(_campaign_instance, jobs))
    else:
        outputs = [_campaign_instance(j) for j in jobs]
    reports = [o for o in outputs if isinstance(o, TheoremReport)]
    failures = [o for o in outputs if isinstance(o, dict)]
    if archive_dir is not None:
        path = Path(archive_dir)
        path.mkdir(parents=True, exist_ok=True)
        for i, r in enumerate(reports):
            name = path / f"thm{theorem_id.replace('.', '_')}_{i:04d}_{r.graph_hash}.txt"
            name.write_text(f"# theorem {theorem_id} campaign seed {seed} instance seed {r.seed}\n{r.graph}")
    return CampaignResult(theorem_id, seed, strategy, reports, failures)


@dataclasses.dataclass(frozen=True)
class ControlReport:
    name: str
    expect_flow: bool
    exists: bool
    nodes_searched: int
    oracle_count: int
    oracle: str

    @property
    def passed(self) -> bool:
        return self.exists == self.expect_flow and (self.oracle_count > 0) == self.expect_flow

    def to_json(self) -> dict:
        doc = dataclasses.asdict(self)
        doc["passed"] = self.passed
        return doc


def control_graphs() -> list[tuple[str, Multigraph, bool]]:
    two_triangles = Multigraph(6, ((0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)))
    return [
        ("K4", complete_graph(4), False),
        ("Petersen", petersen_graph(), False),
        ("K4-triangle-blowup", k4_triangle_blowup(), False),
        ("single-edge", path_graph(2), False),
        ("two-triangles-bridge", two_triangles, False),
        ("K5", complete_graph(5), True),
    ]


def negative_controls() -> list[ControlReport]:
    """Fixed control suite: graphs without a nowhere-zero 3-flow, plus K5 as
    a positive control. Each verdict is cross-checked by flow counting."""
    out = []
    for name, g, expect in control_graphs():
        cert = find_mod3_orientation(g)
        if cert.exists and not verify_mod3_orientation(g, cert.payload):
            raise AssertionError(f"{name}: invalid certificate")
        if g.m <= limits.LIMITS.brute_force_max_edges:
            count, oracle = count_nz_zk_flows(g, 3), "brute-force"
        else:
            count, oracle = flow_polynomial(g, 3), "deletion-contraction"
        out.append(ControlReport(name, expect, cert.exists, cert.nodes_searched, count, oracle))
    return out
