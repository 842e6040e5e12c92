"""Cross-validation harness: count engine vs exact randomized matrices.

analyze() runs both engines on one graph and fills a Report; the linear
side is sampled over a number of trials and its best rank compared to the
combinatorial rank.  fuzz_equivalence() hammers the matroid equalities on
random graphs: for every case the per-trial linear rank must stay at or
below the combinatorial rank (a violation is an immediate hard failure),
and the best-of-trials rank must reach it.  A single unlucky sample never
fails a run: trials escalate (to 10) before a case is declared a
counterexample, and counterexamples are dumped as replayable documents.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from . import count_matroid as cm
from . import rigidity as rg
from .documents import graph_document
from .field import SplitMix64, check_prime, DEFAULT_PRIME
from .graph import CountProfile, Multigraph, VertexKind, build_graph, expand_f

ESCALATED_TRIALS = 10
FUZZ_MAX_VERTICES = 8
FUZZ_MAX_EDGES = 24
SUBSET_CHECK_EDGES = 6  # full polymatroid equality is checked below this size

BAR_MODELS = ("body-bar", "rod-bar", "body-rod-bar")


class EngineDisagreement(RuntimeError):
    """The two engines (or an engine and its oracle) disagree; carries a dump."""

    def __init__(self, message: str, dump: dict):
        super().__init__(message)
        self.dump = dump


def _model_profile(model: str, d: int) -> CountProfile:
    if model == "direction":
        return CountProfile.direction(d)
    return CountProfile.body_rod_bar(d)


def _check_model_dimension(model: str, d: int) -> None:
    if model in ("rod-bar", "body-rod-bar", "body-hinge") and d < 3:
        raise ValueError(
            "model %s needs dimension >= 3; d=2 is supported only for "
            "body-bar and direction frameworks" % model
        )


@dataclass(frozen=True)
class CountSide:
    """Combinatorial side of one instance, normalized across models."""

    profile: CountProfile
    count_graph: Multigraph  # the graph the matroid actually lives on
    copies: Optional[dict]  # original edge -> copy ids (expanded models)
    rank: int
    target: int

    def rank_without(self, original_edge: str) -> int:
        if self.copies is None:
            keep = [e for e in self.count_graph.edge_ids if e != original_edge]
        else:
            drop = set(self.copies[original_edge])
            keep = [e for e in self.count_graph.edge_ids if e not in drop]
        return cm.rank_value(self.count_graph, keep, self.profile)


def count_side(graph: Multigraph, model: str, d: int) -> CountSide:
    prof = _model_profile(model, d)
    if model in BAR_MODELS:
        return CountSide(
            profile=prof,
            count_graph=graph,
            copies=None,
            rank=cm.rank_value(graph, None, prof),
            target=cm.global_count_target(graph, prof),
        )
    if model == "body-hinge":
        rekinded = build_graph(
            [
                (
                    v,
                    VertexKind.ROD
                    if graph.kinds[v] == VertexKind.HINGE
                    else VertexKind.BODY,
                )
                for v in graph.vertex_ids
            ],
            [(e.u, e.v, e.id) for e in graph.edges],
        )
        expanded, copies = expand_f(rekinded, prof)
        return CountSide(
            profile=prof,
            count_graph=expanded,
            copies=copies,
            rank=cm.rank_value(expanded, None, prof),
            target=cm.global_count_target(rekinded, prof),
        )
    if model == "direction":
        expanded, copies = expand_f(graph, prof)
        return CountSide(
            profile=prof,
            count_graph=expanded,
            copies=copies,
            rank=cm.rank_value(expanded, None, prof),
            target=cm.global_count_target(graph, prof),
        )
    raise ValueError("unknown model %r" % model)


@dataclass
class LinearTrial:
    rank: int
    trivial_checked: int
    trivial_violations: int
    flat_rank: Optional[int] = None
    graphic_union_rank: Optional[int] = None
    matrix: Optional[rg.RigidityMatrix] = None
    rods: Optional[rg.RodConfig] = None
    joints: Optional[dict] = None


def linear_trial(
    graph: Multigraph,
    model: str,
    d: int,
    p: int,
    rng: SplitMix64,
    joints=None,
    keep_matrix: bool = False,
    with_flats: bool = True,
) -> LinearTrial:
    """Sample one configuration and measure the matrix ranks for it."""
    if model == "direction":
        if joints is None:
            joints = rg.sample_joints(graph, d, rng.spawn(2), p)
        m = rg.matrix_direction(graph, joints, d, p, seed=rng.seed)
        checked, bad = rg.verify_trivial_motions(m, joints=joints)
        return LinearTrial(
            rank=m.rank(),
            trivial_checked=checked,
            trivial_violations=bad,
            matrix=m if keep_matrix else None,
            joints=joints,
        )
    if model == "body-hinge":
        exp = rg.expand_hinge(graph, d, rng, p)
        m = rg.matrix_body_rod_bar(exp.graph, exp.rods, exp.bars, seed=rng.seed)
        checked, bad = rg.verify_trivial_motions(m, rods=exp.rods)
        return LinearTrial(
            rank=m.rank(),
            trivial_checked=checked,
            trivial_violations=bad,
            matrix=m if keep_matrix else None,
            rods=exp.rods,
        )
    rods = rg.sample_rod_config(graph, d, rng.spawn(0), p)
    bars = rg.sample_bar_config(graph, rods, rng.spawn(1), p)
    m = rg.matrix_body_rod_bar(graph, rods, bars, seed=rng.seed)
    checked, bad = rg.verify_trivial_motions(m, rods=rods)
    trial = LinearTrial(
        rank=m.rank(),
        trivial_checked=checked,
        trivial_violations=bad,
        matrix=m if keep_matrix else None,
        rods=rods,
    )
    if with_flats and model in ("rod-bar", "body-rod-bar"):
        trial.flat_rank = rg.matrix_edge_flats(graph, rods, p).rank()
    if model == "body-bar":
        dg = rg.matrix_graphic_union(graph, d, rng.spawn(3), p)
        trial.graphic_union_rank = dg.rank()
    return trial


# ---------------------------------------------------------------------------
# Single-instance report


@dataclass
class Report:
    model: str
    d: int
    D: int
    prime: int
    seed: int
    trials_requested: int
    trials_run: int
    graph_summary: dict
    count_rank: int
    count_target: int
    certificate_free: tuple
    certificate_parts: tuple
    p_components: tuple
    linear_ranks: tuple
    max_linear_rank: int
    flat_ranks: tuple
    fhat_rank: Optional[int]
    graphic_union_ranks: tuple
    kernel_dim: Optional[int]
    trivial_motion_count: int
    trivial_span_dim: Optional[int]
    nontrivial_dim: Optional[int]
    trivial_checked: int
    trivial_violations: int
    verdict: str
    minimal: Optional[bool]
    agreement: bool
    oracle: Optional[dict] = None

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "kind": "report",
            "model": self.model,
            "dimension": self.d,
            "D": self.D,
            "prime": self.prime,
            "seed": self.seed,
            "trials": {"requested": self.trials_requested, "run": self.trials_run},
            "graph": self.graph_summary,
            "combinatorial": {
                "rank": self.count_rank,
                "target": self.count_target,
                "certificate": {
                    "free": list(self.certificate_free),
                    "parts": [list(part) for part in self.certificate_parts],
                },
                "p_components": [list(c) for c in self.p_components],
                "fhat": self.fhat_rank,
            },
            "linear": {
                "ranks": list(self.linear_ranks),
                "max_rank": self.max_linear_rank,
                "flat_ranks": list(self.flat_ranks),
                "graphic_union_ranks": list(self.graphic_union_ranks),
                "kernel_dim": self.kernel_dim,
                "trivial_motions": self.trivial_motion_count,
                "trivial_span_dim": self.trivial_span_dim,
                "nontrivial_dim": self.nontrivial_dim,
                "trivial_checked": self.trivial_checked,
                "trivial_violations": self.trivial_violations,
            },
            "verdict": self.verdict,
            "minimal": self.minimal,
            "agreement": self.agreement,
            "oracle": self.oracle,
        }


def _graph_summary(graph: Multigraph) -> dict:
    kinds = [graph.kinds[v] for v in graph.vertex_ids]
    return {
        "vertices": len(graph.vertex_ids),
        "bodies": sum(1 for k in kinds if k == VertexKind.BODY),
        "rods": sum(1 for k in kinds if k == VertexKind.ROD),
        "hinges": sum(1 for k in kinds if k == VertexKind.HINGE),
        "edges": len(graph.edges),
    }


def analyze(
    graph: Multigraph,
    model: str,
    d: int,
    prime: int = DEFAULT_PRIME,
    seed: int = 0,
    trials: int = 3,
    joints=None,
    oracle: bool = False,
) -> Report:
    """Run both engines on one instance and reconcile them into a Report."""
    check_prime(prime)
    _check_model_dimension(model, d)
    prof = _model_profile(model, d)
    D = d * (d + 1) // 2
    cs = count_side(graph, model, d)
    cert = cm.rank(cs.count_graph, None, cs.profile)
    pdec_graph = graph if model != "body-hinge" else _rekind_hinges(graph)
    pdec = cm.p_components(pdec_graph, prof) if graph.edges else None

    master = SplitMix64(seed)
    ranks: list[int] = []
    flat_ranks: list[int] = []
    dg_ranks: list[int] = []
    checked = violations = 0
    best: Optional[LinearTrial] = None
    n_trials = trials
    t = 0
    while t < n_trials:
        trial = linear_trial(
            graph, model, d, prime, master.spawn(t), joints=joints, keep_matrix=True
        )
        if trial.rank > cs.rank:
            raise EngineDisagreement(
                "linear rank %d exceeds combinatorial rank %d" % (trial.rank, cs.rank),
                _dump(graph, model, d, seed, cs, ranks + [trial.rank]),
            )
        ranks.append(trial.rank)
        if trial.flat_rank is not None:
            flat_ranks.append(trial.flat_rank)
        if trial.graphic_union_rank is not None:
            dg_ranks.append(trial.graphic_union_rank)
        checked += trial.trivial_checked
        violations += trial.trivial_violations
        if best is None or trial.rank > best.rank:
            best = trial
        t += 1
        if t == n_trials and max(ranks) < cs.rank and n_trials < ESCALATED_TRIALS:
            n_trials = ESCALATED_TRIALS  # unlucky samples: escalate before judging
    max_rank = max(ranks) if ranks else 0

    fhat_rank = None
    if model in ("rod-bar", "body-rod-bar"):
        fhat_rank = cm.fhat(graph, None, prof)

    kernel_dim = trivial_span = nontrivial = None
    if best is not None and best.matrix is not None:
        basis = rg.kernel_basis(best.matrix, rods=best.rods, joints=best.joints)
        kernel_dim = basis.kernel_dim
        trivial_span = basis.trivial_span_dim
        nontrivial = basis.nontrivial_dim

    nv = len(graph.vertex_ids)
    rigid = nv <= 1 or (max_rank == cs.target)
    minimal: Optional[bool] = None
    if nv > 1 and graph.edges:
        minimal = rigid and all(
            cs.rank_without(e) < cs.target for e in graph.edge_ids
        )
    if nv <= 1:
        verdict = "trivially rigid"
    elif rigid:
        verdict = "minimally rigid" if minimal else "rigid"
    else:
        verdict = "flexible"

    oracle_result = None
    if oracle:
        oracle_result = _run_oracle(graph, model, cs, prof)

    if model == "direction":
        trivial_count = d + 1
    else:
        n_rods = sum(
            1
            for v in graph.vertex_ids
            if graph.kinds[v] in (VertexKind.ROD, VertexKind.HINGE)
        )
        trivial_count = D + n_rods

    return Report(
        model=model,
        d=d,
        D=D,
        prime=prime,
        seed=seed,
        trials_requested=trials,
        trials_run=len(ranks),
        graph_summary=_graph_summary(graph),
        count_rank=cs.rank,
        count_target=cs.target,
        certificate_free=cert.free_part,
        certificate_parts=cert.parts,
        p_components=pdec.components if pdec else (),
        linear_ranks=tuple(ranks),
        max_linear_rank=max_rank,
        flat_ranks=tuple(flat_ranks),
        fhat_rank=fhat_rank,
        graphic_union_ranks=tuple(dg_ranks),
        kernel_dim=kernel_dim,
        trivial_motion_count=trivial_count,
        trivial_span_dim=trivial_span,
        nontrivial_dim=nontrivial,
        trivial_checked=checked,
        trivial_violations=violations,
        verdict=verdict,
        minimal=minimal,
        agreement=(cs.rank == max_rank),
        oracle=oracle_result,
    )


def _rekind_hinges(graph: Multigraph) -> Multigraph:
    return build_graph(
        [
            (
                v,
                VertexKind.ROD
                if graph.kinds[v] == VertexKind.HINGE
                else graph.kinds[v],
            )
            for v in graph.vertex_ids
        ],
        [(e.u, e.v, e.id) for e in graph.edges],
    )


def _run_oracle(graph, model, cs: CountSide, prof) -> dict:
    """Brute-force cross-checks, skipped (with a note) beyond the size limit."""
    n = len(cs.count_graph.edges)
    if n > cm.BRUTEFORCE_LIMIT:
        return {"checked": False, "reason": "edge count %d exceeds limit" % n}
    bf = cm.rank_bruteforce(cs.count_graph, None, cs.profile)
    agrees = bf.value == cs.rank
    if not agrees:
        raise EngineDisagreement(
            "pebble rank %d != brute-force rank %d" % (cs.rank, bf.value),
            {"model": model, "bruteforce": bf.value, "pebble": cs.rank},
        )
    return {"checked": True, "agrees": True, "bruteforce_rank": bf.value}


def _dump(graph, model, d, seed, cs: CountSide, ranks) -> dict:
    return {
        "document": graph_document(graph, model, d),
        "seed": seed,
        "count_rank": cs.rank,
        "count_target": cs.target,
        "linear_ranks": list(ranks),
    }


# ---------------------------------------------------------------------------
# Random graph distribution


def random_multigraph(
    rng: SplitMix64,
    model: str,
    max_vertices: int = FUZZ_MAX_VERTICES,
    max_edges: int = FUZZ_MAX_EDGES,
    rod_bias: float = 0.5,
) -> Multigraph:
    """Erdos-Renyi base plus parallel-edge injection (probability 0.3).

    Vertex kinds are i.i.d. with the given rod (or hinge) bias; simple
    graphs for the direction model; bipartite body-hinge for the hinge
    model.  At least one edge is always present.
    """
    nv = 2 + rng.below(max_vertices - 1)
    bias_pct = int(rod_bias * 100)
    if model == "body-bar":
        kinds = [VertexKind.BODY] * nv
    elif model == "rod-bar":
        kinds = [VertexKind.ROD] * nv
    elif model == "body-rod-bar":
        kinds = [
            VertexKind.ROD if rng.below(100) < bias_pct else VertexKind.BODY
            for _ in range(nv)
        ]
    elif model == "body-hinge":
        kinds = [
            VertexKind.HINGE if rng.below(100) < bias_pct else VertexKind.BODY
            for _ in range(nv)
        ]
        kinds[0] = VertexKind.BODY
        kinds[-1] = VertexKind.HINGE
    elif model == "direction":
        kinds = [VertexKind.BODY] * nv
    else:
        raise ValueError("unknown model %r" % model)

    names = ["v%d" % i for i in range(nv)]
    pairs = []
    for i in range(nv):
        for j in range(i + 1, nv):
            if model == "body-hinge" and kinds[i] == kinds[j]:
                continue
            pairs.append((names[i], names[j]))
    edges = [pair for pair in pairs if rng.below(100) < 40]
    if not edges and pairs:
        edges.append(pairs[rng.below(len(pairs))])
    if model not in ("direction", "body-hinge"):
        for pair in list(edges):  # parallel-edge injection
            while len(edges) < max_edges and rng.below(100) < 30:
                edges.append(pair)
                if rng.below(100) < 50:
                    break
    del edges[max_edges:]
    return build_graph(list(zip(names, kinds)), edges)


# ---------------------------------------------------------------------------
# Fuzz harness


@dataclass
class FuzzSummary:
    model: str
    d: int
    cases: int
    agreements: int
    escalations: int
    trivial_checked: int
    trivial_violations: int
    subset_checks: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.trivial_violations == 0

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "kind": "fuzz-summary",
            "model": self.model,
            "dimension": self.d,
            "cases": self.cases,
            "agreements": self.agreements,
            "escalations": self.escalations,
            "trivial_checked": self.trivial_checked,
            "trivial_violations": self.trivial_violations,
            "subset_checks": self.subset_checks,
            "failures": self.failures,
            "ok": self.ok,
        }


def _thread_count(threads: Optional[int]) -> int:
    if threads is not None:
        return max(1, threads)
    env = os.environ.get("RIGIKIT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def fuzz_case(
    graph: Multigraph,
    model: str,
    d: int,
    prime: int,
    case_rng: SplitMix64,
    trials: int,
) -> dict:
    """One fuzz case; returns counters and (on disagreement) a failure dump."""
    out = {
        "agrees": True,
        "escalated": False,
        "trivial_checked": 0,
        "trivial_violations": 0,
        "subset_checks": 0,
        "failure": None,
    }
    cs = count_side(graph, model, d)
    prof = cs.profile

    ranks: list[int] = []
    flat_ranks: list[int] = []
    dg_ranks: list[int] = []
    n_trials = trials
    t = 0
    fhat_total = None
    if model in ("rod-bar", "body-rod-bar"):
        fhat_total = cm.fhat(graph, None, prof)
    while t < n_trials:
        trial = linear_trial(graph, model, d, prime, case_rng.spawn(t))
        out["trivial_checked"] += trial.trivial_checked
        out["trivial_violations"] += trial.trivial_violations
        if trial.rank > cs.rank:
            out["agrees"] = False
            out["failure"] = _failure_dump(
                graph, model, d, case_rng.seed, cs, ranks + [trial.rank],
                "per-trial linear rank exceeds combinatorial rank",
            )
            return out
        ranks.append(trial.rank)
        if trial.flat_rank is not None:
            if trial.flat_rank > fhat_total:
                out["agrees"] = False
                out["failure"] = _failure_dump(
                    graph, model, d, case_rng.seed, cs, ranks,
                    "flat-family rank exceeds polymatroid rank",
                )
                return out
            flat_ranks.append(trial.flat_rank)
        if trial.graphic_union_rank is not None:
            dg_ranks.append(trial.graphic_union_rank)
        t += 1
        done_low = (
            max(ranks) < cs.rank
            or (flat_ranks and max(flat_ranks) < fhat_total)
            or (dg_ranks and max(dg_ranks) < cs.rank)
        )
        if t == n_trials and done_low and n_trials < ESCALATED_TRIALS:
            n_trials = ESCALATED_TRIALS
            out["escalated"] = True

    reasons = []
    if max(ranks) != cs.rank:
        reasons.append("max linear rank %d != combinatorial rank %d" % (max(ranks), cs.rank))
    if flat_ranks and max(flat_ranks) != fhat_total:
        reasons.append(
            "flat-family rank %d != polymatroid rank %d" % (max(flat_ranks), fhat_total)
        )
    if dg_ranks and max(dg_ranks) != cs.rank:
        reasons.append(
            "graphic-union rank %d != combinatorial rank %d" % (max(dg_ranks), cs.rank)
        )
    if reasons:
        out["agrees"] = False
        out["failure"] = _failure_dump(
            graph, model, d, case_rng.seed, cs, ranks, "; ".join(reasons)
        )
        return out

    # small cases: full polymatroid equality against the partition oracle
    if (
        model in ("rod-bar", "body-rod-bar")
        and 0 < len(graph.edges) <= SUBSET_CHECK_EDGES
    ):
        expansion = expand_f(graph, prof)
        order = graph.edge_ids
        n = len(order)
        for mask in range(1, 1 << n):
            F = [order[i] for i in range(n) if mask >> i & 1]
            lhs = cm.fhat(graph, F, prof, expanded=expansion)
            rhs = cm.fhat_bruteforce(graph, F, prof)
            out["subset_checks"] += 1
            if lhs != rhs:
                out["agrees"] = False
                out["failure"] = _failure_dump(
                    graph, model, d, case_rng.seed, cs, ranks,
                    "fhat(%r) = %d != brute force %d" % (F, lhs, rhs),
                )
                return out
    return out


def _failure_dump(graph, model, d, seed, cs: CountSide, ranks, reason: str) -> dict:
    dump = _dump(graph, model, d, seed, cs, ranks)
    dump["reason"] = reason
    return dump


def fuzz_equivalence(
    model: str,
    d: int,
    cases: int,
    seed: int = 0,
    prime: int = DEFAULT_PRIME,
    trials: int = 3,
    max_vertices: int = FUZZ_MAX_VERTICES,
    rod_bias: float = 0.5,
    threads: Optional[int] = None,
) -> FuzzSummary:
    """Random-instance equivalence run; see the module docstring for policy."""
    check_prime(prime)
    _check_model_dimension(model, d)
    if max_vertices > FUZZ_MAX_VERTICES:
        raise ValueError("fuzz is desk-scale: at most %d vertices" % FUZZ_MAX_VERTICES)
    master = SplitMix64(seed)
    summary = FuzzSummary(model=model, d=d, cases=cases, agreements=0, escalations=0,
                          trivial_checked=0, trivial_violations=0, subset_checks=0)

    def run(i: int) -> dict:
        case_rng = master.spawn(i)
        graph = random_multigraph(
            case_rng.spawn(10_000), model, max_vertices=max_vertices, rod_bias=rod_bias
        )
        return fuzz_case(graph, model, d, prime, case_rng, trials)

    n_threads = _thread_count(threads)
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            results = list(pool.map(run, range(cases)))
    else:
        results = [run(i) for i in range(cases)]

    for i, res in enumerate(results):
        summary.agreements += 1 if res["agrees"] else 0
        summary.escalations += 1 if res["escalated"] else 0
        summary.trivial_checked += res["trivial_checked"]
        summary.trivial_violations += res["trivial_violations"]
        summary.subset_checks += res["subset_checks"]
        if res["failure"] is not None:
            failure = dict(res["failure"])
            failure["case"] = i
            summary.failures.append(failure)
    return summary
