"""Builtin states, per-state analysis, sweeps, and Monte Carlo campaigns."""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .measures import (
    Bipartition,
    pure_scren,
    scren,
    screnoa,
    two_qubit_tangle_and_toa,
)
from .relations import (
    SAT_TOL,
    MeasureKind,
    MeasureVector,
    RelationId,
    RelationReport,
    REGISTRY,
    evaluate_relation,
)
from .roof import RoofConfig
from .states import PureState, density, haar_random_pure, ket, partial_trace

_BUILTIN_RE = re.compile(r"^([a-z]+)[\s(:]*([\d,x ]*)\)?$")


def _aharonov3() -> PureState:
    # totally antisymmetric three-qutrit state: amplitudes are the
    # Levi-Civita symbol over basis labels, normalized
    amp = np.zeros(27, dtype=complex)
    signs = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
             (0, 2, 1): -1, (1, 0, 2): -1, (2, 1, 0): -1}
    for (a, b, c), s in signs.items():
        amp[9 * a + 3 * b + c] = s
    return ket(amp, (3, 3, 3))


def _ghz(n: int) -> PureState:
    if n < 2:
        raise ValueError("ghz needs at least 2 qubits")
    amp = np.zeros(2**n, dtype=complex)
    amp[0] = amp[-1] = 1.0
    return ket(amp, (2,) * n)


def _w(n: int) -> PureState:
    if n < 2:
        raise ValueError("w needs at least 2 qubits")
    amp = np.zeros(2**n, dtype=complex)
    for i in range(n):
        amp[1 << i] = 1.0
    return ket(amp, (2,) * n)


def _product(dims: tuple[int, ...]) -> PureState:
    amp = np.zeros(int(np.prod(dims)), dtype=complex)
    amp[0] = 1.0
    return ket(amp, dims)


def builtin_state(name: str) -> PureState:
    """Named state: ``bell``, ``ghz<n>``, ``w<n>``, ``product:<d0>,<d1>,...``
    or ``aharonov`` (the antisymmetric three-qutrit state).

    ``ghz(3)`` style parentheses are accepted as well.
    """
    text = name.strip().lower()
    m = _BUILTIN_RE.match(text)
    if not m:
        raise ValueError(f"unknown builtin state {name!r}")
    head, arg = m.group(1), m.group(2).strip()
    if head == "bell" and not arg:
        return ket([1, 0, 0, 1], (2, 2))
    if head == "aharonov" and not arg:
        return _aharonov3()
    if head == "ghz":
        return _ghz(int(arg or 3))
    if head == "w":
        return _w(int(arg or 3))
    if head == "product" and arg:
        dims = tuple(int(d) for d in re.split(r"[,x ]+", arg) if d)
        return _product(dims)
    raise ValueError(f"unknown builtin state {name!r}")


@dataclass(frozen=True)
class AnalysisResult:
    """SCREN and SCRENoA vectors of one state, rooted at subsystem 0."""

    scren: MeasureVector
    screnoa: MeasureVector


def _measure_or_roof(rho, cut, roof_config, maximize: bool) -> float:
    fn = screnoa if maximize else scren
    return fn(rho, cut, roof_config).value


def analyze(psi: PureState, roof_config: RoofConfig | None = None, *,
            sort_values: bool = False, include_tails: bool = False) -> AnalysisResult:
    """Measure vectors of ``psi`` with A = subsystem 0 and B_j the others.

    ``lhs`` is the pure-state SCREN across A | rest (equal for both kinds
    since minimum and maximum roofs coincide on pure states).  Two-qubit
    marginals use the closed forms, anything else the roof optimizer.
    ``sort_values`` relabels the B subsystems so each vector is
    non-increasing (independently per kind); with ``include_tails`` the
    SCRENoA vector also carries the collective tail measures, computed in
    the sorted order when sorting is on.
    """
    n = psi.n_factors
    if n < 2:
        raise ValueError("analysis needs at least two tensor factors")
    lhs = pure_scren(psi, Bipartition.split(n, (0,)))
    rho = density(psi)

    scren_vals: list[float] = []
    screnoa_vals: list[float] = []
    for j in range(1, n):
        marg = partial_trace(rho, (0, j))
        if marg.dims == (2, 2):
            tangle, toa = two_qubit_tangle_and_toa(marg)
        else:
            cut = Bipartition.split(2, (0,))
            tangle = _measure_or_roof(marg, cut, roof_config, maximize=False)
            toa = _measure_or_roof(marg, cut, roof_config, maximize=True)
        scren_vals.append(tangle)
        screnoa_vals.append(toa)

    scren_order = list(range(n - 1))
    screnoa_order = list(range(n - 1))
    if sort_values:
        scren_order.sort(key=lambda i: -scren_vals[i])
        screnoa_order.sort(key=lambda i: -screnoa_vals[i])

    tails = None
    if include_tails:
        tails = []
        for i in range(n - 2):
            tail_pos = screnoa_order[i + 1 :]
            if len(tail_pos) == 1:
                tails.append(screnoa_vals[tail_pos[0]])
                continue
            keep = (0,) + tuple(sorted(p + 1 for p in tail_pos))
            reduced = partial_trace(rho, keep)
            cut = Bipartition.split(len(keep), (0,))
            tails.append(_measure_or_roof(reduced, cut, roof_config, maximize=True))

    return AnalysisResult(
        scren=MeasureVector(
            values=tuple(scren_vals[i] for i in scren_order),
            kind=MeasureKind.SCREN,
            lhs=lhs,
        ),
        screnoa=MeasureVector(
            values=tuple(screnoa_vals[i] for i in screnoa_order),
            kind=MeasureKind.SCRENOA,
            lhs=lhs,
            tail_values=tuple(tails) if tails is not None else None,
        ),
    )


def vector_for(result: AnalysisResult, relation: RelationId) -> MeasureVector:
    return result.scren if REGISTRY[relation].kind is MeasureKind.SCREN else result.screnoa


def sweep(psi: PureState, relation: RelationId, alphas, k_policy="auto", *,
          sort_values: bool = False, roof_config: RoofConfig | None = None) -> list[RelationReport]:
    """One relation over an alpha grid on a single state."""
    spec = REGISTRY[relation]
    for alpha in alphas:
        if not spec.alpha_range.contains(float(alpha)):
            raise ValueError(
                f"alpha = {alpha} outside the range of {relation.value} ({spec.alpha_range.value})"
            )
    needs_tails = relation is RelationId.MONO_LADDER_NEG_COLLECTIVE
    result = analyze(psi, roof_config, sort_values=sort_values, include_tails=needs_tails)
    mv = vector_for(result, relation)
    return [evaluate_relation(mv, relation, float(a), k_policy) for a in alphas]


@dataclass(frozen=True)
class CampaignConfig:
    dims: tuple[int, ...] = (2, 2, 2, 2)
    samples: int = 1000
    seed: int = 0
    alphas: tuple[float, ...] = (1.0, 2.0)
    relations: tuple[RelationId, ...] = (RelationId.MONO_HAMMING, RelationId.MONO_HAMMING_BASE)
    k_policy: float | str = "auto"
    sort_values: bool = True
    roof: RoofConfig = field(default_factory=RoofConfig)
    shards: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.shards < 1:
            raise ValueError("shards must be >= 1")
        if not self.relations:
            raise ValueError("at least one relation is required")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "relations", tuple(self.relations))


@dataclass
class RelationStats:
    relation: RelationId
    alpha: float
    evaluated: int = 0
    condition_pass: int = 0
    violations: int = 0
    worst_gap: float | None = None
    _tightness_values: list = field(default_factory=list)

    @property
    def mean_tightness_delta(self) -> float | None:
        if not self._tightness_values:
            return None
        # error-free summation keeps the mean independent of shard layout
        return math.fsum(self._tightness_values) / len(self._tightness_values)

    def absorb(self, rep: RelationReport) -> None:
        if rep.condition_holds:
            self.condition_pass += 1
        if rep.satisfied is not None:
            self.evaluated += 1
            if not rep.satisfied:
                self.violations += 1
            if rep.gap is not None and (self.worst_gap is None or rep.gap < self.worst_gap):
                self.worst_gap = rep.gap
            if rep.tightness_delta is not None:
                self._tightness_values.append(rep.tightness_delta)

    def merge(self, other: "RelationStats") -> None:
        self.evaluated += other.evaluated
        self.condition_pass += other.condition_pass
        self.violations += other.violations
        if other.worst_gap is not None and (self.worst_gap is None or other.worst_gap < self.worst_gap):
            self.worst_gap = other.worst_gap
        self._tightness_values.extend(other._tightness_values)


@dataclass
class ViolationRecord:
    """Enough provenance to regenerate the offending state: the campaign
    seed plus ``sample_index`` reproduce it via :func:`sample_state`."""

    relation: RelationId
    alpha: float
    sample_index: int
    gap: float
    lhs: float
    values: tuple[float, ...]


@dataclass
class BaselineStats:
    """Plain-sum monogamy (lhs >= sum v_j, SCREN) and polygamy
    (lhs <= sum v_j, SCRENoA) over the whole ensemble."""

    ckw_violations: int = 0
    ckw_worst_gap: float | None = None
    polygamy_violations: int = 0
    polygamy_worst_gap: float | None = None

    def absorb(self, scren_mv: MeasureVector, screnoa_mv: MeasureVector) -> None:
        ckw_gap = scren_mv.lhs - sum(scren_mv.values)
        poly_gap = sum(screnoa_mv.values) - screnoa_mv.lhs
        if ckw_gap < -SAT_TOL:
            self.ckw_violations += 1
        if poly_gap < -SAT_TOL:
            self.polygamy_violations += 1
        if self.ckw_worst_gap is None or ckw_gap < self.ckw_worst_gap:
            self.ckw_worst_gap = ckw_gap
        if self.polygamy_worst_gap is None or poly_gap < self.polygamy_worst_gap:
            self.polygamy_worst_gap = poly_gap

    def merge(self, other: "BaselineStats") -> None:
        self.ckw_violations += other.ckw_violations
        self.polygamy_violations += other.polygamy_violations
        for attr in ("ckw_worst_gap", "polygamy_worst_gap"):
            mine, theirs = getattr(self, attr), getattr(other, attr)
            if theirs is not None and (mine is None or theirs < mine):
                setattr(self, attr, theirs)


@dataclass
class CampaignReport:
    config: CampaignConfig
    stats: list[RelationStats]
    baseline: BaselineStats
    violations: list[ViolationRecord]

    @property
    def total_violations(self) -> int:
        return (
            sum(s.violations for s in self.stats)
            + self.baseline.ckw_violations
            + self.baseline.polygamy_violations
        )


def sample_state(config: CampaignConfig, index: int) -> PureState:
    """The exact state of sample ``index``, independent of sharding."""
    seq = np.random.SeedSequence(entropy=config.seed, spawn_key=(index,))
    return haar_random_pure(config.dims, seq)


def _grid_for(relation: RelationId, alphas) -> list[float]:
    rng = REGISTRY[relation].alpha_range
    return [a for a in alphas if rng.contains(a)]


def _run_shard(config: CampaignConfig, start: int, stop: int, needs_tails: bool):
    stats = {
        (rid, a): RelationStats(rid, a)
        for rid in config.relations
        for a in _grid_for(rid, config.alphas)
    }
    baseline = BaselineStats()
    violations: list[ViolationRecord] = []
    for i in range(start, stop):
        psi = sample_state(config, i)
        result = analyze(
            psi, config.roof, sort_values=config.sort_values, include_tails=needs_tails
        )
        baseline.absorb(result.scren, result.screnoa)
        for rid in config.relations:
            mv = vector_for(result, rid)
            for alpha in _grid_for(rid, config.alphas):
                rep = evaluate_relation(mv, rid, alpha, config.k_policy)
                stats[(rid, alpha)].absorb(rep)
                if rep.satisfied is False:
                    violations.append(
                        ViolationRecord(rid, alpha, i, rep.gap, mv.lhs, mv.values)
                    )
    return stats, baseline, violations


def run_campaign(config: CampaignConfig) -> CampaignReport:
    """Evaluate the configured relations over a seeded Haar ensemble.

    Deterministic given the config: each sample is drawn from a stream
    keyed on (seed, sample index), so sharding cannot change any state and
    shard results merge in index order.
    """
    needs_tails = RelationId.MONO_LADDER_NEG_COLLECTIVE in config.relations
    bounds = np.linspace(0, config.samples, config.shards + 1).astype(int)
    merged_stats = None
    merged_baseline = BaselineStats()
    merged_violations: list[ViolationRecord] = []
    for s in range(config.shards):
        stats, baseline, violations = _run_shard(
            config, int(bounds[s]), int(bounds[s + 1]), needs_tails
        )
        if merged_stats is None:
            merged_stats = stats
        else:
            for key, st in stats.items():
                merged_stats[key].merge(st)
        merged_baseline.merge(baseline)
        merged_violations.extend(violations)
    ordered = [
        merged_stats[(rid, a)]
        for rid in config.relations
        for a in _grid_for(rid, config.alphas)
    ]
    return CampaignReport(
        config=config,
        stats=ordered,
        baseline=merged_baseline,
        violations=merged_violations,
    )


# ---------------------------------------------------------------------------
# deterministic serialization (17 significant digits, stable field order)

def _fmt(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_fmt(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ",".join(f"{_fmt(str(k))}:{_fmt(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot serialize {type(value)}")


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


REPORT_CSV_HEADER = "relation,alpha,k,condition,lhs_pow,rhs,kim_rhs,gap,tightness_delta"


def relation_report_dict(rep: RelationReport) -> dict:
    return {
        "id": rep.relation.value,
        "alpha": rep.alpha,
        "k": rep.k,
        "condition": rep.condition_holds,
        "lhs_pow": rep.lhs_pow,
        "rhs": rep.rhs,
        "kim_rhs": rep.kim_rhs,
        "satisfied": rep.satisfied,
        "gap": rep.gap,
        "tightness_delta": rep.tightness_delta,
    }


def relation_reports_to_csv(reports: list[RelationReport]) -> str:
    lines = [REPORT_CSV_HEADER]
    for rep in reports:
        lines.append(
            ",".join(
                _csv_cell(v)
                for v in (
                    rep.relation.value,
                    rep.alpha,
                    rep.k,
                    rep.condition_holds,
                    rep.lhs_pow,
                    rep.rhs,
                    rep.kim_rhs,
                    rep.gap,
                    rep.tightness_delta,
                )
            )
        )
    return "\n".join(lines) + "\n"


def relation_reports_to_json(reports: list[RelationReport]) -> str:
    return _fmt([relation_report_dict(r) for r in reports]) + "\n"


def _parse_cell(text: str):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    return float(text)


def relation_reports_from_csv(text: str) -> list[RelationReport]:
    """Inverse of :func:`relation_reports_to_csv`; ``satisfied`` is
    reconstructed from the condition flag and gap (the satisfaction rule
    is a pure function of both)."""
    lines = [ln for ln in text.strip().splitlines() if ln]
    if lines[0] != REPORT_CSV_HEADER:
        raise ValueError("unexpected CSV header")
    out = []
    for ln in lines[1:]:
        cells = ln.split(",")
        relation = RelationId(cells[0])
        alpha = float(cells[1])
        k = _parse_cell(cells[2])
        condition = _parse_cell(cells[3])
        lhs_pow, rhs, kim_rhs, gap, tight = (_parse_cell(c) for c in cells[4:9])
        satisfied = None if gap is None else bool(gap >= -SAT_TOL)
        out.append(
            RelationReport(relation, alpha, k, bool(condition), lhs_pow, rhs,
                           satisfied, gap, kim_rhs, tight)
        )
    return out


def campaign_config_dict(config: CampaignConfig) -> dict:
    return {
        "dims": list(config.dims),
        "samples": config.samples,
        "seed": config.seed,
        "alphas": list(config.alphas),
        "relations": [r.value for r in config.relations],
        "k_policy": config.k_policy,
        "sort_values": config.sort_values,
        "shards": config.shards,
        "roof": {
            "cardinality": config.roof.cardinality,
            "restarts": config.roof.restarts,
            "max_iters": config.roof.max_iters,
            "step_tolerance": config.roof.step_tolerance,
            "seed": config.roof.seed,
        },
    }


def campaign_config_from_dict(data: dict) -> CampaignConfig:
    roof_data = dict(data.get("roof", {}))
    roof_data.pop("direction", None)  # direction is chosen per measure
    roof = RoofConfig(**roof_data) if roof_data else RoofConfig()
    kwargs = {k: v for k, v in data.items() if k != "roof"}
    if "relations" in kwargs:
        kwargs["relations"] = tuple(RelationId(r) for r in kwargs["relations"])
    if "dims" in kwargs:
        kwargs["dims"] = tuple(kwargs["dims"])
    if "alphas" in kwargs:
        kwargs["alphas"] = tuple(kwargs["alphas"])
    return CampaignConfig(roof=roof, **kwargs)


def campaign_report_dict(report: CampaignReport) -> dict:
    return {
        "config": campaign_config_dict(report.config),
        "baseline": {
            "ckw_violations": report.baseline.ckw_violations,
            "ckw_worst_gap": report.baseline.ckw_worst_gap,
            "polygamy_violations": report.baseline.polygamy_violations,
            "polygamy_worst_gap": report.baseline.polygamy_worst_gap,
        },
        "relations": [
            {
                "relation": s.relation.value,
                "alpha": s.alpha,
                "evaluated": s.evaluated,
                "condition_pass": s.condition_pass,
                "violations": s.violations,
                "worst_gap": s.worst_gap,
                "mean_tightness_delta": s.mean_tightness_delta,
            }
            for s in report.stats
        ],
        "violations": [
            {
                "relation": v.relation.value,
                "alpha": v.alpha,
                "sample_index": v.sample_index,
                "gap": v.gap,
                "lhs": v.lhs,
                "values": list(v.values),
            }
            for v in report.violations
        ],
    }


def campaign_report_json(report: CampaignReport) -> str:
    return _fmt(campaign_report_dict(report)) + "\n"


CAMPAIGN_CSV_HEADER = (
    "relation,alpha,evaluated,condition_pass,violations,worst_gap,mean_tightness_delta"
)


def campaign_report_csv(report: CampaignReport) -> str:
    lines = [CAMPAIGN_CSV_HEADER]
    for s in report.stats:
        lines.append(
            ",".join(
                _csv_cell(v)
                for v in (
                    s.relation.value,
                    s.alpha,
                    s.evaluated,
                    s.condition_pass,
                    s.violations,
                    s.worst_gap,
                    s.mean_tightness_delta,
                )
            )
        )
    return "\n".join(lines) + "\n"


def emit_report(obj, fmt: str, path) -> None:
    """Write a campaign report or a list of relation reports to disk.

    Field order is fixed and floats carry 17 significant digits, so
    rerunning an identical configuration reproduces the file byte for
    byte.
    """
    if fmt not in ("json", "csv"):
        raise ValueError(f"format must be json or csv, got {fmt!r}")
    if isinstance(obj, CampaignReport):
        text = campaign_report_json(obj) if fmt == "json" else campaign_report_csv(obj)
    elif isinstance(obj, list):
        text = relation_reports_to_json(obj) if fmt == "json" else relation_reports_to_csv(obj)
    else:
        raise TypeError(f"cannot emit {type(obj)}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def report_sha256(report: CampaignReport) -> str:
    return hashlib.sha256(campaign_report_json(report).encode()).hexdigest()
