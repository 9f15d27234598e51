"""Five-step decision pipeline from a scenario to a ranked report.

Steps: (1) estimate the transition matrix from the linguistic Markov
assessments, (2) propagate per-period attribute weights, (3) per
attribute, blend expert weights and solve the collective-priority model,
(4) aggregate comparable values U, (5) rank. Any stage override in the
scenario bypasses exactly its stage and is echoed in the diagnostics, so
intermediate results can be injected and the remainder re-run.

Reports render to deterministic JSON or plain text.
"""

from __future__ import annotations

import json
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import Diagnostics, record
from .errors import ConfigError, EngineError, NumericalError, ShapeError
from .markov import estimate_transition, export_dot, period_weights, period_weights_reshaped
from .prefs import (
    ExpertWeightReport,
    compute_expert_weights,
    scored_model1_problem,
    certainty_matrix,
    score_matrix,
)
from .scale import TermCoord, from_unit, to_unit
from .solver import solve
from .terms import ProbabilisticTermSet, plts_score, score

STAGES = ("markov", "weights", "priorities", "aggregate", "all")

_SUM_NOTE_TOL = 1e-6


@contextmanager
def _step(number: int, name: str):
    """Tag stage errors with their pipeline step."""
    try:
        yield
    except EngineError as exc:
        exc.args = (f"step {number} ({name}): {exc}",) + exc.args[1:]
        raise
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"step {number} ({name}): {exc}") from exc


@dataclass
class DecisionReport:
    """Everything the pipeline produced, plus the diagnostics trail."""

    stage: str
    scheme: str
    paper_literal: bool
    attributes: tuple[str, ...]
    alternatives: tuple[str, ...]
    experts: tuple[str, ...]
    transition: np.ndarray | None = None
    period_weights: np.ndarray | None = None
    expert_weights: dict[str, ExpertWeightReport] = field(default_factory=dict)
    model_weights: dict[str, np.ndarray] = field(default_factory=dict)
    priorities: dict[str, np.ndarray] = field(default_factory=dict)
    comparables: np.ndarray | None = None
    ranking: tuple[int, ...] | None = None
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    def ranked_names(self) -> list[str] | None:
        if self.ranking is None:
            return None
        return [self.alternatives[i] for i in self.ranking]

    def to_dict(self) -> dict:
        def arr(x):
            return None if x is None else np.asarray(x).tolist()

        return {
            "format": 1,
            "stage": self.stage,
            "scheme": self.scheme,
            "paper_literal": self.paper_literal,
            "attributes": list(self.attributes),
            "alternatives": list(self.alternatives),
            "experts": list(self.experts),
            "transition": arr(self.transition),
            "period_weights": arr(self.period_weights),
            "expert_weights": {a: r.as_dict() for a, r in self.expert_weights.items()},
            "model_weights": {a: arr(v) for a, v in self.model_weights.items()},
            "priorities": {a: arr(v) for a, v in self.priorities.items()},
            "comparables": arr(self.comparables),
            "ranking": self.ranked_names(),
            "diagnostics": [e.as_dict() for e in self.diagnostics],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        lines: list[str] = [f"stage: {self.stage}   scheme: {self.scheme}"]

        def vec(v):
            return "  ".join(f"{x:.6f}" for x in v)

        if self.transition is not None:
            lines.append("transition matrix:")
            for name, row in zip(self.attributes, self.transition):
                lines.append(f"  {name}: {vec(row)}")
        if self.period_weights is not None:
            lines.append("period weights (" + "  ".join(self.attributes) + "):")
            for t, row in enumerate(self.period_weights, start=1):
                lines.append(f"  t={t}: {vec(row)}")
        for attr, rep in self.expert_weights.items():
            lines.append(f"expert weights [{attr}]:")
            lines.append(f"  outer:   {vec(rep.outer)}")
            lines.append(f"  inner:   {vec(rep.inner)}")
            lines.append(f"  trust:   {vec(rep.trust)}")
            lines.append(f"  blended: {vec(rep.blended)}")
        if self.priorities:
            lines.append("priorities (" + "  ".join(self.alternatives) + "):")
            for attr in self.attributes:
                if attr in self.priorities:
                    lines.append(f"  {attr}: {vec(self.priorities[attr])}")
        if self.comparables is not None:
            lines.append("comparable values:")
            for name, u in zip(self.alternatives, self.comparables):
                lines.append(f"  {name}: {u:.6f}")
        names = self.ranked_names()
        if names is not None:
            lines.append("ranking: " + " > ".join(names))
        if len(self.diagnostics):
            lines.append("diagnostics:")
            for event in self.diagnostics:
                lines.append(f"  - {event.kind}: {event.detail}")
        return "\n".join(lines) + "\n"

    def export_dot(self) -> str:
        if self.transition is None:
            raise ConfigError("no transition matrix available to export")
        return export_dot(self.transition, list(self.attributes))


def aggregate(period: np.ndarray, priorities: np.ndarray) -> np.ndarray:
    """Comparable values U_x = sum_t sum_q omega[t, q] * priorities[q, x]."""
    period = np.asarray(period, dtype=float)
    priorities = np.asarray(priorities, dtype=float)
    if period.ndim != 2 or priorities.ndim != 2:
        raise ShapeError("period weights and priorities must both be matrices")
    if period.shape[1] != priorities.shape[0]:
        raise ShapeError(
            f"{period.shape[1]} weighted attributes but {priorities.shape[0]} priority vectors"
        )
    return period.sum(axis=0) @ priorities


def rank(U: np.ndarray, diag: Diagnostics | None = None) -> tuple[int, ...]:
    """Indices in descending order of U; ties fall back to index order."""
    U = np.asarray(U, dtype=float)
    if not np.all(np.isfinite(U)):
        raise NumericalError("comparable values contain non-finite entries")
    order = sorted(range(U.size), key=lambda x: (-U[x], x))
    seen: dict[float, list[int]] = {}
    for i, u in enumerate(U):
        seen.setdefault(float(u), []).append(i)
    for u, members in seen.items():
        if len(members) > 1:
            record(diag, "tie", f"alternatives {members} share U={u:.6g}; using index order")
    return tuple(order)


def _resolved_scheme(scenario, scheme: str | None) -> str:
    out = scheme if scheme is not None else scenario.markov.scheme
    if out not in ("power", "reshape"):
        raise ConfigError(f"unknown scheme {out!r}")
    return out


def _note_row_sums(kind: str, rows, diag: Diagnostics, label) -> None:
    for name, row in zip(label, rows):
        s = float(np.sum(row))
        if abs(s - 1.0) > _SUM_NOTE_TOL:
            record(diag, kind, f"{name} sums to {s:.6g}, not 1 (kept verbatim)")


def run_pipeline(
    scenario,
    stage: str = "all",
    scheme: str | None = None,
    paper_literal: bool = False,
) -> DecisionReport:
    """Run the pipeline through ``stage`` and collect a report.

    Stages are cumulative: ``markov`` stops after the transition matrix,
    ``weights`` after period weights, ``priorities`` after the
    per-attribute priority vectors, ``aggregate`` after U, and ``all``
    adds the ranking. ``scheme`` overrides the scenario's period-weight
    scheme; ``paper_literal`` switches the consistency deviation to the
    printed-constant form.
    """
    if stage not in STAGES:
        raise ConfigError(f"unknown stage {stage!r}; expected one of {STAGES}")
    used_scheme = _resolved_scheme(scenario, scheme)
    diag = Diagnostics()
    report = DecisionReport(
        stage=stage,
        scheme=used_scheme,
        paper_literal=paper_literal,
        attributes=scenario.attributes,
        alternatives=scenario.alternatives,
        experts=scenario.experts,
        diagnostics=diag,
    )
    ov = scenario.overrides

    with _step(1, "transition"):
        if ov.transition_matrix is not None:
            record(diag, "override_applied", "transition_matrix")
            report.transition = np.array(ov.transition_matrix, dtype=float)
        else:
            report.transition = estimate_transition(
                list(scenario.markov.assessments), diag=diag
            )
    if stage == "markov":
        return report

    with _step(2, "period weights"):
        if ov.period_weights is not None:
            record(diag, "override_applied", "period_weights")
            _note_row_sums(
                "override_row_sum",
                ov.period_weights,
                diag,
                (f"period {t + 1}" for t in range(ov.period_weights.shape[0])),
            )
            report.period_weights = np.array(ov.period_weights, dtype=float)
        elif used_scheme == "reshape":
            if scenario.markov.origin_updates is None:
                raise ConfigError("scheme 'reshape' requires markov.origin_updates")
            report.period_weights = period_weights_reshaped(
                report.transition,
                scenario.markov.periods,
                scenario.markov.iterations,
                scenario.markov.origin,
                list(scenario.markov.origin_updates),
                diag=diag,
            )
        else:
            report.period_weights = period_weights(
                report.transition,
                scenario.markov.periods,
                scenario.markov.iterations,
                scenario.markov.origin,
            )
    if stage == "weights":
        return report

    with _step(3, "expert weights and priorities"):
        for attr in scenario.attributes:
            relations = scenario.preferences.get(attr)
            if relations is not None:
                report.expert_weights[attr] = compute_expert_weights(
                    list(relations),
                    list(scenario.trust),
                    scenario.alpha,
                    scenario.beta,
                    scenario.gamma,
                    paper_literal=paper_literal,
                    diag=diag,
                )
            if attr in ov.priority_vectors:
                record(diag, "override_applied", f"priority_vectors.{attr}")
                _note_row_sums(
                    "override_vector_sum", [ov.priority_vectors[attr]], diag, [f"priorities {attr}"]
                )
                report.priorities[attr] = np.array(ov.priority_vectors[attr], dtype=float)
                continue
            if relations is None:
                raise ConfigError(
                    f"no preference relations for attribute {attr!r} and no priority override"
                )
            weights = _model_weights(scenario, attr, report, diag)
            report.model_weights[attr] = weights
            report.priorities[attr] = _solve_priorities(list(relations), weights)
    if stage == "priorities":
        return report

    with _step(4, "aggregate"):
        matrix = np.vstack([report.priorities[a] for a in scenario.attributes])
        report.comparables = aggregate(report.period_weights, matrix)
    if stage == "aggregate":
        return report

    with _step(5, "rank"):
        report.ranking = rank(report.comparables, diag)
    return report


def _model_weights(scenario, attr: str, report: DecisionReport, diag: Diagnostics) -> np.ndarray:
    ov = scenario.overrides
    if attr in ov.expert_weight_vectors:
        record(diag, "override_applied", f"expert_weight_vectors.{attr}")
        w = np.array(ov.expert_weight_vectors[attr], dtype=float)
        total = float(w.sum())
        if total <= 0.0:
            raise ConfigError(f"expert weight override for {attr} has zero mass")
        if abs(total - 1.0) > 1e-9:
            record(
                diag, "override_normalized",
                f"expert_weight_vectors.{attr} summed to {total:.6g}; normalized for the model",
            )
            w = w / total
        return w
    return report.expert_weights[attr].blended


def _solve_priorities(relations, weights: np.ndarray) -> np.ndarray:
    scores = [score_matrix(r) for r in relations]
    certainties = [certainty_matrix(r) for r in relations]
    return solve(scored_model1_problem(scores, certainties, weights)).vector


@dataclass(frozen=True)
class PltsComparison:
    """Priority vectors from the interval algebra and a point reduction."""

    attribute: str
    expert_weights: np.ndarray
    interval_priorities: np.ndarray
    plts_priorities: np.ndarray

    @staticmethod
    def _min_gap(v: np.ndarray) -> float:
        s = np.sort(v)
        return float(np.diff(s).min()) if s.size > 1 else 0.0

    @property
    def interval_min_gap(self) -> float:
        return self._min_gap(self.interval_priorities)

    @property
    def plts_min_gap(self) -> float:
        return self._min_gap(self.plts_priorities)

    @property
    def interval_range(self) -> float:
        return float(self.interval_priorities.max() - self.interval_priorities.min())

    @property
    def plts_range(self) -> float:
        return float(self.plts_priorities.max() - self.plts_priorities.min())

    def as_dict(self) -> dict:
        return {
            "attribute": self.attribute,
            "expert_weights": self.expert_weights.tolist(),
            "interval_priorities": self.interval_priorities.tolist(),
            "plts_priorities": self.plts_priorities.tolist(),
            "interval_min_gap": self.interval_min_gap,
            "plts_min_gap": self.plts_min_gap,
            "interval_range": self.interval_range,
            "plts_range": self.plts_range,
        }


def _plts_reduced_score(relation, i: int, j: int) -> float:
    """Unit score of a pairwise judgement after point reduction.

    The interval collapses to its midpoint term at probability p; the
    leftover 1 - p goes to the indifferent middle term. The score is the
    probability-weighted mean term, read back in unit space.
    """
    entry = relation.entry(i, j)
    scale = relation.scale
    mid = from_unit(scale, score(entry))
    reduced = ProbabilisticTermSet(
        scale, ((mid, entry.p), (TermCoord(0, 0), 1.0 - entry.p))
    )
    return to_unit(scale, plts_score(reduced))


def compare_with_plts(
    scenario,
    attribute: str,
    paper_literal: bool = False,
) -> PltsComparison:
    """Solve the priority model on interval evidence and on its reduction.

    Both routes share the same blended expert weights. The interval route
    weights each residual by its certainty p; the reduction absorbs p
    into the score (p * E + (1 - p) / 2) and weights residuals equally,
    which is all a point representation can carry.
    """
    relations = scenario.preferences.get(attribute)
    if relations is None:
        raise ConfigError(f"no preference relations for attribute {attribute!r}")
    diag = Diagnostics()
    m = relations[0].m
    ov = scenario.overrides
    if attribute in ov.expert_weight_vectors:
        w = np.array(ov.expert_weight_vectors[attribute], dtype=float)
        w = w / w.sum()
    else:
        w = compute_expert_weights(
            list(relations),
            list(scenario.trust),
            scenario.alpha,
            scenario.beta,
            scenario.gamma,
            paper_literal=paper_literal,
            diag=diag,
        ).blended

    interval = _solve_priorities(list(relations), w)

    ones = np.ones((m, m))
    reduced_scores = []
    for relation in relations:
        E = np.full((m, m), 0.5)
        for i in range(m):
            for j in range(m):
                if i != j:
                    E[i, j] = _plts_reduced_score(relation, i, j)
        reduced_scores.append(E)
    plts = solve(scored_model1_problem(reduced_scores, [ones] * len(relations), w)).vector

    return PltsComparison(
        attribute=attribute,
        expert_weights=w,
        interval_priorities=interval,
        plts_priorities=plts,
    )
