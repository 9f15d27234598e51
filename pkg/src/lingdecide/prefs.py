"""Reciprocal preference relations and consensus expert weighting.

A preference relation over m alternatives stores one peak interval per
ordered pair. The diagonal is the indifferent point (unit 0.5, p = 1);
endpoints mirror across the matrix: unit(lower_ij) + unit(upper_ji) = 1,
and certainties are symmetric. The score matrix E collects interval
midpoints, so E_ij + E_ji = 1.

Expert weights blend three normalised views:

* outer: pairwise relation distances, each expert weighted by its summed
  distance to the others (kept verbatim from the source formulation, so
  outliers weigh more; all-zero distances fall back to uniform),
* inner: consistency entropy of the deviation between direct scores and
  indirect scores E_iv - E_jv + 1/2 routed through third alternatives,
* trust: the deciders' normalised confidence in each expert.

Collective priorities solve the certainty-weighted least-squares model

    min sum_k omega_k sum_{i<j} p^k_ij ((w_i - w_j)/2 - E^k_ij + 1/2)^2

over the open simplex (positivity floor 1e-9).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagnostics import Diagnostics, record
from .errors import ConfigError, EmptyTrustError, ShapeError
from .scale import LinguisticScale
from .solver import SimplexWLSProblem, solve
from .terms import PeakIntervalTerm, score

_RECIP_TOL = 1e-9

ENTROPY_FLOOR = 1e-12


@dataclass(frozen=True)
class PreferenceRelation:
    """m x m matrix of peak intervals over one scale."""

    scale: LinguisticScale
    entries: tuple[tuple[PeakIntervalTerm, ...], ...]

    def __post_init__(self):
        m = len(self.entries)
        if m < 2:
            raise ShapeError("a preference relation needs at least two alternatives")
        for i, row in enumerate(self.entries):
            if len(row) != m:
                raise ShapeError(f"row {i} has {len(row)} entries, expected {m}")

    @property
    def m(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> PeakIntervalTerm:
        return self.entries[i][j]


@dataclass(frozen=True)
class Violation:
    i: int
    j: int
    rule: str
    detail: str

    def __str__(self) -> str:
        return f"({self.i}, {self.j}) {self.rule}: {self.detail}"


def validate_relation(relation: PreferenceRelation) -> list[Violation]:
    """Collect every reciprocity violation; empty list means valid."""
    out: list[Violation] = []
    m = relation.m
    for i in range(m):
        e = relation.entry(i, i)
        if (
            abs(e.unit_lower - 0.5) > _RECIP_TOL
            or abs(e.unit_upper - 0.5) > _RECIP_TOL
            or abs(e.p - 1.0) > _RECIP_TOL
        ):
            out.append(
                Violation(
                    i, i, "diagonal",
                    f"expected the indifferent point (unit 0.5, p=1), got "
                    f"[{e.unit_lower:.6g}, {e.unit_upper:.6g}] p={e.p:.6g}",
                )
            )
    for i in range(m):
        for j in range(i + 1, m):
            a, bb = relation.entry(i, j), relation.entry(j, i)
            lo = a.unit_lower + bb.unit_upper
            hi = a.unit_upper + bb.unit_lower
            if abs(lo - 1.0) > _RECIP_TOL or abs(hi - 1.0) > _RECIP_TOL:
                out.append(
                    Violation(
                        i, j, "endpoint-reciprocity",
                        f"unit sums ({lo:.6g}, {hi:.6g}) differ from 1",
                    )
                )
            if abs(a.p - bb.p) > _RECIP_TOL:
                out.append(
                    Violation(i, j, "probability-reciprocity", f"p={a.p:.6g} vs p={bb.p:.6g}")
                )
    return out


def score_matrix(relation: PreferenceRelation) -> np.ndarray:
    """Midpoint scores of every entry."""
    m = relation.m
    E = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            E[i, j] = score(relation.entry(i, j))
    return E


def certainty_matrix(relation: PreferenceRelation) -> np.ndarray:
    m = relation.m
    P = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            P[i, j] = relation.entry(i, j).p
    return P


def distance(p: PreferenceRelation, q: PreferenceRelation) -> float:
    """Root-mean difference of certainty-weighted scores over i < j."""
    if p.m != q.m:
        raise ShapeError(f"relation sizes differ: {p.m} vs {q.m}")
    m = p.m
    Ep, Eq = score_matrix(p), score_matrix(q)
    Pp, Pq = certainty_matrix(p), certainty_matrix(q)
    total = 0.0
    for i in range(m):
        for j in range(i + 1, m):
            total += (Ep[i, j] * Pp[i, j] - Eq[i, j] * Pq[i, j]) ** 2
    return math.sqrt(2.0 * total / (m * (m - 1)))


def outer_weights(relations: list[PreferenceRelation]) -> np.ndarray:
    """Distance-mass weights across experts; uniform when all coincide."""
    n = len(relations)
    if n < 2:
        raise ShapeError("outer weights need at least two experts")
    d = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            d[a, b] = d[b, a] = distance(relations[a], relations[b])
    sums = d.sum(axis=0)
    total = sums.sum()
    if total <= 1e-12:
        return np.full(n, 1.0 / n)
    return sums / total


def indirect_score(E: np.ndarray, i: int, j: int, v: int) -> float:
    """Score of (i, j) routed through a third alternative v."""
    m = E.shape[0]
    if not (0 <= i < m and 0 <= j < m and 0 <= v < m):
        raise IndexError(f"indices ({i}, {j}, {v}) outside a {m}-alternative relation")
    if v == i or v == j or i >= j:
        raise IndexError(f"need i < j and v distinct from both, got ({i}, {j}, {v})")
    return E[i, v] - E[j, v] + 0.5


def inner_deviation_from_scores(
    E: np.ndarray,
    paper_literal: bool = False,
    diag: Diagnostics | None = None,
) -> float:
    """Total direct-vs-indirect score deviation of one expert.

    Default form: sum over all (v, i<j, both != v) of |E_ij - E_ij^(-v)|.
    ``paper_literal`` keeps each |.| + 0.5 term and subtracts the printed
    constant m(m-1)/2 * ... = m(m-1)*0.5, which matches the triple count
    only at m = 4; elsewhere it shifts the total (kept for reproduction).
    """
    m = E.shape[0]
    if m < 3:
        record(diag, "no_indirect_path", f"m={m} has no third alternative to route through")
        return 0.0
    total = 0.0
    count = 0
    for v in range(m):
        for i in range(m):
            if i == v:
                continue
            for j in range(i + 1, m):
                if j == v:
                    continue
                total += abs(E[i, j] - indirect_score(E, i, j, v))
                count += 1
    if paper_literal:
        record(
            diag, "paper_literal",
            f"printed constant m(m-1)*0.5 = {m * (m - 1) * 0.5:g} used in place of "
            f"the triple count {count * 0.5:g}",
        )
        return total + 0.5 * count - 0.5 * m * (m - 1)
    return total


def inner_deviation(
    relation: PreferenceRelation,
    paper_literal: bool = False,
    diag: Diagnostics | None = None,
) -> float:
    return inner_deviation_from_scores(score_matrix(relation), paper_literal, diag)


def inner_weights(
    deviations: np.ndarray | list[float],
    m: int,
    diag: Diagnostics | None = None,
) -> np.ndarray:
    """Entropy weights from consistency deviations; smaller is better.

    Deviation shares p^k feed le^k = -(1/log2 m) p^k log2 p^k; weights are
    proportional to 1/le^k with le floored at 1e-12 (floored experts share
    the resulting mass). All-zero deviations give the uniform vector.
    """
    u = np.asarray(deviations, dtype=float)
    n = u.size
    if n < 2:
        raise ShapeError("inner weights need at least two experts")
    if m < 2:
        raise ShapeError(f"alternative count must be >= 2, got {m}")
    if np.any(u < 0.0):
        raise ConfigError("deviations must be nonnegative")
    total = u.sum()
    if total <= 0.0:
        return np.full(n, 1.0 / n)
    shares = u / total
    le = np.zeros(n)
    for k, p in enumerate(shares):
        if p > 0.0:
            le[k] = -(p * math.log2(p)) / math.log2(m)
    floored = le < ENTROPY_FLOOR
    if floored.any():
        record(
            diag, "entropy_floor",
            f"entropy floored at {ENTROPY_FLOOR:g} for experts {np.flatnonzero(floored).tolist()}",
        )
        le = np.maximum(le, ENTROPY_FLOOR)
    inv = 1.0 / le
    return inv / inv.sum()


def trust_weights(psi: np.ndarray | list[float]) -> np.ndarray:
    """Normalised trust degrees."""
    psi = np.asarray(psi, dtype=float)
    if np.any(psi < 0.0) or np.any(psi > 1.0):
        raise ConfigError("trust degrees must lie in [0, 1]")
    total = psi.sum()
    if total <= 0.0:
        raise EmptyTrustError("all trust degrees are zero")
    return psi / total


def blend_weights(
    outer: np.ndarray,
    inner: np.ndarray,
    trust: np.ndarray,
    alpha: float,
    beta: float,
    gamma: float,
) -> np.ndarray:
    """Convex combination of the three weight views."""
    vectors = [np.asarray(v, dtype=float) for v in (outer, inner, trust)]
    n = vectors[0].size
    for v in vectors:
        if v.size != n:
            raise ShapeError("weight vectors must share one length")
        if abs(v.sum() - 1.0) > 1e-9 or np.any(v < -1e-12):
            raise ConfigError(f"weight vector {v.tolist()} is not a probability vector")
    coeffs = (alpha, beta, gamma)
    if any(c < 0.0 or c > 1.0 for c in coeffs) or abs(sum(coeffs) - 1.0) > 1e-9:
        raise ConfigError(f"blend coefficients {coeffs} must be in [0,1] and sum to 1")
    return alpha * vectors[0] + beta * vectors[1] + gamma * vectors[2]


@dataclass(frozen=True, eq=False)
class ExpertWeightReport:
    """The three weight views and their blend for one attribute."""

    outer: np.ndarray
    inner: np.ndarray
    trust: np.ndarray
    blended: np.ndarray
    alpha: float
    beta: float
    gamma: float

    def as_dict(self) -> dict:
        return {
            "outer": self.outer.tolist(),
            "inner": self.inner.tolist(),
            "trust": self.trust.tolist(),
            "blended": self.blended.tolist(),
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
        }


def compute_expert_weights(
    relations: list[PreferenceRelation],
    trust: np.ndarray | list[float],
    alpha: float,
    beta: float,
    gamma: float,
    paper_literal: bool = False,
    diag: Diagnostics | None = None,
) -> ExpertWeightReport:
    """Full weighting chain for one attribute's relations."""
    m = relations[0].m
    outer = outer_weights(relations)
    deviations = [inner_deviation(r, paper_literal, diag) for r in relations]
    inner = inner_weights(deviations, m, diag)
    tru = trust_weights(trust)
    blended = blend_weights(outer, inner, tru, alpha, beta, gamma)
    return ExpertWeightReport(outer, inner, tru, blended, alpha, beta, gamma)


def model1_problem(
    relations: list[PreferenceRelation],
    weights: np.ndarray | list[float],
) -> SimplexWLSProblem:
    """Assemble the collective-priority least-squares problem."""
    if not relations:
        raise ShapeError("need at least one relation")
    m = relations[0].m
    w = np.asarray(weights, dtype=float)
    if w.size != len(relations):
        raise ShapeError(f"{len(relations)} relations but {w.size} expert weights")
    if abs(w.sum() - 1.0) > 1e-9 or np.any(w < -1e-12):
        raise ConfigError("expert weights must form a probability vector")
    terms = []
    for k, relation in enumerate(relations):
        if relation.m != m:
            raise ShapeError("relations must share one alternative count")
        E = score_matrix(relation)
        P = certainty_matrix(relation)
        for i in range(m):
            for j in range(i + 1, m):
                row = [0.0] * m
                row[i] = 0.5
                row[j] = -0.5
                terms.append((tuple(row), E[i, j] - 0.5, float(w[k] * P[i, j])))
    return SimplexWLSProblem(m=m, terms=tuple(terms), strict=True)


def collective_priorities(
    relations: list[PreferenceRelation],
    weights: np.ndarray | list[float],
) -> np.ndarray:
    """Priority vector of the certainty-weighted consensus model."""
    return solve(model1_problem(relations, weights)).vector


def scored_model1_problem(
    scores: list[np.ndarray],
    certainties: list[np.ndarray],
    weights: np.ndarray | list[float],
) -> SimplexWLSProblem:
    """Model-1 problem straight from score/certainty matrices.

    The comparison harness uses this entry point to swap in alternative
    evidence reductions without building relation objects.
    """
    m = scores[0].shape[0]
    w = np.asarray(weights, dtype=float)
    terms = []
    for k, (E, P) in enumerate(zip(scores, certainties)):
        for i in range(m):
            for j in range(i + 1, m):
                row = [0.0] * m
                row[i] = 0.5
                row[j] = -0.5
                terms.append((tuple(row), E[i, j] - 0.5, float(w[k] * P[i, j])))
    return SimplexWLSProblem(m=m, terms=tuple(terms), strict=True)


def consistent_relation(
    scale: LinguisticScale,
    priorities: np.ndarray | list[float],
    p: float = 1.0,
    half_gradient: bool = False,
) -> PreferenceRelation:
    """Point relation generated from a priority vector.

    E_ij = w_i - w_j + 0.5 by default (the additive-consistency identity);
    ``half_gradient`` uses E_ij = (w_i - w_j)/2 + 0.5, the convention the
    collective-priority model recovers exactly.
    """
    w = np.asarray(priorities, dtype=float)
    m = w.size
    from .scale import from_unit

    factor = 0.5 if half_gradient else 1.0
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            e = factor * (w[i] - w[j]) + 0.5
            if not (0.0 <= e <= 1.0):
                raise ConfigError(f"score {e:.6g} for pair ({i},{j}) leaves [0, 1]")
            coord = from_unit(scale, e)
            row.append(PeakIntervalTerm(scale, coord, coord, 1.0 if i == j else p))
        rows.append(tuple(row))
    return PreferenceRelation(scale, tuple(rows))
