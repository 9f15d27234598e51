"""Linguistic Markov assessments and per-period attribute weights.

Experts judge attribute-to-attribute transitions with peak intervals (no
reciprocity here; a transition matrix is not a preference). The crisp
row-stochastic matrix comes from a per-row certainty-weighted least
squares fit over the simplex, with one exception: entries every expert
scores as the floor point (unit score 0 at certainty 1) are pinned to an
exact zero instead of the solver's positivity floor.

Period weights follow the power scheme omega^t = e_origin M^(Z + t - 1),
computed by repeated vector-matrix products. A variant scheme reshapes
each period's starting vector by resetting the origin attribute's mass
to an externally supplied probability before iterating.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagnostics import Diagnostics, record
from .errors import ConfigError, ShapeError
from .scale import LinguisticScale
from .solver import SimplexWLSProblem, solve
from .terms import PeakIntervalTerm, score

_STOCHASTIC_TOL = 1e-9

_FLOOR_SCORE_TOL = 1e-12


@dataclass(frozen=True)
class LinguisticMarkovAssessment:
    """One expert's q x q matrix of transition judgements."""

    scale: LinguisticScale
    entries: tuple[tuple[PeakIntervalTerm, ...], ...]

    def __post_init__(self):
        q = len(self.entries)
        if q < 1:
            raise ShapeError("an assessment needs at least one attribute")
        for i, row in enumerate(self.entries):
            if len(row) != q:
                raise ShapeError(f"row {i} has {len(row)} entries, expected {q}")
            for term in row:
                if term.scale != self.scale:
                    raise ShapeError("all entries must use the assessment's scale")

    @property
    def q(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> PeakIntervalTerm:
        return self.entries[i][j]


def check_transition_matrix(M: np.ndarray, tol: float = _STOCHASTIC_TOL) -> list[str]:
    """Violations of row-stochasticity; empty list means valid."""
    M = np.asarray(M, dtype=float)
    out: list[str] = []
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        out.append(f"matrix shape {M.shape} is not square")
        return out
    for i, row in enumerate(M):
        bad = np.flatnonzero(row < -tol)
        if bad.size:
            out.append(f"row {i} has negative entries at columns {bad.tolist()}")
        s = float(row.sum())
        if abs(s - 1.0) > tol:
            out.append(f"row {i} sums to {s:.12g}, not 1")
    return out


def require_stochastic(M: np.ndarray, tol: float = _STOCHASTIC_TOL) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    problems = check_transition_matrix(M, tol)
    if problems:
        raise ConfigError("transition matrix invalid: " + "; ".join(problems))
    return M


def _is_floor_point(term: PeakIntervalTerm, p: float) -> bool:
    return (
        term.unit_lower <= _FLOOR_SCORE_TOL
        and term.unit_upper <= _FLOOR_SCORE_TOL
        and abs(p - 1.0) <= _FLOOR_SCORE_TOL
    )


def estimate_transition(
    assessments: list[LinguisticMarkovAssessment],
    certainties: list[np.ndarray] | None = None,
    diag: Diagnostics | None = None,
) -> np.ndarray:
    """Row-wise least-squares transition matrix from expert assessments.

    Each row solves min sum_j sum_k p_ij^k (P_ij - E_ij^k)^2 subject to
    sum_j P_ij = 1 and P_ij >= 1e-9, over the columns not pinned to zero.
    ``certainties`` optionally replaces the per-entry certainty of each
    assessment (one q x q array per expert).
    """
    if not assessments:
        raise ShapeError("need at least one assessment")
    q = assessments[0].q
    for a in assessments:
        if a.q != q:
            raise ShapeError("assessments must share one attribute count")
    if certainties is None:
        P = [
            np.array([[a.entry(i, j).p for j in range(q)] for i in range(q)])
            for a in assessments
        ]
    else:
        if len(certainties) != len(assessments):
            raise ShapeError("one certainty matrix per assessment required")
        P = [np.asarray(c, dtype=float) for c in certainties]
        for c in P:
            if c.shape != (q, q):
                raise ShapeError(f"certainty matrix shape {c.shape}, expected {(q, q)}")
    E = [
        np.array([[score(a.entry(i, j)) for j in range(q)] for i in range(q)])
        for a in assessments
    ]

    M = np.zeros((q, q))
    for i in range(q):
        pinned = [
            j
            for j in range(q)
            if all(_is_floor_point(a.entry(i, j), pk[i, j]) for a, pk in zip(assessments, P))
        ]
        free = [j for j in range(q) if j not in pinned]
        if not free:
            raise ConfigError(f"row {i} pins every column to zero; no transition mass left")
        if pinned:
            record(diag, "zero_pinned", f"row {i}: columns {pinned} fixed at exactly 0")
        terms = []
        for k in range(len(assessments)):
            for jj, j in enumerate(free):
                row = [0.0] * len(free)
                row[jj] = 1.0
                terms.append((tuple(row), float(E[k][i, j]), float(P[k][i, j])))
        sol = solve(SimplexWLSProblem(m=len(free), terms=tuple(terms), strict=True))
        if sol.status == "degenerate":
            record(diag, "degenerate_row", f"row {i}: data left directions unconstrained")
        for jj, j in enumerate(free):
            M[i, j] = sol.vector[jj]
    return M


def period_weights(
    M: np.ndarray,
    T: int,
    Z: int,
    origin: int,
) -> np.ndarray:
    """T x q matrix of attribute weights, omega^t = e_origin M^(Z+t-1)."""
    M = require_stochastic(M)
    q = M.shape[0]
    if T < 1:
        raise ConfigError(f"period count must be >= 1, got {T}")
    if Z < 1:
        raise ConfigError(f"iteration count must be >= 1, got {Z}")
    if not (0 <= origin < q):
        raise ConfigError(f"origin index {origin} outside 0..{q - 1}")
    v = np.zeros(q)
    v[origin] = 1.0
    for _ in range(Z):
        v = v @ M
    out = np.empty((T, q))
    out[0] = v
    for t in range(1, T):
        v = v @ M
        out[t] = v
    return out


def _reshape_vector(
    v: np.ndarray,
    origin: int,
    update: float,
    diag: Diagnostics | None,
    period: int,
) -> np.ndarray:
    if not (0.0 <= update <= 1.0):
        raise ConfigError(f"origin update {update:g} outside [0, 1]")
    w = np.array(v, dtype=float)
    rest = np.delete(w, origin)
    mass = float(rest.sum())
    out = np.empty_like(w)
    out[origin] = update
    others = [j for j in range(w.size) if j != origin]
    if mass <= 1e-15:
        if update < 1.0 and others:
            record(
                diag, "uniform_redistribution",
                f"period {period}: previous non-origin mass is zero, spreading "
                f"{1.0 - update:.6g} uniformly",
            )
        share = (1.0 - update) / len(others) if others else 0.0
        for j in others:
            out[j] = share
    else:
        for j in others:
            out[j] = w[j] * (1.0 - update) / mass
    return out


def period_weights_reshaped(
    M: np.ndarray,
    T: int,
    Z: int,
    origin: int,
    updates: list[float] | np.ndarray,
    diag: Diagnostics | None = None,
) -> np.ndarray:
    """Variant scheme: reset the origin's mass each period, then iterate.

    Period t starts from the previous period's weights (the origin basis
    vector for t = 1), forces the origin component to updates[t-1],
    rescales the rest proportionally (uniformly when the previous
    non-origin mass is zero), and applies Z + t - 1 products with M.
    """
    M = require_stochastic(M)
    q = M.shape[0]
    if T < 1:
        raise ConfigError(f"period count must be >= 1, got {T}")
    if Z < 1:
        raise ConfigError(f"iteration count must be >= 1, got {Z}")
    if not (0 <= origin < q):
        raise ConfigError(f"origin index {origin} outside 0..{q - 1}")
    updates = np.asarray(updates, dtype=float)
    if updates.size != T:
        raise ShapeError(f"{T} periods but {updates.size} origin updates")
    prev = np.zeros(q)
    prev[origin] = 1.0
    out = np.empty((T, q))
    for t in range(1, T + 1):
        v = _reshape_vector(prev, origin, float(updates[t - 1]), diag, t)
        for _ in range(Z + t - 1):
            v = v @ M
        out[t - 1] = v
        prev = v
    return out


def export_dot(M: np.ndarray, labels: list[str]) -> str:
    """DOT digraph of the transition structure, one edge per nonzero entry.

    Edges appear in row-major order with probabilities rounded to four
    decimals, so output is deterministic and diff-friendly.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"matrix shape {M.shape} is not square")
    q = M.shape[0]
    if len(labels) != q:
        raise ShapeError(f"{q} attributes but {len(labels)} labels")
    lines = ["digraph transitions {", "  rankdir=LR;"]
    for idx, name in enumerate(labels):
        safe = name.replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  n{idx} [label="{safe}"];')
    for i in range(q):
        for j in range(q):
            if M[i, j] > 0.0:
                lines.append(f'  n{i} -> n{j} [label="{M[i, j]:.4f}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
