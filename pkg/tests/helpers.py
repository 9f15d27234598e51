"""Builders shared across test modules."""

import itertools

import numpy as np

from lingdecide.prefs import PreferenceRelation
from lingdecide.scale import LinguisticScale, TermCoord
from lingdecide.solver import SimplexWLSProblem
from lingdecide.terms import PeakIntervalTerm

SCALE = LinguisticScale(4, 4)


def pt(t, k, p, scale=SCALE):
    return PeakIntervalTerm.point(scale, TermCoord(t, k), p)


def iv(lo, hi, p, scale=SCALE):
    return PeakIntervalTerm(scale, TermCoord(*lo), TermCoord(*hi), p)


def mirrored(term):
    return PeakIntervalTerm(
        term.scale,
        TermCoord(-term.upper.t, -term.upper.k),
        TermCoord(-term.lower.t, -term.lower.k),
        term.p,
    )


def relation(upper, m, scale=SCALE):
    """Reciprocal relation from an {(i, j): term} upper triangle, i < j."""
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            if i == j:
                row.append(pt(0, 0, 1.0, scale))
            elif i < j:
                row.append(upper[(i, j)])
            else:
                row.append(mirrored(upper[(j, i)]))
        rows.append(tuple(row))
    return PreferenceRelation(scale, tuple(rows))


def random_problem(rng, m, n_terms=10, strict=True):
    terms = []
    for _ in range(n_terms):
        row = tuple(float(x) for x in rng.uniform(-1.0, 1.0, m))
        target = float(rng.uniform(-0.5, 1.5))
        weight = float(rng.uniform(0.05, 1.0))
        terms.append((row, target, weight))
    return SimplexWLSProblem(m=m, terms=tuple(terms), strict=strict)


def naive_grid_min(problem, step):
    """Direct enumeration of the simplex grid; only for coarse steps."""
    N = round(1.0 / step)
    m = problem.m
    best = (np.inf, None)
    for combo in itertools.product(range(N + 1), repeat=m - 1):
        rest = N - sum(combo)
        if rest < 0:
            continue
        x = np.array(list(combo) + [rest], dtype=float) / N
        f = problem.objective(x)
        if f < best[0]:
            best = (f, x)
    return best


def uniform_scenario_dict(m=3, q=2, n=2, periods=2):
    """Fully symmetric scenario: every judgement is the indifferent point."""
    point0 = {"point": [0, 0], "p": 1.0}
    rel = [[point0 for _ in range(m)] for _ in range(m)]
    assessment = [[point0 for _ in range(q)] for _ in range(q)]
    attributes = [f"Q{i + 1}" for i in range(q)]
    return {
        "format": 1,
        "scale": {"tau": 4, "zeta": 4},
        "attributes": attributes,
        "alternatives": [f"A{i + 1}" for i in range(m)],
        "experts": [{"name": f"e{i + 1}", "trust": 0.5} for i in range(n)],
        "markov": {
            "periods": periods,
            "iterations": 1,
            "origin": attributes[0],
            "assessments": {f"e{i + 1}": assessment for i in range(n)},
        },
        "preferences": {
            a: {f"e{i + 1}": rel for i in range(n)} for a in attributes
        },
    }
