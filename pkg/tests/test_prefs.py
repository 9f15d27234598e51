import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lingdecide.diagnostics import Diagnostics
from lingdecide.errors import ConfigError, EmptyTrustError, ShapeError
from lingdecide.prefs import (
    PreferenceRelation,
    blend_weights,
    collective_priorities,
    compute_expert_weights,
    consistent_relation,
    distance,
    indirect_score,
    inner_deviation,
    inner_deviation_from_scores,
    inner_weights,
    model1_problem,
    outer_weights,
    score_matrix,
    trust_weights,
    validate_relation,
)
from lingdecide.scale import LinguisticScale
from lingdecide.terms import PeakIntervalTerm
from helpers import SCALE, iv, pt, relation


def sample_relation(p12=0.4):
    return relation(
        {
            (0, 1): iv((-2, 0), (-2, 1), p12),
            (0, 2): iv((1, -2), (1, 0), 0.5),
            (1, 2): pt(2, -1, 0.4),
        },
        m=3,
    )


class TestValidation:
    def test_valid_relation_clean(self):
        assert validate_relation(sample_relation()) == []

    def test_broken_diagonal(self):
        rows = [list(r) for r in sample_relation().entries]
        rows[1][1] = pt(1, 0, 1.0)
        bad = PreferenceRelation(SCALE, tuple(tuple(r) for r in rows))
        rules = [v.rule for v in validate_relation(bad)]
        assert "diagonal" in rules

    def test_broken_probability_reciprocity(self):
        rows = [list(r) for r in sample_relation().entries]
        entry = rows[1][0]
        rows[1][0] = PeakIntervalTerm(SCALE, entry.lower, entry.upper, 0.9)
        bad = PreferenceRelation(SCALE, tuple(tuple(r) for r in rows))
        violations = validate_relation(bad)
        assert any(v.rule == "probability-reciprocity" for v in violations)
        assert any((v.i, v.j) == (0, 1) for v in violations)

    def test_broken_endpoint_reciprocity(self):
        rows = [list(r) for r in sample_relation().entries]
        rows[1][0] = pt(2, 0, 0.4)
        bad = PreferenceRelation(SCALE, tuple(tuple(r) for r in rows))
        assert any(v.rule == "endpoint-reciprocity" for v in validate_relation(bad))

    def test_all_violations_collected(self):
        rows = [list(r) for r in sample_relation().entries]
        rows[0][0] = pt(1, 0, 1.0)
        rows[1][0] = pt(2, 0, 0.9)
        bad = PreferenceRelation(SCALE, tuple(tuple(r) for r in rows))
        rules = {v.rule for v in validate_relation(bad)}
        assert {"diagonal", "endpoint-reciprocity", "probability-reciprocity"} <= rules

    def test_too_small(self):
        with pytest.raises(ShapeError):
            PreferenceRelation(SCALE, ((pt(0, 0, 1.0),),))


class TestScoresAndDistance:
    def test_scores_reciprocal(self):
        E = score_matrix(sample_relation())
        assert np.allclose(E + E.T, 1.0)
        assert E[0, 0] == 0.5

    def test_distance_zero_on_equal(self):
        r = sample_relation()
        assert distance(r, r) == 0.0

    def test_distance_hand_value(self):
        a = relation({(0, 1): pt(2, 0, 1.0)}, m=2)
        b = relation({(0, 1): pt(2, 0, 0.5)}, m=2)
        Ea = 0.75
        want = math.sqrt(2.0 / 2.0 * (Ea * 1.0 - Ea * 0.5) ** 2)
        assert distance(a, b) == pytest.approx(want, abs=1e-12)

    def test_distance_shape_mismatch(self):
        with pytest.raises(ShapeError):
            distance(sample_relation(), relation({(0, 1): pt(1, 0, 0.5)}, m=2))

    def test_outer_weights_uniform_on_identical(self):
        r = sample_relation()
        assert outer_weights([r, r, r]) == pytest.approx(np.full(3, 1 / 3))

    def test_outer_weights_mass_follows_distance(self):
        # third expert sits far away, so (as printed) it weighs most
        near1 = relation({(0, 1): pt(0, 0, 1.0)}, m=2)
        near2 = relation({(0, 1): pt(0, 1, 1.0)}, m=2)
        far = relation({(0, 1): pt(4, 0, 1.0)}, m=2)
        w = outer_weights([near1, near2, far])
        assert w.sum() == pytest.approx(1.0, abs=1e-12)
        assert w[2] == max(w)


class TestConsistency:
    def test_indirect_score_formula(self):
        E = np.array([[0.5, 0.7, 0.6], [0.3, 0.5, 0.4], [0.4, 0.6, 0.5]])
        assert indirect_score(E, 0, 1, 2) == pytest.approx(0.6 - 0.4 + 0.5)

    def test_indirect_score_preconditions(self):
        E = np.full((3, 3), 0.5)
        with pytest.raises(IndexError):
            indirect_score(E, 0, 1, 1)
        with pytest.raises(IndexError):
            indirect_score(E, 1, 0, 2)
        with pytest.raises(IndexError):
            indirect_score(E, 0, 1, 3)

    def test_consistent_relation_has_zero_deviation(self):
        w = np.array([0.5, 0.3, 0.2])
        rel = consistent_relation(SCALE, w, p=0.8)
        assert inner_deviation(rel) == pytest.approx(0.0, abs=1e-9)

    def test_single_perturbation_counts_twice(self):
        # perturbing one raw score shows up in exactly two triples at m = 3
        w = np.array([0.4, 0.35, 0.25])
        E = np.empty((3, 3))
        for i in range(3):
            for j in range(3):
                E[i, j] = w[i] - w[j] + 0.5
        delta = 0.07
        E[0, 1] += delta
        assert inner_deviation_from_scores(E) == pytest.approx(2 * delta, abs=1e-12)

    def test_m2_has_no_indirect_path(self):
        diag = Diagnostics()
        out = inner_deviation_from_scores(np.full((2, 2), 0.5), diag=diag)
        assert out == 0.0
        assert "no_indirect_path" in diag.kinds()

    def test_paper_literal_constant_cancels_at_m4(self):
        rng = np.random.default_rng(5)
        w = rng.dirichlet(np.ones(4)) * 0.5 + 0.125
        E = np.empty((4, 4))
        for i in range(4):
            for j in range(4):
                E[i, j] = w[i] - w[j] + 0.5
        E[0, 2] += 0.1
        default = inner_deviation_from_scores(E)
        literal = inner_deviation_from_scores(E, paper_literal=True)
        assert literal == pytest.approx(default, abs=1e-12)

    def test_paper_literal_shifts_at_m3(self):
        E = np.full((3, 3), 0.5)
        # 3 triples of 0.5 each minus the printed constant 3
        assert inner_deviation_from_scores(E, paper_literal=True) == pytest.approx(-1.5)
        assert inner_deviation_from_scores(E) == 0.0


class TestWeightVectors:
    def test_inner_weights_reward_consistency(self):
        w = inner_weights([0.5, 2.0, 2.0], m=4)
        assert w.sum() == pytest.approx(1.0, abs=1e-12)
        assert w[0] == max(w)

    def test_inner_weights_uniform_when_all_zero(self):
        assert inner_weights([0.0, 0.0], m=3) == pytest.approx([0.5, 0.5])

    def test_entropy_floor_path(self):
        diag = Diagnostics()
        w = inner_weights([0.0, 1.0, 1.0], m=4, diag=diag)
        assert np.all(np.isfinite(w))
        assert w.sum() == pytest.approx(1.0, abs=1e-9)
        assert w[0] == max(w)
        assert "entropy_floor" in diag.kinds()

    def test_inner_weights_validation(self):
        with pytest.raises(ShapeError):
            inner_weights([1.0], m=3)
        with pytest.raises(ConfigError):
            inner_weights([-0.1, 0.5], m=3)

    def test_trust_normalisation_golden(self):
        got = trust_weights([0.80, 0.90, 0.70, 0.80])
        assert got == pytest.approx([0.2500, 0.2812, 0.2188, 0.2500], abs=1e-4)

    def test_trust_empty(self):
        with pytest.raises(EmptyTrustError):
            trust_weights([0.0, 0.0])

    def test_blend_golden(self):
        out = np.array([0.2253, 0.3320, 0.2439, 0.1988])
        inn = np.array([0.2898, 0.2401, 0.2212, 0.2489])
        tru = np.array([0.2500, 0.2812, 0.2188, 0.2500])
        got = blend_weights(out, inn, tru, 0.5, 0.3, 0.2)
        assert got == pytest.approx([0.2496, 0.2943, 0.2321, 0.2241], abs=1e-4)

    def test_blend_validation(self):
        u = np.full(3, 1 / 3)
        with pytest.raises(ConfigError):
            blend_weights(u, u, u, 0.5, 0.3, 0.3)
        with pytest.raises(ConfigError):
            blend_weights(u, u, np.array([0.5, 0.2, 0.2]), 0.5, 0.3, 0.2)
        with pytest.raises(ShapeError):
            blend_weights(u, u, np.full(4, 0.25), 0.5, 0.3, 0.2)


class TestModel1:
    def test_consistent_recovery(self):
        w = np.array([0.35, 0.1, 0.3, 0.25])
        rel = consistent_relation(SCALE, w, p=0.9, half_gradient=True)
        got = collective_priorities([rel], [1.0])
        assert got == pytest.approx(w, abs=1e-6)

    def test_single_pair_two_alternatives(self):
        # with (w_i - w_j)/2 residuals and w0 + w1 = 1, a lone pair
        # scored E resolves to exactly (E, 1 - E)
        rel = relation({(0, 1): pt(1, -2, 1.0)}, m=2)
        assert score_matrix(rel)[0, 1] == pytest.approx(0.5625)
        got = collective_priorities([rel], [1.0])
        assert got == pytest.approx([0.5625, 0.4375], abs=1e-9)

    def test_certainty_zero_pairs_ignored(self):
        rel_certain = relation({(0, 1): pt(2, 0, 1.0)}, m=2)
        rel_void = relation({(0, 1): pt(-3, 0, 0.0)}, m=2)
        both = collective_priorities([rel_certain, rel_void], [0.5, 0.5])
        alone = collective_priorities([rel_certain], [1.0])
        assert both == pytest.approx(alone, abs=1e-9)

    def test_weight_vector_validated(self):
        rel = sample_relation()
        with pytest.raises(ShapeError):
            model1_problem([rel], [0.5, 0.5])
        with pytest.raises(ConfigError):
            model1_problem([rel, rel], [0.7, 0.7])

    def test_priorities_on_simplex(self):
        rels = [sample_relation(), sample_relation(0.9), sample_relation(0.1)]
        got = collective_priorities(rels, np.full(3, 1 / 3))
        assert got.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.all(got >= 1e-9 - 1e-15)


@given(st.integers(min_value=0, max_value=2**31 - 1), st.integers(min_value=2, max_value=5))
@settings(max_examples=25)
def test_recovery_property(seed, m):
    rng = np.random.default_rng(seed)
    w = 0.5 * rng.dirichlet(np.ones(m)) + 0.5 / m
    rel = consistent_relation(LinguisticScale(4, 4), w, p=float(rng.uniform(0.1, 1.0)), half_gradient=True)
    n = int(rng.integers(1, 4))
    got = collective_priorities([rel] * n, rng.dirichlet(np.ones(n)))
    assert got == pytest.approx(w, abs=1e-6)


def test_compute_expert_weights_end_to_end():
    rels = [sample_relation(), sample_relation(0.9), sample_relation(0.1), sample_relation(0.6)]
    rep = compute_expert_weights(rels, [0.8, 0.9, 0.7, 0.8], 0.5, 0.3, 0.2)
    for vec in (rep.outer, rep.inner, rep.trust, rep.blended):
        assert vec.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.all(vec >= 0.0)
    d = rep.as_dict()
    assert set(d) == {"outer", "inner", "trust", "blended", "alpha", "beta", "gamma"}
