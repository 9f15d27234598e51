import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lingdecide.errors import OracleScopeError, ShapeError
from lingdecide.solver import (
    STRICT_FLOOR,
    SimplexWLSProblem,
    brute_force_oracle,
    solve,
    stationarity_residual,
)
from helpers import naive_grid_min, random_problem


def single_target_problem(m, pairs, strict=True):
    """Problem from (row, target, weight) tuples given as plain lists."""
    return SimplexWLSProblem(
        m=m, terms=tuple((tuple(r), t, w) for r, t, w in pairs), strict=strict
    )


class TestBasics:
    def test_m1_shortcut(self):
        sol = solve(SimplexWLSProblem(m=1, terms=()))
        assert sol.vector.tolist() == [1.0]
        assert sol.status == "optimal"

    def test_row_length_validated(self):
        with pytest.raises(ShapeError):
            SimplexWLSProblem(m=3, terms=(((0.5, -0.5), 0.1, 1.0),))

    def test_negative_weight_rejected(self):
        with pytest.raises(ShapeError):
            SimplexWLSProblem(m=2, terms=(((0.5, -0.5), 0.1, -1.0),))

    def test_no_terms_returns_uniform(self):
        sol = solve(SimplexWLSProblem(m=4, terms=()))
        assert sol.vector == pytest.approx(np.full(4, 0.25))
        # without data every direction is flat
        assert sol.status == "degenerate"

    def test_objective_matches_direct_computation(self):
        problem = single_target_problem(
            2, [([0.5, -0.5], 0.1, 1.0), ([1.0, 0.0], 0.7, 2.0)]
        )
        x = np.array([0.6, 0.4])
        want = 1.0 * (0.5 * 0.6 - 0.5 * 0.4 - 0.1) ** 2 + 2.0 * (0.6 - 0.7) ** 2
        assert problem.objective(x) == pytest.approx(want, abs=1e-15)


class TestClosedForms:
    def test_pairwise_score_formula(self):
        # one pairwise term (w1 - w2)/2 = E - 1/2 with E = 0.6 gives (0.6, 0.4)
        problem = single_target_problem(2, [([0.5, -0.5], 0.1, 1.0)])
        sol = solve(problem)
        assert sol.vector == pytest.approx([0.6, 0.4], abs=1e-12)
        assert sol.objective == pytest.approx(0.0, abs=1e-15)

    def test_equal_scores_split_evenly(self):
        # basis rows with equal targets: min (x1-e)^2 + (x2-e)^2, sum = 1
        problem = single_target_problem(
            2, [([1.0, 0.0], 0.8, 1.0), ([0.0, 1.0], 0.8, 1.0)]
        )
        assert solve(problem).vector == pytest.approx([0.5, 0.5], abs=1e-12)

    def test_feasible_scores_kept_verbatim(self):
        targets = [0.2105, 0.4854, 0.2969, 0.0072]
        pairs = []
        for j, t in enumerate(targets):
            row = [0.0] * 4
            row[j] = 1.0
            pairs.append((row, t, 0.7))
        sol = solve(single_target_problem(4, pairs))
        assert sol.vector == pytest.approx(targets, abs=1e-12)

    def test_certainty_weighted_two_columns(self):
        # closed form: P1 = sum(p1k E1k + p2k (1 - E2k)) / sum(p1k + p2k)
        pairs = [
            ([1.0, 0.0], 0.7, 1.0),
            ([0.0, 1.0], 0.4, 0.5),
            ([1.0, 0.0], 0.6, 0.8),
            ([0.0, 1.0], 0.2, 1.0),
        ]
        want = (1.0 * 0.7 + 0.5 * 0.6 + 0.8 * 0.6 + 1.0 * 0.8) / 3.3
        sol = solve(single_target_problem(2, pairs))
        assert sol.vector[0] == pytest.approx(want, abs=1e-12)
        assert sol.vector[1] == pytest.approx(1.0 - want, abs=1e-12)


class TestFloor:
    def test_strict_floor_respected(self):
        # all mass pushed to the first coordinate
        problem = single_target_problem(
            3,
            [
                ([1.0, 0.0, 0.0], 1.0, 1.0),
                ([0.0, 1.0, 0.0], -1.0, 1.0),
                ([0.0, 0.0, 1.0], -1.0, 1.0),
            ],
        )
        sol = solve(problem)
        assert np.all(sol.vector >= STRICT_FLOOR - 1e-15)
        assert sol.vector[1] == pytest.approx(STRICT_FLOOR, abs=1e-12)
        assert sol.vector[2] == pytest.approx(STRICT_FLOOR, abs=1e-12)
        assert set(sol.active_bounds) == {1, 2}
        assert sol.vector.sum() == pytest.approx(1.0, abs=1e-9)

    def test_relaxed_floor_reaches_zero(self):
        problem = single_target_problem(
            2, [([1.0, 0.0], 1.0, 1.0), ([0.0, 1.0], -1.0, 1.0)], strict=False
        )
        sol = solve(problem)
        assert sol.vector[1] == 0.0

    def test_stationarity_residual_small_at_optimum(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            problem = random_problem(rng, 4)
            sol = solve(problem)
            assert stationarity_residual(problem, sol.vector) < 1e-7

    def test_stationarity_residual_positive_off_optimum(self):
        problem = single_target_problem(2, [([0.5, -0.5], 0.3, 1.0)])
        assert stationarity_residual(problem, np.array([0.5, 0.5])) > 1e-3


class TestOracle:
    def test_scope_errors(self):
        with pytest.raises(OracleScopeError):
            brute_force_oracle(SimplexWLSProblem(m=5, terms=()), 0.01)
        with pytest.raises(OracleScopeError):
            brute_force_oracle(SimplexWLSProblem(m=3, terms=()), 1e-4)

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_matches_naive_enumeration(self, m):
        rng = np.random.default_rng(17 + m)
        for _ in range(5):
            problem = random_problem(rng, m, n_terms=6)
            fast = brute_force_oracle(problem, step=0.05)
            naive_f, naive_x = naive_grid_min(problem, step=0.05)
            assert fast.objective == pytest.approx(naive_f, abs=1e-12)

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_solver_never_worse_than_grid(self, m):
        rng = np.random.default_rng(29 + m)
        for _ in range(10):
            problem = random_problem(rng, m)
            sol = solve(problem)
            grid = brute_force_oracle(problem, step=1e-3 if m < 4 else 5e-3)
            assert sol.objective <= grid.objective + 1e-6

    def test_oracle_reports_status(self):
        problem = single_target_problem(2, [([0.5, -0.5], 0.1, 1.0)])
        assert brute_force_oracle(problem, 0.05).status == "oracle"


@given(st.integers(min_value=2, max_value=6), st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=40)
def test_solution_always_on_simplex(m, seed):
    rng = np.random.default_rng(seed)
    problem = random_problem(rng, m, n_terms=int(rng.integers(1, 12)))
    sol = solve(problem)
    assert sol.vector.sum() == pytest.approx(1.0, abs=1e-9)
    assert np.all(sol.vector >= problem.floor - 1e-12)
    assert np.all(np.isfinite(sol.vector))


@given(st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=30)
def test_solution_beats_random_feasible_points(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 5))
    problem = random_problem(rng, m)
    sol = solve(problem)
    for _ in range(20):
        x = rng.dirichlet(np.ones(m))
        x = np.maximum(x, problem.floor)
        x = x / x.sum()
        assert sol.objective <= problem.objective(x) + 1e-9
