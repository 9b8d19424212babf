import numpy as np
import pytest

from negmono import (
    Bipartition,
    Direction,
    RoofConfig,
    decomposition_from_isometry,
    density,
    haar_random_mixed,
    haar_random_pure,
    negativity,
    optimize_roof,
    partial_trace,
    two_qubit_tangle_and_toa,
)
from negmono.harness import builtin_state
from negmono.roof import _haar_isometry

CUT2 = Bipartition.split(2, (0,))


def reconstruct(weights, states):
    return sum(w * np.outer(s.amplitudes, s.amplitudes.conj()) for w, s in zip(weights, states))


class TestDecompositionFromIsometry:
    def test_identity_reproduces_eigendecomposition(self):
        rho = haar_random_mixed((2, 2), 2, 3)
        evals, evecs = np.linalg.eigh(rho.matrix)
        weights, states = decomposition_from_isometry(rho, np.eye(2))
        assert np.allclose(np.sort(weights), np.sort(evals[evals > 1e-12]), atol=1e-10)
        assert np.abs(reconstruct(weights, states) - rho.matrix).max() < 1e-10

    def test_random_isometry_reconstructs(self):
        rng = np.random.default_rng(5)
        rho = haar_random_mixed((2, 2), 4, 9)
        for m in (4, 6, 9):
            v = _haar_isometry(m, 4, rng)
            weights, states = decomposition_from_isometry(rho, v)
            assert abs(weights.sum() - 1) < 1e-10
            assert np.abs(reconstruct(weights, states) - rho.matrix).max() < 1e-10

    def test_rank2_with_four_members(self):
        rng = np.random.default_rng(8)
        rho = haar_random_mixed((2, 2), 2, 11)
        v = _haar_isometry(4, 2, rng)
        weights, states = decomposition_from_isometry(rho, v)
        # direct mixture resummation oracle
        assert np.abs(reconstruct(weights, states) - rho.matrix).max() < 1e-10

    def test_rejects_shape_mismatch(self):
        rho = haar_random_mixed((2, 2), 2, 1)
        with pytest.raises(ValueError):
            decomposition_from_isometry(rho, np.eye(3))

    def test_rejects_non_isometry(self):
        rho = haar_random_mixed((2, 2), 2, 1)
        bad = np.ones((2, 2), dtype=complex)
        with pytest.raises(ValueError):
            decomposition_from_isometry(rho, bad)


class TestOptimizeRoof:
    def test_pure_state_any_direction(self):
        rho = density(builtin_state("ghz3"))
        cut = Bipartition.split(3, (0,))
        neg = negativity(rho, cut)
        for direction in (Direction.MIN, Direction.MAX):
            res = optimize_roof(rho, cut, RoofConfig(restarts=2, seed=1, direction=direction))
            assert abs(res.value - neg) < 1e-10

    @pytest.mark.parametrize("env", [2, 4])
    def test_matches_closed_forms(self, env):
        worst_min = worst_max = 0.0
        for i in range(12):
            rho = haar_random_mixed((2, 2), env, np.random.SeedSequence((3, env, i)))
            tangle, toa = two_qubit_tangle_and_toa(rho)
            lo = optimize_roof(
                rho, CUT2,
                RoofConfig(cardinality=4, restarts=12, seed=500 + i,
                           value_floor=6e-4, squared_tolerance=5e-7),
            )
            hi = optimize_roof(
                rho, CUT2,
                RoofConfig(cardinality=4, restarts=6, seed=500 + i, direction=Direction.MAX),
            )
            worst_min = max(worst_min, abs(lo.value**2 - tangle))
            worst_max = max(worst_max, abs(hi.value**2 - toa))
        assert worst_min <= 1e-6
        assert worst_max <= 1e-6

    def test_rank2_prescaled_tolerance(self):
        # rank-2 searches converge to the closed form before squaring
        for i in range(10):
            rho = haar_random_mixed((2, 2), 2, np.random.SeedSequence((4, i)))
            tangle, toa = two_qubit_tangle_and_toa(rho)
            lo = optimize_roof(rho, CUT2, RoofConfig(cardinality=4, restarts=8, seed=i))
            hi = optimize_roof(
                rho, CUT2, RoofConfig(cardinality=4, restarts=6, seed=i, direction=Direction.MAX)
            )
            assert abs(lo.value - np.sqrt(tangle)) < 1e-6
            assert abs(hi.value - np.sqrt(toa)) < 1e-6

    def test_min_below_eigenmix_below_max(self):
        rho = haar_random_mixed((2, 2), 4, 17)
        eig_weights, eig_states = decomposition_from_isometry(rho, np.eye(4))
        eig_mean = sum(
            w * negativity(density(s), CUT2) for w, s in zip(eig_weights, eig_states)
        )
        lo = optimize_roof(rho, CUT2, RoofConfig(cardinality=4, restarts=4, seed=2))
        hi = optimize_roof(
            rho, CUT2, RoofConfig(cardinality=4, restarts=4, seed=2, direction=Direction.MAX)
        )
        assert lo.value <= eig_mean + 1e-9
        assert hi.value >= eig_mean - 1e-9

    def test_cardinality_monotonicity(self):
        for i in range(4):
            rho = haar_random_mixed((2, 2), 2, np.random.SeedSequence((6, i)))
            res = {}
            for m in (2, 3, 4):
                res[m] = optimize_roof(
                    rho, CUT2, RoofConfig(cardinality=m, restarts=8, seed=40 + i)
                )
            slack = max(r.restart_spread for r in res.values()) + 1e-9
            assert res[3].value <= res[2].value + slack
            assert res[4].value <= res[3].value + slack

    def test_returned_decomposition_reconstructs(self):
        rho = haar_random_mixed((2, 2), 4, 23)
        res = optimize_roof(rho, CUT2, RoofConfig(cardinality=4, restarts=4, seed=3))
        assert abs(res.weights.sum() - 1) < 1e-10
        assert np.abs(reconstruct(res.weights, res.states) - rho.matrix).max() < 1e-8

    def test_deterministic(self):
        rho = haar_random_mixed((2, 2), 4, 29)
        a = optimize_roof(rho, CUT2, RoofConfig(cardinality=4, restarts=5, seed=7))
        b = optimize_roof(rho, CUT2, RoofConfig(cardinality=4, restarts=5, seed=7))
        assert a.value == b.value
        assert a.restart_spread == b.restart_spread

    def test_rejects_cardinality_below_rank(self):
        rho = haar_random_mixed((2, 2), 4, 31)
        with pytest.raises(ValueError):
            optimize_roof(rho, CUT2, RoofConfig(cardinality=2, restarts=1))

    def test_qutrit_marginal_flat_roof(self):
        # every pure state in the antisymmetric two-qutrit support has
        # negativity exactly 1, so both roofs sit at 1
        red = partial_trace(density(builtin_state("aharonov")), (0, 1))
        for direction in (Direction.MIN, Direction.MAX):
            res = optimize_roof(
                red, CUT2, RoofConfig(restarts=4, seed=5, direction=direction)
            )
            assert abs(res.value - 1.0) < 1e-9
            assert res.restart_spread < 1e-9

    def test_generic_cut_sandwich(self):
        # 2x4 cut exercises the Gram path rather than the det-mode solver
        rho = partial_trace(density(haar_random_pure((2, 2, 2, 2), 44)), (0, 1, 2))
        cut = Bipartition.split(3, (0,))
        lo = optimize_roof(rho, cut, RoofConfig(restarts=6, seed=9))
        hi = optimize_roof(rho, cut, RoofConfig(restarts=6, seed=9, direction=Direction.MAX))
        assert 0 <= lo.value <= hi.value + 1e-9
        assert np.abs(reconstruct(hi.weights, hi.states) - rho.matrix).max() < 1e-8
