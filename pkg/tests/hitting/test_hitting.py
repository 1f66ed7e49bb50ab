import numpy as np
import pytest
from qhitting import hitting
from qhitting.channel import GoalSubspace, random_channel, stochastic_channel
from qhitting.matrep import SuperOp
from qhitting.utils import ReducibleError, SpectralObstructionError, ValidationError, min_eigenvalue

from tests.helpers import (
    FORBIDDEN_ALPHA,
    K5,
    K_U6,
    PHI5,
    PSI5,
    absorbing_times,
    density,
    hadamard_channel,
    hadamard_goal,
    ket,
    random_qubit_channel,
    random_stochastic,
    random_unit,
    randomized_setup,
    rotation_channel,
    tau_randomized,
    unital_setup,
)

chain_test_data = [(seed, 3 + seed % 3) for seed in range(10)]

tau_grid = [(p, s) for p in (0.0, 0.25, 0.5, 0.75, 1.0) for s in (0.1, 0.3, 0.5, 0.7, 0.9)]


def test_analytic_K_of_irreducible_channel():
    s, v, rho = unital_setup()
    maps = hitting.analytic_HK(s, v)
    np.testing.assert_allclose(maps.K.mat, K5, atol=1e-9)
    assert hitting.tau_from_K(maps, rho) == pytest.approx(6.0, abs=1e-9)
    assert hitting.tau_from_K(maps, density(PSI5), side="in_V") == pytest.approx(2.0, abs=1e-9)
    assert hitting.hitting_probability(maps, rho) == pytest.approx(1.0, abs=1e-9)


def test_K_is_H_times_monitored_resolvent():
    s, v, _ = unital_setup()
    maps = hitting.analytic_HK(s, v)
    resolvent = np.linalg.inv(np.eye(4) - v.QQ.mat @ s.mat)
    np.testing.assert_allclose(maps.K.mat, maps.H.mat @ resolvent, atol=1e-9)
    np.testing.assert_allclose(maps.resolvent, resolvent, atol=1e-9)


def test_H_and_K_are_positive_maps():
    rng = np.random.default_rng(12)
    for _ in range(5):
        s = random_qubit_channel(rng)
        maps = hitting.analytic_HK(s, GoalSubspace.span(random_unit(rng, 2)))
        for _ in range(10):
            w = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            rho = w @ w.conj().T
            rho /= np.trace(rho)
            for m in (maps.H, maps.K):
                image = m.apply(rho)
                assert min_eigenvalue(image) >= -1e-9 * max(1.0, np.linalg.norm(image))


def test_block_representation_sums_to_map():
    s, v, _ = unital_setup()
    blocks = hitting.block_representation(s, v)
    total = blocks["11"] + blocks["12"] + blocks["21"] + blocks["22"]
    assert total.allclose(s)


def test_analytic_K_of_rotation():
    _, v, rho = randomized_setup(0.0, 0.5)
    maps = hitting.analytic_HK(rotation_channel(), v)
    np.testing.assert_allclose(maps.K.mat, K_U6, atol=1e-9)
    assert hitting.tau_from_K(maps, rho) == pytest.approx(4.0, abs=1e-9)


@pytest.mark.parametrize("p, s", tau_grid)
def test_tau_of_randomized_channel(p, s):
    superop, v, rho = randomized_setup(p, s)
    maps = hitting.analytic_HK(superop, v)
    assert hitting.tau_from_K(maps, rho) == pytest.approx(tau_randomized(p, s), abs=1e-8)


def test_hadamard_tau():
    maps = hitting.analytic_HK(hadamard_channel(), hadamard_goal())
    assert hitting.tau_from_K(maps, density(ket(0, 1))) == pytest.approx(2.0, abs=1e-9)


def test_forbidden_angle_is_obstructed():
    with pytest.raises(SpectralObstructionError) as e:
        hitting.analytic_HK(hadamard_channel(), hadamard_goal(FORBIDDEN_ALPHA))
    assert len(e.value.eigenvalues) >= 1


def test_tau_from_K_checks_support():
    s, v, _ = unital_setup()
    maps = hitting.analytic_HK(s, v)
    with pytest.raises(ValidationError, match="in V perp"):
        hitting.tau_from_K(maps, density(PSI5))
    with pytest.raises(ValidationError):
        hitting.tau_from_K(maps, np.eye(2) / 2)


@pytest.mark.parametrize("seed, n", chain_test_data)
def test_classical_chain_as_diagonal_channel(seed, n):
    p = random_stochastic(np.random.default_rng(seed), n)
    superop = stochastic_channel(p).represent()
    basis = np.eye(n)
    for target in range(n):
        expected = absorbing_times(p, target)
        goal = GoalSubspace.span(basis[target])
        maps = hitting.analytic_HK(superop, goal)
        z = hitting.fundamental_map(superop)
        for start in range(n):
            if start == target:
                continue
            tau = hitting.tau_from_K(maps, density(basis[start]))
            assert tau == pytest.approx(expected[start], abs=1e-8)
            via_z = hitting.mhtf_tau(superop, goal, basis[target], basis[start], z=z, maps=maps)
            assert via_z == pytest.approx(expected[start], abs=1e-8)


@pytest.mark.parametrize("seed, n", chain_test_data)
def test_fundamental_map_of_diagonal_channel_restricts_to_classical_matrix(seed, n):
    p = random_stochastic(np.random.default_rng(seed), n)
    z = hitting.fundamental_map(stochastic_channel(p).represent())
    pi = np.real(np.diag(z.pi))
    classical = np.linalg.inv(np.eye(n) - p + np.outer(pi, np.ones(n)))
    diagonal = np.arange(n) * (n + 1)
    np.testing.assert_allclose(z.Z.mat[np.ix_(diagonal, diagonal)], classical, atol=1e-8)
    np.testing.assert_allclose(p @ pi, pi, atol=1e-10)


def test_fundamental_map():
    s, _, _ = unital_setup()
    z = hitting.fundamental_map(s)
    assert z.residual(s) < 1e-10
    np.testing.assert_allclose(z.pi, np.eye(2) / 2, atol=1e-10)


def test_fundamental_map_needs_irreducible_channel():
    with pytest.raises(ReducibleError):
        hitting.fundamental_map(hadamard_channel())
    with pytest.raises(ReducibleError):
        hitting.fundamental_map(SuperOp.identity(2))


def test_mhtf_on_irreducible_channel():
    s, v, _ = unital_setup()
    assert hitting.mhtf_tau(s, v, PSI5, PHI5) == pytest.approx(6.0, abs=1e-9)
    with pytest.raises(ValidationError):
        hitting.mhtf_tau(s, v, PHI5, PSI5)


def test_mhtf_agrees_with_K_on_random_channels():
    rng = np.random.default_rng(21)
    v = GoalSubspace.span(ket(1, 0))
    for _ in range(10):
        s = random_qubit_channel(rng)
        maps = hitting.analytic_HK(s, v)
        tau = hitting.tau_from_K(maps, density(ket(0, 1)))
        assert hitting.mhtf_tau(s, v, ket(1, 0), ket(0, 1), maps=maps) == pytest.approx(tau, rel=1e-8)


def test_mhtf_is_independent_of_psi():
    rng = np.random.default_rng(8)
    s = random_channel(3, 3, rng).represent()
    v = GoalSubspace.span(ket(1, 0, 0), ket(0, 1, 0))
    psis = [np.append(random_unit(rng, 2), 0) for _ in range(4)]
    assert hitting.mhtf_psi_spread(s, v, ket(0, 0, 1), psis) < 1e-8


@pytest.mark.parametrize("seed, n", chain_test_data)
def test_classical_mhtf_matches_first_step_analysis(seed, n):
    p = random_stochastic(np.random.default_rng(seed), n)
    m = hitting.classical_mhtf(p)
    for target in range(n):
        np.testing.assert_allclose(m[target], absorbing_times(p, target), atol=1e-8)


def test_classical_mhtf_needs_positive_stationary_distribution():
    p = np.array([[1.0, 0.5], [0.0, 0.5]])
    with pytest.raises(ReducibleError):
        hitting.classical_mhtf(p)
