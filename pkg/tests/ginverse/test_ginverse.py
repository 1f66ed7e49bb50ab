import numpy as np
import pytest
from qhitting import ginverse
from qhitting.channel import GoalSubspace, random_channel
from qhitting.ginverse import GInverse
from qhitting.hitting import fundamental_map
from qhitting.qmc import QMC
from qhitting.utils import NoGroupInverseError, NumericalError, ParameterError, ReducibleError

from tests.helpers import (
    A0D_6,
    ASHARP_H,
    G5,
    hadamard_channel,
    hadamard_goal,
    random_unit,
    randomized_setup,
    rotation_channel,
    unital_setup,
)

E = np.eye(8)

hunter_test_data = [
    (E[0], np.ones(8), None, None),
    (E[0] + E[3], E[0] + E[3], E[1], None),
    (E[4], E[0] + E[3] + E[4] + E[7], None, E[2]),
    (E[7], E[0], E[5], E[6]),
    (np.arange(1, 9), np.ones(8), np.ones(8), np.arange(8)),
]

index_test_data = [
    (np.eye(3), 0),
    (np.zeros((2, 2)), 1),
    (np.diag([1.0, 0.0]), 1),
    (np.array([[0.0, 1.0], [0.0, 0.0]]), 2),
    (np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=float), 3),
]


def _unital_qmc():
    s, v, _ = unital_setup()
    return QMC.induce(s, v)


def _hadamard_a():
    q = QMC.induce(hadamard_channel(), hadamard_goal())
    return np.eye(8) - q.rep


def test_ksmh_ginverse_default_parameters():
    gi = ginverse.ksmh_ginverse(_unital_qmc())
    assert gi.kind == "hunter-family"
    np.testing.assert_allclose(gi.g, G5, atol=1e-9)
    assert gi.verify()


@pytest.mark.parametrize("t, u, f, g", hunter_test_data)
def test_hunter_family_members_are_ginverses(t, u, f, g):
    gi = ginverse.hunter_ginverse(_unital_qmc(), t, u, f, g)
    assert gi.residual < 1e-10


def test_hunter_pairing_conditions():
    q = _unital_qmc()
    with pytest.raises(ParameterError, match="e_I"):
        ginverse.hunter_ginverse(q, E[1], np.ones(8))
    with pytest.raises(ParameterError, match="pi"):
        ginverse.hunter_ginverse(q, E[0], E[0] - E[3])
    with pytest.raises(ParameterError, match="length"):
        ginverse.hunter_ginverse(q, np.ones(4), np.ones(8))


def test_hunter_family_needs_unique_stationary_density():
    q = QMC.induce(hadamard_channel(), hadamard_goal())
    with pytest.raises(ReducibleError):
        ginverse.ksmh_ginverse(q)


def test_group_inverse_of_hadamard_chain():
    gi = ginverse.group_inverse(_hadamard_a())
    assert gi.index == 1
    np.testing.assert_allclose(gi.asharp, ASHARP_H, atol=1e-9)
    assert gi.verify()
    projector = ginverse.ergodic_projector(gi)
    np.testing.assert_allclose(projector @ projector, projector, atol=1e-9)


def test_group_inverse_of_rotation_chain():
    _, v, _ = randomized_setup(0.0, 0.5)
    a = np.eye(8) - QMC.induce(rotation_channel(), v).rep
    np.testing.assert_allclose(ginverse.group_inverse(a).asharp, A0D_6, atol=1e-9)


def test_drazin_limit_agrees_with_schur_route():
    a = _hadamard_a()
    limit = ginverse.drazin_limit(a)
    np.testing.assert_allclose(limit.value, ASHARP_H, atol=1e-6)
    assert limit.z_schedule == ginverse.DEFAULT_Z_SCHEDULE
    assert limit.residuals[-1] <= limit.residuals[0]


@pytest.mark.parametrize("matrix, expected", index_test_data)
def test_index(matrix, expected):
    assert ginverse.index(matrix) == expected


def test_group_inverse_edge_cases():
    invertible = np.array([[2.0, 1.0], [0.0, 3.0]])
    gi = ginverse.group_inverse(invertible)
    assert gi.index == 0
    np.testing.assert_allclose(gi.asharp, np.linalg.inv(invertible), atol=1e-12)
    np.testing.assert_allclose(ginverse.group_inverse(np.zeros((3, 3))).asharp, np.zeros((3, 3)))
    with pytest.raises(NoGroupInverseError) as e:
        ginverse.group_inverse(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert e.value.index == 2


def _random_transition_maps(rng, count):
    for trial in range(count):
        dim = 2 + trial % 3
        t = random_channel(dim, dim * dim, rng).represent()
        yield t.mat
        yield QMC.induce(t, GoalSubspace.span(random_unit(rng, dim))).rep


def _cesaro_mean(t, n_steps):
    """(1/N) sum_{k<N} T^k with N a power of two, by doubling."""
    total = np.eye(t.shape[0], dtype=complex)
    power = t.astype(complex)
    steps = 1
    while steps < n_steps:
        total = total + power @ total
        power = power @ power
        steps *= 2
    return total / steps


def test_random_channels_group_inverse_properties():
    rng = np.random.default_rng(2024)
    for t in _random_transition_maps(rng, 50):
        n = t.shape[0]
        a = np.eye(n) - t
        assert ginverse.index(a) <= 1
        gi = ginverse.group_inverse(a)
        assert gi.verify(), gi.axiom_residuals()
        np.testing.assert_allclose((np.eye(n) - a @ gi.asharp) @ gi.asharp, 0, atol=1e-9)
        np.testing.assert_allclose(ginverse.drazin_limit(a).value, gi.asharp, atol=1e-6)

        projector = gi.ergodic_projector
        np.testing.assert_allclose(projector @ projector, projector, atol=1e-8)
        np.testing.assert_allclose(t @ projector, projector, atol=1e-8)
        np.testing.assert_allclose(_cesaro_mean(t, 4096), projector, atol=1e-3)


def test_ergodic_projector_of_induced_chain_has_equal_block_columns():
    rng = np.random.default_rng(5)
    chains = [QMC.induce(hadamard_channel(), hadamard_goal()), _unital_qmc()]
    for _ in range(5):
        dim = 3
        goal = GoalSubspace.span(random_unit(rng, dim))
        chains.append(QMC.induce(random_channel(dim, 2, rng).represent(), goal))
    for q in chains:
        half = q.rep.shape[0] // 2
        projector = ginverse.group_inverse(np.eye(2 * half) - q.rep).ergodic_projector
        np.testing.assert_allclose(projector[:, :half], projector[:, half:], atol=1e-9)


def test_fundamental_map_is_a_ginverse():
    s, _, _ = unital_setup()
    z = fundamental_map(s)
    assert ginverse.verify_ginverse(np.eye(4) - s.mat, z.Z.mat)


def test_from_matrix_rejects_non_ginverse():
    a = np.diag([1.0, 0.0])
    assert GInverse.from_matrix(a, np.diag([1.0, 7.0])).residual == 0.0
    with pytest.raises(NumericalError):
        GInverse.from_matrix(a, np.diag([2.0, 0.0]))
