import numpy as np

from qhitting import GoalSubspace, KrausChannel, SuperOp, depolarizing, randomize, random_channel

R3 = np.sqrt(3)


def ket(*entries):
    return np.array(entries, dtype=complex)


def density(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


# Irreducible unital qubit channel with Kraus operators A, B

A5 = np.array([[1, 1], [0, 1]]) / R3
B5 = np.array([[1, 0], [-1, 1]]) / R3
PSI5 = ket(1, 1) / np.sqrt(2)
PHI5 = ket(1, -1) / np.sqrt(2)

T5 = np.array([
    [2, 1, 1, 1],
    [-1, 2, 0, 1],
    [-1, 0, 2, 1],
    [1, -1, -1, 2],
]) / 3

K5 = np.array([
    [39, -12, -12, 9],
    [-72, 32, 28, -12],
    [-72, 28, 32, -12],
    [177, -72, -72, 39],
]) / 6

PHI5_INDUCED = np.array([
    [3, 6, 6, 3, 3, 6, 6, 3],
    [1, 6, -2, 5, 1, 6, -2, 5],
    [1, -2, 6, 5, 1, -2, 6, 5],
    [-1, -2, -2, 7, -1, -2, -2, 7],
    [5, -2, -2, 1, 5, -2, -2, 1],
    [-5, 2, 2, -1, -5, 2, 2, -1],
    [-5, 2, 2, -1, -5, 2, 2, -1],
    [5, -2, -2, 1, 5, -2, -2, 1],
]) / 12

PI5 = np.array([1, 1, 1, 1, 1, -1, -1, 1]) / 4

D5 = np.array([
    [-51, 24, 24, -9, 0, 0, 0, 0],
    [18, -4, -8, 6, 0, 0, 0, 0],
    [18, -8, -4, 6, 0, 0, 0, 0],
    [87, -36, -36, 21, 0, 0, 0, 0],
    [0, 0, 0, 0, 3, 0, 0, 9],
    [0, 0, 0, 0, -3, 0, 0, -9],
    [0, 0, 0, 0, -3, 0, 0, -9],
    [0, 0, 0, 0, 3, 0, 0, 9],
]) / 6

G5 = np.array([
    [5, 2, 2, 5, 1, 2, 2, 5],
    [1, 8, -4, 3, 1, 4, -4, 3],
    [1, -4, 8, 3, 1, -4, 4, 3],
    [1, -2, -2, 5, 1, -2, -2, 1],
    [1, 0, 0, -1, 5, 0, 0, -1],
    [-1, 0, 0, 1, -1, 4, 0, 1],
    [-1, 0, 0, 1, -1, 0, 4, 1],
    [1, 0, 0, -1, 1, 0, 0, 3],
]) / 4

G5_DIAG = np.array([
    [5, 2, 2, 5, 0, 0, 0, 0],
    [1, 8, -4, 3, 0, 0, 0, 0],
    [1, -4, 8, 3, 0, 0, 0, 0],
    [1, -2, -2, 5, 0, 0, 0, 0],
    [0, 0, 0, 0, 5, 0, 0, -1],
    [0, 0, 0, 0, -1, 4, 0, 1],
    [0, 0, 0, 0, -1, 0, 4, 1],
    [0, 0, 0, 0, 1, 0, 0, 3],
]) / 4


def unital_channel():
    return KrausChannel([A5, B5])


def unital_setup():
    """Channel, goal subspace span{psi} and rho_phi."""
    return unital_channel().represent(), GoalSubspace.span(PSI5), density(PHI5)


# Randomization of the depolarizing channel with a rotation

U6 = np.array([[R3, -1], [1, R3]]) / 2

K_U6 = np.array([
    [2, R3, R3, 4],
    [-R3, -3, -4, -4 * R3],
    [-R3, -4, -3, -4 * R3],
    [4, 4 * R3, 4 * R3, 12],
])

_H0_TOP = [
    [2, R3, R3, 4],
    [-R3, -3, -4, -4 * R3],
    [-R3, -4, -3, -4 * R3],
]
H0_6 = np.array(
    [row * 2 for row in _H0_TOP]
    + [[0] * 8] * 4
    + [[1, -R3 / 2, -R3 / 2, 2] * 2]
)

A0D_6 = np.array([
    [1, -R3, -R3, -1, -3, -R3, -R3, -1],
    [R3, 1, 1, -R3, R3, -3, 1, -R3],
    [R3, 1, 1, -R3, R3, 1, -3, -R3],
    [0, 0, 0, 4, 0, 0, 0, 0],
    [0, 0, 0, 0, 4, 0, 0, 0],
    [0, 0, 0, 0, 0, 4, 0, 0],
    [0, 0, 0, 0, 0, 0, 4, 0],
    [-1, R3, R3, -3, -1, R3, R3, 1],
]) / 4

T_VEC6 = np.eye(8)[0]
F_VEC6 = np.eye(8)[1] + np.eye(8)[7]


def rotation_channel():
    return KrausChannel.unitary(U6).represent()


def randomized(p, s):
    return randomize(depolarizing(s).represent(), rotation_channel(), p)


def randomized_setup(p, s):
    return randomized(p, s), GoalSubspace.span(ket(1, 0)), density(ket(0, 1))


def tau_randomized(p, s):
    return 4 / (1 - p + 2 * p * s)


def g22_randomized(p, s):
    num = 2 * p ** 2 - 3 * p ** 2 * s - 4 * p + 4 * p ** 2 * s ** 2 + 3 * p * s + 2
    den = 4 * (p ** 2 * s ** 2 - p ** 2 * s + p ** 2 - 2 * p + p * s + 1) * p * s
    return num / den


# Hadamard conjugation

HADAMARD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
FORBIDDEN_ALPHA = np.sqrt(2 + np.sqrt(2)) / 2

ASHARP_H = np.array([
    [1, -1, -1, -1, -7, -1, -1, -1],
    [-1, 3, -1, 1, -1, -5, -1, 1],
    [-1, -1, 3, 1, -1, -1, -5, 1],
    [0, 0, 0, 8, 0, 0, 0, 0],
    [0, 0, 0, 0, 8, 0, 0, 0],
    [0, 0, 0, 0, 0, 8, 0, 0],
    [0, 0, 0, 0, 0, 0, 8, 0],
    [-1, 1, 1, -7, -1, 1, 1, 1],
]) / 8

KERNEL_H = np.array(
    [[2, -1, -1, 2] * 2, [-1, 1, 2, -2] * 2, [-1, 2, 1, -2] * 2]
    + [[0] * 8] * 4
    + [[2, -2, -2, 2] * 2]
)


def hadamard_channel():
    return KrausChannel.unitary(HADAMARD).represent()


def hadamard_goal(alpha=1.0):
    return GoalSubspace.span(ket(alpha, np.sqrt(1 - alpha ** 2)))


# Coined walk on two vertices

U4 = np.array([
    [1, 1, 0, 0],
    [0, 0, 1, 1],
    [1, -1, 0, 0],
    [0, 0, 1, -1],
]) / np.sqrt(2)

_B1 = [
    [4, -3, -1, 2, -3, 4, 1, -2],
    [-1, 1, -1, -5, 1, -1, 2, 6],
    [-3, 3, 1, -2, 4, -4, -1, 2],
    [2, -2, -5, 8, -2, 2, 6, -9],
    [-1, 1, 6, -3, 1, -1, -6, 3],
    [6, -6, -2, 4, -6, 6, 2, -4],
    [1, -1, -6, 3, -1, 1, 6, -3],
    [-3, 3, 4, -13, 3, -3, -4, 13],
]
_B2 = [
    [-1, 1, 6, -3, 2, -2, -3, 10],
    [6, -6, -2, 4, -3, 3, 8, -12],
    [1, -1, -6, 3, -2, 2, 3, -10],
    [-3, 3, 4, -13, 10, -10, -12, 25],
    [-1, 2, -2, 8, -5, 6, 4, -12],
    [-2, 2, 10, -6, 4, -4, -6, 18],
    [2, -2, 2, -8, 6, -6, -4, 12],
    [8, -8, -6, 16, -12, 12, 18, -34],
]
_B3 = [
    [-3, 4, 1, -2, 3, -4, -1, 2],
    [1, -1, 2, 6, -1, 1, -2, -6],
    [4, -4, -1, 2, -4, 4, 1, -2],
    [-2, 2, 6, -9, 2, -2, -6, 9],
    [2, -2, -3, 10, -2, 2, 3, -10],
    [-3, 3, 8, -12, 3, -3, -8, 12],
    [-2, 2, 3, -10, 2, -2, -3, 10],
    [10, -10, -12, 25, -10, 10, 12, -25],
]
_B4 = [
    [1, -1, -6, 3, -2, 2, 3, -10],
    [-6, 6, 2, -4, 3, -3, -8, 12],
    [-1, 1, 6, -3, 2, -2, -3, 10],
    [3, -3, -4, 13, -10, 10, 12, -25],
    [-5, 6, 4, -12, 8, -9, -13, 25],
    [4, -4, -6, 18, -13, 13, 16, -34],
    [6, -6, -4, 12, -9, 9, 13, -25],
    [-12, 12, 18, -34, 25, -25, -34, 72],
]
K4 = np.block([[np.array(_B1), np.array(_B2)], [np.array(_B3), np.array(_B4)]])

# symmetric form with tau(phi) = phi* X phi for phi = (0, alpha, beta, delta)
X4 = np.array([[4, 1, -2], [1, 6, -3], [-2, -3, 10]])


def coined_channel():
    return KrausChannel.unitary(U4).represent()


def coined_goal():
    return GoalSubspace.span(ket(1, 0, 0, 0))


def coined_tau(alpha, beta, delta):
    v = np.array([alpha, beta, delta], dtype=complex)
    return float(np.real(v.conj() @ X4 @ v))


# Randomized inputs

def random_stochastic(rng, n):
    """Column-stochastic matrix with strictly positive entries."""
    p = rng.uniform(0.05, 1.0, size=(n, n))
    return p / p.sum(axis=0)


def random_qubit_channel(rng, rank=3) -> SuperOp:
    return random_channel(2, rank, rng).represent()


def random_unit(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def absorbing_times(p, target):
    """
    Mean hitting times of state `target` for a column-stochastic chain:
    entry j is the mean time from j, the target entry its mean return time.
    """
    n = p.shape[0]
    others = [i for i in range(n) if i != target]
    sub = p[np.ix_(others, others)]
    h = np.linalg.solve(np.eye(n - 1) - sub.T, np.ones(n - 1))
    times = np.zeros(n)
    times[others] = h
    times[target] = 1 + p[others, target] @ h
    return times
