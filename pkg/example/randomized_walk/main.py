from typing import List

import numpy as np
from qhitting import GoalSubspace, KrausChannel, depolarizing, randomize, validate
from qhitting.ksmh import TAU_METHODS, kernel_limit_study, tau_channel

ROTATION = np.array([[np.sqrt(3), -1], [1, np.sqrt(3)]]) / 2
GOAL = GoalSubspace.span([1, 0])
START = np.diag([0.0, 1.0]) # walker starts orthogonal to the goal


def mixing_weights() -> List[float]:
    return [1.0, 0.5, 0.1, 0.01, 0.001]


def main():
    s = 0.5
    noise = depolarizing(s).represent()
    rotation = KrausChannel.unitary(ROTATION).represent()

    print("🔎 Check the randomized channel")
    channel = randomize(noise, rotation, 0.5)
    diagnostics = validate(channel)
    print(f"   irreducible: {diagnostics.is_irreducible}, fixed space: {diagnostics.fixed_space_dim}")

    print("⏱  Mean hitting time by every route")
    for method in TAU_METHODS:
        report = tau_channel(channel, GOAL, START, method)
        print(f"   {method:<14} {report.tau:.12g}")

    '''
    * Follow the kernel while the noise weight goes to zero.
    *
    * The g-inverse blows up like 1/p but the kernel settles on the
    * kernel of the bare rotation, which the group inverse gives directly.
    '''
    print("📉 Kernel limit as p -> 0")
    study = kernel_limit_study(noise, rotation, GOAL, mixing_weights(), START)
    for p, tau, norm in zip(study.p_values, study.taus, study.g_norms):
        print(f"   p={p:<8g} tau={tau:.12g} max|G_p|={norm:.6g}")
    print(f"   extrapolated tau {study.tau_extrapolated:.12g}, direct tau {study.tau_direct:.12g}")
    print(f"   g-inverse diverges: {study.g_diverges}, kernel converges: {study.h_converges}")


if __name__ == "__main__":
    main()
