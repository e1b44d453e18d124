"""
Unconstrained aging of a rod
============================

A load-free rod shrinks while its lapse grows, until the state reaches
the stopping curve.  Older material (larger initial lapse) has less
shrinkage left in it.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from agingmetric import processes as pr
from agingmetric.potentials import QuadraticPotential, UAPolynomial

# Ground energy coefficients and a quadratic dissipative potential.
ground = UAPolynomial(c1=-5e-4, c2=1e-4, p=-0.035, k=1e-4)
spec = pr.ProcessSpec(pr.ProcessKind.UA, ground, QuadraticPotential(-1.0))

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
for S0 in (1.0, 1.3, 1.6, 1.9):
    traj = pr.integrate(spec, pr.ProcessState(0.0, S0), horizon=1000.0, tol=1e-10)
    volume_loss = -np.expm1(3.0 * traj.strain_var)
    J = pr.first_integral(spec, traj.strain_var, traj.lapse)
    print(f"S0={S0}: stops at t={traj.termination.time:.3f} with volume loss {volume_loss[-1]:.4f}, "
          f"first-integral drift {np.max(np.abs(J - J[0])) / abs(J[0]):.1e}")
    ax1.plot(traj.times, volume_loss, label=f"S(0) = {S0}")
    ax2.plot(traj.strain_var, traj.lapse)

# The stopping curve S = -(c1 + k xi^2) / (2 c2) in the phase plane.
xi = np.linspace(-0.016, 0.0, 50)
ax2.plot(xi, ground.stopping_lapse(xi), "k--", label="stopping curve")
ax1.set(xlabel="t", ylabel="volume loss", title="shrinkage")
ax2.set(xlabel="xi", ylabel="S", title="phase plane")
ax2.locator_params(axis="x", nbins=5)
ax1.legend()
ax2.legend()
fig.tight_layout()
fig.savefig("unconstrained_aging.png", dpi=120)
