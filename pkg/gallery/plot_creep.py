"""
Creep to ductile failure
========================

Under a constant force the inelastic stretch accelerates until it reaches
the failure cap.  Near the initiation threshold the time to failure is
extremely sensitive to the force.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from agingmetric import processes as pr
from agingmetric.potentials import ElasticModuli, ExponentialRatePotential, SRPolynomial

ground = SRPolynomial(q1=-0.2, q2=-0.1499995, b0=-0.1, b1=-1.9, a1=-0.1)
moduli = ElasticModuli.from_young_poisson(1.0, 0.3)

fig, ax = plt.subplots(figsize=(6, 4))
for force in (1.0, 1.5, 2.0, 3.0):
    spec = pr.ProcessSpec(pr.ProcessKind.CREEP, ground, ExponentialRatePotential(1.0), moduli, force=force)
    state0 = pr.ProcessState(0.0, 1.0)
    active, margin = pr.creep_threshold(spec, state0)
    traj = pr.integrate(spec, state0, horizon=1e5, tol=1e-10)
    print(f"force {force}: threshold margin {margin:.2e}, {traj.termination.reason} at t={traj.termination.time:.4g}")
    ax.plot(traj.times[1:], traj.strain_var[1:], label=f"force = {force}")
ax.set(xscale="log", xlabel="t", ylabel="eta", title="creep")
ax.legend()
fig.tight_layout()
fig.savefig("creep.png", dpi=120)
