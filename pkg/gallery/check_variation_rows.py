"""
Checking variational derivatives
================================

Each Lagrangian term has an analytic first variation with respect to the
lapse, shift and spatial metric.  The finite-difference oracle perturbs
the discretised functional along a random direction; the two must agree.
"""

import numpy as np

from agingmetric.variations import (
    VariationTerm,
    contract_rows,
    fd_variation_oracle,
    random_fields,
    random_perturbation,
    variation_rows,
    verify_rows,
)

# One hand-made check: the divergence term on a periodic 2D grid.
rng = np.random.default_rng(1)
fields = random_fields("grid2d", rng, n=25)
direction = random_perturbation(fields, rng)
term = VariationTerm.divergence()
analytic = contract_rows(variation_rows(term, fields), fields, direction)
oracle = fd_variation_oracle(term, fields, direction)
print(f"DivN on a torus: analytic {analytic:.10f}, oracle {oracle:.10f}")

# The full sweep over every supported row.
for report in verify_rows(n_samples=20, seed=0):
    print(f"{report.case:>16} on {report.layout:<6}: max rel error {report.max_rel_error:.1e} ({report.seconds:.2f} s)")
