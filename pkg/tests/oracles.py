"""Frozen reference values used by the tests.

Every number here was derived independently of the package code (closed
forms, exact symbolic integration, or physical statements of the model)
and is not to be regenerated from the implementation.
"""

import math

# ---------------------------------------------------------------------------
# physical statements of the model
# ---------------------------------------------------------------------------

#: Volume loss at the end of unconstrained aging lies in this band.
UA_VOLUME_LOSS_BAND = (0.02, 0.05)

#: Tripling the creep force shortens the time to failure by at least this
#: many decades (order-of-magnitude statement).
CREEP_MIN_DECADES = 3.0

#: First-order metric shrinkage per unit relative density jump.
RING_SHRINK_PER_DENSITY = -2.0 / 3.0


def two_phase_gap(c4, Q):
    """Stiffness jump between the two phases of the 1D two-phase energy."""
    return 3.0 * c4 * (1.0 + Q * Q)


def ring_radial_stress(Y, nu, density_jump):
    """Layer stress after closing the gap: ``Y/(1-nu) * (2/3) delta``."""
    return Y / (1.0 - nu) * 2.0 / 3.0 * density_jump


# ---------------------------------------------------------------------------
# necking, a = b = 1, lambda0 = 1, lambda1 = 2, chi = u^2
# ---------------------------------------------------------------------------
# The critical load excess solves int_1^{l*} F'(l)/l^2 dl = 0 with
# F = (l-1)^2 ((l-2)^2 - k) and l* = (7 + sqrt(1 + 8k))/4; the antiderivative
# was taken symbolically and the root found at 30 digits.
NECKING_CRITICAL_LOAD = 0.0546893295631226204521629135276
NECKING_DRAWN_STRETCH = 2.04974099616429066346181427025
NECKING_CENTRE_STRETCH = 1.45025900383570933653818572975


def necking_eigenvalue_sq(lam, kappa):
    """Squared eigenvalue ``lam^2 F''(lam) / 8`` of the linearised kink ODE."""
    u, v = lam - 1.0, lam - 2.0
    d2 = 2.0 * (v * v - kappa) + 8.0 * u * v + 2.0 * u * u
    return lam * lam * d2 / 8.0


# ---------------------------------------------------------------------------
# elasticity
# ---------------------------------------------------------------------------
# With f = (mu/2) Tr E^2 + (lam/2)(Tr E)^2, mu = lam = 1 and E = eps I (3D):
# f = (3/2) eps^2 + (9/2) eps^2 = 6 eps^2.
ISOTROPIC_ENERGY_COEFF = 6.0

#: Standard isotropic interconversions for (Y, nu) = (200, 0.25).
MODULI_200_025 = {
    "mu": 80.0,
    "lam": 80.0,
    "bulk_K": 200.0 / 1.5,
}

# ---------------------------------------------------------------------------
# stress relaxation fixture: sigma(0) = Y eta*
# ---------------------------------------------------------------------------
SR_INITIAL_STRESS = {0.1: 10.0, 0.15: 15.0, 0.2: 20.0, 0.25: 25.0}

# ---------------------------------------------------------------------------
# flow vector normalisation G(u, u) = 1
# ---------------------------------------------------------------------------
FLOW_NORM = 1.0

SQRT2 = math.sqrt(2.0)
