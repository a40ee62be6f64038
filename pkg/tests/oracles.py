"""Frozen reference values.

Bessel zeros were produced by the power-series oracle in ``modeltone.eig``
and agree with tabulated values and with scipy to ~1e-15.
"""

import math

# first positive zero of J_nu, keyed by nu
BESSEL_FIRST_ZERO = {
    -0.5: math.pi / 2,
    0.0: 2.404825557695773,
    0.5: math.pi,
    1.0: 3.831705970207512,
    1.5: 4.493409457909064,
    2.0: 5.135622301840683,
    2.5: 5.763459196894550,
}

# lambda_1 of the unit Euclidean disc
DISC_LAMBDA1 = BESSEL_FIRST_ZERO[0.0] ** 2

# constant profiles at kappa = 2, R = 1 (sphere, flat, hyperbolic)
KAPPA2_R1 = {-1.0: 5.44599, 0.0: 5.78319, 1.0: 6.11308}

# 1 + sup_{[0,1]} |v'|/v for the flat disc of radius 2
GRADIENT_CONSTANT_DISC = 1.8954524601802034


def interval_lambda1(R):
    return (math.pi / (2.0 * R)) ** 2


def euclidean_lambda1(kappa, R):
    return (BESSEL_FIRST_ZERO[kappa / 2 - 1] / R) ** 2
