"""First Dirichlet eigenvalues of rotationally symmetric model balls and
fundamental-tone lower bounds for minimal submanifolds of warped products."""

from .dsl import ScalarExpr, differentiate, evaluate, parse
from .kernels import BACKEND
from .model import CurvatureProfile, ModelProfile, admissible_radius, solve_coefficient, sup_g_minus, tail_criterion
from .eig import EigenSolution, bessel_first_zero, first_eigenvalue, shoot

__version__ = "0.1.0"
