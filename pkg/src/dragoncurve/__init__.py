"""Dragon curves with arbitrary unfolding angle: generation, self-intersection checks and a simple-arc certificate."""

__version__ = "0.1.0"

from .certify import CertConfig, CertReport, certify
from .ifs import ModelParams, curve, make_params, params_from_theta_deg
from .intersect import brute_force, first_bad_order, sweep
from .roots import solve_constants

__all__ = [
    "__version__",
    "CertConfig",
    "CertReport",
    "certify",
    "ModelParams",
    "curve",
    "make_params",
    "params_from_theta_deg",
    "brute_force",
    "first_bad_order",
    "sweep",
    "solve_constants",
]
