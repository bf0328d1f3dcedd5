"""Spherical analysis on quaternionic hyperbolic space.

Submodules: ``quat`` (quaternion arrays), ``group`` (Sp(n,1) decompositions),
``reps`` (Sp(1) representations), ``specfun`` (Jacobi and spherical
functions), ``jacobi`` (Jacobi transform), ``poisson`` (Poisson transforms
and ball averages), ``fourier`` (section transforms and spectral
projections), ``verify`` (named check suites) and ``cli``.
"""
from .errors import (
    DegenerateRadius,
    DimensionMismatch,
    NonUnitQuaternion,
    NotInGroup,
    ParameterPole,
    PoleAtNonpositiveInteger,
    QuadratureNonConvergence,
    QuatHypError,
    RankDeficient,
    SpectralPole,
)
from .group import GroupContext, GroupElement, KElement, cartan, iwasawa, make_at
from .jacobi import RadialProfile, bump_profile, discrete_Dnu, discrete_spectrum, gaussian_cutoff_profile
from .kernels import BACKEND
from .numerics import MCConfig
from .specfun import JacobiParams, b_nu, c_ab, c_nu, jacobi_phi, jacobi_psi, nu_params, phi_nu

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DegenerateRadius",
    "DimensionMismatch",
    "GroupContext",
    "GroupElement",
    "JacobiParams",
    "KElement",
    "MCConfig",
    "NonUnitQuaternion",
    "NotInGroup",
    "ParameterPole",
    "PoleAtNonpositiveInteger",
    "QuadratureNonConvergence",
    "QuatHypError",
    "RadialProfile",
    "RankDeficient",
    "SpectralPole",
    "b_nu",
    "bump_profile",
    "c_ab",
    "c_nu",
    "cartan",
    "discrete_Dnu",
    "discrete_spectrum",
    "gaussian_cutoff_profile",
    "iwasawa",
    "jacobi_phi",
    "jacobi_psi",
    "make_at",
    "nu_params",
    "phi_nu",
]
