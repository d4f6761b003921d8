"""Exact computations with Čech semicosimplicial Lie algebras.

Covers the Thom-Whitney totalization with its transferred L-infinity structure,
and Maurer-Cartan problems over Artin rings."""

from .coefficients import ArtinAlgebra, monomial_quotient, truncated_polynomial
from .glie import DGLA, LinearMap
from .scs import SemicosimplicialDGLA
from .cech import CoverNerve, build_cech_scs, constant_presheaf
from .transfer import TransferredLInfty

__version__ = "0.1.0"

__all__ = [
    "ArtinAlgebra", "monomial_quotient", "truncated_polynomial", "DGLA", "LinearMap",
    "SemicosimplicialDGLA", "CoverNerve", "build_cech_scs", "constant_presheaf", "TransferredLInfty",
]
