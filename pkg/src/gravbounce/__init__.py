"""Gravitationally bound neutron states above one and two mirrors.

Airy eigenstates, momentum spectra, Wigner phase-space functions, the free fall
of a packet released from a double-mirror slit, and first-order corrections
from a short-range Yukawa-type interaction.
"""
from .airy import AiryValue, AiryZero, airy_all, airy_eval, airy_zero, get_backend, set_backend
from .errors import ConfigError, DomainError, GravBounceError, QuadratureError, RootFindingError

__version__ = "0.1.0"

__all__ = [
    "AiryValue",
    "AiryZero",
    "ConfigError",
    "DomainError",
    "GravBounceError",
    "QuadratureError",
    "RootFindingError",
    "__version__",
    "airy_all",
    "airy_eval",
    "airy_zero",
    "get_backend",
    "set_backend",
]
