"""Numerical laboratory for Yamabe energies, Laplace spectra, and static
potentials on squeezed sphere products S^k x S^l."""

from ylab._core import (
    Family,
    aubin_constant,
    critical_parameter,
    destabilizing_direction,
    minimize_quotient,
    scan,
    sphere_eigenvalue,
    sphere_multiplicity,
    sphere_volume,
    static_check,
    __version__,
)

__all__ = [
    "Family",
    "aubin_constant",
    "critical_parameter",
    "destabilizing_direction",
    "minimize_quotient",
    "scan",
    "sphere_eigenvalue",
    "sphere_multiplicity",
    "sphere_volume",
    "static_check",
    "__version__",
]
