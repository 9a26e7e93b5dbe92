"""Verification suites for the solver's nonnegativity, mass, attractor and convergence claims."""

# Import all suites to make them available when this package is imported
from epidiff.verification.attractor import verify_attractor
from epidiff.verification.convergence import verify_convergence_orders
from epidiff.verification.mass_bound import verify_mass_bound
from epidiff.verification.nonnegativity import verify_nonnegativity

__all__ = [
    "verify_attractor",
    "verify_convergence_orders",
    "verify_mass_bound",
    "verify_nonnegativity",
]
