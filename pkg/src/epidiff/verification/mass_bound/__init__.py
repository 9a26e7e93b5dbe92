from epidiff.verification.mass_bound.mass_bound import mass_outcome, verify_mass_bound

__all__ = ["mass_outcome", "verify_mass_bound"]
