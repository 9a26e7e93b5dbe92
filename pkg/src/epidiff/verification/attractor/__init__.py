from epidiff.verification.attractor.attractor import fit_decay_rate, limit_defect, verify_attractor

__all__ = ["fit_decay_rate", "limit_defect", "verify_attractor"]
