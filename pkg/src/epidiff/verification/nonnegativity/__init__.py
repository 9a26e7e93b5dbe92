from epidiff.verification.nonnegativity.nonnegativity import verify_nonnegativity

__all__ = ["verify_nonnegativity"]
