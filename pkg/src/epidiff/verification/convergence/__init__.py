from epidiff.verification.convergence.convergence import verify_convergence_orders
from epidiff.verification.convergence.manufactured import ManufacturedSystem, observed_order

__all__ = ["ManufacturedSystem", "observed_order", "verify_convergence_orders"]
