"""Numerical laboratory for Buzano-type inequalities on C^n."""

__version__ = "0.1.0"

from .linalg import DEFAULT_TOL, PreconditionError, Tolerances  # noqa: E402

__all__ = ["DEFAULT_TOL", "PreconditionError", "Tolerances", "__version__"]
