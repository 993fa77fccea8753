"""Cyclotomic number theory, finite phase-operator algebra, Bost-Connes
thermal states and classical phase-locking dynamics."""

__version__ = "0.1.0"

from .errors import BasisMismatchError, DomainError
from .kernels import BACKEND

__all__ = ["__version__", "BACKEND", "DomainError", "BasisMismatchError"]
