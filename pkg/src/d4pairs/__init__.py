"""Verification toolkit for extensions of D(4)-pairs {a, b} with a < b < a + 57 sqrt(a)."""

from .bigarith import DomainError, InsufficientPrecision, RealEnclosure
from .dtuples import DnPair, DnQuadruple, DnTriple, ScopeError, verify_dn_set

__all__ = ["DnPair", "DnQuadruple", "DnTriple", "DomainError", "InsufficientPrecision",
           "RealEnclosure", "ScopeError", "verify_dn_set"]
__version__ = "0.1.0"
