"""Greene's finite-field hypergeometric functions 2F1 and 3F2: evaluation,
moment identities, value distributions and brute-force cross-checks."""

from .field import FieldTable, build_field, get_field

__all__ = ["FieldTable", "build_field", "get_field"]
__version__ = "0.1.0"
