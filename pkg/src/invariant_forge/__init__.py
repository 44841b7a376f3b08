"""Exact computation of invariants of algebraic structures given by structure tensors."""

from .scalars import QQ, cyclotomic_field, rational_function_field
from .tensors import Structure, Tensor

__all__ = ["QQ", "Structure", "Tensor", "cyclotomic_field", "rational_function_field"]
__version__ = "0.1.0"
