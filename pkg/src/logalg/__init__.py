"""Executable log algebra at desk scale.

Finitely presented commutative monoids and their group completions,
pre-log rings given by charts, log differentials, two-term log cotangent
complexes, bar constructions, and strict square-zero extensions.
Everything is exact: integers, rationals and prime fields.
"""

from .errors import LogAlgError, ParseError, ResolveError, ResourceExceeded
from .exactla import FgAbelianGroup, IntMatrix, cokernel, hilbert_basis, smith
from .monoid import MonoidHom, MonoidPresentation, group_completion, repletion
from .ring import GF, QQ, Field, ModulePresentation, Ring

__version__ = "0.1.0"

__all__ = [
    "FgAbelianGroup",
    "Field",
    "GF",
    "IntMatrix",
    "LogAlgError",
    "ModulePresentation",
    "MonoidHom",
    "MonoidPresentation",
    "ParseError",
    "QQ",
    "ResolveError",
    "ResourceExceeded",
    "Ring",
    "cokernel",
    "group_completion",
    "hilbert_basis",
    "repletion",
    "smith",
]
