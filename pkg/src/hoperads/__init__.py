"""Combinatorics of higher nonsymmetric operads: trees, chains, polytopes, cubes."""
from .errors import (BoundsError, DomainError, HoperadsError, InvariantViolation,
                     TreeParseError)
from .trees import Tree, parse_tree, unit_tree

__version__ = "0.1.0"

__all__ = ["Tree", "parse_tree", "unit_tree", "HoperadsError", "TreeParseError",
           "BoundsError", "InvariantViolation", "DomainError", "__version__"]
