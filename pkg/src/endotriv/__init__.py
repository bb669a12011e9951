"""Endotrivial complexes of p-permutation modules and Borel-Smith functions.

Finite permutation groups, their p-subgroup posets, Borel-Smith and oriented
Artin lattices, explicit chain complexes over F_p with Brauer constructions
and h-marks, the Burnside ring of a p-group and elementary biset operations.
"""

from .builtin import builtin
from .groups import BudgetExceeded, GroupError, PermGroup, read_group_file

__all__ = ["BudgetExceeded", "GroupError", "PermGroup", "builtin", "read_group_file"]
__version__ = "0.1.0"
