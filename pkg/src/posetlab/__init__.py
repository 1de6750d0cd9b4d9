r"""Contain the main features of the ``posetlab`` package."""

from __future__ import annotations

__all__ = [
    "Family",
    "Poset",
    "SearchBudget",
    "e_of",
    "elaborate",
    "la_n",
    "lambda_n",
    "lubell",
    "parse",
]

from posetlab.dsl import parse
from posetlab.expr import elaborate
from posetlab.lattice import Family, lubell
from posetlab.params import e_of, la_n, lambda_n
from posetlab.poset import Poset
from posetlab.search import SearchBudget
