"""Discrete Morse functions on multigraphs and generalized merge trees."""

from .cwcomplex import MalformedInput, MultiGraph
from .mergetree import GeneralizedMergeTree

__all__ = ["MalformedInput", "MultiGraph", "GeneralizedMergeTree"]
