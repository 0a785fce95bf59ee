"""p-rationality levels of characters in p-blocks of small permutation groups."""

__version__ = "0.1.0"
