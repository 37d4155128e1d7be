"""Exact-arithmetic toolkit for complexified real toric arrangements.

Computes posets of layers, face categories, toric Salvetti complexes,
integral cohomology ring data with explicit generator cycles and
restriction tables, and arithmetic-matroid representation canonical forms.
"""

__version__ = "0.1.0"
