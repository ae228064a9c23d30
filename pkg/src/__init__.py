"""
deformae - exact deformation calculus on finite models of complex manifolds.
"""

__version__ = "0.1.0"
