"""Mod-ell cohomology of GL_3 over the coordinate ring of an affine elliptic curve."""

__version__ = "0.1.0"
