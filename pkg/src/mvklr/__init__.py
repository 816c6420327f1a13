"""MV polytopes and KLR algebras: crystals, characters and polytope assembly."""

__version__ = "0.1.0"
