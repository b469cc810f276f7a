"""basisforge: exact constructions and verification of g-additive and
g-difference bases in finite abelian groups."""

__version__ = "0.1.0"
