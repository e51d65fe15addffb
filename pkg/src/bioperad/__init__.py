"""bioperad: exact computer algebra for 2-colored operads over Q.

Presentations by generators and relations, free operads on partially planar
trees, quadratic and quadratic-linear Koszul duals, cobar constructions,
differentials and homology at bounded arity, plus free algebras, coderivation
lifts and strong-homotopy structure checkers.
"""

__version__ = "0.1.0"
