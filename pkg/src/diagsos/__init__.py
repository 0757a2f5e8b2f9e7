"""Exact prolongation ranks of diagonal Hermitian forms.

A diagonal Hermitian form sum a_alpha |z^alpha|^2 is identified with the real
polynomial sum a_alpha x^alpha.  Multiplying by ||z||^2 becomes multiplication
by x_1 + ... + x_n, a sparse 0/1 matrix in the left-lexicographic monomial
basis.  Everything here is exact (integers and ``fractions.Fraction``).
"""

__version__ = "0.1.0"
