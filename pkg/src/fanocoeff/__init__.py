"""Exact computation and certification of the coefficients ``b_(i,j,k)``
appearing in the Chern character expansion for higher order minimal
families of rational curves."""

__version__ = "0.1.0"
