"""Factorization search, irreducibility classification and ring-level properties."""
