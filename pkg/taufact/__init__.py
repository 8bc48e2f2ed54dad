"""
taufact: tau-factorization on finite commutative rings.

Sub-packages:
- taufact.structures: rings, associate relations, tau-relations, zero-divisor graphs
- taufact.factorization: factorization search, irreducibility, ring-level properties
"""

__version__ = "0.3.0"
