"""Atkin-Lehner quotients of Shimura curves X_0^D(N), in exact arithmetic.

Submodules:
    arith      elementary number theory (symbols, psi, Hall divisors, h(d))
    quotients  genus and fixed-point formulas; the genus <= 2 enumeration
    quatlat    definite quaternion orders, ideal classes, unit groups
    graphs     graphs with lengths: quotient, star, minimize, resolve, dual
    cdunif     Cerednik-Drinfeld dual graphs, Kodaira symbols, local points
    equations  twist quartics, bielliptic sextics, solvability filters
    ecdb       elliptic-curve database ingestion and class resolution
    cli        command-line interface
"""

__version__ = "0.1.0"
