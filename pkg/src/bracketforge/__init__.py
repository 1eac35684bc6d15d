"""Bracket polynomials of admissible link configurations."""
