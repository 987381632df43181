"""Poisson distribution of order k: pmf, modes, first double mode, excluded mode values."""
