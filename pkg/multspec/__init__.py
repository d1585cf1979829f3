"""Spectral analysis of multiplication operators on spaces of analytic functions."""
