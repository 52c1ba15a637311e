"""Spectral theory toolkit for right-linear operators on quaternionic Hilbert spaces."""
