"""Closed-form downlink interference and SINR analysis on the infinite
hexagonal cellular lattice, validated by a brute-force lattice simulator."""

__version__ = "0.1.0"
