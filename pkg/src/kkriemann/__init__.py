"""Riemann solver laboratory for a crowd-limited Keyfitz-Kranzer system."""
