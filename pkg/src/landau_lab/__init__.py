"""Exact Fock-space operator algebra and lattice Landau-level asymptotics."""

__version__ = "0.1.0"
