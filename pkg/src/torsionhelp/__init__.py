"""HeLP (Luthar-Passi) checks for torsion units of integral group rings ZG."""

__version__ = "0.1.0"
