"""Obstructions to quasi-projectivity for Artin groups and finite presentations."""

__version__ = "0.1.0"
