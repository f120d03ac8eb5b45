"""Executable models of nilpotent Gelfand pairs with rank-one center."""

__version__ = "0.1.0"
