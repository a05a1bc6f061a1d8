"""Consistency verification of security policies and workflows."""

__version__ = "0.1.0"
