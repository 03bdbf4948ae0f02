"""Seminormality and weak-normality toolkit for finitely presented rings."""

__version__ = "0.1.0"
