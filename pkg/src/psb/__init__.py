"""Exact slope-bundle constructions, crossing censuses, pseudoline counts and bounds."""

__version__ = "0.1.0"
