"""
Test suite for the Planar Congestion Router.

This package contains unit and property tests for all modules.
"""

__version__ = "1.0.0"
