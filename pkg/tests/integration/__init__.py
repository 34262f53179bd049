"""
Integration tests for qdistgen.

This package contains tests for component interactions.
"""
