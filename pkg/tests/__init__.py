"""
Tests for qdistgen.

This package contains tests for qdistgen.
"""
