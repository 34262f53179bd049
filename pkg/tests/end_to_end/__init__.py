"""
End-to-end tests for qdistgen.

This package contains tests for the command-line workflow.
"""
