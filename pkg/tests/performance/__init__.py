"""
Acceptance sweeps for qdistgen.

These tests train every catalog circuit and take minutes to run.
"""
