"""
qdistgen - training parameterized quantum circuits to generate probability distributions.
"""

__version__ = "0.1.0"
