"""qlc: generate, pose, and grade questions about learners' own code."""

__version__ = "0.1.0"
