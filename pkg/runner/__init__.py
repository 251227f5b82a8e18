"""Command-line orchestration and run artifacts."""

__version__ = "0.1.0"
