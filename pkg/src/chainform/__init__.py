"""chainform: convert definite logic programs into chain form and evaluate
goals with deterministic, exhaustive metainterpreters."""

from .terms import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
