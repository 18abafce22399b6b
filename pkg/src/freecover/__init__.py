"""Finite covers of the rose, homology representations, and certificates for free group endomorphisms."""

__version__ = "0.1.0"

from .words import Endomorphism, Word, word  # noqa: E402

__all__ = ["Endomorphism", "Word", "word", "__version__"]
