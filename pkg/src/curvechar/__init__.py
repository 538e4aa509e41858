"""Characters, intersections and lengths of curves on the once-punctured torus."""

__version__ = "0.1.0"

from .words import CurveClass, Word, canonical_class, enumerate_classes, parse_class, parse_word, reverse
from .traces import chars_equal_exact, chars_equal_probabilistic, fricke_char

__all__ = [
    "CurveClass",
    "Word",
    "__version__",
    "canonical_class",
    "chars_equal_exact",
    "chars_equal_probabilistic",
    "enumerate_classes",
    "fricke_char",
    "parse_class",
    "parse_word",
    "reverse",
]
