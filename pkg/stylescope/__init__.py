"""Function-word stylometry: writing-style variability and authorship tests."""

__version__ = "1.0.0"
