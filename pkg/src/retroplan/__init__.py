"""Energy-rating classifiers and minimum-cost retrofit planning for EPC-style data."""

__version__ = "0.1.0"
