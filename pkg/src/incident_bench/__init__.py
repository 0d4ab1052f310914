"""Fall-incident prediction benchmark: resampling, four classifiers, metrics and screening."""

__version__ = "0.1.0"
