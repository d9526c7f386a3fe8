"""Wrist-sensor mood pipeline.

Turns wristband session recordings plus momentary self-reports into
per-person mood classifiers: ingestion, signal conditioning, sliding-window
feature extraction (203 features), ground-truth interval construction,
RBF-SVM training, and evaluation with the supporting statistics.
"""

__version__ = "0.1.0"
