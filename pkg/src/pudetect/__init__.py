"""Positive-unlabeled learning toolkit for flow-based DDoS detection."""

__version__ = "0.1.0"
