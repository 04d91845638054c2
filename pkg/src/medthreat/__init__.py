"""Threat-model-as-code toolkit for miniaturized wireless biomedical devices."""

__version__ = "0.1.0"
