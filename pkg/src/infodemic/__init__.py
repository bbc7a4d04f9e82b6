"""Vaccine-conversation monitoring: ingest social feeds, rate linked sources, aggregate, serve."""

__version__ = "0.1.0"
