"""Utilities: trace cache, run-directory artifacts and figure-data export."""
