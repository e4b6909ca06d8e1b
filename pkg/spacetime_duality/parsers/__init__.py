"""Parsers of the plain-text formats read and written by ``spacetime_duality``."""
