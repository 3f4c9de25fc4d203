"""Batch modernization toolchain for a COBOL-85 subset."""

__version__ = "0.1.0"
