"""COBOL-subset parsing and semantic validation."""

from mfmod.frontend.nodes import DataItem, Paragraph, Program
from mfmod.frontend.parser import parse, parse_data_fragment, parse_text
from mfmod.frontend.picture import PictureSpec, UnsupportedPicture, parse_picture
from mfmod.frontend.source import Diagnostic, FrontendError, SourceUnit
from mfmod.frontend.unparse import unparse
from mfmod.frontend.validate import validate

__all__ = [
    "DataItem",
    "Diagnostic",
    "FrontendError",
    "Paragraph",
    "PictureSpec",
    "Program",
    "SourceUnit",
    "UnsupportedPicture",
    "parse",
    "parse_data_fragment",
    "parse_picture",
    "parse_text",
    "unparse",
    "validate",
]
