"""Interpreters and differential verification."""

from mfmod.verify.check import Mismatch, VerificationReport, mismatch_listing, verify
from mfmod.verify.interp_cobol import interpret_cobol
from mfmod.verify.interp_ir import interpret_ir
from mfmod.verify.testgen import generate_tests
from mfmod.verify.trace import STEP_BUDGET, ExecutionTrace, InterpretationError, TestCase

__all__ = [
    "STEP_BUDGET",
    "ExecutionTrace",
    "InterpretationError",
    "Mismatch",
    "TestCase",
    "VerificationReport",
    "generate_tests",
    "interpret_cobol",
    "interpret_ir",
    "mismatch_listing",
    "verify",
]
