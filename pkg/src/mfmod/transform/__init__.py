"""Lowering to ModernIR and selection among candidate translations."""

from mfmod.transform.ir import ModernIR
from mfmod.transform.lower import TransformCandidate, lower
from mfmod.transform.mir import MirSyntaxError, parse_mir, render
from mfmod.transform.scoring import DeviationScores, TransformWeights, score_candidate, select

__all__ = [
    "DeviationScores",
    "MirSyntaxError",
    "ModernIR",
    "TransformCandidate",
    "TransformWeights",
    "lower",
    "parse_mir",
    "render",
    "score_candidate",
    "select",
]
