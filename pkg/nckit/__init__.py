"""
nckit - Strong Noncontingency Toolkit.

Finite-model tooling for the logic of strong noncontingency and its
neighbours (box, noncontingency, essence):
- Formula parsing, rendering and translation between sublanguages
- Model checking, frame validity and entailment over finite Kripke frames
- Bisimulation checking, largest bisimulations and contraction
- Definable-set closure with distinguishing formulas
- Hilbert-style proof checking for the K-family of systems and LA
- Bounded satisfiability search with finite-model certification

Copyright (c) 2025 Tyler Zervas
Licensed under the MIT License
"""

from .__version__ import __author__, __version__
from .core.bisim import BisimKind, BisimRelation, check_bisimulation, contract, largest_bisimulation
from .core.config_manager import ConfigManager, Settings
from .core.formula import Formula, LanguageTag, parse, render
from .core.kripke import Frame, FrameProperty, Model
from .core.proof import SYSTEMS, ProofScript, check_line, check_script
from .core.sat import satisfiable
from .core.semantics import (
    definable_closure,
    entails_on_frame,
    satisfies,
    valid_on_frame,
    valid_on_model,
)
from .core.translate import to_blacktri, to_box, to_circ


__all__ = [
    "__author__",
    "__version__",
    "BisimKind",
    "BisimRelation",
    "ConfigManager",
    "Formula",
    "Frame",
    "FrameProperty",
    "LanguageTag",
    "Model",
    "ProofScript",
    "SYSTEMS",
    "Settings",
    "check_bisimulation",
    "check_line",
    "check_script",
    "contract",
    "definable_closure",
    "entails_on_frame",
    "largest_bisimulation",
    "parse",
    "render",
    "satisfiable",
    "satisfies",
    "to_blacktri",
    "to_box",
    "to_circ",
    "valid_on_frame",
    "valid_on_model",
]
