"""Core logic: formulas, Kripke structures, semantics, bisimulation, proofs and search."""
