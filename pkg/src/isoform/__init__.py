"""Decide whether a polyform tiles the plane isohedrally, via SAT."""

from isoform.decide import (
    Classification, Options, Surround, Verdict, classify, find_surround, is_isohedral,
    verify_extendable)
from isoform.grid import GridKind, RigidMotion
from isoform.polyform import Polyform, enumerate_free, make_polyform, parse_shape

__all__ = [
    "Classification", "GridKind", "Options", "Polyform", "RigidMotion", "Surround", "Verdict",
    "classify", "enumerate_free", "find_surround", "is_isohedral", "make_polyform",
    "parse_shape", "verify_extendable",
]
