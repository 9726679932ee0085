"""Transformed copies of a shape that can neighbour it in a surround."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

from isoform.grid import Cell, RigidMotion, geometry, point_group
from isoform.polyform import Polyform, halo


@dataclass(frozen=True)
class Placement:
  """The copy ``g(T)``. Identity is the motion, not the cell set."""

  motion: RigidMotion
  cells: FrozenSet[Cell] = field(compare=False)
  rim: FrozenSet[Cell] = field(compare=False, repr=False)  # halo of the copy
  index: int = field(compare=False, default=-1)


def overlap(a: Placement, b: Placement) -> bool:
  return not a.cells.isdisjoint(b.cells)


def adjacent(a: Placement, b: Placement) -> bool:
  return a.cells.isdisjoint(b.cells) and not a.rim.isdisjoint(b.cells)


@dataclass
class CandidateSet:
  center: Polyform
  halo: FrozenSet[Cell]
  placements: List[Placement]
  lookup: Dict[RigidMotion, Placement]
  covering: Dict[Cell, List[Placement]]

  def __len__(self) -> int:
    return len(self.placements)

  def __iter__(self) -> Iterator[Placement]:
    return iter(self.placements)


def find_by_motion(cs: CandidateSet, m: RigidMotion) -> Optional[Placement]:
  return cs.lookup.get(m)


def make_placement(T: Polyform, m: RigidMotion, center_halo: FrozenSet[Cell],
                   index: int = -1) -> Placement:
  g = geometry(T.grid)
  return Placement(m, frozenset(g.apply(m, c) for c in T.ordered),
                   frozenset(g.apply(m, c) for c in center_halo), index)


def candidate_neighbors(T: Polyform) -> CandidateSet:
  """Every ``g(T)`` disjoint from ``T`` that occupies at least one halo cell.

  For each point-group element the translations are solved for directly:
  one per (cell of the rotated shape, halo cell of the same type) pair.
  Output is sorted by motion, so it is deterministic.
  """
  g = geometry(T.grid)
  ring = frozenset(halo(T))
  motions: Set[RigidMotion] = set()
  for p in point_group(T.grid):
    rotated = [g.apply(p, c) for c in T.ordered]
    for u in rotated:
      for v in ring:
        if u[2:] == v[2:]:
          motions.add(RigidMotion(p.point, (v[0] - u[0], v[1] - u[1])))
  placements: List[Placement] = []
  for m in sorted(motions):
    cells = frozenset(g.apply(m, c) for c in T.ordered)
    if cells.isdisjoint(T.cells):
      placements.append(Placement(m, cells, frozenset(g.apply(m, c) for c in ring),
                                  len(placements)))
  covering: Dict[Cell, List[Placement]] = {c: [] for c in sorted(ring)}
  for P in placements:
    for c in P.cells:
      if c in covering:
        covering[c].append(P)
  return CandidateSet(T, ring, placements, {P.motion: P for P in placements}, covering)


def _near(cs: CandidateSet) -> Dict[Cell, List[Placement]]:
  by_cell: Dict[Cell, List[Placement]] = {}
  for P in cs.placements:
    for c in P.cells:
      by_cell.setdefault(c, []).append(P)
  return by_cell


def overlap_pairs(cs: CandidateSet) -> List[Tuple[Placement, Placement]]:
  """Unordered overlapping pairs ``(a, b)`` with ``a.index < b.index``."""
  by_cell = _near(cs)
  out: Set[Tuple[int, int]] = set()
  for group in by_cell.values():
    for i, a in enumerate(group):
      for b in group[i + 1:]:
        out.add((a.index, b.index))
  P = cs.placements
  return [(P[i], P[j]) for i, j in sorted(out)]


def adjacent_pairs(cs: CandidateSet) -> List[Tuple[Placement, Placement]]:
  """Unordered adjacent (touching, disjoint) pairs with ``a.index < b.index``."""
  by_cell = _near(cs)
  out: Set[Tuple[int, int]] = set()
  for a in cs.placements:
    for c in a.rim:
      for b in by_cell.get(c, ()):
        if b.index > a.index and a.cells.isdisjoint(b.cells):
          out.add((a.index, b.index))
  P = cs.placements
  return [(P[i], P[j]) for i, j in sorted(out)]
