"""CNF encodings of surroundability and isohedral surroundability."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

from isoform.grid import IDENTITY, compose, invert, is_involution
from isoform.placement import CandidateSet, Placement, adjacent_pairs, overlap_pairs
from isoform.polyform import Polyform

Clause = List[int]


@dataclass
class Formula:
  """Clauses over variables ``1..num_vars``; variable ``i`` is ``placements[i-1]``."""

  num_vars: int
  clauses: List[Clause]
  placements: List[Placement]
  stats: Dict[str, int] = field(default_factory=dict)

  @property
  def unsatisfiable_by_construction(self) -> bool:
    return any(not c for c in self.clauses)

  def copy(self) -> "Formula":
    return Formula(self.num_vars, [list(c) for c in self.clauses], self.placements,
                   dict(self.stats))

  def append(self, clause: Sequence[int]) -> None:
    self.clauses.append(list(clause))

  def decode(self, true_vars: Iterable[int]) -> List[Placement]:
    return [self.placements[v - 1] for v in sorted(true_vars)]


def var(P: Placement) -> int:
  return P.index + 1


def build_surround_formula(T: Polyform, cs: CandidateSet) -> Formula:
  """Coverage (one at-least-one clause per halo cell) plus pairwise exclusion.

  A halo cell nobody can cover yields an empty clause, which makes the
  formula unsatisfiable outright.
  """
  clauses: List[Clause] = []
  for cell in sorted(cs.halo):
    clauses.append([var(P) for P in cs.covering[cell]])
  coverage = len(clauses)
  for a, b in overlap_pairs(cs):
    clauses.append([-var(a), -var(b)])
  return Formula(len(cs.placements), clauses, list(cs.placements),
                 {"coverage": coverage, "exclusion": len(clauses) - coverage})


def add_isohedral_clauses(f: Formula, T: Polyform, cs: CandidateSet,
                          opt_clauses: bool = True) -> Formula:
  """Restrict ``f`` to surrounds whose members can all be extended.

  * adjacent ``Ti``, ``Tj``: ``gi o gj (T)`` must be in the surround when it is a
    candidate; when it overlaps ``T`` the pair is forbidden outright.
  * ``Ti`` with ``gi`` not an involution: ``gi^-1 (T)`` must be in the surround.
  * with ``opt_clauses``: adjacent ``Ti``, ``Tj`` also pull in
    ``gi o gj^-1 (T)`` and ``gj o gi^-1 (T)`` when those are candidates.
  """
  grid = T.grid
  out = f.copy()
  seen = {tuple(c) for c in out.clauses}
  counts = {"compose": 0, "compose_conflict": 0, "compose_deferred": 0,
            "inverse": 0, "inverse_unit": 0, "optional": 0}

  def emit(kind: str, lits: Sequence[int]) -> None:
    if any(-x in lits for x in lits):
      return
    key = tuple(dict.fromkeys(lits))
    if key not in seen:
      seen.add(key)
      out.clauses.append(list(key))
      counts[kind] += 1

  pairs = adjacent_pairs(cs)
  for a, b in pairs:
    for Ti, Tj in ((a, b), (b, a)):
      m = compose(grid, Ti.motion, Tj.motion)
      if m == IDENTITY:
        continue
      Tk = cs.lookup.get(m)
      if Tk is not None:
        emit("compose", [-var(Ti), -var(Tj), var(Tk)])
      elif not T.image(m).isdisjoint(T.cells):
        emit("compose_conflict", [-var(Ti), -var(Tj)])
      else:
        counts["compose_deferred"] += 1

  for Ti in cs.placements:
    if is_involution(grid, Ti.motion):
      continue
    Tk = cs.lookup.get(invert(grid, Ti.motion))
    if Tk is not None:
      emit("inverse", [-var(Ti), var(Tk)])
    else:
      emit("inverse_unit", [-var(Ti)])

  if opt_clauses:
    for Ti, Tj in pairs:
      for m in (compose(grid, Ti.motion, invert(grid, Tj.motion)),
                compose(grid, Tj.motion, invert(grid, Ti.motion))):
        Tk = cs.lookup.get(m)
        if Tk is not None and Tk.index not in (Ti.index, Tj.index):
          emit("optional", [-var(Ti), -var(Tj), var(Tk)])

  out.stats.update(counts)
  return out


def blocking_clause(model: Iterable[int]) -> Clause:
  """Negation of exactly the given true variables."""
  true_vars = sorted(set(model))
  if not true_vars:
    raise ValueError("cannot block an empty model")
  return [-v for v in true_vars]
