"""Polyforms: connected cell sets, halos, hole detection and enumeration."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple

from isoform.grid import (
    Cell, GridKind, RigidMotion, apply_motion, edge_neighbors, format_cell, geometry,
    parse_cell, point_group, point_neighbors)

CanonicalForm = Tuple[Cell, ...]


class PolyformError(ValueError):
  pass


class EmptyInput(PolyformError):
  pass


class DisconnectedCells(PolyformError):
  pass


class ShapeParseError(PolyformError):
  pass


def normalize(cells: Iterable[Cell]) -> FrozenSet[Cell]:
  """Translate so that the lexicographically least cell sits at ``q = r = 0``."""
  cells = list(cells)
  q, r = min(cells)[:2]
  return frozenset((c[0] - q, c[1] - r) + tuple(c[2:]) for c in cells)


def is_connected(grid: GridKind, cells: Iterable[Cell]) -> bool:
  cells = set(cells)
  if not cells:
    return False
  start = next(iter(cells))
  seen = {start}
  stack = [start]
  while stack:
    for n in edge_neighbors(grid, stack.pop()):
      if n in cells and n not in seen:
        seen.add(n)
        stack.append(n)
  return len(seen) == len(cells)


@dataclass(frozen=True)
class Polyform:
  """A translation-normalized, edge-connected set of cells."""

  grid: GridKind
  cells: FrozenSet[Cell]
  ordered: Tuple[Cell, ...] = field(init=False, repr=False, compare=False)

  def __post_init__(self):
    object.__setattr__(self, "ordered", tuple(sorted(self.cells)))

  def __len__(self) -> int:
    return len(self.cells)

  def image(self, m: RigidMotion) -> FrozenSet[Cell]:
    """Cells of ``m(T)`` (not normalized)."""
    return frozenset(apply_motion(self.grid, m, c) for c in self.ordered)

  def transformed(self, m: RigidMotion) -> "Polyform":
    return Polyform(self.grid, normalize(self.image(m)))


def make_polyform(grid: GridKind, cells: Iterable[Cell]) -> Polyform:
  cells = set(cells)
  if not cells:
    raise EmptyInput("a polyform needs at least one cell")
  if not is_connected(grid, cells):
    raise DisconnectedCells(f"cells are not edge-connected: {sorted(cells)}")
  return Polyform(grid, normalize(cells))


def halo(T: Polyform) -> Set[Cell]:
  """Cells outside ``T`` sharing at least one boundary point with ``T``."""
  out: Set[Cell] = set()
  for c in T.ordered:
    out.update(point_neighbors(T.grid, c))
  out.difference_update(T.cells)
  return out


def _box_cells(grid: GridKind, cells: Iterable[Cell], pad: int) -> Set[Cell]:
  g = geometry(grid)
  cells = list(cells)
  qs = [c[0] for c in cells]
  rs = [c[1] for c in cells]
  return {g.join(q, r, k)
          for q in range(min(qs) - pad, max(qs) + pad + 1)
          for r in range(min(rs) - pad, max(rs) + pad + 1)
          for k in range(g.ntypes)}


def enclosed_regions(grid: GridKind, cells: Iterable[Cell]) -> List[Set[Cell]]:
  """Bounded components of the complement, flood-filled through shared edges."""
  cells = set(cells)
  free = _box_cells(grid, cells, 1) - cells
  qmin = min(c[0] for c in cells) - 1
  # the frame column q = qmin is outside, so it is flooded first
  order = sorted(free, key=lambda c: (c[0] != qmin, c))
  done: Set[Cell] = set()
  regions: List[Set[Cell]] = []
  for start in order:
    if start in done:
      continue
    seen = {start}
    stack = [start]
    while stack:
      for n in edge_neighbors(grid, stack.pop()):
        if n in free and n not in seen:
          seen.add(n)
          stack.append(n)
    done |= seen
    regions.append(seen)
  return regions[1:]


def is_simply_connected(grid: GridKind, cells: Iterable[Cell]) -> bool:
  """Whether the union of the cells is a topological disk.

  The cells must be edge-connected and the complement, flood-filled through
  shared edges only, must form a single region. Complement regions meeting
  at a single point therefore count as separate, so a patch that pinches
  around a hole is rejected. For these edge-to-edge grids the two tests
  together exclude every pinch vertex.
  """
  cells = set(cells)
  return is_connected(grid, cells) and not enclosed_regions(grid, cells)


def canonical(T: Polyform) -> CanonicalForm:
  """Least sorted cell tuple over all point-group images of ``T``."""
  return min(tuple(sorted(normalize(T.image(m)))) for m in point_group(T.grid))


def enumerate_free(grid: GridKind, n: int) -> List[Polyform]:
  """One representative per free polyform with ``n`` cells, sorted by canonical form.

  Grows every ``(n-1)``-representative by one edge-adjacent cell and
  deduplicates by canonical form. Every polyform has a cell whose removal
  leaves it connected, and some point-group image of the remainder is a
  representative, so nothing is missed.
  """
  if n < 1:
    raise ValueError("n must be at least 1")
  g = geometry(grid)
  seed = Polyform(grid, frozenset([g.join(0, 0, 0)]))
  level: Dict[CanonicalForm, Polyform] = {canonical(seed): seed}
  for _ in range(n - 1):
    nxt: Dict[CanonicalForm, Polyform] = {}
    for P in level.values():
      for c in P.ordered:
        for nb in edge_neighbors(grid, c):
          if nb in P.cells:
            continue
          Q = Polyform(grid, normalize(P.cells | {nb}))
          key = canonical(Q)
          if key not in nxt:
            nxt[key] = Polyform(grid, frozenset(key))
    level = nxt
  return [level[k] for k in sorted(level)]


def parse_shape(text: str) -> Polyform:
  """Read the two-line shape format: ``grid=<kind>`` then cell tokens."""
  lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
  if not lines or not lines[0].startswith("grid="):
    raise ShapeParseError("first line must be grid=<square|hex|iamond|kite>")
  try:
    grid = GridKind.parse(lines[0][len("grid="):])
  except ValueError as e:
    raise ShapeParseError(str(e)) from None
  body = re.sub(r"\s*,\s*", ",", " ".join(lines[1:]))
  cells = []
  for token in body.split():
    try:
      cells.append(parse_cell(grid, token))
    except ValueError:
      raise ShapeParseError(f"malformed cell token {token!r}") from None
  try:
    return make_polyform(grid, cells)
  except PolyformError as e:
    raise ShapeParseError(str(e)) from None


def format_shape(T: Polyform) -> str:
  return (f"grid={T.grid.value}\n"
          + " ".join(format_cell(T.grid, c) for c in T.ordered) + "\n")
