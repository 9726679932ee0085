"""Surround search, geometric verification and classification."""

from __future__ import annotations

import enum
import json
import time
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from isoform.encoder import Formula, add_isohedral_clauses, blocking_clause, build_surround_formula
from isoform.grid import (
    IDENTITY, Cell, GridKind, RigidMotion, compose, edge_neighbors, format_cell, geometry,
    parse_cell)
from isoform.placement import CandidateSet, Placement, candidate_neighbors, make_placement
from isoform.polyform import Polyform, enclosed_regions, halo, is_simply_connected, make_polyform
from isoform.solver import Budget, ResourceLimit, make_backend


@dataclass(frozen=True)
class Surround:
  center: Polyform
  members: Tuple[Placement, ...]

  def patch_cells(self) -> FrozenSet[Cell]:
    cells = set(self.center.cells)
    for P in self.members:
      cells |= P.cells
    return frozenset(cells)


class Verdict(enum.Enum):
  NOT_SURROUNDABLE = "not-surroundable"
  ISOHEDRAL = "isohedral"
  SURROUNDABLE_NOT_ISOHEDRAL = "surroundable-not-isohedral"


@dataclass
class Classification:
  verdict: Verdict
  surround: Optional[Surround] = None
  stats: Dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class Options:
  solver: str = "embedded"
  opt_clauses: bool = True
  seed: int = 0
  budget: Budget = Budget()


def is_valid_surround(T: Polyform, members: Sequence[Placement]) -> bool:
  """Members cover the halo, overlap neither each other nor ``T``, and the patch is a disk."""
  used = set(T.cells)
  for P in members:
    if not used.isdisjoint(P.cells):
      return False
    used |= P.cells
  return halo(T) <= used and is_simply_connected(T.grid, used)


def verify_extendable(T: Polyform, s: Surround, member: Placement) -> bool:
  """Whether ``member`` survives having a copy of ``s`` placed around it.

  Every ``g_i o g_j (T)`` must either be one of ``T`` and the members of ``s``
  (same motion) or share no cell with any of them.
  """
  owner: Dict[Cell, RigidMotion] = {c: IDENTITY for c in T.cells}
  for P in s.members:
    for c in P.cells:
      owner[c] = P.motion
  grid = T.grid
  for other in s.members:
    m = compose(grid, member.motion, other.motion)
    for c in T.image(m):
      o = owner.get(c)
      if o is not None and o != m:
        return False
  return True


def hole_blockers(T: Polyform, members: Sequence[Placement]) -> Optional[List[Placement]]:
  """Members walling in a hole of the patch, or ``None`` if there is no hole.

  With the halo fully covered no candidate fits inside an enclosed region,
  so every surround containing these members has the same hole. The
  smallest such wall over all holes is returned.
  """
  patch = set(T.cells)
  for P in members:
    patch |= P.cells
  best = None
  for region in enclosed_regions(T.grid, patch):
    border = {n for c in region for n in edge_neighbors(T.grid, c)} - region
    wall = [P for P in members if not P.cells.isdisjoint(border)]
    if best is None or len(wall) < len(best):
      best = wall
  return best


def _search(T: Polyform, f: Formula, opts: Options, extendable: bool,
            stats: Dict[str, int], prefix: str) -> Optional[Surround]:
  if f.unsatisfiable_by_construction:
    return None
  backend = make_backend(f, opts.solver, opts.seed)
  deadline = time.monotonic() + opts.budget.seconds
  while True:
    left = deadline - time.monotonic()
    if left <= 0:
      raise ResourceLimit(f"time budget of {opts.budget.seconds}s exhausted")
    result = backend.solve(replace(opts.budget, seconds=left))
    stats[prefix + "iterations"] += 1
    if not result.satisfiable:
      return None
    true_vars = result.true_vars
    s = Surround(T, tuple(f.decode(true_vars)))
    wall = hole_blockers(T, s.members)
    if wall is not None:
      stats[prefix + "hole_rejections"] += 1
      # a wall made of T alone cannot happen for a surround of a hole-free T;
      # fall back to the whole model so the loop still progresses
      block = [P.index + 1 for P in wall] or true_vars
    elif not is_valid_surround(T, s.members):
      raise AssertionError("solver model is not a surround")
    elif extendable and not all(verify_extendable(T, s, P) for P in s.members):
      stats["verification_rejections"] += 1
      block = true_vars
    else:
      return s
    backend.add_clause(blocking_clause(block))


def _prepare(T: Polyform, stats: Dict[str, int]) -> Tuple[CandidateSet, Formula]:
  cs = candidate_neighbors(T)
  base = build_surround_formula(T, cs)
  stats.setdefault("candidates", len(cs))
  stats.setdefault("halo", len(cs.halo))
  stats.setdefault("surround_clauses", len(base.clauses))
  for key in ("surround_iterations", "surround_hole_rejections", "isohedral_iterations",
              "isohedral_hole_rejections", "verification_rejections"):
    stats.setdefault(key, 0)
  return cs, base


def find_surround(T: Polyform, opts: Options = Options(),
                  stats: Optional[Dict[str, int]] = None) -> Optional[Surround]:
  """First simply connected surround the solver produces, or ``None``."""
  stats = {} if stats is None else stats
  cs, base = _prepare(T, stats)
  return _search(T, base, opts, False, stats, "surround_")


def is_isohedral(T: Polyform, opts: Options = Options(),
                 stats: Optional[Dict[str, int]] = None) -> Optional[Surround]:
  """A surround in which every member is extendable, or ``None``."""
  stats = {} if stats is None else stats
  cs, base = _prepare(T, stats)
  f = add_isohedral_clauses(base, T, cs, opt_clauses=opts.opt_clauses)
  stats["isohedral_clauses"] = len(f.clauses)
  stats["deferred_compositions"] = f.stats["compose_deferred"]
  return _search(T, f, opts, True, stats, "isohedral_")


def classify(T: Polyform, opts: Options = Options()) -> Classification:
  stats: Dict[str, int] = {}
  example = find_surround(T, opts, stats)
  if example is None:
    return Classification(Verdict.NOT_SURROUNDABLE, None, stats)
  witness = is_isohedral(T, opts, stats)
  if witness is not None:
    return Classification(Verdict.ISOHEDRAL, witness, stats)
  return Classification(Verdict.SURROUNDABLE_NOT_ISOHEDRAL, example, stats)


class WitnessError(ValueError):
  pass


def witness_to_json(c: Classification, T: Polyform) -> str:
  doc = {
      "grid": T.grid.value,
      "verdict": c.verdict.value,
      "center": [format_cell(T.grid, x) for x in T.ordered],
      "members": [{"point": P.motion.point, "translation": list(P.motion.translation)}
                  for P in (c.surround.members if c.surround else ())],
  }
  return json.dumps(doc, indent=1) + "\n"


def witness_from_json(text: str) -> Tuple[Verdict, Surround]:
  try:
    doc = json.loads(text)
    grid = GridKind.parse(doc["grid"])
    verdict = Verdict(doc["verdict"])
    T = make_polyform(grid, [parse_cell(grid, tok) for tok in doc["center"]])
    ring = frozenset(halo(T))
    order = geometry(grid).order
    members = []
    for m in doc["members"]:
      p = int(m["point"])
      if not 0 <= p < order:
        raise ValueError(f"point index {p} out of range")
      dx, dy = (int(v) for v in m["translation"])
      members.append(make_placement(T, RigidMotion(p, (dx, dy)), ring))
  except (KeyError, TypeError, ValueError, IndexError) as e:
    raise WitnessError(f"malformed witness: {e}") from None
  if T.ordered != tuple(sorted(parse_cell(grid, tok) for tok in doc["center"])):
    raise WitnessError("witness centre is not translation-normalized")
  return verdict, Surround(T, tuple(members))
