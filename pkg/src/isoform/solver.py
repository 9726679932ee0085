"""SAT backends: an embedded CDCL solver and a DIMACS pipe to external solvers.

The embedded solver is a compact conflict-driven clause learner: two watched
literals (binary clauses kept in implication lists), first-UIP learning,
VSIDS-style activities, phase saving and Luby restarts. It is incremental:
clauses may be added between calls and learned clauses are kept.
"""

from __future__ import annotations

import heapq
import random
import shlex
import subprocess
import time
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

from isoform.encoder import Formula


class ResourceLimit(RuntimeError):
  """The conflict or time budget ran out before a verdict was reached."""


class ParseError(ValueError):
  pass


@dataclass(frozen=True)
class Budget:
  conflicts: int = 10_000_000
  seconds: float = 60.0


@dataclass(frozen=True)
class SolveResult:
  satisfiable: bool
  model: Optional[Dict[int, bool]] = None

  @property
  def true_vars(self) -> List[int]:
    return sorted(v for v, b in (self.model or {}).items() if b)


def check_model(clauses: Iterable[Sequence[int]], model: Dict[int, bool]) -> bool:
  """Independent clause-by-clause check of an assignment."""
  for clause in clauses:
    if not any(model.get(abs(x), False) == (x > 0) for x in clause):
      return False
  return True


def _luby(i: int) -> int:
  k = 1
  while (1 << k) - 1 < i:
    k += 1
  while (1 << k) - 1 != i:
    if i < (1 << (k - 1)):
      k -= 1
      continue
    i -= (1 << (k - 1)) - 1
    k = 1
    while (1 << k) - 1 < i:
      k += 1
  return 1 << (k - 1)


class EmbeddedSolver:
  """Incremental CDCL solver over DIMACS-style integer literals."""

  RESTART_BASE = 64

  def __init__(self, num_vars: int = 0, seed: int = 0):
    self.n = 0
    self.original: List[List[int]] = []
    self.clauses: List[List[int]] = []
    self.watches: List[List[int]] = []
    self.bins: List[List[tuple]] = []
    self.val: List[int] = []
    self.level: List[int] = []
    self.reason: List[int] = []
    self.phase: List[int] = []
    self.activity: List[float] = []
    self.trail: List[int] = []
    self.trail_lim: List[int] = []
    self.qhead = 0
    self.heap: List[tuple] = []
    self.inc = 1.0
    self.ok = True
    self.conflicts = 0
    self.decisions = 0
    self._rng = random.Random(seed)
    self._grow(num_vars)

  # internal literal encoding: 2*v for v, 2*v+1 for -v
  def _grow(self, num_vars: int) -> None:
    while self.n < num_vars:
      self.n += 1
      if self.n == 1:
        self.watches.extend([[], []])
        self.bins.extend([[], []])
        self.val.extend([0, 0])
        self.level.append(0)
        self.reason.append(-1)
        self.phase.append(1)
        self.activity.append(0.0)
      self.watches.extend([[], []])
      self.bins.extend([[], []])
      self.val.extend([0, 0])
      self.level.append(0)
      self.reason.append(-1)
      self.phase.append(1)  # prefer false
      act = self._rng.random() * 1e-5
      self.activity.append(act)
      heapq.heappush(self.heap, (-act, self.n))

  @staticmethod
  def _lit(x: int) -> int:
    return 2 * x if x > 0 else -2 * x + 1

  def add_clause(self, clause: Sequence[int]) -> None:
    clause = list(clause)
    self.original.append(clause)
    if not self.ok:
      return
    if clause:
      self._grow(max(abs(x) for x in clause))
    self._backtrack(0)
    lits = []
    for x in dict.fromkeys(clause):
      L = self._lit(x)
      if L ^ 1 in lits:
        return
      v = self.val[L]
      if v == 1:
        return
      if v == 0:
        lits.append(L)
    if not lits:
      self.ok = False
    elif len(lits) == 1:
      self._assign(lits[0], -1)
      if self._propagate() >= 0:
        self.ok = False
    else:
      self._attach(lits)

  def _attach(self, lits: List[int]) -> int:
    cid = len(self.clauses)
    self.clauses.append(lits)
    if len(lits) == 2:
      a, b = lits
      self.bins[a].append((b, cid))
      self.bins[b].append((a, cid))
    else:
      self.watches[lits[0]].append(cid)
      self.watches[lits[1]].append(cid)
    return cid

  def _assign(self, L: int, reason: int) -> None:
    self.val[L] = 1
    self.val[L ^ 1] = -1
    v = L >> 1
    self.level[v] = len(self.trail_lim)
    self.reason[v] = reason
    self.trail.append(L)

  def _propagate(self) -> int:
    """Unit propagation; returns a conflicting clause id or -1."""
    val = self.val
    clauses = self.clauses
    watches = self.watches
    bins = self.bins
    trail = self.trail
    level = self.level
    reason = self.reason
    dl = len(self.trail_lim)
    while self.qhead < len(trail):
      F = trail[self.qhead] ^ 1
      self.qhead += 1
      for other, cid in bins[F]:
        v = val[other]
        if v == 1:
          continue
        if v == -1:
          return cid
        val[other] = 1
        val[other ^ 1] = -1
        level[other >> 1] = dl
        reason[other >> 1] = cid
        trail.append(other)
      ws = watches[F]
      keep = []
      i = 0
      nws = len(ws)
      while i < nws:
        cid = ws[i]
        i += 1
        c = clauses[cid]
        if c[0] == F:
          c[0] = c[1]
          c[1] = F
        first = c[0]
        if val[first] == 1:
          keep.append(cid)
          continue
        for k in range(2, len(c)):
          if val[c[k]] != -1:
            c[1] = c[k]
            c[k] = F
            watches[c[1]].append(cid)
            break
        else:
          keep.append(cid)
          if val[first] == -1:
            keep.extend(ws[i:])
            watches[F] = keep
            return cid
          val[first] = 1
          val[first ^ 1] = -1
          level[first >> 1] = dl
          reason[first >> 1] = cid
          trail.append(first)
      watches[F] = keep
    return -1

  def _backtrack(self, lvl: int) -> None:
    if len(self.trail_lim) <= lvl:
      return
    start = self.trail_lim[lvl]
    val = self.val
    for L in self.trail[start:]:
      v = L >> 1
      val[L] = 0
      val[L ^ 1] = 0
      self.reason[v] = -1
      self.phase[v] = L & 1
      heapq.heappush(self.heap, (-self.activity[v], v))
    del self.trail[start:]
    del self.trail_lim[lvl:]
    self.qhead = len(self.trail)

  def _bump(self, v: int) -> None:
    a = self.activity[v] + self.inc
    self.activity[v] = a
    if a > 1e100:
      self.activity = [x * 1e-100 for x in self.activity]
      self.inc *= 1e-100
      self.heap = [(-self.activity[u], u) for u in range(1, self.n + 1)
                   if self.val[2 * u] == 0]
      heapq.heapify(self.heap)
    elif self.val[2 * v] == 0:
      heapq.heappush(self.heap, (-a, v))

  def _analyze(self, cid: int):
    seen = set()
    learnt = [0]
    counter = 0
    dl = len(self.trail_lim)
    idx = len(self.trail) - 1
    L = -1
    level = self.level
    while True:
      for q in self.clauses[cid]:
        if L != -1 and q == L:
          continue
        v = q >> 1
        if v in seen or level[v] == 0:
          continue
        seen.add(v)
        self._bump(v)
        if level[v] == dl:
          counter += 1
        else:
          learnt.append(q)
      while (self.trail[idx] >> 1) not in seen:
        idx -= 1
      L = self.trail[idx]
      idx -= 1
      seen.discard(L >> 1)
      counter -= 1
      if counter == 0:
        break
      cid = self.reason[L >> 1]
    learnt[0] = L ^ 1
    # drop literals implied by the rest of the clause (local minimization)
    marks = {q >> 1 for q in learnt}
    out = [learnt[0]]
    for q in learnt[1:]:
      r = self.reason[q >> 1]
      if r < 0 or any((p >> 1) not in marks and level[p >> 1] > 0
                      for p in self.clauses[r] if p != q ^ 1):
        out.append(q)
    if len(out) == 1:
      return out, 0
    best = max(range(1, len(out)), key=lambda k: level[out[k] >> 1])
    out[1], out[best] = out[best], out[1]
    return out, level[out[1] >> 1]

  def _decide(self) -> int:
    heap = self.heap
    while heap:
      _, v = heapq.heappop(heap)
      if self.val[2 * v] == 0:
        return 2 * v + self.phase[v]
    return -1

  def solve(self, budget: Optional[Budget] = None) -> SolveResult:
    budget = budget or Budget()
    if not self.ok:
      return SolveResult(False)
    self._backtrack(0)
    if self._propagate() >= 0:
      self.ok = False
      return SolveResult(False)
    deadline = time.monotonic() + budget.seconds
    start_conflicts = self.conflicts
    restart_no = 1
    limit = self.RESTART_BASE * _luby(restart_no)
    since_restart = 0
    while True:
      cid = self._propagate()
      if cid >= 0:
        self.conflicts += 1
        since_restart += 1
        if not self.trail_lim:
          self.ok = False
          return SolveResult(False)
        learnt, back = self._analyze(cid)
        self._backtrack(back)
        if len(learnt) == 1:
          self._assign(learnt[0], -1)
        else:
          self._assign(learnt[0], self._attach(learnt))
        self.inc *= 1.0 / 0.95
        used = self.conflicts - start_conflicts
        if used >= budget.conflicts:
          self._backtrack(0)
          raise ResourceLimit(f"conflict budget of {budget.conflicts} exhausted")
        if used % 256 == 0 and time.monotonic() > deadline:
          self._backtrack(0)
          raise ResourceLimit(f"time budget of {budget.seconds}s exhausted")
        continue
      if since_restart >= limit:
        self._backtrack(0)
        restart_no += 1
        limit = self.RESTART_BASE * _luby(restart_no)
        since_restart = 0
        continue
      L = self._decide()
      if L < 0:
        model = {v: self.val[2 * v] == 1 for v in range(1, self.n + 1)}
        self._backtrack(0)
        if not check_model(self.original, model):
          raise AssertionError("embedded solver produced a model violating a clause")
        return SolveResult(True, model)
      self.decisions += 1
      self.trail_lim.append(len(self.trail))
      self._assign(L, -1)


def export_dimacs(f: Formula) -> str:
  lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
  lines.extend(" ".join(str(x) for x in c) + (" 0" if c else "0") for c in f.clauses)
  return "\n".join(lines) + "\n"


def import_model(text: str) -> Dict[int, bool]:
  """Parse the ``v`` lines of a solver's output into ``{var: value}``."""
  model: Dict[int, bool] = {}
  found = False
  for line in text.splitlines():
    line = line.strip()
    if not line.startswith("v"):
      continue
    found = True
    for tok in line[1:].split():
      try:
        x = int(tok)
      except ValueError:
        raise ParseError(f"bad model token {tok!r}") from None
      if x != 0:
        model[abs(x)] = x > 0
  if not found:
    raise ParseError("no 'v' lines in solver output")
  return model


class DimacsPipeSolver:
  """Runs an external DIMACS solver per call: CNF on stdin, competition output on stdout."""

  def __init__(self, command: str, num_vars: int = 0):
    self.argv = shlex.split(command)
    self.num_vars = num_vars
    self.clauses: List[List[int]] = []

  def add_clause(self, clause: Sequence[int]) -> None:
    clause = list(clause)
    if clause:
      self.num_vars = max(self.num_vars, max(abs(x) for x in clause))
    self.clauses.append(clause)

  def solve(self, budget: Optional[Budget] = None) -> SolveResult:
    budget = budget or Budget()
    cnf = export_dimacs(Formula(self.num_vars, self.clauses, []))
    try:
      proc = subprocess.run(self.argv, input=cnf, capture_output=True, text=True,
                            timeout=budget.seconds)
    except subprocess.TimeoutExpired:
      raise ResourceLimit(f"external solver exceeded {budget.seconds}s") from None
    status = [ln.split(None, 1)[1].strip() for ln in proc.stdout.splitlines()
              if ln.startswith("s ")]
    if status == ["UNSATISFIABLE"]:
      return SolveResult(False)
    if status != ["SATISFIABLE"]:
      raise ResourceLimit(f"external solver gave no verdict: {status or proc.stderr.strip()}")
    model = import_model(proc.stdout)
    full = {v: model.get(v, False) for v in range(1, self.num_vars + 1)}
    if not check_model(self.clauses, full):
      raise AssertionError("external solver produced a model violating a clause")
    return SolveResult(True, full)


def make_backend(f: Formula, solver: str = "embedded", seed: int = 0):
  """Load ``f`` into a fresh backend named by ``embedded`` or ``dimacs-pipe:<cmd>``."""
  if solver == "embedded":
    backend = EmbeddedSolver(f.num_vars, seed=seed)
  elif solver.startswith("dimacs-pipe:"):
    backend = DimacsPipeSolver(solver[len("dimacs-pipe:"):], f.num_vars)
  else:
    raise ValueError(f"unknown solver {solver!r}")
  for c in f.clauses:
    backend.add_clause(c)
  return backend


def solve(f: Formula, solver: str = "embedded", budget: Optional[Budget] = None,
          seed: int = 0) -> SolveResult:
  return make_backend(f, solver, seed).solve(budget)


def solve_incremental(f: Formula, extra: Iterable[Sequence[int]], solver: str = "embedded",
                      budget: Optional[Budget] = None, seed: int = 0) -> SolveResult:
  backend = make_backend(f, solver, seed)
  for c in extra:
    backend.add_clause(c)
  return backend.solve(budget)
