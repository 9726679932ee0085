"""Command line: ``isoform classify|count|export-dimacs|render``."""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
from collections import Counter
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from isoform.decide import (
    Classification, Options, Surround, Verdict, WitnessError, classify, witness_from_json,
    witness_to_json)
from isoform.encoder import Formula, add_isohedral_clauses, build_surround_formula
from isoform.grid import (
    Cell, GridKind, RigidMotion, cell_vertices, format_cell, parse_cell, to_cartesian)
from isoform.placement import candidate_neighbors, make_placement
from isoform.polyform import (
    Polyform, ShapeParseError, enumerate_free, halo, make_polyform, parse_shape)
from isoform.solver import Budget, ResourceLimit, export_dimacs

EXIT_PARSE = 2
EXIT_LIMIT = 3

COUNT_COLUMNS = ("size", "total", "not_surroundable", "isohedral", "surroundable_not_isohedral")


class CliError(Exception):
  def __init__(self, message: str, code: int):
    super().__init__(message)
    self.code = code


def _options(args) -> Options:
  return Options(solver=args.solver, opt_clauses=args.opt_clauses == "on", seed=args.seed,
                 budget=Budget(conflicts=args.budget_conflicts, seconds=args.budget_seconds))


def _read_shape(path: str) -> Polyform:
  try:
    with open(path) as fh:
      return parse_shape(fh.read())
  except OSError as e:
    raise CliError(f"cannot read {path}: {e.strerror}", EXIT_PARSE) from None
  except ShapeParseError as e:
    raise CliError(f"{path}: {e}", EXIT_PARSE) from None


def classify_report(T: Polyform, c: Classification) -> str:
  s = c.stats
  rows = [
      ("grid", T.grid.value),
      ("cells", len(T)),
      ("verdict", c.verdict.value),
      ("halo", s.get("halo", 0)),
      ("candidates", s.get("candidates", 0)),
      ("variables", s.get("candidates", 0)),
      ("surround_clauses", s.get("surround_clauses", 0)),
      ("isohedral_clauses", s.get("isohedral_clauses", 0)),
      ("surround_iterations", s.get("surround_iterations", 0)),
      ("isohedral_iterations", s.get("isohedral_iterations", 0)),
      ("hole_rejections", s.get("surround_hole_rejections", 0)
       + s.get("isohedral_hole_rejections", 0)),
      ("verification_rejections", s.get("verification_rejections", 0)),
      ("members", len(c.surround.members) if c.surround else 0),
  ]
  return "".join(f"{k}: {v}\n" for k, v in rows)


def cmd_classify(args) -> int:
  T = _read_shape(args.input)
  c = classify(T, _options(args))
  sys.stdout.write(classify_report(T, c))
  if args.out:
    with open(args.out, "w") as fh:
      fh.write(witness_to_json(c, T))
  return 0


def _classify_one(job: Tuple[Polyform, Options]) -> Tuple[str, int]:
  T, opts = job
  c = classify(T, opts)
  return c.verdict.value, c.stats.get("verification_rejections", 0)


def count_rows(grid: GridKind, sizes: Iterable[int], opts: Options, jobs: int = 1):
  """Yield ``(size, Counter, rejections)`` per size; order is deterministic."""
  for n in sizes:
    shapes = enumerate_free(grid, n)
    work = [(T, opts) for T in shapes]
    if jobs > 1:
      with concurrent.futures.ProcessPoolExecutor(jobs) as pool:
        results = list(pool.map(_classify_one, work, chunksize=4))
    else:
      results = [_classify_one(w) for w in work]
    tally = Counter(v for v, _ in results)
    tally["total"] = len(shapes)
    yield n, tally, sum(r for _, r in results)


def _csv_row(n: int, tally: Counter) -> str:
  values = [n, tally["total"], tally[Verdict.NOT_SURROUNDABLE.value],
            tally[Verdict.ISOHEDRAL.value], tally[Verdict.SURROUNDABLE_NOT_ISOHEDRAL.value]]
  return ",".join(str(v) for v in values) + "\n"


def _parse_sizes(text: str) -> List[int]:
  try:
    if "-" in text:
      lo, hi = (int(x) for x in text.split("-", 1))
    else:
      lo = hi = int(text)
  except ValueError:
    raise CliError(f"bad --size {text!r}; expected N or A-B", EXIT_PARSE) from None
  if lo < 1 or hi < lo:
    raise CliError(f"bad --size {text!r}; sizes start at 1", EXIT_PARSE)
  return list(range(lo, hi + 1))


def cmd_count(args) -> int:
  grid = GridKind.parse(args.grid)
  sizes = _parse_sizes(args.size)
  out = open(args.out, "w") if args.out else sys.stdout
  code = 0
  try:
    out.write(",".join(COUNT_COLUMNS) + "\n")
    try:
      for n, tally, rejections in count_rows(grid, sizes, _options(args), args.jobs):
        out.write(_csv_row(n, tally))
        out.flush()
        if rejections:
          print(f"size {n}: {rejections} verification rejections", file=sys.stderr)
    except ResourceLimit as e:
      out.write(f"# partial: {e}\n")
      code = EXIT_LIMIT
  finally:
    if out is not sys.stdout:
      out.close()
  return code


def sidecar_json(T: Polyform, f: Formula, which: str) -> str:
  doc = {
      "grid": T.grid.value,
      "center": [format_cell(T.grid, c) for c in T.ordered],
      "formula": which,
      "variables": {str(P.index + 1): {"point": P.motion.point,
                                       "translation": list(P.motion.translation)}
                    for P in f.placements},
  }
  return json.dumps(doc, indent=1) + "\n"


def surround_from_sidecar(sidecar: str, model: Dict[int, bool]) -> Surround:
  """Rebuild the surround chosen by an external solver's model."""
  doc = json.loads(sidecar)
  grid = GridKind.parse(doc["grid"])
  T = make_polyform(grid, [parse_cell(grid, tok) for tok in doc["center"]])
  ring = frozenset(halo(T))
  members = []
  for key, m in sorted(doc["variables"].items(), key=lambda kv: int(kv[0])):
    if model.get(int(key)):
      motion = RigidMotion(m["point"], (m["translation"][0], m["translation"][1]))
      members.append(make_placement(T, motion, ring, int(key) - 1))
  return Surround(T, tuple(members))


def export_formula(T: Polyform, which: str, opt_clauses: bool = True) -> Formula:
  cs = candidate_neighbors(T)
  f = build_surround_formula(T, cs)
  if which == "isohedral":
    f = add_isohedral_clauses(f, T, cs, opt_clauses=opt_clauses)
  return f


def cmd_export_dimacs(args) -> int:
  T = _read_shape(args.input)
  f = export_formula(T, args.which, args.opt_clauses == "on")
  out = args.out or "formula.cnf"
  with open(out, "w") as fh:
    fh.write(export_dimacs(f))
  with open(out + ".vars.json", "w") as fh:
    fh.write(sidecar_json(T, f, args.which))
  print(f"wrote {out} ({f.num_vars} variables, {len(f.clauses)} clauses) and {out}.vars.json")
  return 0


def tile_outline(grid: GridKind, cells: Iterable[Cell]) -> List[List[Tuple[Fraction, Fraction]]]:
  """Boundary loops of a union of cells, from the cells' exact vertices."""
  edges = {}
  for c in cells:
    vs = cell_vertices(grid, c)
    for a, b in zip(vs, vs[1:] + vs[:1]):
      if (b, a) in edges:
        del edges[(b, a)]
      else:
        edges[(a, b)] = True
  nxt = {}
  for a, b in edges:
    nxt.setdefault(a, []).append(b)
  loops = []
  while nxt:
    start = min(nxt)
    loop = [start]
    cur = start
    while True:
      b = nxt[cur].pop()
      if not nxt[cur]:
        del nxt[cur]
      if b == start:
        break
      loop.append(b)
      cur = b
    loops.append(loop)
  return loops


def render_svg(s: Surround, scale: float = 40.0) -> str:
  grid = s.center.grid
  tiles = [("center", s.center.cells)] + [("member", P.cells) for P in s.members]
  paths = []
  xs: List[float] = []
  ys: List[float] = []
  for kind, cells in tiles:
    parts = []
    for loop in tile_outline(grid, cells):
      pts = [to_cartesian(grid, p) for p in loop]
      xs.extend(x for x, _ in pts)
      ys.extend(y for _, y in pts)
      parts.append("M " + " L ".join(f"{x * scale + 0.0:.3f} {-y * scale + 0.0:.3f}"
                                     for x, y in pts) + " Z")
    paths.append((kind, " ".join(parts)))
  pad = scale * 0.5
  x0, x1 = min(xs) * scale - pad, max(xs) * scale + pad
  y0, y1 = -max(ys) * scale - pad, -min(ys) * scale + pad
  out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.3f} {y0:.3f} '
         f'{x1 - x0:.3f} {y1 - y0:.3f}">\n']
  fill = {"center": "#e07a5f", "member": "#81b29a"}
  for i, (kind, d) in enumerate(paths):
    out.append(f'<path class="tile {kind}" data-index="{i}" d="{d}" fill="{fill[kind]}" '
               f'fill-rule="evenodd" stroke="#222" stroke-width="1.5"/>\n')
  out.append("</svg>\n")
  return "".join(out)


def cmd_render(args) -> int:
  try:
    with open(args.input) as fh:
      _, s = witness_from_json(fh.read())
  except OSError as e:
    raise CliError(f"cannot read {args.input}: {e.strerror}", EXIT_PARSE) from None
  except WitnessError as e:
    raise CliError(f"{args.input}: {e}", EXIT_PARSE) from None
  svg = render_svg(s)
  if args.out:
    with open(args.out, "w") as fh:
      fh.write(svg)
  else:
    sys.stdout.write(svg)
  return 0


def build_parser() -> argparse.ArgumentParser:
  common = argparse.ArgumentParser(add_help=False)
  common.add_argument("--solver", default="embedded",
                      help="embedded or dimacs-pipe:<command>")
  common.add_argument("--opt-clauses", choices=("on", "off"), default="on")
  common.add_argument("--seed", type=int, default=0)
  common.add_argument("--budget-conflicts", type=int, default=10_000_000)
  common.add_argument("--budget-seconds", type=float, default=60.0)

  p = argparse.ArgumentParser(prog="isoform",
                              description="Decide isohedral tiling of polyforms with SAT.")
  sub = p.add_subparsers(dest="command", required=True)

  c = sub.add_parser("classify", parents=[common], help="classify one shape file")
  c.add_argument("--in", dest="input", required=True)
  c.add_argument("--out", help="write the witness as JSON")
  c.set_defaults(func=cmd_classify)

  n = sub.add_parser("count", parents=[common], help="tabulate verdicts over free polyforms")
  n.add_argument("--grid", required=True, choices=[g.value for g in GridKind])
  n.add_argument("--size", required=True, help="N or A-B")
  n.add_argument("--out", help="CSV output path (default stdout)")
  n.add_argument("--jobs", type=int, default=1)
  n.set_defaults(func=cmd_count)

  e = sub.add_parser("export-dimacs", parents=[common], help="write CNF plus variable map")
  e.add_argument("--in", dest="input", required=True)
  e.add_argument("--which", choices=("surround", "isohedral"), default="isohedral")
  e.add_argument("--out")
  e.set_defaults(func=cmd_export_dimacs)

  r = sub.add_parser("render", help="draw a witness as SVG")
  r.add_argument("--in", dest="input", required=True)
  r.add_argument("--out")
  r.set_defaults(func=cmd_render)
  return p


def main(argv: Optional[Sequence[str]] = None) -> int:
  args = build_parser().parse_args(argv)
  try:
    return args.func(args)
  except CliError as e:
    print(f"isoform: error: {e}", file=sys.stderr)
    return e.code
  except ResourceLimit as e:
    print(f"isoform: resource limit: {e}", file=sys.stderr)
    return EXIT_LIMIT


if __name__ == "__main__":
  sys.exit(main())
