"""Polyform grids, cell coordinates, adjacency and rigid-motion arithmetic.

Every grid is handled the same way. A cell is a lattice position ``(q, r)``
plus a type index ``k`` naming one of the grid's cells per fundamental
domain. Each cell owns a distinguished interior point with integer
coordinates ``scale * (q, r) + offset[k]``, and every point-group element
is an integer matrix in the lattice basis. A motion acting on a cell is
therefore ordinary integer affine arithmetic on that point.

Coordinate conventions:

* ``SQUARE`` -- cells ``(x, y)``; the cell occupies ``[x, x+1] x [y, y+1]``.
  Point-group elements rotate/reflect about the centre of cell ``(0, 0)``.
* ``HEX`` -- axial cells ``(q, r)`` centred on the triangular lattice point
  ``q*e1 + r*e2`` with ``e1 = (1, 0)`` and ``e2 = (1/2, sqrt(3)/2)``.
* ``IAMOND`` -- cells ``(q, r, o)`` with ``o = 0`` for the up triangle
  ``(q,r), (q+1,r), (q,r+1)`` and ``o = 1`` for the down triangle
  ``(q+1,r), (q+1,r+1), (q,r+1)``. Rotations are about lattice vertex 0,
  so a 60 degree turn swaps up and down triangles; the type index absorbs
  that, no conjugation is needed.
* ``KITE`` -- cells ``(q, r, k)``: kite ``k`` of the hexagon centred at
  ``(q, r)``, the one containing hexagon vertex ``k`` (vertices numbered
  counterclockwise starting at -30 degrees).

Vertex coordinates returned by :func:`cell_vertices` are exact fractions,
Cartesian for the square grid and in the ``(e1, e2)`` lattice basis for
the other three. Both frames are orientation preserving.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Sequence, Tuple

Cell = Tuple[int, ...]
Point = Tuple[Fraction, Fraction]
Matrix = Tuple[int, int, int, int]  # row-major (a, b, c, d)


class GridKind(enum.Enum):
  SQUARE = "square"
  HEX = "hex"
  IAMOND = "iamond"
  KITE = "kite"

  @classmethod
  def parse(cls, text: str) -> "GridKind":
    try:
      return cls(text.strip().lower())
    except ValueError:
      raise ValueError(f"unknown grid {text!r}") from None


class RigidMotion(NamedTuple):
  """A point-group element followed by a lattice translation.

  ``point`` indexes :func:`point_group` (0 is the identity). ``translation``
  is in lattice units of the grid the motion belongs to.
  """

  point: int
  translation: Tuple[int, int]


IDENTITY = RigidMotion(0, (0, 0))


def _mul(m: Matrix, n: Matrix) -> Matrix:
  a, b, c, d = m
  e, f, g, h = n
  return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _act(m: Matrix, x: int, y: int) -> Tuple[int, int]:
  a, b, c, d = m
  return a * x + b * y, c * x + d * y


def _dihedral(rotation: Matrix, reflection: Matrix, order: int) -> List[Matrix]:
  rots = [(1, 0, 0, 1)]
  for _ in range(order - 1):
    rots.append(_mul(rotation, rots[-1]))
  return rots + [_mul(r, reflection) for r in rots]


def _frac_points(points: Iterable[Tuple[int, int]], denom: int) -> List[Point]:
  return [(Fraction(x, denom), Fraction(y, denom)) for x, y in points]


class _Geometry:
  """Precomputed tables for one grid kind."""

  def __init__(self, kind: GridKind, scale: int, offsets: Sequence[Tuple[int, int]],
               matrices: List[Matrix], edge0: Sequence[Cell], point0: Sequence[Cell],
               templates: Sequence[Sequence[Point]], origin_shift: Point):
    self.kind = kind
    self.scale = scale
    self.offsets = list(offsets)
    self.ntypes = len(offsets)
    self.matrices = matrices
    self.order = len(matrices)
    self.templates = [list(t) for t in templates]
    self.origin_shift = origin_shift

    index = {m: i for i, m in enumerate(matrices)}
    self.mul = [[index[_mul(a, b)] for b in matrices] for a in matrices]
    self.inv = [row.index(0) for row in self.mul]

    # type_map[p][k] = (k2, dq, dr) with M_p * offset[k] = scale*(dq, dr) + offset[k2]
    by_residue = {(ox % scale, oy % scale): k for k, (ox, oy) in enumerate(offsets)}
    self.type_map = []
    for m in matrices:
      row = []
      for ox, oy in offsets:
        x, y = _act(m, ox, oy)
        k2 = by_residue[(x % scale, y % scale)]
        ox2, oy2 = offsets[k2]
        row.append((k2, (x - ox2) // scale, (y - oy2) // scale))
      self.type_map.append(row)

    self.edge_offsets = self._propagate(edge0)
    self.point_offsets = self._propagate(point0)

  def _propagate(self, base: Sequence[Cell]) -> List[List[Cell]]:
    """Carry type-0 neighbour offsets to every type via the point group."""
    out: List[List[Cell]] = []
    for k in range(self.ntypes):
      p = next(i for i, row in enumerate(self.type_map) if row[0][0] == k)
      _, dq, dr = self.type_map[p][0]
      g = RigidMotion(p, (-dq, -dr))
      out.append([self.apply(g, c) for c in base])
    return out

  def split(self, cell: Cell) -> Tuple[int, int, int]:
    if self.ntypes == 1:
      return cell[0], cell[1], 0
    return cell[0], cell[1], cell[2]

  def join(self, q: int, r: int, k: int) -> Cell:
    return (q, r) if self.ntypes == 1 else (q, r, k)

  def apply(self, m: RigidMotion, cell: Cell) -> Cell:
    q, r, k = self.split(cell)
    a, b, c, d = self.matrices[m.point]
    k2, dq, dr = self.type_map[m.point][k]
    tx, ty = m.translation
    return self.join(a * q + b * r + dq + tx, c * q + d * r + dr + ty, k2)

  def compose(self, a: RigidMotion, b: RigidMotion) -> RigidMotion:
    x, y = _act(self.matrices[a.point], *b.translation)
    return RigidMotion(self.mul[a.point][b.point],
                       (x + a.translation[0], y + a.translation[1]))

  def invert(self, m: RigidMotion) -> RigidMotion:
    p = self.inv[m.point]
    x, y = _act(self.matrices[p], *m.translation)
    return RigidMotion(p, (-x, -y))


_SQUARE_D4 = _dihedral((0, -1, 1, 0), (1, 0, 0, -1), 4)
# 60 degree rotation and x-axis reflection written in the (e1, e2) basis.
_TRI_D6 = _dihedral((0, -1, 1, 1), (1, 1, 0, -1), 6)

# Hexagon vertices (times 3, lattice basis), counterclockwise from -30 degrees.
_HEX_VERTS3 = [(2, -1), (1, 1), (-1, 2), (-2, 1), (-1, -1), (1, -2)]


def _kite_template(k: int) -> List[Point]:
  v = _frac_points(_HEX_VERTS3, 3)
  prev, cur, nxt = v[(k - 1) % 6], v[k], v[(k + 1) % 6]
  half = Fraction(1, 2)
  return [(Fraction(0), Fraction(0)),
          ((prev[0] + cur[0]) * half, (prev[1] + cur[1]) * half),
          cur,
          ((cur[0] + nxt[0]) * half, (cur[1] + nxt[1]) * half)]


_KING = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
_HEX_NB = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]

_GEOMETRY: Dict[GridKind, _Geometry] = {
    GridKind.SQUARE: _Geometry(
        GridKind.SQUARE, 1, [(0, 0)], _SQUARE_D4,
        edge0=[(1, 0), (0, 1), (-1, 0), (0, -1)],
        point0=_KING,
        templates=[_frac_points([(0, 0), (1, 0), (1, 1), (0, 1)], 1)],
        origin_shift=(Fraction(1, 2), Fraction(1, 2))),
    GridKind.HEX: _Geometry(
        GridKind.HEX, 1, [(0, 0)], _TRI_D6,
        edge0=_HEX_NB, point0=_HEX_NB,
        templates=[_frac_points(_HEX_VERTS3, 3)],
        origin_shift=(Fraction(0), Fraction(0))),
    GridKind.IAMOND: _Geometry(
        GridKind.IAMOND, 3, [(1, 1), (2, 2)], _TRI_D6,
        edge0=[(0, 0, 1), (-1, 0, 1), (0, -1, 1)],
        point0=[(-1, 0, 0), (0, -1, 0), (1, 0, 0), (1, -1, 0), (0, 1, 0), (-1, 1, 0),
                (-1, 0, 1), (-1, -1, 1), (0, -1, 1), (0, 0, 1), (1, -1, 1), (-1, 1, 1)],
        templates=[_frac_points([(0, 0), (1, 0), (0, 1)], 1),
                   _frac_points([(1, 0), (1, 1), (0, 1)], 1)],
        origin_shift=(Fraction(0), Fraction(0))),
    GridKind.KITE: _Geometry(
        GridKind.KITE, 6, _HEX_VERTS3, _TRI_D6,
        edge0=[(0, 0, 5), (0, 0, 1), (1, 0, 4), (1, -1, 2)],
        point0=[(0, 0, 1), (0, 0, 2), (0, 0, 3), (0, 0, 4), (0, 0, 5),
                (1, 0, 3), (1, 0, 4), (1, -1, 2), (1, -1, 3)],
        templates=[_kite_template(k) for k in range(6)],
        origin_shift=(Fraction(0), Fraction(0))),
}


def geometry(grid: GridKind) -> _Geometry:
  return _GEOMETRY[grid]


def cell_types(grid: GridKind) -> int:
  return _GEOMETRY[grid].ntypes


def edge_neighbors(grid: GridKind, c: Cell) -> List[Cell]:
  """Cells sharing a full edge with ``c``."""
  g = _GEOMETRY[grid]
  q, r, k = g.split(c)
  return [g.join(q + n[0], r + n[1], n[2] if len(n) == 3 else 0)
          for n in g.edge_offsets[k]]


def point_neighbors(grid: GridKind, c: Cell) -> List[Cell]:
  """Cells other than ``c`` whose closure meets the closure of ``c``."""
  g = _GEOMETRY[grid]
  q, r, k = g.split(c)
  return [g.join(q + n[0], r + n[1], n[2] if len(n) == 3 else 0)
          for n in g.point_offsets[k]]


def apply_motion(grid: GridKind, m: RigidMotion, c: Cell) -> Cell:
  return _GEOMETRY[grid].apply(m, c)


def compose(grid: GridKind, a: RigidMotion, b: RigidMotion) -> RigidMotion:
  """The motion ``a o b``: apply ``b`` first, then ``a``."""
  return _GEOMETRY[grid].compose(a, b)


def invert(grid: GridKind, m: RigidMotion) -> RigidMotion:
  return _GEOMETRY[grid].invert(m)


def is_involution(grid: GridKind, m: RigidMotion) -> bool:
  """True when ``m o m`` is the identity (the identity itself included)."""
  return _GEOMETRY[grid].compose(m, m) == IDENTITY


def translation(dx: int, dy: int) -> RigidMotion:
  return RigidMotion(0, (dx, dy))


def point_group(grid: GridKind) -> List[RigidMotion]:
  """Rotations first (by increasing angle), then reflections."""
  return [RigidMotion(p, (0, 0)) for p in range(_GEOMETRY[grid].order)]


def point_matrix(grid: GridKind, p: int) -> Matrix:
  return _GEOMETRY[grid].matrices[p]


def is_reflection(grid: GridKind, p: int) -> bool:
  a, b, c, d = _GEOMETRY[grid].matrices[p]
  return a * d - b * c < 0


def affine_matrix(grid: GridKind, m: RigidMotion) -> List[List[Fraction]]:
  """The 3x3 affine matrix of ``m`` acting on :func:`cell_vertices` coordinates."""
  g = _GEOMETRY[grid]
  a, b, c, d = g.matrices[m.point]
  hx, hy = g.origin_shift
  tx, ty = m.translation
  # x -> M (x - h) + h + t
  ex = hx - (a * hx + b * hy) + tx
  ey = hy - (c * hx + d * hy) + ty
  return [[Fraction(a), Fraction(b), ex], [Fraction(c), Fraction(d), ey],
          [Fraction(0), Fraction(0), Fraction(1)]]


def cell_vertices(grid: GridKind, c: Cell) -> List[Point]:
  """Exact polygon of ``c``, counterclockwise."""
  g = _GEOMETRY[grid]
  q, r, k = g.split(c)
  return [(x + q, y + r) for x, y in g.templates[k]]


_SQRT3_2 = 3 ** 0.5 / 2


def to_cartesian(grid: GridKind, p: Point) -> Tuple[float, float]:
  if grid is GridKind.SQUARE:
    return float(p[0]), float(p[1])
  return float(p[0] + p[1] / 2), float(p[1]) * _SQRT3_2


def parse_cell(grid: GridKind, token: str) -> Cell:
  """Parse ``x,y`` / ``q,r`` / ``q,r,u|d`` / ``q,r,k`` (whitespace ignored)."""
  parts = [p for p in "".join(token.split()).split(",")]
  want = 2 if _GEOMETRY[grid].ntypes == 1 else 3
  if len(parts) != want or not all(parts):
    raise ValueError(f"bad {grid.value} cell token {token!r}")
  try:
    q, r = int(parts[0]), int(parts[1])
    if want == 2:
      return (q, r)
    if grid is GridKind.IAMOND:
      o = {"u": 0, "d": 1}[parts[2].lower()]
    else:
      o = int(parts[2])
      if not 0 <= o < 6:
        raise ValueError
  except (ValueError, KeyError):
    raise ValueError(f"bad {grid.value} cell token {token!r}") from None
  return (q, r, o)


def format_cell(grid: GridKind, c: Cell) -> str:
  if grid is GridKind.IAMOND:
    return f"{c[0]},{c[1]},{'ud'[c[2]]}"
  return ",".join(str(v) for v in c)
