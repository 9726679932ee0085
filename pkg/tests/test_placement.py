import pytest

from isoform.grid import IDENTITY, GridKind, RigidMotion, point_group, translation
from isoform.placement import (
    adjacent, adjacent_pairs, candidate_neighbors, find_by_motion, make_placement, overlap,
    overlap_pairs)
from isoform.polyform import enumerate_free, halo, make_polyform
from oracles import brute_candidates, image

SQ = GridKind.SQUARE
MONO = make_polyform(SQ, [(0, 0)])


def place(T, m):
  return make_placement(T, m, frozenset(halo(T)))


def test_monomino_has_64_candidates():
  cs = candidate_neighbors(MONO)
  assert len(cs) == 64
  assert len({P.cells for P in cs}) == 8


@pytest.mark.parametrize("grid,sizes", [
    (SQ, range(1, 6)), (GridKind.HEX, range(1, 5)), (GridKind.IAMOND, range(1, 6)),
    (GridKind.KITE, range(1, 5))])
def test_candidates_match_exhaustive_scan(grid, sizes):
  for n in sizes:
    for T in enumerate_free(grid, n):
      cs = candidate_neighbors(T)
      brute = {P.motion: P.cells for P in brute_candidates(grid, T.cells)}
      assert {P.motion: P.cells for P in cs} == brute


def test_candidate_invariants():
  for T in enumerate_free(SQ, 5):
    cs = candidate_neighbors(T)
    ring = halo(T)
    assert find_by_motion(cs, IDENTITY) is None
    assert len(cs.lookup) == len(cs)
    for i, P in enumerate(cs):
      assert P.index == i
      assert P.cells.isdisjoint(T.cells) and not P.cells.isdisjoint(ring)
      assert P.cells == T.image(P.motion)
      assert find_by_motion(cs, P.motion) is P


def test_candidate_count_invariant_under_point_group():
  for grid in GridKind:
    for T in enumerate_free(grid, 4):
      base = len(candidate_neighbors(T))
      for g in point_group(grid):
        assert len(candidate_neighbors(T.transformed(g))) == base


def test_search_radius_saturates():
  # two more rings of translations in the scan find nothing new
  T = make_polyform(SQ, [(0, 0), (1, 0), (2, 0), (2, 1)])
  base = {P.motion for P in brute_candidates(SQ, T.cells)}
  span = 2
  extra = set()
  for p in range(8):
    for tx in range(-(2 * span + 6), 2 * span + 7):
      for ty in range(-(2 * span + 6), 2 * span + 7):
        m = RigidMotion(p, (tx, ty))
        img = image(SQ, T.cells, m)
        if img.isdisjoint(T.cells) and not img.isdisjoint(halo(T)):
          extra.add(m)
  assert extra == base == {P.motion for P in candidate_neighbors(T)}


def test_overlap_examples():
  a = place(MONO, translation(1, 0))
  b = place(MONO, translation(2, 0))
  assert overlap(a, a)
  assert not overlap(a, b)
  # the same cell reached by a rotated copy is a different placement that overlaps
  twin = next(P for P in candidate_neighbors(MONO) if P.cells == a.cells and P != a)
  assert twin.motion != a.motion and overlap(a, twin)


def test_adjacent_examples():
  a = place(MONO, translation(1, 0))
  assert adjacent(a, place(MONO, translation(1, 1)))
  assert not adjacent(place(MONO, translation(2, 0)), place(MONO, translation(-2, 0)))
  assert not adjacent(a, a)


def test_pair_lists_agree_with_predicates():
  T = make_polyform(SQ, [(0, 0), (1, 0), (1, 1)])
  cs = candidate_neighbors(T)
  ps = cs.placements
  ov = {(a.index, b.index) for a, b in overlap_pairs(cs)}
  ad = {(a.index, b.index) for a, b in adjacent_pairs(cs)}
  for i, a in enumerate(ps):
    for b in ps[i + 1:]:
      assert ((a.index, b.index) in ov) == overlap(a, b) == overlap(b, a)
      assert ((a.index, b.index) in ad) == adjacent(a, b) == adjacent(b, a)
      assert not (adjacent(a, b) and overlap(a, b))


def test_find_by_motion():
  cs = candidate_neighbors(MONO)
  assert find_by_motion(cs, cs.placements[0].motion) is cs.placements[0]
  assert find_by_motion(cs, IDENTITY) is None
  assert find_by_motion(cs, translation(5, 5)) is None


def test_candidates_are_deterministic():
  T = make_polyform(GridKind.KITE, [(0, 0, 0), (0, 0, 1), (0, 0, 2)])
  assert [P.motion for P in candidate_neighbors(T)] == [P.motion for P in candidate_neighbors(T)]
