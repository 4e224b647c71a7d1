"""Order polytopes as point configurations, canonical triangulations, volumes."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

from .exact import det_int, lp_maximize
from .posets import Poset, filter_lattice, maximal_chains


class PolytopeError(ValueError):
    """Raised for invalid point configurations or simplices."""


@dataclass(frozen=True)
class PointConfiguration:
    """Integer points as columns, one per vertex of the polytope."""

    dim: int
    columns: Tuple[Tuple[int, ...], ...]
    column_labels: Tuple[Tuple[int, ...], ...]
    homogenized: bool = False

    def homogeneous(self, j: int) -> Tuple[int, ...]:
        """Column j with the all-ones row appended."""
        col = self.columns[j]
        return col if self.homogenized else col + (1,)


@dataclass(frozen=True)
class Triangulation:
    """A set of full-dimensional simplices in canonical sorted form."""

    config: PointConfiguration
    simplices: Tuple[Tuple[int, ...], ...]

    @staticmethod
    def make(config: PointConfiguration, simplices) -> 'Triangulation':
        canon = tuple(sorted(tuple(sorted(s)) for s in simplices))
        if len(set(canon)) != len(canon):
            raise PolytopeError('duplicate simplices')
        return Triangulation(config, canon)


def order_polytope_vertices(q: Poset) -> PointConfiguration:
    """Vertices of O(q): characteristic vectors of filters, in canonical order."""
    lat = filter_lattice(q)
    columns = tuple(tuple(mask >> e & 1 for e in range(q.size)) for mask in lat.filters)
    names = q.labels if q.labels else tuple(range(q.size))
    labels = tuple(tuple(sorted(names[x] for x in gens)) for gens in lat.generator_sets)
    if len(set(columns)) != len(columns):
        raise PolytopeError('duplicate vertex columns')
    return PointConfiguration(dim=q.size, columns=columns, column_labels=labels)


def canonical_triangulation(q: Poset) -> Triangulation:
    """Stanley's triangulation: one simplex per maximal chain of the filter lattice."""
    lat = filter_lattice(q)
    config = order_polytope_vertices(q)
    return Triangulation.make(config, maximal_chains(lat))


def simplex_volume(cfg: PointConfiguration, simplex) -> int:
    """Normalized volume: |det| of the homogenized columns of the simplex."""
    idx = tuple(simplex)
    if len(idx) != cfg.dim + 1:
        raise PolytopeError('simplex needs %d vertices, got %d' % (cfg.dim + 1, len(idx)))
    return _simplex_volume_cached(cfg, idx)


@lru_cache(maxsize=None)
def _simplex_volume_cached(cfg: PointConfiguration, idx: Tuple[int, ...]) -> int:
    cols = [cfg.homogeneous(j) for j in idx]
    matrix = [[cols[k][i] for k in range(len(cols))] for i in range(cfg.dim + 1)]
    return abs(det_int(matrix))


@lru_cache(maxsize=None)
def expected_normalized_volume(cfg: PointConfiguration) -> int:
    """Volume of the order polytope: maximal chains of the column containment order."""
    order = {}
    for j, col in enumerate(cfg.columns):
        order[j] = [k for k, other in enumerate(cfg.columns)
                    if k != j and all(a <= b for a, b in zip(col, other))]
    # keep covers only: drop comparabilities that factor through a third column
    bottom = min(range(len(cfg.columns)), key=lambda j: sum(cfg.columns[j]))
    top = max(range(len(cfg.columns)), key=lambda j: sum(cfg.columns[j]))
    memo = {}

    def paths(j):
        if j == top:
            return 1
        if j not in memo:
            above = set(order[j])
            covers = [k for k in above
                      if not any(m in above and k in order[m] for m in above if m != k)]
            memo[j] = sum(paths(k) for k in covers)
        return memo[j]

    return paths(bottom)


def _wall_orientation(cfg: PointConfiguration, wall, apex) -> int:
    cols = [cfg.homogeneous(j) for j in wall] + [cfg.homogeneous(apex)]
    matrix = [[cols[k][i] for k in range(len(cols))] for i in range(cfg.dim + 1)]
    det = det_int(matrix)
    return (det > 0) - (det < 0)


def _pair_has_common_face(cfg: PointConfiguration, s1, s2) -> bool:
    """Exact LP: every point of both simplices uses only shared vertices."""
    shared = set(s1) & set(s2)
    k1, k2 = len(s1), len(s2)
    rows = []
    rhs = []
    for i in range(cfg.dim):
        rows.append([cfg.columns[j][i] for j in s1] + [-cfg.columns[j][i] for j in s2])
        rhs.append(0)
    rows.append([1] * k1 + [0] * k2)
    rhs.append(1)
    rows.append([0] * k1 + [1] * k2)
    rhs.append(1)
    objective = [0 if j in shared else 1 for j in s1] + [0 if j in shared else 1 for j in s2]
    status, value, _ = lp_maximize(rows, rhs, objective)
    if status == 'infeasible':
        return True
    return status == 'optimal' and value == 0


def is_triangulation(cfg: PointConfiguration, simplices, pairwise_lp: bool = False) -> bool:
    """Union property plus the wall certificate (and optional pairwise LP check)."""
    canon = [tuple(sorted(s)) for s in simplices]
    if len(set(canon)) != len(canon):
        return False
    total = 0
    walls = {}
    for s in canon:
        if len(s) != cfg.dim + 1 or len(set(s)) != len(s):
            return False
        vol = simplex_volume(cfg, s)
        if vol == 0:
            return False
        total += vol
        for drop in range(len(s)):
            wall = s[:drop] + s[drop + 1:]
            walls.setdefault(wall, []).append(s[drop])
    if total != expected_normalized_volume(cfg):
        return False
    for wall, apexes in walls.items():
        if len(apexes) > 2:
            return False
        signs = [_wall_orientation(cfg, wall, a) for a in apexes]
        if len(apexes) == 2:
            if signs[0] * signs[1] != -1:
                return False
        else:
            # boundary wall: all columns must lie on the apex's closed side
            side = signs[0]
            wall_set = set(wall)
            for j in range(len(cfg.columns)):
                if j in wall_set:
                    continue
                s = _wall_orientation(cfg, wall, j)
                if s == -side:
                    return False
    if pairwise_lp:
        for a in range(len(canon)):
            for b in range(a + 1, len(canon)):
                if not _pair_has_common_face(cfg, canon[a], canon[b]):
                    return False
    return True


def is_unimodular(tri: Triangulation) -> bool:
    """Whether every simplex of the triangulation has normalized volume one."""
    return all(simplex_volume(tri.config, s) == 1 for s in tri.simplices)
