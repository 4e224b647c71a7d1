"""Canonical orders, exact height functions, folding forms, and regularity."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, gcd, lcm
from typing import Dict, List, Optional, Tuple

from .circuits import all_circuits, word_context
from .exact import det_int, kernel_vector, lp_maximize
from .flips import canonical_of, dual_graph, explore_flip_graph, graphs_isomorphic, triangulation_hash
from .polytope import (PointConfiguration, Triangulation, expected_normalized_volume,
                       is_triangulation, simplex_volume)
from .posets import build_snake_poset
from .twists import Twist, all_twists
from .words import SnakeWord


class RegularityError(ValueError):
    """Raised for invalid regularity inputs or broken internal certificates."""


@dataclass(frozen=True)
class CanonicalOrder:
    """Interleaved height order of the rung labels and its position table."""

    word: SnakeWord
    sequence: Tuple[int, ...]
    rho: Tuple[int, ...]


def canonical_order(w: SnakeWord) -> CanonicalOrder:
    """Order x_0, x_2, x_1, x_4, x_3, ... with the top label first."""
    word_context(w)
    n = len(w)
    seq = [0]
    for j in range(1, n + 3):
        seq.extend((2 * j, 2 * j - 1))
    seq.append(2 * n + 5)
    rho = [0] * len(seq)
    for pos, label in enumerate(seq):
        rho[label] = pos
    return CanonicalOrder(w, tuple(seq), tuple(rho))


@dataclass(frozen=True)
class HeightFunction:
    """Exact lifting heights, one per configuration column."""

    heights: Tuple

    def __getitem__(self, column: int):
        return self.heights[column]


def height_function(w: SnakeWord, tau: Optional[Twist] = None) -> HeightFunction:
    """Powers of two along the canonical order, pulled back through a twist."""
    ctx = word_context(w)
    if tau is not None and tau.word != w:
        raise RegularityError('twist belongs to a different word')
    order = canonical_order(w)
    perm = tau.permutation if tau is not None else tuple(range(ctx.phat.size))
    x_index = ctx.labeling.x_index
    heights = []
    for c in range(len(ctx.config.columns)):
        e = ctx.element_of[c]
        heights.append(2 ** order.rho[x_index[perm[e]]])
    return HeightFunction(tuple(heights))


def folding_form(cfg: PointConfiguration, simplex, p: int, omega: HeightFunction):
    """Signed cofactor of the lifted column against an affinely independent base."""
    idx = tuple(sorted(simplex))
    if len(idx) != cfg.dim + 1:
        raise RegularityError('folding base needs %d columns, got %d' % (cfg.dim + 1, len(idx)))
    base_cols = [cfg.homogeneous(j) for j in idx]
    base = [[col[i] for col in base_cols] for i in range(cfg.dim + 1)]
    base_det = det_int(base)
    if base_det == 0:
        raise RegularityError('folding base is degenerate')
    ext = idx + (p,)
    cols = [cfg.homogeneous(j) for j in ext]
    matrix = [[col[i] for col in cols] for i in range(cfg.dim + 1)]
    hrow = [Fraction(omega.heights[j]) for j in ext]
    scale = lcm(*(h.denominator for h in hrow))
    matrix.append([int(h * scale) for h in hrow])
    value = Fraction((1 if base_det > 0 else -1) * det_int(matrix), scale)
    return int(value) if value.denominator == 1 else value


def _walls(tri: Triangulation):
    by_facet: Dict[Tuple[int, ...], List[Tuple[int, int]]] = {}
    for i, s in enumerate(tri.simplices):
        for j in s:
            f = tuple(x for x in s if x != j)
            by_facet.setdefault(f, []).append((i, j))
    out = []
    for f in sorted(by_facet):
        incident = by_facet[f]
        if len(incident) > 2:
            raise RegularityError('facet %r has %d cofaces' % (f, len(incident)))
        if len(incident) == 2:
            (i1, v1), (i2, v2) = incident
            out.append((f, i1, v1, i2, v2))
    return out


@dataclass(frozen=True)
class WallCheck:
    """Folding forms across one interior wall."""

    facet: Tuple[int, ...]
    simplices: Tuple[int, int]
    opposite: Tuple[int, int]
    forms: Tuple


@dataclass(frozen=True)
class FoldingReport:
    """All wall checks for one height function."""

    walls: Tuple[WallCheck, ...]
    verdict: bool
    first_violation: Optional[int]

    def __bool__(self) -> bool:
        return self.verdict


def verify_local_folding(tri: Triangulation, omega: HeightFunction) -> FoldingReport:
    """Certify that the heights select this triangulation across every wall."""
    checks = []
    verdict = True
    first = None
    for f, i1, v1, i2, v2 in _walls(tri):
        psi1 = folding_form(tri.config, tri.simplices[i2], v1, omega)
        psi2 = folding_form(tri.config, tri.simplices[i1], v2, omega)
        checks.append(WallCheck(f, (i1, i2), (v1, v2), (psi1, psi2)))
        if verdict and (psi1 <= 0 or psi2 <= 0):
            verdict = False
            first = len(checks) - 1
    return FoldingReport(tuple(checks), verdict, first)


def _wall_rows(tri: Triangulation):
    """Deduplicated primitive integer inequalities, one per wall dependence."""
    cfg = tri.config
    rows = []
    seen = set()
    for f, i1, v1, i2, v2 in _walls(tri):
        union = tuple(sorted(set(tri.simplices[i1]) | set(tri.simplices[i2])))
        lam = kernel_vector([list(cfg.homogeneous(j)) for j in union])
        if lam is None:
            raise RegularityError('wall pair %r is affinely independent' % (f,))
        scale = lcm(*(Fraction(x).denominator for x in lam))
        coeffs = {c: int(Fraction(x) * scale) for c, x in zip(union, lam) if x != 0}
        g = 0
        for x in coeffs.values():
            g = gcd(g, x)
        coeffs = {c: x // g for c, x in coeffs.items()}
        a1, a2 = coeffs.get(v1, 0), coeffs.get(v2, 0)
        if a1 == 0 or a2 == 0 or (a1 > 0) != (a2 > 0):
            raise RegularityError('wall dependence does not isolate the apexes')
        if a1 < 0:
            coeffs = {c: -x for c, x in coeffs.items()}
        key = tuple(sorted(coeffs.items()))
        if key not in seen:
            seen.add(key)
            rows.append(coeffs)
    return rows


@dataclass(frozen=True)
class RegularityResult:
    """Feasibility verdict with witness heights when regular."""

    regular: bool
    heights: Optional[HeightFunction]
    slack: Optional[Fraction]
    constraints: int

    def __bool__(self) -> bool:
        return self.regular


def is_regular(tri: Triangulation, verify: bool = False) -> RegularityResult:
    """Decide by exact feasibility whether some heights select this triangulation."""
    cfg = tri.config
    ncols = len(cfg.columns)
    rows = _wall_rows(tri)
    pinned = set(tri.simplices[0])
    free = [c for c in range(ncols) if c not in pinned]
    pos = {c: k for k, c in enumerate(free)}
    m = len(free)
    nrows = len(rows)
    # variables: free heights, epsilon, one slack per row, box slacks, cap slack
    nvars = m + 1 + nrows + m + 1
    A = []
    b = []
    box = 2 ** ncols
    for r, coeffs in enumerate(rows):
        row = [0] * nvars
        for c, x in coeffs.items():
            if c in pos:
                row[pos[c]] = x
        row[m] = -1
        row[m + 1 + r] = -1
        A.append(row)
        b.append(0)
    for k in range(m):
        row = [0] * nvars
        row[k] = 1
        row[m + 1 + nrows + k] = 1
        A.append(row)
        b.append(box)
    row = [0] * nvars
    row[m] = 1
    row[nvars - 1] = 1
    A.append(row)
    b.append(1)
    c_obj = [0] * nvars
    c_obj[m] = 1
    status, value, x = lp_maximize(A, b, c_obj)
    if status != 'optimal':
        raise RegularityError('height feasibility program is %s' % status)
    if value <= 0:
        return RegularityResult(False, None, Fraction(value), nrows)
    heights = [Fraction(0)] * ncols
    for c in free:
        heights[c] = Fraction(x[pos[c]])
    witness = HeightFunction(tuple(heights))
    if verify:
        report = verify_local_folding(tri, witness)
        if not report.verdict:
            raise RegularityError('witness heights fail the folding certificate')
    return RegularityResult(True, witness, Fraction(value), nrows)


def _catalan(m: int) -> int:
    return comb(2 * m, m) // (m + 1)


def _snake_poset(n: int):
    letters = tuple('L' if i % 2 == 0 else 'R' for i in range(n))
    return build_snake_poset(SnakeWord(letters))


@lru_cache(maxsize=None)
def snake_polytope_word(n: int) -> SnakeWord:
    """Word whose meet-irreducible poset is the length-n alternating snake."""
    if n < 1:
        raise RegularityError('snake index must be at least 1')
    letters = ['L']
    j = 1
    while len(letters) < 2 * n:
        letters.extend(('R' if j % 2 == 1 else 'L',) * 2)
        j += 1
    w = SnakeWord(tuple(letters[:2 * n]))
    if not word_context(w).labeling.q.isomorphic(_snake_poset(n)):
        raise RegularityError('constructed word does not realize the snake poset')
    return w


def _twist_is_affine(w: SnakeWord, tau: Twist) -> bool:
    """Whether the twist permutes columns by an affine map of the ambient space."""
    cfg = word_context(w).config
    base = canonical_of(w).simplices[0]
    bcols = [list(cfg.homogeneous(c)) for c in base]
    images = [cfg.homogeneous(tau.column_permutation[c]) for c in base]
    for c in range(len(cfg.columns)):
        lam = kernel_vector(bcols + [list(cfg.homogeneous(c))])
        if lam is None or lam[-1] != 1:
            raise RegularityError('base simplex does not span the configuration')
        beta = [-x for x in lam[:-1]]
        target = cfg.homogeneous(tau.column_permutation[c])
        for i in range(cfg.dim + 1):
            if sum(beta[k] * images[k][i] for k in range(len(beta))) != target[i]:
                return False
    return True


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def enumerate_triangulations(cfg: PointConfiguration, budget_steps: int = 2_000_000):
    """All triangulations, found by completing walls outward from a generic point."""
    d = cfg.dim
    ncols = len(cfg.columns)
    expected = expected_normalized_volume(cfg)
    candidates = tuple(s for s in combinations(range(ncols), d + 1)
                       if simplex_volume(cfg, s) > 0)
    volumes = [simplex_volume(cfg, s) for s in candidates]

    normals: Dict[Tuple[int, ...], Tuple[int, ...]] = {}

    def normal(f):
        if f not in normals:
            rows = [list(cfg.homogeneous(c)) for c in f]
            nu = []
            for i in range(d + 1):
                minor = [row[:i] + row[i + 1:] for row in rows]
                nu.append((-1) ** i * det_int(minor))
            g = 0
            for x in nu:
                g = gcd(g, x)
            nu = [x // g for x in nu]
            for x in nu:
                if x:
                    if x < 0:
                        nu = [-y for y in nu]
                    break
            normals[f] = tuple(nu)
        return normals[f]

    def side(f, hom):
        nu = normal(f)
        return sum(nu[i] * hom[i] for i in range(d + 1))

    facet_index: Dict[Tuple[int, ...], List[Tuple[int, int]]] = {}
    cand_facets = []
    for ci, s in enumerate(candidates):
        entries = []
        for j in s:
            f = tuple(x for x in s if x != j)
            sgn = _sign(side(f, cfg.homogeneous(j)))
            if sgn == 0:
                raise RegularityError('degenerate facet in a full simplex')
            facet_index.setdefault(f, []).append((ci, sgn))
            entries.append((f, sgn))
        cand_facets.append(tuple(entries))

    boundary = {}
    for f in facet_index:
        signs = {_sign(side(f, cfg.homogeneous(c))) for c in range(ncols)}
        boundary[f] = not (1 in signs and -1 in signs)

    for t in (2, 3, 5, 7, 11, 13, 17):
        q = tuple(sum(t ** c * cfg.homogeneous(c)[i] for c in range(ncols))
                  for i in range(d + 1))
        qside = {f: _sign(side(f, q)) for f in facet_index}
        if all(qside[f] != 0 for f in facet_index):
            break
    else:
        raise RegularityError('no generic interior reference point found')
    contains_q = [all(qside[f] == sgn for f, sgn in cand_facets[ci])
                  for ci in range(len(candidates))]

    counts: Dict[Tuple[int, ...], List[int]] = {}
    open_facets = set()
    chosen: List[int] = []
    vol = [0]
    steps = [0]
    complete = [True]
    results: List[Tuple[Tuple[int, ...], ...]] = []

    def can_place(ci):
        if vol[0] + volumes[ci] > expected:
            return False
        for f, sgn in cand_facets[ci]:
            st = counts.get(f)
            if st and (st[0] >= 2 or st[1] == sgn):
                return False
        return True

    def place(ci):
        chosen.append(ci)
        vol[0] += volumes[ci]
        for f, sgn in cand_facets[ci]:
            st = counts.setdefault(f, [0, sgn])
            st[0] += 1
            if st[0] == 1:
                st[1] = sgn
                if not boundary[f]:
                    open_facets.add(f)
            else:
                open_facets.discard(f)

    def unplace(ci):
        chosen.pop()
        vol[0] -= volumes[ci]
        for f, sgn in cand_facets[ci]:
            st = counts[f]
            st[0] -= 1
            if st[0] == 0:
                del counts[f]
                open_facets.discard(f)
            elif not boundary[f]:
                open_facets.add(f)

    def rec():
        steps[0] += 1
        if steps[0] > budget_steps:
            complete[0] = False
            return
        if not open_facets:
            if vol[0] == expected:
                results.append(tuple(sorted(candidates[ci] for ci in chosen)))
            return
        f = min(open_facets)
        want = -counts[f][1]
        for ci, sgn in facet_index[f]:
            if sgn == want and not contains_q[ci] and can_place(ci):
                place(ci)
                rec()
                unplace(ci)

    for ci in range(len(candidates)):
        if contains_q[ci] and complete[0]:
            place(ci)
            rec()
            unplace(ci)
    if len(set(results)) != len(results):
        raise RegularityError('triangulation enumeration produced duplicates')
    return tuple(sorted(results)), complete[0]


@dataclass(frozen=True)
class DegreeReport:
    """Flip-graph degrees against the expected constant."""

    word: str
    nodes: int
    secondary_dimension: int
    degrees: Tuple[Tuple[int, int], ...]
    k_regular: bool
    partial: bool


@dataclass(frozen=True)
class DualGraphReport:
    """Search for a regular triangulation with a new dual graph shape."""

    word: str
    searched: int
    expected_found: bool
    found: bool
    witness: Optional[str]
    witness_regular: Optional[bool]
    partial: bool


@dataclass(frozen=True)
class CanonicalDualCountReport:
    """Count of triangulations sharing the canonical dual graph shape."""

    n: int
    word: str
    nodes: int
    count: int
    expected: int
    matches: bool
    partial: bool


@dataclass(frozen=True)
class ExhaustiveReport:
    """Cross-check of flip search against full enumeration."""

    total: int
    flip_reachable: int
    regular: int
    complete: bool


@dataclass(frozen=True)
class RegularCountReport:
    """Count of regular triangulations against the conjectured formula."""

    n: int
    word: str
    nodes: int
    regular_nodes: int
    expected: int
    matches: bool
    partial: bool
    twist_orbits: int
    affine_twists: bool
    exhaustive: Optional[ExhaustiveReport]


def _degrees(graph) -> Counter:
    counter: Counter = Counter({i: 0 for i in range(len(graph.nodes))})
    for a, b, _ in graph.edges:
        counter[a] += 1
        counter[b] += 1
    return counter


def check_flip_degrees(w: SnakeWord, budget_nodes: int = 100000,
                       workers: int = 1) -> DegreeReport:
    """Explore the flip graph and compare all degrees to the secondary dimension."""
    ctx = word_context(w)
    graph = explore_flip_graph(canonical_of(w), all_circuits(w),
                               budget=budget_nodes, workers=workers)
    k = len(ctx.config.columns) - ctx.config.dim - 1
    hist = Counter(_degrees(graph).values())
    degrees = tuple(sorted(hist.items()))
    k_regular = not graph.partial and set(hist) == {k}
    return DegreeReport(str(w), len(graph.nodes), k, degrees, k_regular, graph.partial)


def find_new_dual_graph(w: SnakeWord, budget_nodes: int = 100000,
                        workers: int = 1) -> DualGraphReport:
    """Look for a regular triangulation whose dual graph differs from canonical."""
    graph = explore_flip_graph(canonical_of(w), all_circuits(w),
                               budget=budget_nodes, workers=workers)
    base = dual_graph(graph.nodes[0])
    expected_found = any(w.letter(i) != w.letter(i + 1) for i in range(1, len(w)))
    for node in graph.nodes[1:]:
        if not graphs_isomorphic(dual_graph(node), base):
            regular = bool(is_regular(node))
            return DualGraphReport(str(w), len(graph.nodes), expected_found, True,
                                   triangulation_hash(node), regular, graph.partial)
    return DualGraphReport(str(w), len(graph.nodes), expected_found, False,
                           None, None, graph.partial)


def count_canonical_dual_graphs(n: int, budget_nodes: int = 100000,
                                workers: int = 1) -> CanonicalDualCountReport:
    """Count explored triangulations whose dual graph matches the canonical one."""
    if n < 3:
        raise RegularityError('the single-turn family needs n >= 3')
    w = SnakeWord(('L',) + ('R',) * (n - 2))
    graph = explore_flip_graph(canonical_of(w), all_circuits(w),
                               budget=budget_nodes, workers=workers)
    base = dual_graph(graph.nodes[0])
    count = sum(1 for node in graph.nodes
                if graphs_isomorphic(dual_graph(node), base))
    expected = 4 * n * factorial(n - 2)
    matches = not graph.partial and count == expected
    return CanonicalDualCountReport(n, str(w), len(graph.nodes), count, expected,
                                    matches, graph.partial)


def count_regular_triangulations(n: int, budget_nodes: int = 100000, workers: int = 1,
                                 exhaustive: Optional[bool] = None,
                                 budget_steps: int = 2_000_000) -> RegularCountReport:
    """Count regular triangulations in the explored component of the snake polytope."""
    w = snake_polytope_word(n)
    graph = explore_flip_graph(canonical_of(w), all_circuits(w),
                               budget=budget_nodes, workers=workers)
    taus = all_twists(w)
    affine = all(_twist_is_affine(w, tau) for tau in taus[1:])
    index = {t.simplices: i for i, t in enumerate(graph.nodes)}
    verdicts: Dict[int, bool] = {}
    orbits = 0
    for i, node in enumerate(graph.nodes):
        if i in verdicts:
            continue
        orbits += 1
        verdict = bool(is_regular(node))
        orbit = {i}
        if affine:
            for tau in taus[1:]:
                cols = tau.column_permutation
                image = tuple(sorted(tuple(sorted(cols[c] for c in s))
                                     for s in node.simplices))
                j = index.get(image)
                if j is not None:
                    orbit.add(j)
        for j in orbit:
            verdicts[j] = verdict
    regular_nodes = sum(1 for v in verdicts.values() if v)
    expected = 2 ** (n + 1) * _catalan(2 * n + 1)
    matches = not graph.partial and regular_nodes == expected
    if exhaustive is None:
        exhaustive = n <= 2
    exhaustive_report = None
    if exhaustive:
        cfg = word_context(w).config
        found, complete = enumerate_triangulations(cfg, budget_steps=budget_steps)
        reachable = sum(1 for simplices in found if simplices in index)
        regular = 0
        for simplices in found:
            i = index.get(simplices)
            if i is not None:
                regular += 1 if verdicts[i] else 0
            else:
                tri = Triangulation.make(cfg, simplices)
                regular += 1 if is_regular(tri) else 0
        exhaustive_report = ExhaustiveReport(len(found), reachable, regular, complete)
    return RegularCountReport(n, str(w), len(graph.nodes), regular_nodes, expected,
                              matches, graph.partial, orbits, affine, exhaustive_report)


def conjecture_suite(conjecture: str, word: Optional[SnakeWord] = None,
                     n: Optional[int] = None, budget_nodes: int = 100000,
                     workers: int = 1, exhaustive: Optional[bool] = None,
                     budget_steps: int = 2_000_000):
    """Run one numbered experiment: 6.1, 6.2, 6.3, or 6.4."""
    if conjecture == '6.1':
        if word is None:
            raise RegularityError('experiment 6.1 needs a word')
        return check_flip_degrees(word, budget_nodes, workers)
    if conjecture == '6.2':
        if word is None:
            raise RegularityError('experiment 6.2 needs a word')
        return find_new_dual_graph(word, budget_nodes, workers)
    if conjecture == '6.3':
        if n is None:
            raise RegularityError('experiment 6.3 needs n')
        return count_canonical_dual_graphs(n, budget_nodes, workers)
    if conjecture == '6.4':
        if n is None:
            raise RegularityError('experiment 6.4 needs n')
        return count_regular_triangulations(n, budget_nodes, workers,
                                            exhaustive, budget_steps)
    raise RegularityError('unknown experiment %r' % (conjecture,))
