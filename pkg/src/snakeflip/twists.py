"""The twist group of a snake word acting on circuits and triangulations."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Optional, Tuple

from .circuits import Circuit, all_circuits, word_context
from .flips import apply_flip, canonical_of, explore_flip_graph, find_flips, triangulation_hash
from .polytope import Triangulation, is_triangulation
from .words import SnakeWord


class TwistError(ValueError):
    """Raised when twist inputs are inconsistent or a twist law fails."""


@dataclass(frozen=True)
class Twist:
    """An involution of the bounded lattice built from ladder reflections."""

    word: SnakeWord
    ladder_mask: FrozenSet[int]
    permutation: Tuple[int, ...]
    column_permutation: Tuple[int, ...]


def _twist_from_permutation(w: SnakeWord, mask: FrozenSet[int], perm) -> Twist:
    ctx = word_context(w)
    cols = tuple(ctx.column_of[perm[ctx.element_of[c]]]
                 for c in range(len(ctx.config.columns)))
    return Twist(w, mask, tuple(perm), cols)


def identity_twist(w: SnakeWord) -> Twist:
    """The twist with empty ladder mask."""
    size = word_context(w).phat.size
    return _twist_from_permutation(w, frozenset(), range(size))


def elementary_twist(w: SnakeWord, i: int) -> Twist:
    """Reflect ladder i (1-based), swapping the two ends of each of its rungs."""
    ctx = word_context(w)
    rung_lists = ctx.labeling.ladders.rungs
    if not 1 <= i <= len(rung_lists):
        raise TwistError('ladder index %d out of range 1..%d' % (i, len(rung_lists)))
    perm = list(range(ctx.phat.size))
    for upper, lower in rung_lists[i - 1]:
        perm[upper] = lower
        perm[lower] = upper
    return _twist_from_permutation(w, frozenset({i}), perm)


def compose_twists(a: Twist, b: Twist) -> Twist:
    """Product of two twists of the same word; masks combine symmetrically."""
    if a.word != b.word:
        raise TwistError('twists belong to different words')
    perm = tuple(a.permutation[b.permutation[e]] for e in range(len(a.permutation)))
    return _twist_from_permutation(a.word, a.ladder_mask ^ b.ladder_mask, perm)


@lru_cache(maxsize=None)
def all_twists(w: SnakeWord) -> Tuple[Twist, ...]:
    """All 2^t twists, ordered by binary counting over the ladder indices."""
    out = [identity_twist(w)]
    for i in range(1, len(word_context(w).labeling.ladders.rungs) + 1):
        tau = elementary_twist(w, i)
        out.extend([compose_twists(prev, tau) for prev in list(out)])
    return tuple(out)


@lru_cache(maxsize=None)
def _circuit_set(w: SnakeWord) -> FrozenSet[Circuit]:
    return frozenset(all_circuits(w))


def twist_circuit(tau: Twist, z: Circuit) -> Circuit:
    """Image circuit under the twist; the image must again be a circuit."""
    cols = tau.column_permutation
    image = Circuit.make([cols[c] for c in z.plus], [cols[c] for c in z.minus])
    if image not in _circuit_set(tau.word):
        raise TwistError('twist image %r is not a circuit' % (image,))
    return image


@dataclass(frozen=True)
class TwistImage:
    """Twisted simplex set together with its validation verdict."""

    triangulation: Triangulation
    valid: bool


def twist_triangulation(tau: Twist, tri: Triangulation) -> TwistImage:
    """Apply the twist to every simplex and validate the result."""
    cols = tau.column_permutation
    simplices = [tuple(sorted(cols[c] for c in s)) for s in tri.simplices]
    image = Triangulation.make(tri.config, simplices)
    return TwistImage(image, is_triangulation(tri.config, image.simplices))


@dataclass(frozen=True)
class CommutingSquareReport:
    """Outcome of checking flip-then-twist against twist-then-flip."""

    word: SnakeWord
    depth: Optional[int]
    triangulations: int
    twists: int
    moves_checked: int
    counterexamples: Tuple[Tuple[str, Tuple[int, ...], str], ...]

    def __bool__(self) -> bool:
        return not self.counterexamples


def commuting_square_check(w: SnakeWord, depth: Optional[int] = None,
                           workers: int = 1) -> CommutingSquareReport:
    """Check the commuting square on every flip within depth of the canonical."""
    circuits = all_circuits(w)
    graph = explore_flip_graph(canonical_of(w), circuits, workers=workers, max_depth=depth)
    twists = all_twists(w)
    images: Dict[Tuple[FrozenSet[int], Tuple], TwistImage] = {}

    def image(tau: Twist, tri: Triangulation) -> TwistImage:
        key = (tau.ladder_mask, tri.simplices)
        if key not in images:
            images[key] = twist_triangulation(tau, tri)
        return images[key]

    bad = []
    moves_checked = 0
    for tri in graph.nodes:
        moves = find_flips(tri, circuits)
        for tau in twists:
            mask = tuple(sorted(tau.ladder_mask))
            twisted = image(tau, tri)
            if not twisted.valid:
                bad.append((triangulation_hash(tri), mask, 'twist image is not a triangulation'))
                continue
            partner_moves = {m.circuit: m for m in find_flips(twisted.triangulation, circuits)}
            for m in moves:
                moves_checked += 1
                z2 = twist_circuit(tau, m.circuit)
                m2 = partner_moves.get(z2)
                if m2 is None:
                    bad.append((triangulation_hash(tri), mask, 'no flip at the twisted circuit'))
                    continue
                left = image(tau, apply_flip(tri, m, validate=False))
                right = apply_flip(twisted.triangulation, m2, validate=False)
                if not left.valid or left.triangulation.simplices != right.simplices:
                    bad.append((triangulation_hash(tri), mask, 'square does not commute'))
    return CommutingSquareReport(w, depth, len(graph.nodes), len(twists),
                                 moves_checked, tuple(bad))
