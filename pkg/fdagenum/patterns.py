"""
SubFDAGs and frequent pattern mining.

A subFDAG is a children-closed set of vertices of a host FDAG; it compresses
a forest of subtrees of the forest compressed by the host. SubFDAGs are
enumerated by reverse search: each one is grown from its parent by adding a
single candidate vertex larger than every vertex already present.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

from fdagenum.dag import Fdag, restrict, subdag

logger = logging.getLogger(__name__)


class ClosureError(ValueError):
    def __init__(self, arc):
        self.arc = arc
        super().__init__(
            f"Vertex set is not closed under children: arc {arc[0]} -> {arc[1]} escapes it"
        )


@dataclass(frozen=True)
class PatternState:
    delta: FrozenSet[int]
    candidates: Tuple[int, ...]
    last_vertex: int
    origin: Optional[FrozenSet[int]] = None

    def key(self) -> Tuple[int, ...]:
        return tuple(sorted(self.delta))


def induced_subfdag(d: Fdag, vertices) -> Fdag:
    vertices = set(vertices)
    if not vertices:
        raise ValueError("A subFDAG has at least one vertex")
    for v in sorted(vertices):
        if not 0 <= v < d.nvertices:
            raise ValueError(f"Vertex {v} is not in the FDAG")
        for a in d.words[v]:
            if a not in vertices:
                raise ClosureError((v, a))
    return restrict(d, vertices)


def pattern_fdag(d: Fdag, state: PatternState) -> Fdag:
    return induced_subfdag(d, state.delta)


def origins(d: Fdag, roots: Optional[Sequence[int]] = None) -> List[FrozenSet[int]]:
    """Per vertex, the 1-based indices of the trees containing its subtree.

    Tree i is rooted at vertex `roots[i - 1]`, by default the sources in
    increasing order, which is the correspondence `dag.reduce` reports.
    """
    if roots is None:
        roots = d.sources
    origin = [set() for _ in d.words]
    for i, r in enumerate(roots, start=1):
        origin[r].add(i)
    for v in range(d.n, -1, -1):
        for a in set(d.words[v]):
            origin[a] |= origin[v]
    return [frozenset(o) for o in origin]


def _heirs(d, parents, state: PatternState, origin):
    delta = state.delta
    for k, s in enumerate(state.candidates):
        grown = delta | {s}
        added = [v for v in parents[s] if set(d.words[v]) <= grown]
        candidates = tuple(sorted(set(state.candidates[k + 1:]) | set(added)))
        omega = None if origin is None else state.origin & origin[s]
        yield PatternState(frozenset(grown), candidates, s, omega)


def _start(d, origin) -> PatternState:
    candidates = tuple(v for v in range(1, d.nvertices) if set(d.words[v]) == {0})
    return PatternState(frozenset([0]), candidates, 0, None if origin is None else origin[0])


def enumerate_subfdags(d: Fdag, origin: Optional[Sequence[FrozenSet[int]]] = None) -> Iterator[PatternState]:
    """Every subFDAG of `d`, depth first; origin sets are tracked when given."""
    parents = d.parents
    stack = [_start(d, origin)]
    while stack:
        state = stack.pop()
        yield state
        stack.extend(reversed(list(_heirs(d, parents, state, origin))))


def subfdag_count(d: Fdag) -> int:
    return sum(1 for _ in enumerate_subfdags(d))


def support(state: PatternState, ntrees: int) -> Fraction:
    if state.origin is None:
        raise ValueError("Pattern was enumerated without origins")
    return Fraction(len(state.origin), ntrees)


def _frequent(state, sigma: Fraction, ntrees: int) -> bool:
    omega = len(state.origin)
    return omega > 0 and omega * sigma.denominator >= sigma.numerator * ntrees


def frequent_subfdags(
    d: Fdag,
    sigma: Union[Fraction, str, int],
    origin: Optional[Sequence[FrozenSet[int]]] = None,
    ntrees: Optional[int] = None,
) -> Iterator[PatternState]:
    """SubFDAGs found in at least a fraction `sigma` of the trees, and in one tree at least.

    Heirs of an infrequent state are never generated: origin sets only shrink
    along the enumeration tree.
    """
    sigma = Fraction(sigma)
    if not 0 <= sigma <= 1:
        raise ValueError(f"Support threshold {sigma} is not in [0, 1]")
    if origin is None:
        origin = origins(d)
    if ntrees is None:
        ntrees = len(set().union(*origin))
    if ntrees == 0:
        raise ValueError("No trees to mine")

    parents = d.parents
    start = _start(d, origin)
    if not _frequent(start, sigma, ntrees):
        return
    stack = [start]
    while stack:
        state = stack.pop()
        yield state
        heirs = [h for h in _heirs(d, parents, state, origin) if _frequent(h, sigma, ntrees)]
        stack.extend(reversed(heirs))


def mining_quotient(d: Fdag) -> Fraction:
    """Patterns mined once on the whole FDAG over patterns mined tree by tree."""
    numerator = sum(1 for _ in frequent_subfdags(d, 0))
    denominator = sum(subfdag_count(subdag(d, r)) for r in d.sources)
    logger.debug("Mining quotient %d / %d", numerator, denominator)
    return Fraction(numerator, denominator)
