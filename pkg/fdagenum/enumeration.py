"""
Reverse search over FDAGs.

Every FDAG except D_0 is obtained from a unique antecedent by one of three
expansion rules applied to its last vertex v_n:

  branching   append a letter of the lower alphabet to childc(v_n)
  elongation  add a new vertex, higher than all others, with a single child
  widening    add a new vertex at the height of v_n whose word is minimal
              above childc(v_n)

so that depth-first traversal of the expansion tree visits each FDAG once.
A fourth rule, repetition, duplicates trees of the forest described by a
FDAG and is only used by the combined search over redundant forests.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, List, Optional, Tuple, Union

import numpy as np
from scipy.special import comb
from tqdm import tqdm

from fdagenum.dag import D0, Fdag, vertex_tree
from fdagenum.words import is_minimal, minimal_words, suffix_cut

logger = logging.getLogger(__name__)

INCREMENTAL = "incremental"
COPYING = "copying"
STRATEGIES = (INCREMENTAL, COPYING)


class NoAntecedentError(ValueError):
    pass


class ConstraintError(ValueError):
    pass


class Rule(Enum):
    BRANCHING = "branching"
    ELONGATION = "elongation"
    WIDENING = "widening"
    REPETITION = "repetition"


@dataclass(frozen=True)
class ExpansionDelta:
    """One rule application: a letter for branching, the single child for
    elongation, a full child word for widening, an index for repetition."""

    rule: Rule
    payload: Union[int, Tuple[int, ...]]

    def __post_init__(self):
        if self.rule is Rule.WIDENING:
            if not isinstance(self.payload, tuple):
                raise ValueError("A widening delta carries a child word")
        elif not isinstance(self.payload, (int, np.integer)):
            raise ValueError(f"A {self.rule.value} delta carries an index")


def expansions(d) -> List[ExpansionDelta]:
    """Deltas of all successors of `d`, in emission order.

    Works on anything exposing `n`, `p` and `last_word`, so that the
    incremental state can share it with Fdag.
    """
    n, p, w = d.n, d.p, d.last_word
    deltas = []
    if p >= 0:
        for a in range(w[-1], -1, -1):
            deltas.append(ExpansionDelta(Rule.BRANCHING, a))
    for a in range(p + 1, n + 1):
        deltas.append(ExpansionDelta(Rule.ELONGATION, a))
    if p >= 0:
        for word in minimal_words(w, p):
            deltas.append(ExpansionDelta(Rule.WIDENING, word))
    return deltas


def apply(d: Fdag, delta: ExpansionDelta) -> Fdag:
    words = d.words
    if delta.rule is Rule.BRANCHING:
        return Fdag(words[:-1] + (words[-1] + (delta.payload,),), check=False)
    if delta.rule is Rule.ELONGATION:
        return Fdag(words + ((delta.payload,),), check=False)
    if delta.rule is Rule.WIDENING:
        return Fdag(words + (delta.payload,), check=False)
    raise ValueError("Repetition does not change the FDAG")


def successors(d: Fdag) -> List[Tuple[ExpansionDelta, Fdag]]:
    return [(delta, apply(d, delta)) for delta in expansions(d)]


def successor_count(d) -> int:
    if d.p < 0:
        return d.n - d.p
    return (d.last_word[-1] + 1) + (d.n - d.p) + (d.p + 1)


def antecedent(d: Fdag) -> Tuple[Fdag, Rule]:
    """The unique FDAG `d` is a successor of, and the rule leading back to `d`."""
    if d.nvertices == 1:
        raise NoAntecedentError("D_0 has no antecedent")
    words = d.words
    w = words[-1]
    if d.heights[-2] != d.heights[-1]:
        if len(w) == 1:
            return Fdag(words[:-1], check=False), Rule.ELONGATION
        return Fdag(words[:-1] + (suffix_cut(w),), check=False), Rule.BRANCHING
    if is_minimal(w, words[-2]):
        return Fdag(words[:-1], check=False), Rule.WIDENING
    return Fdag(words[:-1] + (suffix_cut(w),), check=False), Rule.BRANCHING


class GrowingFdag:
    """Mutable FDAG updated in place by expansion deltas and undone on pop.

    It exposes the read-only interface of Fdag used by predicates and
    writers (words, n, p, nvertices, height, outdegree, steps, last_word).
    """

    def __init__(self, start: Fdag = D0):
        self.words = list(start.words)
        self.heights = list(start.heights)
        self.p = start.p
        self.outdegree = start.outdegree
        self._base_steps = start.steps
        self._history = []

    @property
    def n(self):
        return len(self.words) - 1

    @property
    def nvertices(self):
        return len(self.words)

    @property
    def height(self):
        return self.heights[-1]

    @property
    def last_word(self):
        return self.words[-1]

    @property
    def steps(self):
        return self._base_steps + len(self._history)

    @property
    def depth(self):
        return len(self._history)

    def push(self, delta: ExpansionDelta):
        self._history.append((delta, self.p, self.outdegree))
        if delta.rule is Rule.BRANCHING:
            self.words[-1] = self.words[-1] + (delta.payload,)
        elif delta.rule is Rule.ELONGATION:
            self.p = self.n
            self.words.append((delta.payload,))
            self.heights.append(self.heights[-1] + 1)
        elif delta.rule is Rule.WIDENING:
            self.words.append(delta.payload)
            self.heights.append(self.heights[-1])
        else:
            raise ValueError("Repetition does not change the FDAG")
        self.outdegree = max(self.outdegree, len(self.words[-1]))

    def pop(self) -> ExpansionDelta:
        delta, self.p, self.outdegree = self._history.pop()
        if delta.rule is Rule.BRANCHING:
            self.words[-1] = self.words[-1][:-1]
        else:
            self.words.pop()
            self.heights.pop()
        return delta

    def freeze(self) -> Fdag:
        return Fdag(self.words, check=False)


def freeze(d) -> Fdag:
    return d.freeze() if isinstance(d, GrowingFdag) else d


def _accept_all(d):
    return True


def reverse_search(
    start: Fdag = D0,
    g: Optional[Callable] = None,
    strategy: str = INCREMENTAL,
    visitor: Optional[Callable] = None,
) -> Iterator:
    """Depth-first stream of the FDAGs reachable from `start` through nodes satisfying `g`.

    `g` must be anti-monotone along expansions; without it the stream is
    infinite. With the incremental strategy the yielded object is a live
    GrowingFdag that changes on the next pull: use `freeze` to keep it.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"Unknown strategy {strategy!r}")
    if g is None:
        g = _accept_all

    if strategy == COPYING:
        stack = [start]
        while stack:
            d = stack.pop()
            if not g(d):
                continue
            if visitor is not None:
                visitor(d)
            yield d
            stack.extend(s for _, s in reversed(successors(d)))
        return

    state = GrowingFdag(start)
    if not g(state):
        return
    if visitor is not None:
        visitor(state)
    yield state
    stack = [iter(expansions(state))]
    while stack:
        delta = next(stack[-1], None)
        if delta is None:
            stack.pop()
            if stack:
                state.pop()
            continue
        state.push(delta)
        if g(state):
            if visitor is not None:
                visitor(state)
            yield state
            stack.append(iter(expansions(state)))
        else:
            state.pop()


def _max_steps(k):
    def g(d):
        return d.steps <= k

    return g


def _subtree_counts(start: Fdag, K: int) -> List[int]:
    counts = [0] * (K + 1)
    for d in reverse_search(start, _max_steps(K)):
        counts[d.steps] += 1
    return counts


def level_counts(
    K: int,
    strategy: str = INCREMENTAL,
    parallel: bool = False,
    workers: Optional[int] = None,
    split: int = 3,
    progress: bool = False,
) -> List[int]:
    """Number of FDAGs at exactly k expansion steps from D_0, for k = 0..K."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    if strategy not in STRATEGIES:
        raise ValueError(f"Unknown strategy {strategy!r}")

    if parallel:
        split = min(split, K)
        counts = [0] * (K + 1)
        frontier = [D0]
        for k in range(split):
            counts[k] = len(frontier)
            frontier = [s for d in frontier for _, s in successors(d)]
        logger.debug("Distributing %d subtrees at depth %d", len(frontier), split)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_subtree_counts, frontier, [K] * len(frontier), chunksize=16)
            for sub in tqdm(results, total=len(frontier), disable=not progress):
                for k, c in enumerate(sub):
                    counts[k] += c
        return counts

    if strategy == COPYING:
        counts = []
        level = [D0]
        for k in tqdm(range(K + 1), disable=not progress):
            counts.append(len(level))
            if k < K:
                level = [s for d in level for _, s in successors(d)]
        return counts

    return _subtree_counts(D0, K)


class ConstraintKind(Enum):
    VERTICES_OUTDEGREE = "vertices+outdegree"
    HEIGHT_OUTDEGREE = "height+outdegree"
    STEP_CAP = "step-cap"


@dataclass(frozen=True)
class Constraint:
    max_vertices: Optional[int] = None
    max_height: Optional[int] = None
    max_outdegree: Optional[int] = None
    max_steps: Optional[int] = None

    def __post_init__(self):
        for name in ("max_vertices", "max_height", "max_outdegree", "max_steps"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ConstraintError(f"{name} must be nonnegative")

    @property
    def kind(self) -> ConstraintKind:
        if self.max_outdegree is not None:
            if self.max_vertices is not None:
                return ConstraintKind.VERTICES_OUTDEGREE
            if self.max_height is not None:
                return ConstraintKind.HEIGHT_OUTDEGREE
        if self.max_steps is not None:
            return ConstraintKind.STEP_CAP
        raise ConstraintError(
            "Enumeration is only finite when bounding vertices and outdegree, "
            "height and outdegree, or the number of steps"
        )


def constrained_predicate(c: Constraint) -> Callable:
    logger.debug("Constraint of kind %s", c.kind.value)
    bounds = [
        (attr, limit)
        for attr, limit in (
            ("nvertices", c.max_vertices),
            ("height", c.max_height),
            ("outdegree", c.max_outdegree),
            ("steps", c.max_steps),
        )
        if limit is not None
    ]

    def g(d):
        return all(getattr(d, attr) <= limit for attr, limit in bounds)

    return g


def max_vertices_at_height(h: int, d: int) -> int:
    """Largest number of vertices of height h in a FDAG of outdegree at most d."""
    if h < 0 or d < 1:
        raise ValueError("Need h >= 0 and d >= 1")
    ns = [1, d]
    for _ in range(2, h + 1):
        below = sum(ns[:-1])
        ns.append(
            sum(
                comb(k + ns[-1] - 1, k, exact=True) * comb(d - k + below, d - k, exact=True)
                for k in range(1, d + 1)
            )
        )
    return ns[h]


def random_fdag(k: int, seed=None, rng=None) -> Fdag:
    """Walk k uniformly chosen expansions down from D_0."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if rng is None:
        rng = np.random.default_rng(seed)
    d = D0
    for _ in range(k):
        deltas = expansions(d)
        d = apply(d, deltas[int(rng.integers(len(deltas)))])
    return d


def time_successors(d: Fdag, repeat: int = 1) -> Tuple[int, float]:
    """Wall-clock ns spent building all successors of `d`, and that time over (#D·deg(D))²."""
    total = 0
    for _ in range(repeat):
        t0 = time.perf_counter_ns()
        successors(d)
        total += time.perf_counter_ns() - t0
    total //= repeat
    size = max(d.nvertices * d.outdegree, 1)
    return total, total / size**2


@dataclass(frozen=True)
class PresenceVector:
    """Number of copies of each vertex subtree in a possibly redundant forest.

    `last` is the index incremented by the latest repetition; later
    repetitions only touch indices at or above it.
    """

    counts: Tuple[int, ...]
    last: int = 0

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise ValueError("Presence counts are nonnegative")

    @property
    def ntrees(self) -> int:
        return sum(self.counts)


def initial_presence(d: Fdag) -> PresenceVector:
    sources = set(d.sources)
    return PresenceVector(tuple(int(i in sources) for i in range(d.nvertices)))


def repetition_successors(d, pi: PresenceVector) -> List[PresenceVector]:
    if len(pi.counts) != d.nvertices:
        raise ValueError("Presence vector does not match the FDAG")
    result = []
    for j in range(pi.last, d.nvertices):
        counts = list(pi.counts)
        counts[j] += 1
        result.append(PresenceVector(tuple(counts), j))
    return result


def redundant_forests(d: Fdag, k: int) -> Iterator[PresenceVector]:
    """Presence vectors reachable from the one of `d` in 1..k repetitions."""
    stack = [(initial_presence(d), 0)]
    while stack:
        pi, depth = stack.pop()
        if depth > 0:
            yield pi
        if depth < k:
            stack.extend((s, depth + 1) for s in reversed(repetition_successors(d, pi)))


def expand_with_presence(d: Fdag, pi: PresenceVector) -> list:
    if len(pi.counts) != d.nvertices:
        raise ValueError("Presence vector does not match the FDAG")
    trees = []
    for v, c in enumerate(pi.counts):
        if c:
            t = vertex_tree(d, v)
            trees.extend([t] * c)
    return trees


@dataclass(frozen=True)
class CombinedNode:
    fdag: Fdag
    presence: PresenceVector = field(default=None)
    frozen: bool = False

    def __post_init__(self):
        if self.presence is None:
            object.__setattr__(self, "presence", initial_presence(self.fdag))

    @property
    def repetitions(self) -> int:
        return self.presence.ntrees - len(self.fdag.sources)

    @property
    def steps(self) -> int:
        return self.fdag.steps + self.repetitions


def combined_successors(node: CombinedNode) -> List[Tuple[ExpansionDelta, CombinedNode]]:
    """Rules B, E and W while the topology is open, then repetitions only."""
    result = []
    if not node.frozen:
        for delta, s in successors(node.fdag):
            result.append((delta, CombinedNode(s)))
    for pi in repetition_successors(node.fdag, node.presence):
        result.append(
            (ExpansionDelta(Rule.REPETITION, pi.last), CombinedNode(node.fdag, pi, True))
        )
    return result


def combined_search(
    start: Optional[CombinedNode] = None, g: Optional[Callable] = None
) -> Iterator[CombinedNode]:
    if start is None:
        start = CombinedNode(D0)
    if g is None:
        g = _accept_all
    stack = [start]
    while stack:
        node = stack.pop()
        if not g(node):
            continue
        yield node
        stack.extend(s for _, s in reversed(combined_successors(node)))
