"""
FDAGs: DAG reductions of irredundant forests of unordered trees.

An Fdag is stored through its canonical ordering: vertex i carries the
decreasing word of the indices of its children (one letter per arc, so arc
multiplicities are repeated letters). Vertex 0 is the unique leaf, heights
never decrease with the index and, inside a block of equal height, child
words are strictly increasing.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from fdagenum.trees import Tree, format_tree
from fdagenum.words import format_word, is_decreasing, parse_word

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

# Names of the constraints reported by validate, in checking order
DECREASING = "decreasing-word"
TOPOLOGICAL = "topological"
DISTINCT_CHILDREN = "distinct-children"
HEIGHT_ORDER = "height-order"
LEX_ORDER = "lex-order"


class RedundancyError(ValueError):
    def __init__(self, subtree_index, host_index):
        self.pair = (subtree_index, host_index)
        super().__init__(
            f"Redundant forest: tree {subtree_index} is a subtree of tree {host_index}"
        )


class InvalidFdagError(ValueError):
    def __init__(self, validation):
        self.validation = validation
        super().__init__(validation.message)


class FdagFormatError(ValueError):
    def __init__(self, message, filename=None, line=None, constraint=None):
        self.filename = filename
        self.line = line
        self.constraint = constraint
        where = filename if filename is not None else "<stream>"
        if line is not None:
            where = f"{where}:{line}"
        detail = f" [{constraint}]" if constraint else ""
        super().__init__(f"{where}: {message}{detail}")


@dataclass(frozen=True)
class Validation:
    ok: bool
    constraint: Optional[str] = None
    vertex: Optional[int] = None
    message: str = "ok"

    def __bool__(self):
        return self.ok


def _fail(constraint, vertex, message):
    return Validation(False, constraint, vertex, message)


def _heights(words: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    h = []
    for w in words:
        h.append(1 + max(h[a] for a in w) if w else 0)
    return tuple(h)


def validate_words(words: Sequence[Sequence[int]]) -> Validation:
    """Check that `words`, read in order, is the canonical ordering of a FDAG."""
    words = [tuple(w) for w in words]
    if not words:
        return _fail(TOPOLOGICAL, None, "A FDAG has at least one vertex")

    for i, w in enumerate(words):
        if not is_decreasing(w):
            return _fail(DECREASING, i, f"Child word of vertex {i} is not decreasing")
        if any(not 0 <= a < i for a in w):
            return _fail(
                TOPOLOGICAL, i, f"Vertex {i} has a child that does not precede it"
            )

    seen = {}
    for i, w in enumerate(words):
        if w in seen:
            return _fail(
                DISTINCT_CHILDREN,
                i,
                f"Vertices {seen[w]} and {i} have the same children",
            )
        seen[w] = i

    heights = _heights(words)
    for i in range(1, len(words)):
        if heights[i] < heights[i - 1]:
            return _fail(
                HEIGHT_ORDER,
                i,
                f"Vertex {i} of height {heights[i]} follows a vertex of height {heights[i - 1]}",
            )
        if heights[i] == heights[i - 1] and words[i] <= words[i - 1]:
            return _fail(
                LEX_ORDER,
                i,
                f"Child word of vertex {i} does not exceed the one of vertex {i - 1}",
            )
    return Validation(True)


class Fdag:
    def __init__(self, words: Iterable[Sequence[int]], check: bool = True):
        words = tuple(tuple(w) for w in words)
        if check:
            result = validate_words(words)
            if not result:
                raise InvalidFdagError(result)
        self.words = words
        self.heights = _heights(words)
        self._p = None

    @property
    def nvertices(self) -> int:
        return len(self.words)

    @property
    def n(self) -> int:
        """Index of the last vertex."""
        return len(self.words) - 1

    @property
    def height(self) -> int:
        return self.heights[-1]

    @property
    def p(self) -> int:
        """Largest index of a vertex lower than the last one, -1 for D_0."""
        if self._p is None:
            top = self.heights[-1]
            p = self.n
            while p >= 0 and self.heights[p] == top:
                p -= 1
            self._p = p
        return self._p

    @property
    def last_word(self) -> Tuple[int, ...]:
        return self.words[-1]

    @property
    def outdegree(self) -> int:
        return max(len(w) for w in self.words)

    @property
    def steps(self) -> int:
        """Number of expansion steps separating this FDAG from D_0."""
        total = 0
        prev = ()
        for w in self.words[1:]:
            lcp = 0
            while lcp < min(len(w), len(prev)) and w[lcp] == prev[lcp]:
                lcp += 1
            total += len(w) - lcp
            prev = w
        return total

    @property
    def sources(self) -> List[int]:
        used = set()
        for w in self.words:
            used.update(w)
        return [i for i in range(self.nvertices) if i not in used]

    @property
    def parents(self) -> List[List[int]]:
        parents = [[] for _ in self.words]
        for i, w in enumerate(self.words):
            for a in sorted(set(w)):
                parents[a].append(i)
        return parents

    def descendants(self, v: int) -> List[int]:
        seen = {v}
        stack = [v]
        while stack:
            for a in self.words[stack.pop()]:
                if a not in seen:
                    seen.add(a)
                    stack.append(a)
        seen.discard(v)
        return sorted(seen)

    def __len__(self):
        return len(self.words)

    def __eq__(self, other):
        if not isinstance(other, Fdag):
            return NotImplemented
        return self.words == other.words

    def __hash__(self):
        return hash(self.words)

    def __repr__(self):
        return f"Fdag({to_line(self)!r})"


D0 = Fdag([()])


class Forest:
    """Ordered collection of trees; tree i (1-based) is `forest[i - 1]`."""

    def __init__(self, trees: Iterable[Tree]):
        self.trees = list(trees)

    def __len__(self):
        return len(self.trees)

    def __iter__(self):
        return iter(self.trees)

    def __getitem__(self, i):
        return self.trees[i]

    def __repr__(self):
        return "Forest([" + ", ".join(format_tree(t) for t in self.trees) + "])"

    def signatures(self):
        return sorted(t.signature for t in self.trees)

    def is_irredundant(self) -> bool:
        try:
            self.check_irredundant()
        except RedundancyError:
            return False
        return True

    def check_irredundant(self):
        subtrees = [set(t.signatures) for t in self.trees]
        for i, t in enumerate(self.trees):
            for j in range(len(self.trees)):
                if i != j and t.signature in subtrees[j]:
                    raise RedundancyError(i + 1, j + 1)


def reduce(forest: Iterable[Tree], return_roots: bool = False):
    """Compress an irredundant forest into its canonically ordered FDAG.

    Subtrees are merged by hash consing: a class is keyed by the sorted tuple
    of the classes of its children, shared across the whole forest.
    """
    trees = list(forest)
    if not trees:
        raise ValueError("Cannot reduce an empty forest")

    classes: Dict[Tuple[int, ...], int] = {}
    class_keys: List[Tuple[int, ...]] = []
    tree_classes = []
    for t in trees:
        cid = [None] * t.nvertices
        for v in t.bottom_up():
            key = tuple(sorted(cid[c] for c in t.children[v]))
            if key not in classes:
                classes[key] = len(class_keys)
                class_keys.append(key)
            cid[v] = classes[key]
        tree_classes.append(cid)

    roots = [cid[t.root] for cid, t in zip(tree_classes, trees)]
    members = [set(cid) for cid in tree_classes]
    for i, r in enumerate(roots):
        for j, m in enumerate(members):
            if i != j and r in m:
                raise RedundancyError(i + 1, j + 1)

    # Child classes are always created before their parents
    heights = []
    for key in class_keys:
        heights.append(1 + max(heights[c] for c in key) if key else 0)

    by_height: Dict[int, List[int]] = {}
    for c, h in enumerate(heights):
        by_height.setdefault(h, []).append(c)

    index = {}
    words = []
    for h in sorted(by_height):
        block = []
        for c in by_height[h]:
            word = tuple(sorted((index[a] for a in class_keys[c]), reverse=True))
            block.append((word, c))
        block.sort()
        for k in range(1, len(block)):
            if block[k][0] == block[k - 1][0]:
                raise RuntimeError("Two merged classes share the same child word")
        for word, c in block:
            index[c] = len(words)
            words.append(word)

    d = Fdag(words, check=False)
    logger.debug("Reduced %d trees to %d vertices", len(trees), d.nvertices)
    if return_roots:
        return d, [index[r] for r in roots]
    return d


def vertex_tree(d: Fdag, v: int) -> Tree:
    """The tree compressed by the subDAG rooted in v."""
    # One tree vertex per path from v; each letter of a word is one arc
    children = [[]]
    stack = [(0, v)]
    while stack:
        t, u = stack.pop()
        for a in d.words[u]:
            c = len(children)
            children.append([])
            children[t].append(c)
            stack.append((c, a))
    return Tree(children)


def expand(d: Fdag) -> Forest:
    return Forest(vertex_tree(d, r) for r in d.sources)


def restrict(d: Fdag, vertices: Iterable[int]) -> Fdag:
    """Re-index a children-closed vertex subset; the host order stays canonical."""
    kept = sorted(set(vertices))
    index = {v: i for i, v in enumerate(kept)}
    return Fdag([tuple(index[a] for a in d.words[v]) for v in kept], check=False)


def subdag(d: Fdag, v: int) -> Fdag:
    if not 0 <= v < d.nvertices:
        raise ValueError(f"Vertex {v} is not in the FDAG")
    return restrict(d, d.descendants(v) + [v])


def to_networkx(d: Fdag) -> nx.MultiDiGraph:
    g = nx.MultiDiGraph()
    g.add_nodes_from(range(d.nvertices))
    for i, w in enumerate(d.words):
        for a in w:
            g.add_edge(i, a)
    return g


def _graph_words(graph: nx.MultiDiGraph, order: Optional[Sequence] = None):
    if order is None:
        order = sorted(graph.nodes)
    position = {v: i for i, v in enumerate(order)}
    if len(position) != len(order) or set(position) != set(graph.nodes):
        return None
    return [
        tuple(sorted((position[c] for _, c in graph.out_edges(v)), reverse=True))
        for v in order
    ]


def validate(d, order: Optional[Sequence] = None) -> Validation:
    """Validate an Fdag, a sequence of child words, or a multigraph with a vertex order.

    Graph arcs go from parent to child, one edge per unit of multiplicity.
    """
    if isinstance(d, Fdag):
        return validate_words(d.words)
    if isinstance(d, nx.Graph):
        if not d.is_directed() or not nx.is_directed_acyclic_graph(d):
            return _fail(TOPOLOGICAL, None, "The graph is not a directed acyclic graph")
        words = _graph_words(d, order)
        if words is None:
            return _fail(TOPOLOGICAL, None, "The order does not list each vertex once")
        return validate_words(words)
    return validate_words(d)


def from_networkx(graph: nx.MultiDiGraph, order: Optional[Sequence] = None) -> Fdag:
    result = validate(graph, order)
    if not result:
        raise InvalidFdagError(result)
    return Fdag(_graph_words(graph, order), check=False)


def to_line(d: Fdag) -> str:
    return ";".join(format_word(w) for w in d.words)


def from_line(text: str) -> Fdag:
    return Fdag(parse_word(part) for part in text.strip().split(";"))


def format_fdag(d: Fdag) -> str:
    lines = [f"fdag {FORMAT_VERSION}", f"n {d.nvertices}"]
    for i, w in enumerate(d.words):
        lines.append(f"{i}: {format_word(w)}" if w else f"{i}:")
    return "\n".join(lines) + "\n"


def write_fdag(d: Fdag, stream) -> None:
    stream.write(format_fdag(d))


def _parse_record(lines, filename) -> Fdag:
    """Parse one record given as (line number, text) pairs."""
    lineno, header = lines[0]
    if header.split() != ["fdag", str(FORMAT_VERSION)]:
        raise FdagFormatError(
            f"expected 'fdag {FORMAT_VERSION}' header", filename, lineno, "header"
        )
    if len(lines) < 2:
        raise FdagFormatError("missing vertex count", filename, lineno, "header")
    lineno, count = lines[1]
    parts = count.split()
    if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit():
        raise FdagFormatError("expected 'n <vertex count>'", filename, lineno, "header")
    nvert = int(parts[1])
    body = lines[2:]
    if len(body) != nvert:
        raise FdagFormatError(
            f"expected {nvert} vertex lines, found {len(body)}",
            filename,
            lineno,
            "vertex-count",
        )

    words = []
    for i, (lineno, text) in enumerate(body):
        label, sep, word = text.partition(":")
        if not sep or label.strip() != str(i):
            raise FdagFormatError(
                f"expected '{i}: <child word>'", filename, lineno, "vertex-line"
            )
        try:
            words.append(parse_word(word))
        except ValueError as e:
            raise FdagFormatError(str(e), filename, lineno, DECREASING)

    result = validate_words(words)
    if not result:
        line = body[result.vertex][0] if result.vertex is not None else lines[0][0]
        raise FdagFormatError(result.message, filename, line, result.constraint)
    return Fdag(words, check=False)


def read_fdags(source) -> Iterator[Fdag]:
    """Read FDAG records separated by blank lines."""
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source) as f:
            yield from read_fdags(f)
        return
    filename = getattr(source, "name", None)
    record = []
    for lineno, line in enumerate(source, start=1):
        text = line.strip()
        if text.startswith("#"):
            continue
        if not text:
            if record:
                yield _parse_record(record, filename)
                record = []
            continue
        record.append((lineno, text))
    if record:
        yield _parse_record(record, filename)


def read_fdag(source) -> Fdag:
    fdags = list(read_fdags(source))
    if len(fdags) != 1:
        raise FdagFormatError(f"expected one FDAG record, found {len(fdags)}")
    return fdags[0]
