"""
Unordered rooted trees.

Trees are stored as an arena of vertices, each vertex holding the tuple of
its children. Child order carries no meaning: every structural query goes
through the canonical signature of a vertex, computed bottom-up. A signature
is the integer id of an isomorphism class, interned from the sorted tuple of
the ids of its children, so equality of signatures is exactly rooted-tree
isomorphism and comparing two signatures never recurses.
"""
import io
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

logger = logging.getLogger(__name__)

Signature = int

# Shared by every tree of the process: sorted child classes -> class id
_CLASS_IDS: Dict[Tuple[int, ...], int] = {}

WHITESPACE = b" \t\r\n\f\v"


def intern_class(child_classes: Iterable[Signature]) -> Signature:
    key = tuple(sorted(child_classes))
    return _CLASS_IDS.setdefault(key, len(_CLASS_IDS))


class TreeParseError(ValueError):
    def __init__(self, message, offset, line=None, filename=None):
        self.message = message
        self.offset = offset
        self.line = line
        self.filename = filename
        where = f"byte {offset}"
        if line is not None:
            where = f"line {line}, {where}"
        if filename is not None:
            where = f"{filename}: {where}"
        super().__init__(f"{where}: {message}")


class Tree:
    def __init__(self, children: Sequence[Sequence[int]], root: int = 0):
        children = tuple(tuple(c) for c in children)
        nvert = len(children)
        if nvert == 0:
            raise ValueError("A tree needs at least one vertex")
        if not 0 <= root < nvert:
            raise ValueError(f"Root {root} is not a vertex")

        nparents = [0] * nvert
        for v, cs in enumerate(children):
            for c in cs:
                if not 0 <= c < nvert:
                    raise ValueError(f"Vertex {v} has an unknown child {c}")
                nparents[c] += 1
        if nparents[root] != 0:
            raise ValueError("The root cannot have a parent")
        for v in range(nvert):
            if v != root and nparents[v] != 1:
                raise ValueError(f"Vertex {v} has {nparents[v]} parents")

        order = [root]
        for v in order:
            order.extend(children[v])
        if len(order) != nvert:
            raise ValueError("Vertices unreachable from the root")

        self.children = children
        self.root = root
        self._order = tuple(order)
        self._signatures = None

    @property
    def nvertices(self) -> int:
        return len(self.children)

    @property
    def leaves(self) -> List[int]:
        return [v for v in range(self.nvertices) if not self.children[v]]

    @property
    def signatures(self) -> Tuple[Signature, ...]:
        if self._signatures is None:
            sigs = [None] * self.nvertices
            for v in reversed(self._order):
                sigs[v] = intern_class(sigs[c] for c in self.children[v])
            self._signatures = tuple(sigs)
        return self._signatures

    @property
    def signature(self) -> Signature:
        return self.signatures[self.root]

    def bottom_up(self) -> Tuple[int, ...]:
        """Vertices ordered so that every child comes before its parent."""
        return tuple(reversed(self._order))

    def __eq__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return self.signature == other.signature

    def __hash__(self):
        return hash(self.signature)

    def __repr__(self):
        return f"Tree({format_tree(self)!r})"


def height(t: Tree) -> int:
    h = [0] * t.nvertices
    for v in t.bottom_up():
        if t.children[v]:
            h[v] = 1 + max(h[c] for c in t.children[v])
    return h[t.root]


def outdegree(t: Tree) -> int:
    return max(len(cs) for cs in t.children)


def distinct_subtrees(t: Tree) -> Set[Signature]:
    return set(t.signatures)


def isomorphic(t1: Tree, t2: Tree) -> bool:
    return t1.signature == t2.signature


def subtree(t: Tree, v: int) -> Tree:
    """The subtree T[v] made of v and all its descendants."""
    order = [v]
    for u in order:
        order.extend(t.children[u])
    index = {u: i for i, u in enumerate(order)}
    return Tree([[index[c] for c in t.children[u]] for u in order])


def is_subtree(t: Tree, host: Tree) -> bool:
    return t.signature in distinct_subtrees(host)


def format_tree(t: Tree) -> str:
    """Canonical parenthesised text: siblings are written in signature order."""
    sigs = t.signatures
    parts = []
    stack = [t.root]
    while stack:
        v = stack.pop()
        if v < 0:
            parts.append(")")
            continue
        parts.append("(")
        stack.append(-1)
        stack.extend(sorted(t.children[v], key=sigs.__getitem__, reverse=True))
    return "".join(parts)


def parse_tree(text: str) -> Tree:
    data = text.encode("utf-8")
    children = []
    stack = []
    closed = False
    for offset, byte in enumerate(data):
        if byte in WHITESPACE:
            continue
        ch = chr(byte)
        if ch == "(":
            if closed:
                raise TreeParseError("content after the end of the tree", offset)
            v = len(children)
            children.append([])
            if stack:
                children[stack[-1]].append(v)
            stack.append(v)
        elif ch == ")":
            if not stack:
                raise TreeParseError("unbalanced ')'", offset)
            stack.pop()
            closed = not stack
        else:
            raise TreeParseError(f"unexpected character {ch!r}", offset)
    if not children:
        raise TreeParseError("empty tree", 0)
    if stack:
        raise TreeParseError(f"{len(stack)} unclosed '('", len(data))
    return Tree(children)


def _open(source, mode="r"):
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        return open(source, mode), True
    return source, False


def read_forest(source) -> List[Tree]:
    f, owned = _open(source)
    filename = getattr(f, "name", None)
    trees = []
    try:
        for lineno, line in enumerate(f, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            try:
                trees.append(parse_tree(line.rstrip("\n")))
            except TreeParseError as e:
                raise TreeParseError(e.message, e.offset, line=lineno, filename=filename)
    finally:
        if owned:
            f.close()
    logger.debug("Read %d trees from %s", len(trees), filename)
    return trees


def write_forest(trees: Iterable[Tree], stream: Optional[io.TextIOBase] = None) -> str:
    text = "".join(format_tree(t) + "\n" for t in trees)
    if stream is not None:
        stream.write(text)
    return text


def random_tree(nvertices: int, rng) -> Tree:
    """Random recursive tree: vertex v picks its parent uniformly among 0..v-1."""
    children = [[] for _ in range(nvertices)]
    for v in range(1, nvertices):
        children[int(rng.integers(0, v))].append(v)
    return Tree(children)
