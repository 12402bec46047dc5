import io
import itertools
import os
import unittest

import networkx as nx
import numpy as np

from fdagenum.trees import (
    Tree,
    TreeParseError,
    distinct_subtrees,
    format_tree,
    height,
    is_subtree,
    isomorphic,
    outdegree,
    parse_tree,
    random_tree,
    read_forest,
    subtree,
    write_forest,
)

curr_dir = os.path.dirname(os.path.abspath(__file__))


def recursive_trees(nvertices):
    """Every tree where vertex v > 0 hangs below some vertex among 0..v-1."""
    for parents in itertools.product(*(range(v) for v in range(1, nvertices))):
        children = [[] for _ in range(nvertices)]
        for v, p in enumerate(parents, start=1):
            children[p].append(v)
        yield Tree(children)


def chain(nvertices):
    return Tree([[v + 1] for v in range(nvertices - 1)] + [[]])


def to_digraph(t):
    g = nx.DiGraph()
    g.add_nodes_from(range(t.nvertices))
    for v, cs in enumerate(t.children):
        for c in cs:
            g.add_edge(v, c)
    return g


class TestTrees(unittest.TestCase):
    def test_parse(self):
        t = parse_tree("((())(()()))")
        self.assertEqual(t.nvertices, 6)
        self.assertEqual(len(t.leaves), 3)
        self.assertEqual(height(t), 2)
        self.assertEqual(outdegree(t), 2)

    def test_parse_errors(self):
        cases = {"(()": 3, "())": 2, "()()": 2, "(x)": 1, "": 0}
        for text, offset in cases.items():
            with self.subTest(text=text):
                with self.assertRaises(TreeParseError) as cm:
                    parse_tree(text)
                self.assertEqual(cm.exception.offset, offset)

    def test_canonical_text(self):
        a = parse_tree("((())())")
        b = parse_tree("(()(()))")
        self.assertEqual(format_tree(a), format_tree(b))
        self.assertTrue(isomorphic(a, b))
        self.assertEqual(a, b)
        self.assertEqual(parse_tree(format_tree(a)), a)

    def test_subtree(self):
        t = parse_tree("((())(()()))")
        self.assertEqual(len(distinct_subtrees(t)), 4)
        self.assertTrue(is_subtree(parse_tree("(()())"), t))
        self.assertFalse(is_subtree(parse_tree("(()()())"), t))
        for v in range(t.nvertices):
            with self.subTest(vertex=v):
                self.assertTrue(is_subtree(subtree(t, v), t))

    def test_isomorphism_against_networkx(self):
        rng = np.random.default_rng(0)
        trees = [random_tree(int(rng.integers(1, 9)), rng) for _ in range(40)]
        for i in range(0, len(trees), 2):
            a, b = trees[i], trees[i + 1]
            expected = nx.is_isomorphic(to_digraph(a), to_digraph(b)) if a.nvertices == b.nvertices else False
            with self.subTest(pair=i):
                self.assertEqual(isomorphic(a, b), expected)

    def test_signature_is_isomorphism(self):
        # unordered rooted trees with 1..6 vertices: 1, 1, 2, 4, 9, 20
        for n, nclasses in zip(range(1, 7), (1, 1, 2, 4, 9, 20)):
            trees = list(recursive_trees(n))
            graphs = [to_digraph(t) for t in trees]
            with self.subTest(nvertices=n):
                self.assertEqual(len({t.signature for t in trees}), nclasses)
                for i, j in itertools.combinations(range(len(trees)), 2):
                    same = trees[i].signature == trees[j].signature
                    self.assertEqual(same, nx.is_isomorphic(graphs[i], graphs[j]))

    def test_sibling_permutation(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            t = random_tree(int(rng.integers(1, 20)), rng)
            shuffled = Tree([rng.permutation(cs).tolist() for cs in t.children])
            with self.subTest(tree=format_tree(t)):
                self.assertEqual(height(shuffled), height(t))
                self.assertEqual(outdegree(shuffled), outdegree(t))
                self.assertEqual(shuffled, t)
                self.assertEqual(format_tree(shuffled), format_tree(t))

    def test_chain_subtrees(self):
        for n in range(1, 7):
            with self.subTest(nvertices=n):
                self.assertEqual(len(distinct_subtrees(chain(n))), n)
                self.assertEqual(height(chain(n)), n - 1)

    def test_deep_chain(self):
        text = "(" * 3000 + ")" * 3000
        t = parse_tree(text)
        self.assertEqual(height(t), 2999)
        self.assertEqual(format_tree(t), text)
        self.assertEqual(t, chain(3000))
        self.assertEqual(len(distinct_subtrees(t)), 3000)
        self.assertEqual(repr(t), f"Tree({text!r})")

    def test_invalid_tree(self):
        with self.assertRaises(ValueError):
            Tree([[1], [0]])
        with self.assertRaises(ValueError):
            Tree([[1, 1], []])
        with self.assertRaises(ValueError):
            Tree([[], []])

    def test_forest_io(self):
        trees = read_forest(os.path.join(curr_dir, "example", "forest.txt"))
        self.assertEqual(len(trees), 3)
        out = io.StringIO()
        write_forest(trees, out)
        again = read_forest(io.StringIO(out.getvalue()))
        self.assertEqual(again, trees)

    def test_forest_error_location(self):
        with self.assertRaises(TreeParseError) as cm:
            read_forest(io.StringIO("(())\n\n(()\n"))
        self.assertEqual(cm.exception.line, 3)


if __name__ == "__main__":
    unittest.main(verbosity=2)
