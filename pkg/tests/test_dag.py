import io
import itertools
import os
import unittest

import networkx as nx
import numpy as np

from fdagenum.dag import (
    D0,
    DECREASING,
    DISTINCT_CHILDREN,
    HEIGHT_ORDER,
    LEX_ORDER,
    TOPOLOGICAL,
    Fdag,
    FdagFormatError,
    Forest,
    InvalidFdagError,
    RedundancyError,
    expand,
    format_fdag,
    from_line,
    from_networkx,
    read_fdag,
    read_fdags,
    reduce,
    subdag,
    to_line,
    to_networkx,
    validate,
    vertex_tree,
)
from fdagenum.enumeration import freeze, reverse_search
from fdagenum.trees import distinct_subtrees, parse_tree, random_tree, read_forest, write_forest

curr_dir = os.path.dirname(os.path.abspath(__file__))

EXAMPLE = [(), (0,), (0, 0), (0, 0, 0), (1,), (2, 1, 1)]


class TestReduce(unittest.TestCase):
    def test_worked_example(self):
        trees = read_forest(os.path.join(curr_dir, "example", "forest.txt"))
        d, roots = reduce(trees, return_roots=True)
        self.assertEqual(d.words, tuple(EXAMPLE))
        self.assertEqual(roots, [4, 5, 3])
        self.assertEqual(d.sources, [3, 4, 5])
        self.assertEqual(d.steps, 7)
        self.assertEqual(d, read_fdag(os.path.join(curr_dir, "example", "forest.fdag")))

    def test_redundant(self):
        with self.assertRaises(RedundancyError) as cm:
            reduce([parse_tree("(())"), parse_tree("((()))")])
        self.assertEqual(cm.exception.pair, (1, 2))
        self.assertFalse(Forest([parse_tree("(())"), parse_tree("(())")]).is_irredundant())

    def test_empty(self):
        with self.assertRaises(ValueError):
            reduce([])

    def test_single_leaf(self):
        self.assertEqual(reduce([parse_tree("()")]), D0)

    def test_round_trip_random(self):
        rng = np.random.default_rng(1)
        done = 0
        while done < 100:
            forest = Forest(random_tree(int(rng.integers(1, 21)), rng) for _ in range(int(rng.integers(1, 4))))
            if not forest.is_irredundant():
                continue
            d = reduce(forest)
            with self.subTest(forest=repr(forest)):
                self.assertTrue(validate(d))
                self.assertEqual(expand(d).signatures(), forest.signatures())
                self.assertEqual(len(d.sources), len(forest))
            done += 1

    def test_round_trip_enumerated(self):
        fdags = [freeze(d) for d in reverse_search(D0, lambda d: d.steps <= 5)]
        self.assertEqual(len(fdags), 458)
        for d in fdags:
            with self.subTest(fdag=to_line(d)):
                self.assertEqual(reduce(expand(d)), d)

    def test_one_vertex_per_subtree_class(self):
        rng = np.random.default_rng(2)
        done = 0
        while done < 50:
            forest = Forest(random_tree(int(rng.integers(1, 15)), rng) for _ in range(int(rng.integers(1, 5))))
            if not forest.is_irredundant():
                continue
            classes = set().union(*(distinct_subtrees(t) for t in forest))
            with self.subTest(forest=repr(forest)):
                self.assertEqual(reduce(forest).nvertices, len(classes))
            done += 1

    def test_deep_trees(self):
        # a path of 1501 vertices, then a root over paths of 1500 and 1400 vertices
        chain = Fdag([()] + [(i,) for i in range(1500)])
        forest = expand(chain)
        self.assertEqual(len(forest), 1)
        self.assertEqual(forest[0].nvertices, 1501)
        text = write_forest(forest)
        self.assertEqual(text, "(" * 1501 + ")" * 1501 + "\n")
        self.assertEqual(reduce(read_forest(io.StringIO(text))), chain)

        t = parse_tree("(" + "(" * 1500 + ")" * 1500 + "(" * 1400 + ")" * 1400 + ")")
        d = reduce([t])
        self.assertEqual(d.nvertices, 1501)
        again = expand(d)
        self.assertEqual(again[0], t)
        self.assertTrue(again.is_irredundant())
        self.assertEqual(reduce(again), d)
        self.assertIn("Forest", repr(again))

    def test_reduce_ignores_tree_and_sibling_order(self):
        trees = read_forest(os.path.join(curr_dir, "example", "forest.txt"))
        shuffled = [parse_tree("(()()())"), parse_tree("((())(()())(()))"), parse_tree("((()))")]
        self.assertEqual(reduce(shuffled), reduce(trees))


class TestValidate(unittest.TestCase):
    def test_valid(self):
        self.assertTrue(validate(EXAMPLE))
        self.assertTrue(validate(Fdag(EXAMPLE)))

    def test_violations(self):
        cases = [
            ([(), (0,), (1, 0), (0, 1)], DECREASING, 3),
            ([(), (1,)], TOPOLOGICAL, 1),
            ([(0,)], TOPOLOGICAL, 0),
            ([(), (0,), (0,)], DISTINCT_CHILDREN, 2),
            ([(), (0,), (1,), (0, 0)], HEIGHT_ORDER, 3),
            ([(), (0, 0), (0,)], LEX_ORDER, 2),
        ]
        for words, constraint, vertex in cases:
            with self.subTest(words=words):
                result = validate(words)
                self.assertFalse(result)
                self.assertEqual(result.constraint, constraint)
                self.assertEqual(result.vertex, vertex)
                with self.assertRaises(InvalidFdagError):
                    Fdag(words)

    def test_networkx(self):
        d = Fdag(EXAMPLE)
        g = to_networkx(d)
        self.assertEqual(g.number_of_edges(), 10)
        self.assertTrue(validate(g))
        self.assertEqual(from_networkx(g), d)

        relabeled = nx.relabel_nodes(g, {i: f"v{i}" for i in range(6)})
        order = [f"v{i}" for i in range(6)]
        self.assertEqual(from_networkx(relabeled, order), d)
        swapped = order[:3] + [order[4], order[3], order[5]]
        result = validate(relabeled, swapped)
        self.assertFalse(result)
        self.assertEqual(result.constraint, HEIGHT_ORDER)

    def test_equal_height_swap(self):
        swapped = EXAMPLE[:4] + [EXAMPLE[5], EXAMPLE[4]]
        result = validate(swapped)
        self.assertFalse(result)
        self.assertEqual(result.constraint, LEX_ORDER)
        self.assertEqual(result.vertex, 5)

    def test_block_permutations(self):
        g = to_networkx(Fdag(EXAMPLE))
        for low in itertools.permutations([1, 2, 3]):
            for high in itertools.permutations([4, 5]):
                order = [0, *low, *high]
                with self.subTest(order=order):
                    result = validate(g, order)
                    if order == list(range(6)):
                        self.assertTrue(result)
                    else:
                        self.assertFalse(result)
                        self.assertEqual(result.constraint, LEX_ORDER)

    def test_networkx_cycle(self):
        g = nx.MultiDiGraph([(0, 1), (1, 0)])
        self.assertEqual(validate(g).constraint, TOPOLOGICAL)


class TestFdag(unittest.TestCase):
    def test_properties(self):
        d = Fdag(EXAMPLE)
        self.assertEqual(d.nvertices, 6)
        self.assertEqual(d.height, 2)
        self.assertEqual(d.outdegree, 3)
        self.assertEqual(d.p, 3)
        self.assertEqual(d.heights, (0, 1, 1, 1, 2, 2))
        self.assertEqual(d.parents[1], [4, 5])
        self.assertEqual(D0.p, -1)
        self.assertEqual(D0.steps, 0)

    def test_subdag(self):
        d = Fdag(EXAMPLE)
        self.assertEqual(subdag(d, 5).words, ((), (0,), (0, 0), (2, 1, 1)))
        self.assertEqual(subdag(d, 0), D0)
        self.assertEqual(vertex_tree(d, 5), parse_tree("((())(())(()()))"))

    def test_line(self):
        d = Fdag(EXAMPLE)
        self.assertEqual(to_line(d), ";0;0 0;0 0 0;1;2 1 1")
        self.assertEqual(from_line(to_line(d)), d)
        self.assertEqual(to_line(D0), "")


class TestFdagFile(unittest.TestCase):
    def test_write_read(self):
        d = Fdag(EXAMPLE)
        text = format_fdag(d) + "\n" + format_fdag(D0)
        self.assertEqual(list(read_fdags(io.StringIO(text))), [d, D0])

    def test_errors(self):
        cases = [
            ("fdag 2\nn 1\n0:\n", 1, "header"),
            ("fdag 1\nn 2\n0:\n", 2, "vertex-count"),
            ("fdag 1\nn 2\n0:\n2: 0\n", 4, "vertex-line"),
            ("fdag 1\nn 3\n0:\n1: 0\n2: 0\n", 5, DISTINCT_CHILDREN),
            ("fdag 1\nn 2\n0:\n1: 0 1\n", 4, DECREASING),
        ]
        for text, line, constraint in cases:
            with self.subTest(text=text):
                with self.assertRaises(FdagFormatError) as cm:
                    list(read_fdags(io.StringIO(text)))
                self.assertEqual(cm.exception.line, line)
                self.assertEqual(cm.exception.constraint, constraint)


if __name__ == "__main__":
    unittest.main(verbosity=2)
