import itertools
import unittest

from fdagenum.words import (
    EMPTY,
    Ordering,
    format_word,
    is_decreasing,
    is_minimal,
    lex_compare,
    minimal_words,
    parse_word,
    suffix_cut,
)


def decreasing_words(maxletter, maxlen):
    for length in range(maxlen + 1):
        for w in itertools.combinations_with_replacement(range(maxletter, -1, -1), length):
            yield tuple(w)


class TestWords(unittest.TestCase):
    def test_lex_compare(self):
        self.assertEqual(lex_compare(EMPTY, (0,)), Ordering.LESS)
        self.assertEqual(lex_compare((2, 1), (2, 1, 0)), Ordering.LESS)
        self.assertEqual(lex_compare((3,), (2, 2, 2)), Ordering.GREATER)
        self.assertEqual(lex_compare(EMPTY, EMPTY), Ordering.EQUAL)

    def test_lex_compare_is_total_order(self):
        words = list(decreasing_words(3, 4))
        self.assertEqual(len(words), 70)
        flip = {Ordering.LESS: Ordering.GREATER, Ordering.GREATER: Ordering.LESS, Ordering.EQUAL: Ordering.EQUAL}
        less = {w: set() for w in words}
        for u in words:
            for v in words:
                o = lex_compare(u, v)
                self.assertEqual(lex_compare(v, u), flip[o])
                self.assertEqual(o is Ordering.EQUAL, u == v)
                if o is Ordering.LESS:
                    less[u].add(v)
        for u in words:
            for v in less[u]:
                with self.subTest(u=u, v=v):
                    self.assertLessEqual(less[v], less[u])

    def test_suffix_cut(self):
        self.assertEqual(suffix_cut((2, 1, 1)), (2, 1))
        self.assertEqual(suffix_cut((0,)), EMPTY)
        self.assertEqual(suffix_cut(EMPTY), EMPTY)

    def test_minimal_words_example(self):
        self.assertEqual(minimal_words((2, 1, 1), 3), [(3,), (2, 2), (2, 1, 1, 0), (2, 1, 1, 1)])
        self.assertEqual(minimal_words((5,), 3), [])
        self.assertEqual(minimal_words(EMPTY, 2), [(0,), (1,), (2,)])

    def test_minimal_words_count(self):
        for wbar in decreasing_words(3, 3):
            for n in range(4):
                with self.subTest(wbar=wbar, n=n):
                    words = minimal_words(wbar, n)
                    if wbar and wbar[0] > n:
                        self.assertEqual(words, [])
                    else:
                        self.assertEqual(len(words), n + 1)
                    self.assertEqual(len(set(words)), len(words))
                    for w in words:
                        self.assertTrue(is_decreasing(w))
                        self.assertTrue(is_minimal(w, wbar))

    def test_minimal_words_brute_force(self):
        # a word is minimal iff it exceeds wbar and its suffix cut does not
        for wbar in decreasing_words(3, 3):
            if not wbar:
                continue
            expected = {
                w for w in decreasing_words(3, len(wbar) + 1) if w > wbar and suffix_cut(w) <= wbar
            }
            with self.subTest(wbar=wbar):
                self.assertEqual(set(minimal_words(wbar, 3)), expected)

    def test_minimal_words_rejects_increasing(self):
        with self.assertRaises(ValueError):
            minimal_words((0, 1), 2)

    def test_parse_word(self):
        self.assertEqual(parse_word("2 1 1"), (2, 1, 1))
        self.assertEqual(parse_word("  "), EMPTY)
        self.assertEqual(format_word((2, 1, 1)), "2 1 1")
        for bad in ("1 2", "a", "-1", "1.5"):
            with self.subTest(text=bad):
                with self.assertRaises(ValueError):
                    parse_word(bad)


if __name__ == "__main__":
    unittest.main(verbosity=2)
