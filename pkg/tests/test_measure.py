# See COPYRIGHT file at the top of the source tree.
#
# This file is part of polybox.
#
# Developed for the LSST Data Management System.
# This product includes software developed by the LSST Project
# (https://www.lsst.org).
# See the COPYRIGHT file at the top-level directory of this distribution
# for details of code ownership.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.
"""Test intersection measures, covering and equivalence.

The covering test is checked against a brute-force oracle that walks every
point of the letter space, where each letter pair is a two-cell partition
and distinct pairs are independent.
"""

import itertools
import unittest
from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

import lsst.utils.tests

import lsst.polybox as polybox
from lsst.polybox import Cell, DyadicRatio, PolyboxCode, PolyboxUsageError, STAR, Word

import polyboxTestBase


def coveredByCells(w, words, nPairs):
    """True if every point of ``w`` lies in some word of ``words``."""
    cells = [Cell(choice) for choice in itertools.product(*[(2*p, 2*p + 1) for p in range(nPairs)])]
    for point in itertools.product(cells, repeat=len(w)):
        if not all(c.contains(s) for c, s in zip(point, w)):
            continue
        if not any(all(c.contains(s) for c, s in zip(point, v)) for v in words):
            return False
    return True


@st.composite
def words(draw, dim, nLetters=4):
    """Words over the first ``nLetters`` letters, with stars."""
    letters = st.sampled_from(list(range(nLetters)) + [STAR])
    return Word(draw(st.lists(letters, min_size=dim, max_size=dim)))


@st.composite
def codes(draw, dim, maxSize=6):
    """Codes built by keeping each drawn word dichotomous with those already kept."""
    kept = []
    for w in draw(st.lists(words(dim), min_size=1, max_size=3*maxSize)):
        if len(kept) < maxSize and all(w != v and polybox.isDichotomous(w, v) for v in kept):
            kept.append(w)
    return PolyboxCode(polybox.Alphabet.ofSize(2), kept, dim=dim)


class DyadicRatioTestCase(lsst.utils.tests.TestCase):
    """
    Test exact dyadic arithmetic.
    """
    def testReduction(self):
        x = DyadicRatio(6, 3)
        self.assertEqual((x.numerator, x.exponent), (3, 2))
        self.assertEqual(x, Fraction(3, 4))
        self.assertEqual(str(x), "3/4")
        self.assertEqual(DyadicRatio(0, 5).exponent, 0)
        self.assertEqual(DyadicRatio(4, 1), 2)
        self.assertEqual(float(DyadicRatio(1, 3)), 0.125)
        self.assertFalse(DyadicRatio(0))
        with self.assertRaises(ValueError):
            DyadicRatio(-1, 2)
        with self.assertRaises(ValueError):
            DyadicRatio(1, 1) - DyadicRatio(1, 0)

    @settings(deadline=None)
    @given(a=st.integers(0, 1000), e=st.integers(0, 20), b=st.integers(0, 1000), f=st.integers(0, 20))
    def testArithmeticMatchesFraction(self, a, e, b, f):
        x, y = DyadicRatio(a, e), DyadicRatio(b, f)
        X, Y = Fraction(a, 2**e), Fraction(b, 2**f)
        self.assertEqual((x + y).toFraction(), X + Y)
        self.assertEqual((x*y).toFraction(), X*Y)
        self.assertEqual(x < y, X < Y)
        self.assertEqual(x >= y, X >= Y)
        self.assertEqual(x == y, X == Y)
        self.assertEqual(hash(x), hash(X))
        if X >= Y:
            self.assertEqual((x - y).toFraction(), X - Y)


class MeasureTestCase(polyboxTestBase.PolyboxTestBase, lsst.utils.tests.TestCase):
    """
    Test g-values, covering and equivalence on known codes.
    """
    def setUp(self):
        self.setUp_base()
        self.example = self.readCode("rigidSix.pbc")

    def testQuarterTable(self):
        table = polybox.QUARTER_TABLE
        self.assertFalse(table.flags.writeable)
        self.assertEqual(table[0, 0], 2)
        self.assertEqual(table[0, 1], 0)
        self.assertEqual(table[0, 2], 1)
        self.assertEqual(table[STAR, 3], 2)
        self.assertEqual(table[STAR, STAR], 4)
        self.assertEqual(polybox.letterIntersectionMeasure(0, 0), Fraction(1, 2))
        self.assertEqual(polybox.letterIntersectionMeasure(0, 1), 0)
        self.assertEqual(polybox.letterIntersectionMeasure(0, 2), Fraction(1, 4))
        self.assertEqual(polybox.letterIntersectionMeasure(STAR, STAR), 1)
        self.assertEqual(polybox.boxIntersectionMeasure(self.makeWord("a*"), self.makeWord("ab")),
                         Fraction(1, 4))
        with self.assertRaises(PolyboxUsageError):
            polybox.boxIntersectionMeasure(self.makeWord("a*"), self.makeWord("abb"))

    def testGValues(self):
        w = self.makeWord
        np.testing.assert_array_equal(polybox.gValues(self.example, w("bbbb")), [1, 2, 1, 2, 2, 8])
        np.testing.assert_array_equal(polybox.gValues(self.example, w("bbba")), [2, 4, 2, 4, 4, 0])
        self.assertEqual(polybox.gSum(self.example, w("bbbb")), 16)
        self.assertEqual(polybox.gSum(self.example, w("abbb")), 11)
        self.assertEqual(polybox.gValue(w("*a"), w("ab")), 2)
        self.assertEqual(polybox.barGValue(w("a**")), 4)
        with self.assertRaises(PolyboxUsageError):
            polybox.gValue(w("ab"), w("a*"))
        with self.assertRaises(PolyboxUsageError):
            polybox.gValues(self.example, w("bb*b"))

    def testCovers(self):
        w = self.makeWord
        for method in ("gsum", "measure"):
            self.assertTrue(polybox.covers(w("bbbb"), self.example, method=method))
            self.assertTrue(polybox.covers(w("bbba"), self.example, method=method))
            self.assertFalse(polybox.covers(w("abbb"), self.example, method=method))
            self.assertTrue(polybox.covers(w("aaaa"), self.example, method=method))
        square = self.readCode("square.pbc")
        self.assertTrue(polybox.covers(w("**"), square))
        self.assertTrue(polybox.covers(w("a*"), self.readCode("twinPair.pbc")))
        self.assertFalse(polybox.covers(w("*a"), self.readCode("twinPair.pbc")))
        with self.assertRaises(PolyboxUsageError):
            polybox.covers(w("bbb"), self.example)
        with self.assertRaises(PolyboxUsageError):
            polybox.covers(w("bbbb"), self.example, method="volume")

    def testCoversMatchesCells(self):
        letters = [0, 1, 2, 3, STAR]
        words = [Word(w) for w in itertools.product(letters, repeat=2)]
        codes = []
        for size in (1, 2, 3):
            for chosen in itertools.combinations(words, size):
                if all(polybox.isDichotomous(u, v) for u, v in itertools.combinations(chosen, 2)):
                    codes.append(PolyboxCode(self.alphabet, chosen, dim=2))
        self.assertGreater(len(codes), 100)
        for code in codes:
            for w in words:
                expected = coveredByCells(w, code.words, 2)
                self.assertEqual(polybox.covers(w, code), expected, msg="%r covers %r" % (code, w))
                self.assertEqual(polybox.covers(w, code, method="measure"), expected)

    def testCoverSums(self):
        allWords = polybox.allWordsArray(4, 4)
        sums = polybox.coverSums(allWords, self.example, chunk=100)
        expected = [polybox.gSum(self.example, Word(row)) for row in allWords]
        np.testing.assert_array_equal(sums, expected)
        np.testing.assert_array_equal(polybox.selfMeasures(allWords), np.full(256, 16))
        self.assertEqual(list(polybox.selfMeasures(self.makeWord("a*"))), [8])
        empty = PolyboxCode(self.alphabet, [], dim=4)
        np.testing.assert_array_equal(polybox.coverSums(allWords[:3], empty), [0, 0, 0])

    @settings(deadline=None)
    @given(code=codes(3), w=words(3))
    def testCoverMethodsAgree(self, code, w):
        self.assertEqual(polybox.covers(w, code), polybox.covers(w, code, method="measure"))
        for v in code:
            self.assertTrue(polybox.covers(v, code))
        self.assertTrue(polybox.equivalent(code, code))

    def testPartitionCodes(self):
        self.assertTrue(polybox.isPartitionCode(self.readCode("partition5.pbc")))
        self.assertTrue(polybox.isPartitionCode(self.readCode("partition6.pbc")))
        self.assertTrue(polybox.isPartitionCode(self.readCode("square.pbc")))
        self.assertFalse(polybox.isPartitionCode(self.example))

    def testEquivalent(self):
        staircaseV = self.readCode("staircaseV.pbc")
        staircaseW = self.readCode("staircaseW.pbc")
        zigzagU = self.readCode("zigzagU.pbc")
        zigzagQ = self.readCode("zigzagQ.pbc")
        self.assertTrue(polybox.equivalent(staircaseV, staircaseW))
        self.assertTrue(polybox.equivalent(zigzagU, zigzagQ))
        self.assertFalse(polybox.equivalent(staircaseV, zigzagU))
        self.assertTrue(polybox.equivalent(self.readCode("twinPair.pbc"), self.makeCode(["a*"])))
        extended = self.example.withAlphabet(self.alphabet.extended(1))
        self.assertTrue(polybox.equivalent(self.example, extended))
        with self.assertRaises(PolyboxUsageError):
            polybox.equivalent(self.example, staircaseV)
        other = PolyboxCode(polybox.Alphabet.fromBaseNames(["x"]), [Word([0, 0, 0])])
        with self.assertRaises(PolyboxUsageError):
            polybox.equivalent(staircaseV, other)

    def testCells(self):
        alphabet = self.alphabet
        cell = Cell.fromLetters(alphabet, [0])
        self.assertEqual(cell.choice, (0, 2))
        self.assertTrue(cell.contains(0))
        self.assertTrue(cell.contains(STAR))
        self.assertFalse(cell.contains(3))
        self.assertEqual(cell.withChoice(1).choice, (1, 2))
        with self.assertRaises(PolyboxUsageError):
            Cell((2, 2))
        with self.assertRaises(PolyboxUsageError):
            Cell.fromLetters(alphabet, [0, 1])

    def testSlice(self):
        code = self.readCode("partition5.pbc")
        sliced = polybox.sliceCode(code, 0, Cell.fromLetters(self.alphabet, [0]))
        self.assertEqual(sliced, self.makeCode(["aa", "aa'", "a'*"]))
        self.assertTrue(polybox.isPartitionCode(sliced))
        with self.assertRaises(PolyboxUsageError):
            polybox.sliceCode(code, 3, Cell.fromLetters(self.alphabet, [0]))

    def testCylinder(self):
        self.assertTrue(polybox.isCylinder(self.makeCode(["ab", "a'b"]), 0))
        self.assertFalse(polybox.isCylinder(self.makeCode(["ab", "a'b'"]), 0))
        self.assertFalse(polybox.isCylinder(self.makeCode(["ab"]), 0))
        with self.assertRaises(PolyboxUsageError):
            polybox.isCylinder(self.makeCode(["*b", "ab'"]), 0)

    def testSliceBound(self):
        self.assertEqual(polybox.sliceBound(self.example, 3, 0, 2), 6)
        with self.assertRaises(PolyboxUsageError):
            polybox.sliceBound(self.example, 3, 0, 1)
        with self.assertRaises(PolyboxUsageError):
            polybox.sliceBound(self.readCode("partition5.pbc"), 0, 0, 2)


class TestMemory(lsst.utils.tests.MemoryTestCase):
    pass


def setup_module(module):
    lsst.utils.tests.init()


if __name__ == "__main__":
    lsst.utils.tests.init()
    unittest.main()
