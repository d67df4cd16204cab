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
"""Test the classifiers of small codes without twin pairs.
"""

import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

import lsst.utils.tests

import lsst.polybox as polybox
from lsst.polybox import (ClassificationPreconditionError, Composition, FiveStructure,
                          PolyboxUsageError, Word)

import polyboxTestBase


class ClassifierTestCase(polyboxTestBase.PolyboxTestBase, lsst.utils.tests.TestCase):
    """
    Test recovery of forced forms and the witnesses of odd complements.
    """
    def setUp(self):
        self.setUp_base()
        self.partition5 = self.readCode("partition5.pbc")

    def testPair(self):
        first = self.readCode("pairFirst.pbc")
        second = self.readCode("pairSecond.pbc")
        structure = polybox.classifyPair2(first, second)
        self.assertEqual(structure.coordinates, (0, 1))
        self.assertEqual((structure.l1, structure.l2), (0, 2))
        self.assertEqual(structure.common, Word([0]))
        self.assertFalse(structure.swapped)
        self.assertEqual(structure.reconstruct(self.alphabet, 3), (first, second))

        swapped = polybox.classifyPair2(second, first)
        self.assertTrue(swapped.swapped)
        self.assertEqual(swapped.coordinates, (0, 1))
        self.assertEqual(swapped.reconstruct(self.alphabet, 3), (second, first))

    def testPairPreconditions(self):
        first = self.readCode("pairFirst.pbc")
        with self.assertRaises(ClassificationPreconditionError):
            polybox.classifyPair2(first, first)
        with self.assertRaises(ClassificationPreconditionError):
            polybox.classifyPair2(first, self.makeCode(["a*a", "a'bb"]))
        with self.assertRaises(ClassificationPreconditionError):
            polybox.classifyPair2(self.readCode("twinPair.pbc"), self.makeCode(["ab", "a'b"]))
        with self.assertRaises(ClassificationPreconditionError):
            polybox.classifyPair2(self.readCode("coverFive.pbc"), first)

    def testPartition5(self):
        structure = polybox.classifyPartition5(self.partition5)
        self.assertEqual(structure.coordinates, (0, 1, 2))
        self.assertEqual(structure.letters, (0, 0, 0))
        self.assertIsNone(structure.ambient)
        self.assertEqual(structure.reconstruct(self.alphabet, 3), self.partition5)

    @settings(deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def testPartition5UnderIsomorphism(self, seed):
        rng = np.random.default_rng(seed)
        sigma, h = polybox.randomIsomorphism(3, self.alphabet, rng)
        image = polybox.applyIsomorphism(self.partition5, sigma, h)
        structure = polybox.classifyPartition5(image)
        self.assertEqual(structure.coordinates, (0, 1, 2))
        self.assertEqual(structure.reconstruct(self.alphabet, 3), image)

    def testPartition5Preconditions(self):
        twins = self.makeCode(["aa*", "aa'*", "a'a*", "a'a'a", "a'a'a'"])
        self.assertTrue(polybox.isPartitionCode(twins))
        with self.assertRaises(ClassificationPreconditionError):
            polybox.classifyPartition5(twins)
        with self.assertRaises(ClassificationPreconditionError):
            polybox.classifyPartition5(self.readCode("coverFive.pbc"))
        with self.assertRaises(ClassificationPreconditionError):
            polybox.classifyPartition5(self.readCode("partition6.pbc"))

    def testPartition6(self):
        code = self.readCode("partition6.pbc")
        structure = polybox.classifyPartition6(code)
        self.assertEqual(structure.coordinate, 3)
        self.assertEqual(structure.letter, 0)
        self.assertEqual(structure.inner, FiveStructure(coordinates=(0, 1, 2), letters=(0, 0, 0)))
        self.assertEqual(structure.reconstruct(self.alphabet, 4), code)
        with self.assertRaises(ClassificationPreconditionError):
            polybox.classifyPartition6(self.partition5)

    def testCover5(self):
        code = self.readCode("coverFive.pbc")
        bbb = self.makeWord("bbb")
        self.assertEqual(polybox.barCode(code, bbb), self.partition5)
        structure = polybox.classifyCover5(code, bbb)
        self.assertEqual(structure.coordinates, (0, 1, 2))
        self.assertEqual(structure.letters, (0, 0, 0))
        self.assertEqual(structure.ambient, bbb)
        self.assertEqual(structure.reconstruct(self.alphabet, 3), code)
        with self.assertRaises(ClassificationPreconditionError):
            polybox.classifyCover5(code, self.makeWord("aaa"))
        with self.assertRaises(ClassificationPreconditionError):
            polybox.classifyCover5(self.readCode("rigidSix.pbc"), self.makeWord("bbbb"))

    def testBarCodeHypotheses(self):
        example = self.readCode("rigidSix.pbc")
        with self.assertRaises(PolyboxUsageError):
            polybox.barCode(example, self.makeWord("abbb"))
        with self.assertRaises(PolyboxUsageError):
            polybox.barCode(self.partition5, self.makeWord("bbb"))

    def testOddComplementPair(self):
        pair = polybox.oddComplementPair(self.partition5)
        self.assertEqual(pair, (self.makeWord("aaa"), self.makeWord("a'a'a'")))
        example = self.readCode("rigidSix.pbc")
        pair = polybox.oddComplementPairInCover(example, self.makeWord("bbbb"))
        self.assertEqual(pair, (self.makeWord("aaaa"), self.makeWord("a'a'a'a")))
        with self.assertRaises(PolyboxUsageError):
            polybox.oddComplementPair(example)
        with self.assertRaises(PolyboxUsageError):
            polybox.oddComplementPairInCover(example, self.makeWord("abbb"))
        with self.assertRaises(PolyboxUsageError):
            polybox.oddComplementPairInCover(example, self.makeWord("aaaa"))

    @settings(deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 4))
    def testOddComplementPairOnRandomPartitions(self, seed, dim):
        code = polybox.randomPartitionCode(dim, self.alphabet, seed)
        u, v = polybox.oddComplementPair(code)
        complementary = 0
        for s, t in zip(u, v):
            if s != t:
                self.assertEqual(s ^ 1, t)
                complementary += 1
        self.assertEqual(complementary % 2, 1)

    def testComposition(self):
        composition = Composition.fromString("3, 2, 0", minIndex=2)
        self.assertEqual(composition.counts, (3, 2, 0))
        self.assertEqual(str(composition), "3,2,0")
        self.assertEqual(composition.size, 5)
        self.assertEqual(composition.count(2), 3)
        self.assertEqual(composition.count(5), 0)
        self.assertEqual(composition.gValueCounts(4), {4: 3, 2: 2, 1: 0})
        self.assertEqual(Composition.fromGValues([4, 4, 2, 4, 2], 4, minIndex=2), composition)
        with self.assertRaises(PolyboxUsageError):
            Composition.fromString("1,x")
        with self.assertRaises(PolyboxUsageError):
            Composition.fromString("1,-1")

    def testCoverCompositions(self):
        def counts(k, dim, minIndex):
            return [c.counts for c in polybox.coverCompositions(k, dim, minIndex=minIndex)]

        self.assertEqual(counts(7, 4, 2), [(3, 0, 4), (2, 3, 2), (1, 6, 0)])
        self.assertEqual(counts(8, 4, 2), [(2, 2, 4), (1, 5, 2), (0, 8, 0)])
        self.assertEqual(counts(9, 4, 2), [(2, 1, 6), (1, 4, 4), (0, 7, 2)])
        self.assertEqual(counts(5, 3, 1), [(1, 0, 4), (0, 3, 2)])
        self.assertEqual(counts(6, 4, 2), [(3, 1, 2), (2, 4, 0)])
        self.assertEqual(counts(5, 4, 2), [(3, 2, 0)])
        for composition in polybox.coverCompositions(8, 4, minIndex=2):
            total = sum(g*c for g, c in composition.gValueCounts(4).items())
            self.assertEqual(total, 16)
        with self.assertRaises(PolyboxUsageError):
            polybox.coverCompositions(0, 4)
        with self.assertRaises(PolyboxUsageError):
            polybox.coverCompositions(5, 4, minIndex=5)

    @settings(deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), dim=st.integers(1, 5))
    def testRandomPartitionCode(self, seed, dim):
        code = polybox.randomPartitionCode(dim, self.alphabet, seed)
        self.assertEqual(len(code), 2**dim)
        self.assertTrue(code.isStarFree())
        self.assertTrue(polybox.isPartitionCode(code))
        self.assertEqual(polybox.randomPartitionCode(dim, self.alphabet, seed), code)

    def testRandomPartitionCodeErrors(self):
        with self.assertRaises(PolyboxUsageError):
            polybox.randomPartitionCode(0, self.alphabet, 1)


class TestMemory(lsst.utils.tests.MemoryTestCase):
    pass


def setup_module(module):
    lsst.utils.tests.init()


if __name__ == "__main__":
    lsst.utils.tests.init()
    unittest.main()
