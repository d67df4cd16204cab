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
"""Test the enumeration of twin-pair-free covers of a word.
"""

import unittest

import lsst.utils.tests
import lsst.pex.config as pexConfig

import lsst.polybox as polybox
from lsst.polybox import Composition, CoverEnumerationTask, PolyboxUsageError

import polyboxTestBase


class CoverEnumerationTestCase(polyboxTestBase.PolyboxTestBase, lsst.utils.tests.TestCase):
    """
    Test cover counts per composition of g-values in dimension 4.
    """
    def setUp(self):
        self.setUp_base()
        self.config = polybox.CoverEnumerationConfig()
        self.bbbb = self.makeWord("bbbb")

    def _run(self, k, counts, minIndex=2):
        task = CoverEnumerationTask(config=self.config)
        return task.run(self.alphabet, self.bbbb, k, composition=Composition(counts, minIndex=minIndex))

    def testCandidates(self):
        task = CoverEnumerationTask(config=self.config)
        words, gValues = task.candidates(self.alphabet, self.bbbb)
        self.assertEqual(words.shape, (72, 4))
        self.assertEqual(list(gValues), sorted(gValues, reverse=True))
        self.assertEqual(gValues[0], 4)
        self.assertEqual(gValues[-1], 1)
        # no candidate carries b'
        self.assertFalse((words == 3).any())
        with self.assertRaises(PolyboxUsageError):
            task.candidates(self.alphabet, self.makeWord("bb*b"))

    def testFiveWordCovers(self):
        result = self._run(5, (3, 2, 0))
        self.assertTrue(result.complete)
        self.assertEqual(result.count, 32)
        self.assertEqual(len(result.codes), 32)
        self.assertIn(self.makeCode(["aaab", "a'a'a'b", "baa'b", "a'bab", "aa'bb"]), result.codes)
        for code in result.codes:
            self.assertIsNone(polybox.findTwinPair(code))
            self.assertTrue(polybox.covers(self.bbbb, code))
            self.assertNotIn(self.bbbb, code)

    def testLargerCovers(self):
        expected = {
            (7, (2, 3, 2)): (576, [["aaaa", "aaa'b", "aa'a'a'", "a'aba", "a'ba'a'", "ba'ba", "bbaa'"],
                                   ["aaab", "aa'ba", "a'baa'", "aaa'a", "aa'aa'", "a'bba", "bba'a'"]]),
            (8, (1, 5, 2)): (192, [["aaab", "aba'a'", "a'aaa", "a'aba'", "a'a'a'a'", "baa'a", "ba'aa'",
                                    "ba'ba"]]),
            (8, (0, 8, 0)): (8, [["aaab", "aa'ba'", "aba'a", "a'aba", "a'a'a'b", "a'baa'", "baa'a'",
                                  "ba'aa"]]),
            (9, (1, 4, 4)): (48, [["aaa'a", "aaba'", "aa'a'a'", "aa'ba", "a'aaa'", "a'a'aa", "a'ba'b",
                                   "baaa", "ba'aa'"]]),
        }
        for (k, counts), (count, representatives) in expected.items():
            result = self._run(k, counts)
            self.assertTrue(result.complete)
            self.assertEqual(result.count, count, msg="composition %s" % (counts, ))
            for texts in representatives:
                self.assertIn(self.makeCode(texts), result.codes)

    def testEmptyCompositions(self):
        for k, counts in ((7, (3, 0, 4)), (7, (1, 6, 0)), (8, (2, 2, 4)), (9, (0, 7, 2)),
                          (9, (2, 1, 6))):
            result = self._run(k, counts)
            self.assertTrue(result.complete)
            self.assertEqual(result.count, 0, msg="composition %s" % (counts, ))
            self.assertEqual(result.codes, [])

    def testTabulate(self):
        task = CoverEnumerationTask(config=self.config)
        result = task.tabulate(self.alphabet, self.bbbb, sizes=(5, 6))
        self.assertTrue(result.complete)
        table = [(k, composition.counts, count) for k, composition, count in result.table]
        self.assertEqual(table[0], (5, (3, 2, 0), 32))
        self.assertEqual([row[:2] for row in table[1:]], [(6, (3, 1, 2)), (6, (2, 4, 0))])

    def testWithoutComposition(self):
        self.config.keepCodes = False
        result = CoverEnumerationTask(config=self.config).run(self.alphabet, self.bbbb, 5)
        self.assertEqual(result.count, 32)
        self.assertEqual(result.codes, [])

    def testDimensionThree(self):
        self.config.minIndex = 1
        task = CoverEnumerationTask(config=self.config)
        result = task.run(self.alphabet, self.makeWord("bbb"), 5)
        self.assertTrue(result.complete)
        self.assertIn(self.readCode("coverFive.pbc"), result.codes)
        for code in result.codes:
            self.assertTrue(polybox.covers(self.makeWord("bbb"), code))

    def testParallel(self):
        self.config.nCore = 2
        result = self._run(5, (3, 2, 0))
        self.assertEqual(result.count, 32)
        self.assertEqual(len(result.codes), 32)

    def testBudget(self):
        self.config.budget.nodeBudget = 1
        result = self._run(7, (2, 3, 2))
        self.assertFalse(result.complete)
        self.assertLess(result.count, 576)

    def testErrors(self):
        task = CoverEnumerationTask(config=self.config)
        with self.assertRaises(PolyboxUsageError):
            task.run(polybox.Alphabet.ofSize(1), polybox.Word([0, 0, 0, 0]), 5)
        with self.assertRaises(PolyboxUsageError):
            task.run(self.alphabet, self.bbbb, 0)
        with self.assertRaises(PolyboxUsageError):
            task.run(self.alphabet, self.bbbb, 6, composition=Composition((3, 2, 0), minIndex=2))
        with self.assertRaises(PolyboxUsageError):
            task.run(self.alphabet, self.makeWord("bbb"), 5, composition=Composition((1, 0, 4)))
        self.config.minIndex = 5
        with self.assertRaises(PolyboxUsageError):
            CoverEnumerationTask(config=self.config).run(self.alphabet, self.bbbb, 5)

    def testConfigValidation(self):
        config = polybox.CoverEnumerationConfig()
        config.minIndex = 0
        with self.assertRaises(pexConfig.FieldValidationError):
            config.validate()
        config = polybox.CoverEnumerationConfig()
        config.nCore = 0
        with self.assertRaises(pexConfig.FieldValidationError):
            config.validate()


class TestMemory(lsst.utils.tests.MemoryTestCase):
    pass


def setup_module(module):
    lsst.utils.tests.init()


if __name__ == "__main__":
    lsst.utils.tests.init()
    unittest.main()
