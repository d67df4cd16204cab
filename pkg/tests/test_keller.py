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
"""Test Keller graphs, their clique numbers and spread certificates.
"""

import unittest
from fractions import Fraction

import lsst.utils.tests
import lsst.pex.config as pexConfig

import lsst.polybox as polybox
from lsst.polybox import Alphabet, GraphSizeError, MaxCliqueTask, PolyboxUsageError, Word

import polyboxTestBase


class KellerTestCase(polyboxTestBase.PolyboxTestBase, lsst.utils.tests.TestCase):
    """
    Test the Keller graph construction and the maximum clique task.
    """
    def setUp(self):
        self.setUp_base()
        self.keller = Alphabet.keller()

    def testGraph(self):
        kellerGraph = polybox.buildKellerGraph(2)
        self.assertEqual(kellerGraph.nVertices, 16)
        self.assertEqual(kellerGraph.alphabet, self.keller)
        for v in range(kellerGraph.nVertices):
            self.assertEqual(kellerGraph.index(kellerGraph.word(v)), v)
        # 00 and 11 are dichotomous; 00 and 01 form a twin pair; 00 and 02 are not dichotomous
        self.assertTrue(kellerGraph.isAdjacent(0, kellerGraph.index(Word([1, 1]))))
        self.assertFalse(kellerGraph.isAdjacent(0, kellerGraph.index(Word([0, 1]))))
        self.assertFalse(kellerGraph.isAdjacent(0, kellerGraph.index(Word([0, 2]))))
        code = kellerGraph.code([0, kellerGraph.index(Word([1, 1]))])
        self.assertEqual(len(code), 2)

        with self.assertRaises(GraphSizeError):
            polybox.buildKellerGraph(8)
        with self.assertRaises(PolyboxUsageError):
            polybox.buildKellerGraph(0)

    def testWordGraph(self):
        words = polybox.allWordsArray(4, 2)
        twinFree = polybox.buildWordGraph(words)
        full = polybox.buildWordGraph(words, twinFree=False)
        self.assertTrue((full.adj[0] >> 1) & 1)
        self.assertFalse((twinFree.adj[0] >> 1) & 1)
        self.assertEqual(full.adj[0] & ~twinFree.adj[0], 0b10010)

    def testNeighbourRepresentatives(self):
        self.assertEqual(polybox.neighbourRepresentatives(2, self.keller), [Word([1, 2]), Word([1, 1])])
        reps = polybox.neighbourRepresentatives(3, Alphabet.fromBaseNames(["a"]))
        self.assertEqual(reps, [Word([1, 1, 0]), Word([1, 1, 1])])

    def testCliqueNumbers(self):
        for dim, omega in ((2, 2), (3, 5), (4, 12)):
            result = MaxCliqueTask().run(dim)
            self.assertTrue(result.provenOptimal)
            self.assertEqual(result.size, omega, msg="dimension %d" % (dim))
            self.assertEqual(len(result.clique), omega)
            self.assertIsNone(polybox.findTwinPair(result.clique))
            self.assertTrue(result.clique.isStarFree())

    def testWithoutSymmetry(self):
        config = polybox.MaxCliqueConfig()
        config.useSymmetry = False
        config.useDegeneracyOrder = False
        result = MaxCliqueTask(config=config).run(3)
        self.assertTrue(result.provenOptimal)
        self.assertEqual(result.size, 5)

    def testPrebuiltGraph(self):
        kellerGraph = polybox.buildKellerGraph(3, self.alphabet)
        result = MaxCliqueTask().run(3, kellerGraph=kellerGraph)
        self.assertEqual(result.size, 5)
        self.assertIs(result.kellerGraph, kellerGraph)
        self.assertEqual(result.clique.alphabet, self.alphabet)

    def testConfigValidation(self):
        config = polybox.MaxCliqueConfig()
        config.nCore = 0
        with self.assertRaises(pexConfig.FieldValidationError):
            config.validate()
        config = polybox.MaxCliqueConfig()
        config.maxVertices = 0
        with self.assertRaises(pexConfig.FieldValidationError):
            config.validate()
        config = polybox.MaxCliqueConfig()
        config.maxVertices = 100
        with self.assertRaises(GraphSizeError):
            MaxCliqueTask(config=config).run(4)

    def testEquivalentCliques(self):
        example = self.readCode("coverFive.pbc")
        self.assertTrue(polybox.equivalentCliques(example, example))
        with self.assertRaises(PolyboxUsageError):
            polybox.equivalentCliques(example, self.readCode("partition5.pbc"))
        with self.assertRaises(PolyboxUsageError):
            polybox.equivalentCliques(self.readCode("twinPair.pbc"), self.readCode("square.pbc"))

    def testSpread(self):
        self.assertEqual(polybox.spreadThreshold(5), Fraction(4, 3))
        self.assertEqual(polybox.spreadThreshold(3), Fraction(1, 3))
        certificate = polybox.spreadCertificate(self.readCode("coverFive.pbc"))
        self.assertEqual(certificate.coordinate, 0)
        self.assertEqual(certificate.nGroups, 2)
        self.assertEqual(len(certificate.words), 2)
        self.assertIsNone(polybox.spreadCertificate(self.makeCode(["aaaaa", "a'a'aaa"])))
        with self.assertRaises(PolyboxUsageError):
            polybox.spreadCertificate(self.readCode("square.pbc"))


class KellerLongTestCase(polyboxTestBase.PolyboxTestBase, lsst.utils.tests.TestCase):
    """
    Clique number of the five-dimensional Keller graph.
    """
    @classmethod
    def setUpClass(cls):
        polyboxTestBase.requireLongTests()

    def setUp(self):
        self.setUp_base()

    def testCliqueNumberFive(self):
        result = MaxCliqueTask().run(5)
        self.assertTrue(result.provenOptimal)
        self.assertEqual(result.size, 28)
        self.assertLess(result.size, 2**5)
        self.assertIsNone(polybox.findTwinPair(result.clique))


class TestMemory(lsst.utils.tests.MemoryTestCase):
    pass


def setup_module(module):
    lsst.utils.tests.init()


if __name__ == "__main__":
    lsst.utils.tests.init()
    unittest.main()
