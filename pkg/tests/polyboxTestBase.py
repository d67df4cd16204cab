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
"""Shared fixtures for the polybox tests.

The codes in ``tests/data`` are small examples whose properties are known
exactly; the helpers here load them and draw random Keller cliques.
"""

import os
import unittest

import numpy as np

import lsst.polybox as polybox

ROOT = os.path.abspath(os.path.dirname(__file__))

# set to a non-empty value to run the long searches
LONG_TESTS_VARIABLE = "POLYBOX_LONG_TESTS"


def requireLongTests():
    """Skip the calling test class unless long runs are switched on."""
    if not os.environ.get(LONG_TESTS_VARIABLE):
        raise unittest.SkipTest("%s not set" % (LONG_TESTS_VARIABLE))


class PolyboxTestBase(object):
    """
    Base class for polybox tests, to share fixture loading.

    Derive from this first, then from TestCase.
    """

    def setUp_base(self, dataDir=None):
        """
        Call from your child class's setUp() to get variables built.

        Parameters
        ----------
        dataDir : `str`, optional
           Directory holding the code and tiling files.
        """
        self.dataDir = dataDir if dataDir is not None else os.path.join(ROOT, "data")
        self.alphabet = polybox.Alphabet.ofSize(2)

    def dataPath(self, filename):
        return os.path.join(self.dataDir, filename)

    def readCode(self, filename):
        return polybox.readCodeFile(self.dataPath(filename))

    def readTiling(self, filename):
        return polybox.readTilingFile(self.dataPath(filename))

    def makeCode(self, texts, alphabet=None):
        """Code over ``alphabet`` (default ``a, a', b, b'``) from word strings."""
        if alphabet is None:
            alphabet = self.alphabet
        return polybox.PolyboxCode.fromStrings(alphabet, texts)

    def makeWord(self, text, alphabet=None):
        if alphabet is None:
            alphabet = self.alphabet
        return alphabet.parseWord(text)

    def randomClique(self, kellerGraph, seed, maxSize=None):
        """A random maximal clique of ``kellerGraph``, truncated to ``maxSize`` words."""
        rng = np.random.default_rng(seed)
        adj = kellerGraph.graph.adj
        chosen = []
        candidates = kellerGraph.graph.allVertices
        for v in rng.permutation(kellerGraph.nVertices):
            v = int(v)
            if (candidates >> v) & 1:
                chosen.append(v)
                candidates &= adj[v]
            if maxSize is not None and len(chosen) == maxSize:
                break
        return kellerGraph.code(chosen)
