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
"""Enumerate the twin-pair-free codes covering a word.

Given a star-free word ``w`` this task lists every polybox code without
twin pairs whose words all meet ``w``, whose g-values against ``w`` are
capped at ``2**(d - minIndex)`` and add up to ``2**d``, and which has a
prescribed number of words (and optionally a prescribed composition of
g-values).  Counts are of distinct word sets, with no isomorphism
reduction.
"""

import multiprocessing

import numpy as np

import lsst.pex.config as pexConfig
import lsst.pipe.base as pipeBase
from lsst.utils.timer import timeMethod

from .alphabet import Word
from .classifiers import coverCompositions
from .exceptions import PolyboxUsageError, BudgetExhaustedError
from .keller import buildWordGraph
from .polyboxCode import PolyboxCode, allWordsArray, wordKeys
from .utilities import BudgetConfig, Budget

__all__ = ['CoverEnumerationConfig', 'CoverEnumerationTask']


class CoverEnumerationConfig(pexConfig.Config):
    """Config for CoverEnumerationTask"""

    budget = pexConfig.ConfigField(
        doc="Search budget",
        dtype=BudgetConfig,
    )
    minIndex = pexConfig.Field(
        doc=("Smallest g-value index: words have g-value at most 2**(d - minIndex). "
             "The default of 2 excludes words sharing all but one letter with w."),
        dtype=int,
        default=2,
    )
    nCore = pexConfig.Field(
        doc="Number of worker processes; the search is split on the first chosen word",
        dtype=int,
        default=1,
    )
    keepCodes = pexConfig.Field(
        doc="Keep the enumerated codes (otherwise only count them)",
        dtype=bool,
        default=True,
    )

    def validate(self):
        super().validate()
        if self.minIndex < 1:
            msg = 'minIndex must be at least 1'
            raise pexConfig.FieldValidationError(CoverEnumerationConfig.minIndex, self, msg)
        if self.nCore < 1:
            msg = 'nCore must be at least 1'
            raise pexConfig.FieldValidationError(CoverEnumerationConfig.nCore, self, msg)


class _CoverSearch:
    """Depth-first search over candidate words sorted by decreasing g-value."""

    def __init__(self, adj, gValues, levels, budget, keepCodes):
        self.adj = adj
        self.g = gValues
        self.levels = levels
        self.budget = budget
        self.keepCodes = keepCodes
        self.count = 0
        self.found = []

    def run(self, chosen, candidates, measure, count, levelCounts):
        self._extend(chosen, candidates, measure, count, levelCounts)

    def _extend(self, chosen, P, measure, count, levelCounts):
        if count == 0:
            if measure == 0:
                self.count += 1
                if self.keepCodes:
                    self.found.append(tuple(chosen))
            return
        while P:
            low = P & -P
            v = low.bit_length() - 1
            P ^= low
            g = self.g[v]
            # candidates are sorted by decreasing g
            if count*g < measure:
                return
            if g > measure or measure - g < count - 1:
                continue
            level = self.levels[v]
            if levelCounts is not None:
                if levelCounts[level] == 0:
                    continue
                levelCounts[level] -= 1
            self.budget.tick()
            chosen.append(v)
            self._extend(chosen, P & self.adj[v], measure - g, count - 1, levelCounts)
            chosen.pop()
            if levelCounts is not None:
                levelCounts[level] += 1


def _searchFromFirst(args, budget=None):
    """Worker: all covers whose first (highest g) word is candidate ``first``."""
    adj, gValues, levels, first, measure, count, levelCounts, timeBudget, nodeBudget, keepCodes = args
    if budget is None:
        budget = Budget(timeBudget, nodeBudget)
    startNodes = budget.nodes
    search = _CoverSearch(adj, gValues, levels, budget, keepCodes)
    complete = True
    try:
        g = gValues[first]
        if levelCounts is not None:
            levelCounts = list(levelCounts)
            levelCounts[levels[first]] -= 1
        if g <= measure and (levelCounts is None or levelCounts[levels[first]] >= 0):
            mask = adj[first] & ~((1 << (first + 1)) - 1)
            search.run([first], mask, measure - g, count - 1, levelCounts)
    except BudgetExhaustedError:
        complete = False
    return search.count, search.found, complete, budget.nodes - startNodes


class CoverEnumerationTask(pipeBase.Task):
    """
    Enumerate twin-pair-free codes covering a star-free word.

    The candidates are the star-free words with no letter complementary to
    the covered word ``w`` and with g-value at most ``2**(d - minIndex)``.
    They are sorted by decreasing g-value and combined depth first along
    the dichotomous non-twin adjacency, pruning on the residual g-sum.
    """

    ConfigClass = CoverEnumerationConfig
    _DefaultName = "coverEnumeration"

    def candidates(self, alphabet, w):
        """Candidate words for covers of ``w``.

        Returns
        -------
        words : `numpy.ndarray`
           ``(m, d)`` uint8 array, sorted by decreasing g-value, then
           lexicographically.
        gValues : `numpy.ndarray`
           The g-value of each candidate.
        """
        w = Word(w)
        if not w.isStarFree():
            raise PolyboxUsageError("The covered word must be star-free")
        d = len(w)
        allWords = allWordsArray(alphabet.nLetters, d)
        wArr = np.array(w, dtype=np.uint8)
        meets = ~((allWords ^ 1) == wArr[np.newaxis, :]).any(axis=1)
        gValues = np.left_shift(1, (allWords == wArr[np.newaxis, :]).sum(axis=1)).astype(np.int64)
        keep = meets & (gValues <= (1 << (d - self.config.minIndex)))
        words, gValues = allWords[keep], gValues[keep]
        order = np.lexsort((wordKeys(words), -gValues))
        return words[order], gValues[order]

    @timeMethod
    def run(self, alphabet, w, k, composition=None):
        """
        Enumerate the covers of ``w`` with ``k`` words.

        Parameters
        ----------
        alphabet : `lsst.polybox.Alphabet`
           Alphabet with at least two letter pairs.
        w : `lsst.polybox.Word`
           Star-free covered word.
        k : `int`
           Number of words in each cover.
        composition : `lsst.polybox.Composition`, optional
           Required numbers of words per g-value level; its ``minIndex`` must
           be at least the configured one.

        Returns
        -------
        result : `lsst.pipe.base.Struct`
           ``codes`` (sorted list of `PolyboxCode`, empty unless
           ``keepCodes``), ``count``, ``complete`` and ``nodes``.

        Raises
        ------
        PolyboxUsageError
           Raised for an alphabet with one pair, ``k < 1`` or an
           incompatible composition.
        """
        if alphabet.nPairs < 2:
            raise PolyboxUsageError("Cover enumeration needs at least two letter pairs")
        if k < 1:
            raise PolyboxUsageError("k must be positive, got %d" % (k))
        w = Word(w)
        d = len(w)
        if self.config.minIndex > d:
            raise PolyboxUsageError("minIndex %d exceeds the dimension %d" % (self.config.minIndex, d))

        words, gValues = self.candidates(alphabet, w)
        levels = [d - (int(g).bit_length() - 1) - self.config.minIndex for g in gValues]
        levelCounts = None
        if composition is not None:
            if composition.size != k:
                raise PolyboxUsageError("Composition %s does not have %d words" % (composition, k))
            levelCounts = [composition.count(i) for i in range(self.config.minIndex, d + 1)]
            if sum(levelCounts) != k:
                raise PolyboxUsageError("Composition %s uses g-values above the cap 2**%d"
                                        % (composition, d - self.config.minIndex))
        graph = buildWordGraph(words)
        self.log.info("Enumerating %d-word covers of %s from %d candidates",
                      k, alphabet.formatWord(w), len(words))

        budget = Budget.fromConfig(self.config.budget)
        measure = 1 << d
        jobs = [(graph.adj, [int(g) for g in gValues], levels, first, measure, k,
                 levelCounts, self.config.budget.timeBudget, self.config.budget.nodeBudget,
                 self.config.keepCodes)
                for first in range(len(words))]
        if self.config.nCore > 1:
            # each worker gets the whole budget
            with multiprocessing.Pool(self.config.nCore) as pool:
                results = pool.map(_searchFromFirst, jobs)
        else:
            results = []
            for job in jobs:
                results.append(_searchFromFirst(job, budget=budget))
                if not results[-1][2]:
                    break

        count = sum(r[0] for r in results)
        complete = all(r[2] for r in results) and len(results) == len(jobs)
        nodes = sum(r[3] for r in results)
        codes = []
        if self.config.keepCodes:
            codes = sorted((PolyboxCode(alphabet, [Word(words[v]) for v in found], dim=d, validate=False)
                            for r in results for found in r[1]),
                           key=lambda c: c.words)
        if complete:
            self.log.info("Found %d covers (%d nodes)", count, nodes)
        else:
            self.log.warning("Budget exhausted after %d nodes; %d covers found so far", nodes, count)
        return pipeBase.Struct(codes=codes, count=count, complete=complete, nodes=nodes)

    def tabulate(self, alphabet, w, sizes=(5, 7, 8, 9)):
        """Count covers for every composition of each size.

        Returns
        -------
        result : `lsst.pipe.base.Struct`
           ``table``, a list of ``(k, Composition, count)``, and ``complete``.
        """
        d = len(w)
        table = []
        complete = True
        for k in sizes:
            for composition in coverCompositions(k, d, minIndex=self.config.minIndex):
                result = self.run(alphabet, w, k, composition=composition)
                table.append((k, composition, result.count))
                complete = complete and result.complete
        return pipeBase.Struct(table=table, complete=complete)

