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
"""Rigidity of star-free polybox codes.

Every word of a code equivalent to ``V`` is covered by ``V``, and all
star-free words have the same measure, so the codes equivalent to ``V``
are exactly the sets of ``|V|`` pairwise dichotomous words covered by
``V``: the cliques of size ``|V|`` in the dichotomy graph on the covered
words.  Letters that ``V`` does not use at a coordinate all contribute
the same factor to every g-value, so a few fresh pairs per coordinate
stand in for the rest of the alphabet.
"""

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

import lsst.pex.config as pexConfig
import lsst.pipe.base as pipeBase
from lsst.utils.timer import timeMethod

from .alphabet import Word
from .cliqueSearch import CliqueSearch
from .coverEnumeration import CoverEnumerationTask
from .exceptions import BudgetExhaustedError, DefectError, PolyboxUsageError
from .keller import buildKellerGraph, buildWordGraph
from .measure import coverSums, equivalent, selfMeasures
from .polyboxCode import PolyboxCode, findTwinPair
from .utilities import BudgetConfig, Budget, bitsToList, listToBits

__all__ = ['SearchStatus', 'EquivalenceSearchSpec', 'RigidityConfig', 'RigidityTask']


class SearchStatus(enum.Enum):
    """Outcome of a bounded search."""
    FOUND = "found"
    EXHAUSTED = "exhausted"
    INCONCLUSIVE = "inconclusive"


@dataclass
class EquivalenceSearchSpec:
    """What `RigidityTask.findEquivalent` looks for.

    ``nFreshPairs`` overrides the configured number of stand-in pairs (0
    restricts the search to the code's own alphabet).  ``requireWord``, if
    set, must belong to every result.  ``budget`` is a running
    `lsst.polybox.Budget`; the configured budget is used when it is None.
    """
    base: PolyboxCode
    requireTwinPairFree: bool = False
    requireDisjoint: bool = False
    maxResults: int = 1
    budget: Optional[Budget] = None
    nFreshPairs: Optional[int] = None
    requireWord: Optional[Word] = None


class RigidityConfig(pexConfig.Config):
    """Config for RigidityTask"""

    budget = pexConfig.ConfigField(
        doc="Search budget",
        dtype=BudgetConfig,
    )
    nFreshPairs = pexConfig.Field(
        doc="Letter pairs per coordinate standing in for the letters the code does not use there",
        dtype=int,
        default=1,
    )
    maxResults = pexConfig.Field(
        doc="Stop after this many equivalent codes",
        dtype=int,
        default=1,
    )
    extendAlphabet = pexConfig.Field(
        doc="Add synthetic letter pairs when the alphabet has too few unused pairs",
        dtype=bool,
        default=True,
    )
    counterexampleMaxSize = pexConfig.Field(
        doc="Largest code size tried by counterexampleSearch",
        dtype=int,
        default=12,
    )
    coverEnumeration = pexConfig.ConfigurableField(
        target=CoverEnumerationTask,
        doc="Task enumerating the covers of the first vertex in counterexampleSearch",
    )

    def setDefaults(self):
        super().setDefaults()
        # every word except the covered one may appear in a cover
        self.coverEnumeration.minIndex = 1

    def validate(self):
        super().validate()
        if self.nFreshPairs < 0:
            msg = 'nFreshPairs must be non-negative'
            raise pexConfig.FieldValidationError(RigidityConfig.nFreshPairs, self, msg)
        if self.maxResults < 1:
            msg = 'maxResults must be at least 1'
            raise pexConfig.FieldValidationError(RigidityConfig.maxResults, self, msg)
        if self.counterexampleMaxSize < 1:
            msg = 'counterexampleMaxSize must be at least 1'
            raise pexConfig.FieldValidationError(RigidityConfig.counterexampleMaxSize, self, msg)


def _checkStarFree(code):
    if not code.isStarFree():
        raise PolyboxUsageError("Rigidity is defined for star-free codes")


class RigidityTask(pipeBase.Task):
    """
    Decide rigidity and search for equivalent codes.
    """

    ConfigClass = RigidityConfig
    _DefaultName = "rigidity"

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        self.makeSubtask("coverEnumeration")

    def _letterChoices(self, code, nFreshPairs):
        """Letters allowed at each coordinate, and the alphabet holding them."""
        alphabet = code.alphabet
        used = [sorted(set(int(s) >> 1 for s in code.array[:, i])) for i in range(code.dim)]
        shortfall = max((nFreshPairs - (alphabet.nPairs - len(u)) for u in used), default=0)
        if shortfall > 0:
            if self.config.extendAlphabet:
                alphabet = alphabet.extended(shortfall)
                self.log.debug("Extended the alphabet by %d pairs", shortfall)
            else:
                self.log.debug("The alphabet lacks %d unused pairs; using what is there", shortfall)
        choices = []
        for u in used:
            fresh = [p for p in range(alphabet.nPairs) if p not in u][:nFreshPairs]
            pairs = sorted(u + fresh)
            choices.append([letter for p in pairs for letter in (2*p, 2*p + 1)])
        return alphabet, choices

    def coveredWords(self, code, nFreshPairs=None):
        """The star-free words covered by ``code``.

        Parameters
        ----------
        code : `lsst.polybox.PolyboxCode`
           Star-free code.
        nFreshPairs : `int`, optional
           Stand-in pairs per coordinate; defaults to the config.

        Returns
        -------
        result : `lsst.pipe.base.Struct`
           ``alphabet`` (possibly extended) and ``words``, a sorted list of
           `lsst.polybox.Word`.

        Raises
        ------
        PolyboxUsageError
           Raised if the code has stars.
        """
        _checkStarFree(code)
        if nFreshPairs is None:
            nFreshPairs = self.config.nFreshPairs
        alphabet, choices = self._letterChoices(code, nFreshPairs)
        if len(code) == 0:
            return pipeBase.Struct(alphabet=alphabet, words=[])
        grids = np.meshgrid(*[np.array(c, dtype=np.uint8) for c in choices], indexing='ij')
        candidates = np.stack([g.ravel() for g in grids], axis=1)
        keep = coverSums(candidates, code) == selfMeasures(candidates)
        words = [Word(row) for row in candidates[keep]]
        return pipeBase.Struct(alphabet=alphabet, words=words)

    def findEquivalent(self, spec):
        """Search for codes equivalent to ``spec.base``.

        Parameters
        ----------
        spec : `EquivalenceSearchSpec`

        Returns
        -------
        result : `lsst.pipe.base.Struct`
           ``codes`` (sorted list of `PolyboxCode` different from the base),
           ``status`` (`SearchStatus`), ``nCandidates`` and ``nodes``.

        Raises
        ------
        PolyboxUsageError
           Raised if the base code has stars.
        DefectError
           Raised if a result fails the independent equivalence check.
        """
        base = spec.base
        _checkStarFree(base)
        budget = spec.budget if spec.budget is not None else Budget.fromConfig(self.config.budget)
        startNodes = budget.nodes
        covered = self.coveredWords(base, nFreshPairs=spec.nFreshPairs)
        alphabet = covered.alphabet
        baseWords = set(base.words)
        words = covered.words
        if spec.requireDisjoint:
            words = [w for w in words if w not in baseWords]
        target = len(base)
        if target == 0 or len(words) < target:
            return pipeBase.Struct(codes=[], status=SearchStatus.EXHAUSTED, nCandidates=len(words),
                                   nodes=0)

        graph = buildWordGraph(np.array(words, dtype=np.uint8), twinFree=spec.requireTwinPairFree)
        search = CliqueSearch(graph, budget=budget)
        baseBits, candidates = 0, None
        if spec.requireWord is not None:
            required = Word(spec.requireWord)
            if required not in words:
                return pipeBase.Struct(codes=[], status=SearchStatus.EXHAUSTED, nCandidates=len(words),
                                       nodes=0)
            v = words.index(required)
            baseBits, candidates = 1 << v, graph.adj[v]

        extendedBase = base.withAlphabet(alphabet)
        found = []
        complete = True
        try:
            for bits in search.iterCliques(target, candidates=candidates, base=baseBits):
                members = [words[v] for v in bitsToList(bits)]
                if set(members) == baseWords:
                    continue
                W = PolyboxCode(alphabet, members, dim=base.dim)
                if not equivalent(extendedBase, W):
                    raise DefectError("Clique %r is not equivalent to %r" % (W, base))
                found.append(W)
                if len(found) >= spec.maxResults:
                    break
        except BudgetExhaustedError:
            complete = False

        found.sort(key=lambda c: c.words)
        if found:
            status = SearchStatus.FOUND
        elif complete:
            status = SearchStatus.EXHAUSTED
        else:
            status = SearchStatus.INCONCLUSIVE
        self.log.debug("Equivalence search over %d candidates: %s (%d codes)",
                       len(words), status.value, len(found))
        return pipeBase.Struct(codes=found, status=status, nCandidates=len(words),
                               nodes=budget.nodes - startNodes)

    @timeMethod
    def isRigid(self, code):
        """Decide whether ``code`` is rigid.

        Returns
        -------
        result : `lsst.pipe.base.Struct`
           ``status``: ``"rigid"``, ``"not_rigid"`` or ``"inconclusive"``;
           ``witness``: an equivalent code when not rigid; ``nodes``.
        """
        result = self.findEquivalent(EquivalenceSearchSpec(base=code, maxResults=1))
        witness = None
        if result.status == SearchStatus.FOUND:
            status = "not_rigid"
            witness = result.codes[0]
            self.log.info("Not rigid: equivalent to %r", witness)
        elif result.status == SearchStatus.EXHAUSTED:
            status = "rigid"
            self.log.info("Rigid (%d candidate words, %d nodes)", result.nCandidates, result.nodes)
        else:
            status = "inconclusive"
            self.log.warning("Rigidity undecided after %d nodes", result.nodes)
        return pipeBase.Struct(status=status, witness=witness, nodes=result.nodes)

    @timeMethod
    def counterexampleSearch(self, dim, alphabet, maxSize=None):
        """Search for two disjoint, equivalent codes without twin pairs.

        The graph is vertex transitive, so one of the codes, ``W``, may be
        assumed to contain the first word ``w0``.  The other code ``V`` then
        consists of a twin-pair-free cover ``C`` of ``w0`` and of words
        disjoint from ``w0``; both parts are enumerated exhaustively and each
        ``V`` is handed to `findEquivalent`.

        Parameters
        ----------
        dim : `int`
        alphabet : `lsst.polybox.Alphabet`
        maxSize : `int`, optional
           Largest ``|V|``; defaults to ``counterexampleMaxSize``.

        Returns
        -------
        result : `lsst.pipe.base.Struct`
           ``pair`` (``(V, W)`` or None), ``status`` (`SearchStatus`),
           ``defect`` (True if the pair has fewer than 12 words),
           ``nTested`` and ``nodes``.
        """
        if maxSize is None:
            maxSize = self.config.counterexampleMaxSize
        kellerGraph = buildKellerGraph(dim, alphabet)
        graph = kellerGraph.graph
        w0 = Word([0]*dim)
        farMask = listToBits(v for v in range(graph.n) if 1 in kellerGraph.words[v])

        covers = []
        complete = True
        if alphabet.nPairs >= 2:
            for k in range(2, maxSize + 1):
                result = self.coverEnumeration.run(alphabet, w0, k)
                covers.extend(result.codes)
                complete = complete and result.complete
        self.log.info("Searching %d covers of %s for codes of at most %d words",
                      len(covers), alphabet.formatWord(w0), maxSize)

        budget = Budget.fromConfig(self.config.budget)
        search = CliqueSearch(graph, budget=budget)
        nTested = 0
        pair = None
        try:
            for cover in covers:
                coverBits = listToBits(kellerGraph.index(w) for w in cover)
                extension = graph.commonNeighbours(coverBits) & farMask
                for size in range(maxSize, len(cover) - 1, -1):
                    for bits in search.iterCliques(size, candidates=extension, base=coverBits):
                        V = kellerGraph.code(bits)
                        nTested += 1
                        spec = EquivalenceSearchSpec(base=V, requireTwinPairFree=True, requireDisjoint=True,
                                                     maxResults=1, budget=budget, nFreshPairs=0,
                                                     requireWord=w0)
                        result = self.findEquivalent(spec)
                        if result.status == SearchStatus.INCONCLUSIVE:
                            raise BudgetExhaustedError("budget exhausted in an equivalence search")
                        if result.codes:
                            pair = (V, result.codes[0])
                            break
                    if pair is not None:
                        break
                if pair is not None:
                    break
        except BudgetExhaustedError:
            complete = False

        defect = False
        if pair is not None:
            status = SearchStatus.FOUND
            V, W = pair
            self.log.info("Found disjoint equivalent codes of %d words after %d trials", len(V), nTested)
            if findTwinPair(V) is not None or findTwinPair(W) is not None or not V.isDisjoint(W):
                raise DefectError("Counterexample pair violates the search filters")
            if len(V) <= 11:
                defect = True
                self.log.fatal("Disjoint equivalent twin-pair-free codes of %d words; "
                               "such codes need at least 12 words", len(V))
        elif complete:
            status = SearchStatus.EXHAUSTED
            self.log.info("No disjoint equivalent codes of at most %d words (%d trials)", maxSize, nTested)
        else:
            status = SearchStatus.INCONCLUSIVE
            self.log.warning("Budget exhausted after %d trials", nTested)
        return pipeBase.Struct(pair=pair, status=status, defect=defect, nTested=nTested,
                               nodes=budget.nodes)
