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
"""Keller graphs and their maximum cliques.

The Keller graph on ``S**d`` joins two star-free words when they are
dichotomous but not a twin pair, so its cliques are exactly the polybox
codes without twin pairs.  For the alphabet ``{0, 1, 2, 3}`` with
``0' = 2`` and ``1' = 3`` this is the classical Keller graph.
"""

import multiprocessing
from fractions import Fraction

import numpy as np

import lsst.pex.config as pexConfig
import lsst.pipe.base as pipeBase
from lsst.utils.timer import timeMethod

from .alphabet import Alphabet, Word
from .cliqueSearch import BitGraph, CliqueSearch, greedyLowerBound
from .exceptions import GraphSizeError, PolyboxUsageError
from .measure import equivalent
from .polyboxCode import PolyboxCode, allWordsArray, findTwinPair, distribution
from .utilities import BudgetConfig, Budget, bitsToList

__all__ = ['buildWordGraph', 'KellerGraph', 'buildKellerGraph', 'MaxCliqueConfig', 'MaxCliqueTask',
           'equivalentCliques', 'spreadThreshold', 'spreadCertificate', 'neighbourRepresentatives']


def buildWordGraph(words, twinFree=True):
    """Dichotomy graph on an array of words.

    Parameters
    ----------
    words : `numpy.ndarray`
       ``(n, d)`` uint8 array of letter ids.
    twinFree : `bool`, optional
       Drop the edges between twin pairs.

    Returns
    -------
    graph : `lsst.polybox.BitGraph`
    """
    arr = np.asarray(words, dtype=np.uint8)
    d = arr.shape[1]
    flipped = arr ^ 1

    def rows():
        for u in arr:
            nComp = (flipped == u[np.newaxis, :]).sum(axis=1)
            row = nComp > 0
            if twinFree:
                nEqual = (arr == u[np.newaxis, :]).sum(axis=1)
                row &= ~((nComp == 1) & (nEqual == d - 1))
            yield row

    return BitGraph.fromAdjacencyRows(rows())


class KellerGraph:
    """The Keller graph on all star-free words of one dimension.

    Vertices are the words in lexicographic order, so vertex ``v`` is the
    word whose letters are the base-``|S|`` digits of ``v``.
    """

    def __init__(self, dim, alphabet, words, graph):
        self.dim = dim
        self.alphabet = alphabet
        self.words = words
        self.graph = graph

    @property
    def nVertices(self):
        return self.graph.n

    def word(self, v):
        return Word(self.words[v])

    def index(self, word):
        v = 0
        for letter in word:
            v = v*self.alphabet.nLetters + letter
        return v

    def isAdjacent(self, u, v):
        return bool((self.graph.adj[u] >> v) & 1)

    def code(self, vertices):
        """The polybox code of a clique given as a vertex list or bitset."""
        if isinstance(vertices, int):
            vertices = bitsToList(vertices)
        return PolyboxCode(self.alphabet, [self.word(v) for v in vertices], dim=self.dim)


def buildKellerGraph(dim, alphabet=None, maxVertices=4**7):
    """Build the Keller graph of dimension ``dim``.

    Parameters
    ----------
    dim : `int`
    alphabet : `lsst.polybox.Alphabet`, optional
       Defaults to the classical alphabet ``{0, 1, 2, 3}``.
    maxVertices : `int`, optional
       Resource limit.

    Raises
    ------
    GraphSizeError
       Raised if the graph would have more than ``maxVertices`` vertices.
    """
    if alphabet is None:
        alphabet = Alphabet.keller()
    if dim < 1:
        raise PolyboxUsageError("Dimension must be positive, got %d" % (dim))
    nVertices = alphabet.nLetters**dim
    if nVertices > maxVertices:
        raise GraphSizeError("The Keller graph of dimension %d over %d letters has %d vertices, "
                             "over the limit of %d" % (dim, alphabet.nLetters, nVertices, maxVertices))
    words = allWordsArray(alphabet.nLetters, dim)
    return KellerGraph(dim, alphabet, words, buildWordGraph(words))


def neighbourRepresentatives(dim, alphabet):
    """One neighbour of vertex 0 per orbit of the stabilizer of vertex 0.

    A neighbour of the all-zero word is determined up to symmetry by how
    many coordinates carry the complement letter 1 and how many carry a
    letter of another pair.

    Returns
    -------
    words : `list` [`lsst.polybox.Word`]
    """
    reps = []
    maxOther = dim if alphabet.nPairs > 1 else 0
    for cComp in range(1, dim + 1):
        for cOther in range(0, min(maxOther, dim - cComp) + 1):
            if cComp == 1 and cOther == 0:
                continue
            reps.append(Word([1]*cComp + [2]*cOther + [0]*(dim - cComp - cOther)))
    return reps


class MaxCliqueConfig(pexConfig.Config):
    """Config for MaxCliqueTask"""

    budget = pexConfig.ConfigField(
        doc="Search budget",
        dtype=BudgetConfig,
    )
    useSymmetry = pexConfig.Field(
        doc=("Root the search at vertex 0 and branch over one neighbour per orbit of "
             "its stabilizer; the graph is vertex transitive"),
        dtype=bool,
        default=True,
    )
    useDegeneracyOrder = pexConfig.Field(
        doc="Relabel vertices in degeneracy order before searching",
        dtype=bool,
        default=True,
    )
    nCore = pexConfig.Field(
        doc="Number of worker processes (one root branch per task)",
        dtype=int,
        default=1,
    )
    maxVertices = pexConfig.Field(
        doc="Largest graph that may be built",
        dtype=int,
        default=4**7,
    )

    def validate(self):
        super().validate()
        if self.nCore < 1:
            msg = 'nCore must be at least 1'
            raise pexConfig.FieldValidationError(MaxCliqueConfig.nCore, self, msg)
        if self.maxVertices < 1:
            msg = 'maxVertices must be positive'
            raise pexConfig.FieldValidationError(MaxCliqueConfig.maxVertices, self, msg)


_workerState = {}


def _initWorker(adj, n, sharedBest, timeBudget, nodeBudget):
    _workerState['graph'] = BitGraph(n, adj)
    _workerState['sharedBest'] = sharedBest
    _workerState['budget'] = (timeBudget, nodeBudget)


def _searchBranch(args):
    base, candidates = args
    search = CliqueSearch(_workerState['graph'], budget=Budget(*_workerState['budget']),
                          sharedBest=_workerState['sharedBest'])
    result = search.maxClique(candidates=candidates, base=base,
                              lowerBound=_workerState['sharedBest'].value)
    return result.size, result.bits, result.complete, result.nodes


class MaxCliqueTask(pipeBase.Task):
    """
    Find a maximum clique of a Keller graph.

    The search is bit-parallel branch and bound with a greedy colouring
    bound, started from a greedy clique.  With ``useSymmetry`` the clique is
    assumed to contain vertex 0 and, for each orbit of its neighbours, one
    representative; every maximum clique is the image of such a clique.
    """

    ConfigClass = MaxCliqueConfig
    _DefaultName = "maxClique"

    @timeMethod
    def run(self, dim, alphabet=None, kellerGraph=None):
        """
        Compute the clique number of the Keller graph.

        Parameters
        ----------
        dim : `int`
        alphabet : `lsst.polybox.Alphabet`, optional
           Defaults to ``{0, 1, 2, 3}``.
        kellerGraph : `KellerGraph`, optional
           Prebuilt graph.

        Returns
        -------
        result : `lsst.pipe.base.Struct`
           ``clique`` (`PolyboxCode`), ``size``, ``provenOptimal``,
           ``nodes`` and ``kellerGraph``.
        """
        if kellerGraph is None:
            kellerGraph = buildKellerGraph(dim, alphabet, maxVertices=self.config.maxVertices)
        graph = kellerGraph.graph
        invperm = list(range(graph.n))
        perm = invperm
        if self.config.useDegeneracyOrder:
            graph, perm, invperm = graph.reorderByDegeneracy()

        lbSize, lbBits = greedyLowerBound(graph.adj, graph.allVertices)
        self.log.info("Searching the %d-dimensional Keller graph (%d vertices); greedy clique of size %d",
                      kellerGraph.dim, graph.n, lbSize)

        if self.config.useSymmetry and kellerGraph.dim > 1:
            root = perm[0]
            branches = []
            for rep in neighbourRepresentatives(kellerGraph.dim, kellerGraph.alphabet):
                v = perm[kellerGraph.index(rep)]
                base = (1 << root) | (1 << v)
                branches.append((base, graph.adj[root] & graph.adj[v]))
            self.log.debug("Rooted search over %d neighbour orbits", len(branches))
        else:
            branches = [(0, graph.allVertices)]

        bestSize, bestBits = lbSize, lbBits
        complete = True
        nodes = 0
        if self.config.nCore > 1 and len(branches) > 1:
            sharedBest = multiprocessing.Value('i', lbSize)
            initargs = (graph.adj, graph.n, sharedBest, self.config.budget.timeBudget,
                        self.config.budget.nodeBudget)
            with multiprocessing.Pool(self.config.nCore, initializer=_initWorker,
                                      initargs=initargs) as pool:
                results = pool.map(_searchBranch, branches)
        else:
            budget = Budget.fromConfig(self.config.budget)
            search = CliqueSearch(graph, budget=budget)
            results = []
            for base, candidates in branches:
                result = search.maxClique(candidates=candidates, base=base, lowerBound=bestSize)
                results.append((result.size, result.bits, result.complete, result.nodes))
                if result.bits and result.size > bestSize:
                    bestSize, bestBits = result.size, result.bits
                if not result.complete:
                    break
        for size, bits, branchComplete, branchNodes in results:
            if bits and size > bestSize:
                bestSize, bestBits = size, bits
            complete = complete and branchComplete
            nodes += branchNodes
        complete = complete and len(results) == len(branches)

        clique = kellerGraph.code([invperm[v] for v in bitsToList(bestBits)])
        if complete:
            self.log.info("Clique number %d (proven, %d nodes)", bestSize, nodes)
        else:
            self.log.warning("Budget exhausted after %d nodes; best clique has %d vertices",
                             nodes, bestSize)
        return pipeBase.Struct(clique=clique, size=bestSize, provenOptimal=complete, nodes=nodes,
                               kellerGraph=kellerGraph)


def _checkClique(code, what):
    if not code.isStarFree():
        raise PolyboxUsageError("%s has stars, so it is not a Keller clique" % (what))
    if findTwinPair(code) is not None:
        raise PolyboxUsageError("%s contains a twin pair, so it is not a Keller clique" % (what))


def equivalentCliques(V, W):
    """Equivalence of two cliques of the same Keller graph.

    Raises
    ------
    PolyboxUsageError
       Raised if an input is not a clique (has stars or a twin pair).
    """
    _checkClique(V, "The first code")
    _checkClique(W, "The second code")
    return equivalent(V, W)


def spreadThreshold(dim):
    """The number of groups that forces a twin pair, as an exact rational ``2**(d-3)/3``."""
    return Fraction(2**dim, 24)


def spreadCertificate(code):
    """Words certifying that a clique is smaller than ``2**d``.

    Looks for a coordinate at which more than ``2**(d-3)/3`` words carry
    letters from pairwise different letter pairs.  A twin-pair-free
    partition code cannot have such a coordinate, so when one is found the
    clique has fewer than ``2**d`` words.

    Returns
    -------
    certificate : `lsst.pipe.base.Struct` or None
       ``coordinate``, ``nGroups`` and one word per group as ``words``.
    """
    _checkClique(code, "The code")
    threshold = spreadThreshold(code.dim)
    for i in range(code.dim):
        dist = distribution(code, i)
        if dist.nGroups > threshold:
            words = [g.allWords()[0] for g in dist.groups]
            return pipeBase.Struct(coordinate=i, nGroups=dist.nGroups, words=words)
    return None
