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
"""Bit-parallel branch and bound for cliques.

Graphs are stored as one Python integer per vertex holding its adjacency
row, so candidate sets intersect word-parallel.  The search colours the
candidates greedily and expands them in reverse colour order; the colour
of a vertex bounds the size of any clique that can still be added.
"""

import heapq

import numpy as np

import lsst.pipe.base as pipeBase

from .exceptions import BudgetExhaustedError
from .utilities import Budget, lsbIndex, bitCount, bitsToList

__all__ = ['BitGraph', 'colorSort', 'greedyLowerBound', 'CliqueSearch']


class BitGraph:
    """Undirected simple graph with integer bitset adjacency rows.

    Parameters
    ----------
    n : `int`
       Number of vertices.
    adj : `list` [`int`]
       ``adj[v]`` has bit ``u`` set iff ``u`` and ``v`` are adjacent.
    """
    __slots__ = ("n", "adj")

    def __init__(self, n, adj):
        self.n = n
        self.adj = adj

    @classmethod
    def fromEdges(cls, n, edges):
        adj = [0]*n
        for u, v in edges:
            if u == v:
                continue
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError("Edge (%d, %d) out of bounds for n=%d" % (u, v, n))
            adj[u] |= (1 << v)
            adj[v] |= (1 << u)
        return cls(n, adj)

    @classmethod
    def fromAdjacencyRows(cls, rows):
        """Graph from an iterable of boolean numpy rows (the diagonal is ignored)."""
        adj = []
        for v, row in enumerate(rows):
            packed = np.packbits(np.asarray(row, dtype=bool), bitorder='little')
            adj.append(int.from_bytes(packed.tobytes(), 'little') & ~(1 << v))
        return cls(len(adj), adj)

    @property
    def allVertices(self):
        return (1 << self.n) - 1

    def degrees(self):
        return [bitCount(self.adj[v]) for v in range(self.n)]

    def isClique(self, vertices):
        vertices = list(vertices)
        for a, v in enumerate(vertices):
            for u in vertices[a + 1:]:
                if not (self.adj[v] >> u) & 1:
                    return False
        return True

    def commonNeighbours(self, bits):
        """Vertices adjacent to every vertex of ``bits``."""
        out = self.allVertices
        for v in bitsToList(bits):
            out &= self.adj[v]
        return out

    def reorderByDegeneracy(self):
        """Relabel vertices in degeneracy order.

        Returns
        -------
        graph : `BitGraph`
           The relabelled graph.
        perm : `list` [`int`]
           ``perm[old]`` is the new label of ``old``.
        invperm : `list` [`int`]
           ``invperm[new]`` is the old label.
        """
        n = self.n
        deg = self.degrees()
        heap = [(deg[v], v) for v in range(n)]
        heapq.heapify(heap)
        removed = [False]*n
        order = []
        while heap:
            dv, v = heapq.heappop(heap)
            if removed[v] or dv != deg[v]:
                continue
            removed[v] = True
            order.append(v)
            nbrs = self.adj[v]
            while nbrs:
                w = lsbIndex(nbrs)
                if not removed[w]:
                    deg[w] -= 1
                    heapq.heappush(heap, (deg[w], w))
                nbrs &= nbrs - 1
        invperm = order
        perm = [0]*n
        for newV, oldV in enumerate(invperm):
            perm[oldV] = newV
        newAdj = [0]*n
        for oldV in range(n):
            mask = self.adj[oldV]
            rel = 0
            while mask:
                rel |= (1 << perm[lsbIndex(mask)])
                mask &= mask - 1
            newAdj[perm[oldV]] = rel
        return BitGraph(n, newAdj), perm, invperm


def colorSort(P, adj):
    """Greedy sequential colouring of the candidate set ``P``.

    Returns
    -------
    order : `list` [`int`]
       Vertices in colour order.
    colors : `list` [`int`]
       Colour (1-based) of each vertex in ``order``, non-decreasing.
    """
    order = []
    colors = []
    color = 0
    work = P
    while work:
        color += 1
        Q = work
        colorMask = 0
        while Q:
            v = lsbIndex(Q)
            vBit = 1 << v
            order.append(v)
            colors.append(color)
            colorMask |= vBit
            Q &= ~vBit
            Q &= ~adj[v]
        work &= ~colorMask
    return order, colors


def greedyLowerBound(adj, candidates, trials=64):
    """Size and bitset of a greedily grown clique inside ``candidates``."""
    verts = sorted(bitsToList(candidates), key=lambda v: bitCount(adj[v] & candidates), reverse=True)
    bestMask, bestSize = 0, 0
    for s in verts[:trials]:
        C = 1 << s
        P = adj[s] & candidates
        while P:
            tmp, bestV, bestScore = P, -1, -1
            while tmp:
                low = tmp & -tmp
                v = low.bit_length() - 1
                tmp ^= low
                score = bitCount(adj[v] & P)
                if score > bestScore:
                    bestScore, bestV = score, v
            C |= (1 << bestV)
            P &= adj[bestV]
        if bitCount(C) > bestSize:
            bestSize, bestMask = bitCount(C), C
    return bestSize, bestMask


class CliqueSearch:
    """Branch-and-bound clique search on a `BitGraph`.

    Parameters
    ----------
    graph : `BitGraph`
    budget : `lsst.polybox.Budget`, optional
       Shared budget; unlimited if None.
    sharedBest : `multiprocessing.Value`, optional
       Incumbent size shared between worker processes.
    """
    def __init__(self, graph, budget=None, sharedBest=None):
        self.graph = graph
        self.adj = graph.adj
        self.budget = budget if budget is not None else Budget()
        self.sharedBest = sharedBest
        self.bestSize = 0
        self.bestBits = 0

    def _bound(self):
        if self.sharedBest is None:
            return self.bestSize
        return max(self.bestSize, self.sharedBest.value)

    def _record(self, size, bits):
        self.bestSize = size
        self.bestBits = bits
        if self.sharedBest is not None:
            with self.sharedBest.get_lock():
                if size > self.sharedBest.value:
                    self.sharedBest.value = size

    def maxClique(self, candidates=None, base=0, lowerBound=0):
        """Largest clique extending ``base`` by vertices of ``candidates``.

        Parameters
        ----------
        candidates : `int`, optional
           Bitset of allowed vertices, all adjacent to ``base``; all vertices
           if None.
        base : `int`, optional
           Bitset of a clique that every answer contains.
        lowerBound : `int`, optional
           Only cliques larger than this are of interest.

        Returns
        -------
        result : `lsst.pipe.base.Struct`
           ``size``, ``bits`` (0 if nothing beat ``lowerBound``),
           ``complete`` (False if the budget ran out) and ``nodes``.
        """
        if candidates is None:
            candidates = self.graph.allVertices & ~base
        self.bestSize = lowerBound
        self.bestBits = 0
        startNodes = self.budget.nodes
        try:
            self._expandMax(bitCount(base), base, candidates)
            complete = True
        except BudgetExhaustedError:
            complete = False
        return pipeBase.Struct(size=self.bestSize, bits=self.bestBits, complete=complete,
                               nodes=self.budget.nodes - startNodes)

    def _expandMax(self, size, R, P):
        if P == 0:
            if size > self._bound():
                self._record(size, R)
            return
        order, colors = colorSort(P, self.adj)
        local = P
        for i in range(len(order) - 1, -1, -1):
            if size + colors[i] <= self._bound():
                break
            v = order[i]
            vBit = 1 << v
            self.budget.tick()
            R2 = R | vBit
            P2 = local & self.adj[v]
            if P2 == 0:
                if size + 1 > self._bound():
                    self._record(size + 1, R2)
            else:
                self._expandMax(size + 1, R2, P2)
            local &= ~vBit

    def iterCliques(self, target, candidates=None, base=0):
        """Generate every clique of size ``target`` extending ``base``.

        Cliques are yielded as bitsets.  `BudgetExhaustedError` propagates
        to the caller.
        """
        if candidates is None:
            candidates = self.graph.allVertices & ~base
        size = bitCount(base)
        if size == target:
            yield base
            return
        yield from self._expandEnum(size, base, candidates, target)

    def _expandEnum(self, size, R, P, target):
        if P == 0:
            return
        order, colors = colorSort(P, self.adj)
        local = P
        for i in range(len(order) - 1, -1, -1):
            if size + colors[i] < target:
                break
            v = order[i]
            vBit = 1 << v
            self.budget.tick()
            R2 = R | vBit
            P2 = local & self.adj[v]
            if size + 1 == target:
                yield R2
            elif P2:
                yield from self._expandEnum(size + 1, R2, P2, target)
            local &= ~vBit
