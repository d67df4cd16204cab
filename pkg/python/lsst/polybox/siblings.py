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
"""Sibling graphs of polybox codes, and twin pairs forced by many groups.

Two star-free words are ``i``-siblings when their letters at ``i`` are
neither equal nor complementary and deleting coordinate ``i`` leaves a
twin pair.  On a code without twin pairs the sibling graph has maximum
degree at most ``d`` and no triangles, and the degree sums along its edges
bound the sizes of the letter groups of the code.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import lsst.utils.logging

from .alphabet import STAR, Word
from .exceptions import PolyboxUsageError, DefectError
from .measure import isPartitionCode
from .polyboxCode import PolyboxCode, distribution, findTwinPair, isTwinPair

__all__ = ['SiblingGraph', 'SiblingReport', 'siblingColors', 'siblingGraph',
           'checkSiblingInvariants', 'twinPairBySpread']

_log = lsst.utils.logging.getLogger(__name__)


def siblingColors(u, v):
    """Coordinates ``i`` at which ``u`` and ``v`` are ``i``-siblings."""
    colors = []
    for i in range(len(u)):
        if u[i] == STAR or v[i] == STAR or u[i] >> 1 == v[i] >> 1:
            continue
        if isTwinPair(u.without(i), v.without(i)):
            colors.append(i)
    return colors


@dataclass
class SiblingGraph:
    """Graph of siblings on a code.

    ``edges`` maps a vertex pair ``(a, b)``, ``a < b`` indices into
    ``words``, to the frozenset of its colours.  The graph is simple: the
    degree of a vertex counts neighbours, not colours.
    """
    words: tuple
    edges: dict = field(default_factory=dict)

    @property
    def nVertices(self):
        return len(self.words)

    def neighbours(self, a):
        out = set()
        for (x, y) in self.edges:
            if x == a:
                out.add(y)
            elif y == a:
                out.add(x)
        return out

    def degrees(self):
        deg = [0]*len(self.words)
        for (x, y) in self.edges:
            deg[x] += 1
            deg[y] += 1
        return deg

    def triangles(self):
        """All triangles as sorted index triples."""
        adjacency = [self.neighbours(a) for a in range(len(self.words))]
        found = []
        for (x, y) in self.edges:
            for z in adjacency[x] & adjacency[y]:
                if z > y:
                    found.append((x, y, z))
        return found


def siblingGraph(code):
    """Sibling graph of a star-free code.

    Raises
    ------
    PolyboxUsageError
       Raised if the code has stars.
    """
    if not code.isStarFree():
        raise PolyboxUsageError("Sibling graphs are defined for star-free codes")
    words = code.words
    graph = SiblingGraph(words=words)
    for a in range(len(words)):
        for b in range(a + 1, len(words)):
            colors = siblingColors(words[a], words[b])
            if colors:
                graph.edges[(a, b)] = frozenset(colors)
    return graph


@dataclass
class SiblingReport:
    """Outcome of `checkSiblingInvariants`; ``violations`` is empty on success."""
    graph: SiblingGraph
    maxDegree: int
    maxEdgeDegreeSum: int
    averageDegree: Fraction
    largestGroup: int
    violations: list

    @property
    def passed(self):
        return len(self.violations) == 0


def _largestGroup(code):
    best = 0
    for i in range(code.dim):
        for group in distribution(code, i).groups:
            best = max(best, group.size)
    return best


def checkSiblingInvariants(code):
    """Check the degree, triangle, group-size and average-degree bounds.

    Parameters
    ----------
    code : `lsst.polybox.PolyboxCode`
       Star-free code without twin pairs.

    Returns
    -------
    report : `SiblingReport`

    Raises
    ------
    PolyboxUsageError
       Raised if the code has stars or a twin pair.
    """
    if findTwinPair(code) is not None:
        raise PolyboxUsageError("The sibling bounds hold for codes without twin pairs")
    graph = siblingGraph(code)
    d = code.dim
    deg = graph.degrees()
    violations = []
    maxDegree = max(deg, default=0)
    if maxDegree > d:
        v = deg.index(maxDegree)
        violations.append("word %s has %d siblings, more than d = %d"
                          % (code.format(code.words[v]), maxDegree, d))
    for triangle in graph.triangles():
        violations.append("triangle %s" % (', '.join(code.format(code.words[t]) for t in triangle)))

    largest = _largestGroup(code)
    maxSum = 0
    for (a, b) in graph.edges:
        degreeSum = deg[a] + deg[b]
        maxSum = max(maxSum, degreeSum)
        if degreeSum == 2*d:
            required = 2*d - 2
        elif degreeSum < 2*d:
            required = degreeSum - 1
        else:
            continue
        if largest < required:
            violations.append("siblings %s, %s have degree sum %d but the largest letter group "
                              "has %d < %d words" % (code.format(code.words[a]),
                                                     code.format(code.words[b]),
                                                     degreeSum, largest, required))
    average = Fraction(sum(deg), len(deg)) if deg else Fraction(0)
    if average > Fraction(maxSum, 2):
        violations.append("average degree %s exceeds half the largest edge degree sum %d"
                          % (average, maxSum))
    for violation in violations:
        _log.error("Sibling invariant violated: %s", violation)
    return SiblingReport(graph=graph, maxDegree=maxDegree, maxEdgeDegreeSum=maxSum,
                         averageDegree=average, largestGroup=largest, violations=violations)


def _lift(w, i, letter):
    return Word(w[:i] + (letter,) + w[i:])


def twinPairBySpread(code, i):
    """Find a twin pair in a partition code from its groups at coordinate ``i``.

    Each group splits into two halves whose projections off ``i`` are
    equivalent codes.  Going through the groups from the smallest, a twin
    pair inside a projected half lifts to a twin pair of the code, and equal
    projected halves give a twin pair across the halves.  With more than
    ``2**(d-3)/3`` groups some group has at most 11 words per half, which
    forces one of the two outcomes.

    Parameters
    ----------
    code : `lsst.polybox.PolyboxCode`
       Star-free partition code.
    i : `int`
       Coordinate (0-based).

    Returns
    -------
    pair : `tuple` [`lsst.polybox.Word`] or None

    Raises
    ------
    PolyboxUsageError
       Raised if the code is not a star-free partition code.
    DefectError
       Raised if the number of groups guarantees a twin pair but none is found.
    """
    if not code.isStarFree() or not isPartitionCode(code):
        raise PolyboxUsageError("Expected a star-free partition code")
    if not 0 <= i < code.dim:
        raise PolyboxUsageError("Coordinate %d out of range for dimension %d" % (i, code.dim))
    dist = distribution(code, i)
    forced = 24*dist.nGroups > (1 << code.dim)
    pair = None
    for group in sorted(dist.groups, key=lambda g: (len(g.words), g.letter)):
        for half, letter in ((group.words, group.letter), (group.complementWords, group.letter ^ 1)):
            if len(half) < 2:
                continue
            projected = PolyboxCode(code.alphabet, [w.without(i) for w in half], dim=code.dim - 1)
            inner = findTwinPair(projected)
            if inner is not None:
                pair = (_lift(inner[0], i, letter), _lift(inner[1], i, letter))
                break
        if pair is not None:
            break
        lower = {w.without(i): w for w in group.words}
        for w in group.complementWords:
            partner = lower.get(w.without(i))
            if partner is not None:
                pair = (partner, w)
                break
        if pair is not None:
            break
    if pair is None and not forced:
        pair = findTwinPair(code)
    if pair is None:
        if forced:
            raise DefectError("%d groups at coordinate %d force a twin pair, but none was found"
                              % (dist.nGroups, i))
        return None
    if not isTwinPair(pair[0], pair[1]):
        raise DefectError("Spread search returned a non-twin pair")
    return tuple(sorted(pair))
