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
"""Structure of small polybox codes without twin pairs.

Two-word equivalent codes, five- and six-word partition codes, and
five-word covers of a word all have forced forms.  The classifiers here
recover those forms; each returned structure can rebuild the code it was
extracted from.  The module also holds the witnesses for odd numbers of
complementary coordinates, the composition solver for g-value sums, and a
generator of random partition codes.
"""

from dataclasses import dataclass

import numpy as np

from .alphabet import STAR, Word
from .exceptions import (PolyboxUsageError, ClassificationPreconditionError,
                         TemplateMismatchError, DefectError, CodeValidationError)
from .measure import (covers, equivalent, isPartitionCode, gValues)
from .polyboxCode import PolyboxCode, findTwinPair, applyIsomorphism

__all__ = ['PairStructure', 'FiveStructure', 'SixStructure', 'Composition',
           'classifyPair2', 'classifyPartition5', 'classifyPartition6', 'classifyCover5',
           'barCode', 'oddComplementPair', 'oddComplementPairInCover', 'coverCompositions',
           'randomPartitionCode', 'randomIsomorphism']


def _embed(fragments, coordinates, rest, dim):
    """Words with ``fragments`` on ``coordinates`` and ``rest`` elsewhere."""
    others = [i for i in range(dim) if i not in coordinates]
    words = []
    for frag in fragments:
        w = [STAR]*dim
        for i, letter in zip(coordinates, frag):
            w[i] = letter
        for i, letter in zip(others, rest):
            w[i] = letter
        words.append(Word(w))
    return words


@dataclass(frozen=True)
class PairStructure:
    """Forced form of two equivalent two-word codes.

    On ``coordinates = (i1, i2)`` the first code reads ``{*l2, l1 l2'}`` and
    the second ``{l1 *, l1' l2}``; on all other coordinates every word reads
    ``common``.  ``swapped`` is True when the roles of the two input codes
    are exchanged with respect to that template.
    """
    coordinates: tuple
    l1: int
    l2: int
    common: Word
    swapped: bool = False

    def reconstruct(self, alphabet, dim):
        """The two codes, in the order they were given to the classifier."""
        l1, l2 = self.l1, self.l2
        first = _embed([(STAR, l2), (l1, l2 ^ 1)], self.coordinates, self.common, dim)
        second = _embed([(l1, STAR), (l1 ^ 1, l2)], self.coordinates, self.common, dim)
        if self.swapped:
            first, second = second, first
        return (PolyboxCode(alphabet, first, dim=dim), PolyboxCode(alphabet, second, dim=dim))


@dataclass(frozen=True)
class FiveStructure:
    """Forced form of a five-word partition code, or of a five-word cover.

    On ``coordinates = (i1, i2, i3)`` the words read
    ``{l1 l2 l3, l1' l2' l3', s l2 l3', l1' s l3, l1 l2' s}`` where ``s`` is
    the star, or the letter of ``ambient`` at that coordinate.  Off the
    coordinates every word is all stars, or equal to ``ambient``.
    """
    coordinates: tuple
    letters: tuple
    ambient: Word = None

    def fragments(self):
        l1, l2, l3 = self.letters
        if self.ambient is None:
            s1 = s2 = s3 = STAR
        else:
            s1, s2, s3 = (self.ambient[i] for i in self.coordinates)
        return [(l1, l2, l3), (l1 ^ 1, l2 ^ 1, l3 ^ 1), (s1, l2, l3 ^ 1),
                (l1 ^ 1, s2, l3), (l1, l2 ^ 1, s3)]

    def reconstruct(self, alphabet, dim):
        if self.ambient is None:
            rest = [STAR]*(dim - 3)
        else:
            rest = [self.ambient[i] for i in range(dim) if i not in self.coordinates]
        return PolyboxCode(alphabet, _embed(self.fragments(), self.coordinates, rest, dim), dim=dim)


@dataclass(frozen=True)
class SixStructure:
    """Forced form of a six-word partition code.

    The code splits at ``coordinate`` into the single word carrying
    ``letter`` there (all stars elsewhere) and five words carrying its
    complement, which follow ``inner`` on the remaining coordinates.
    """
    coordinate: int
    letter: int
    inner: FiveStructure

    def reconstruct(self, alphabet, dim):
        single = [STAR]*dim
        single[self.coordinate] = self.letter
        words = [Word(single)]
        for w in self.inner.reconstruct(alphabet, dim):
            words.append(w.replace(self.coordinate, self.letter ^ 1))
        return PolyboxCode(alphabet, words, dim=dim)


def _checkNoTwinPair(code, what):
    pair = findTwinPair(code)
    if pair is not None:
        raise ClassificationPreconditionError("%s contains the twin pair %s, %s"
                                              % (what, code.format(pair[0]), code.format(pair[1])))


def _matchPair(first, second, coordinates):
    """Letters (l1, l2) if ``first``/``second`` follow the two-word template on ``coordinates``."""
    i1, i2 = coordinates
    firstA = {(w[i1], w[i2]) for w in first}
    secondA = {(w[i1], w[i2]) for w in second}
    starred = [f for f in firstA if f[0] == STAR]
    if len(starred) != 1 or starred[0][1] == STAR:
        return None
    l2 = starred[0][1]
    other = (firstA - {starred[0]}).pop()
    l1 = other[0]
    if l1 == STAR or other[1] != l2 ^ 1:
        return None
    if secondA != {(l1, STAR), (l1 ^ 1, l2)}:
        return None
    return l1, l2


def classifyPair2(U, P):
    """Recover the forced form of two equivalent two-word codes.

    Parameters
    ----------
    U, P : `lsst.polybox.PolyboxCode`
       Disjoint, equivalent codes of two words each, without twin pairs.

    Returns
    -------
    structure : `PairStructure`

    Raises
    ------
    ClassificationPreconditionError
       Raised if the hypotheses do not hold.
    TemplateMismatchError
       Raised if no coordinates and letters reproduce the codes.
    """
    if len(U) != 2 or len(P) != 2:
        raise ClassificationPreconditionError("Both codes must have two words, got %d and %d"
                                              % (len(U), len(P)))
    if U.dim != P.dim:
        raise ClassificationPreconditionError("Codes have different dimensions")
    if not U.isDisjoint(P):
        raise ClassificationPreconditionError("The codes share a word")
    _checkNoTwinPair(U, "The first code")
    _checkNoTwinPair(P, "The second code")
    if not equivalent(U, P):
        raise ClassificationPreconditionError("The codes are not equivalent")

    allWords = np.concatenate([U.array, P.array])
    A = [i for i in range(U.dim) if not (allWords[:, i] == allWords[0, i]).all()]
    if len(A) != 2:
        raise TemplateMismatchError("Expected the codes to differ on two coordinates, got %s" % (A))
    common = Word(allWords[0, i] for i in range(U.dim) if i not in A)
    for swapped, (first, second) in ((False, (U, P)), (True, (P, U))):
        letters = _matchPair(first, second, A)
        if letters is not None:
            structure = PairStructure(coordinates=tuple(A), l1=letters[0], l2=letters[1],
                                      common=common, swapped=swapped)
            if structure.reconstruct(U.alphabet, U.dim) != (U, P):
                raise DefectError("Pair structure %s does not rebuild its input" % (structure, ))
            return structure
    raise TemplateMismatchError("The codes do not follow the two-word template on %s" % (A))


def _matchFive(code, coordinates, ambient=None):
    for candidate in code:
        letters = tuple(candidate[i] for i in coordinates)
        if STAR in letters:
            continue
        structure = FiveStructure(coordinates=tuple(coordinates), letters=letters, ambient=ambient)
        if structure.reconstruct(code.alphabet, code.dim) == code:
            return structure
    return None


def classifyPartition5(code):
    """Recover the forced form of a five-word partition code without twin pairs.

    Raises
    ------
    ClassificationPreconditionError
       Raised if the code is not a five-word partition code without twin pairs.
    TemplateMismatchError
       Raised if the forced form is not found.
    """
    if len(code) != 5:
        raise ClassificationPreconditionError("Expected five words, got %d" % (len(code)))
    if not isPartitionCode(code):
        raise ClassificationPreconditionError("The code is not a partition code")
    _checkNoTwinPair(code, "The code")
    A = [i for i in range(code.dim) if not (code.array[:, i] == STAR).all()]
    if len(A) != 3:
        raise TemplateMismatchError("Expected three non-star coordinates, got %s" % (A))
    structure = _matchFive(code, A)
    if structure is None:
        raise TemplateMismatchError("The code does not follow the five-word template on %s" % (A))
    return structure


def classifyPartition6(code):
    """Recover the forced form of a six-word partition code without twin pairs.

    Returns
    -------
    structure : `SixStructure`
       The split coordinate and letter, and the five-word structure of the
       other side in the coordinates of ``code``.

    Raises
    ------
    ClassificationPreconditionError
       Raised if the code is not a six-word partition code without twin pairs.
    TemplateMismatchError
       Raised if the forced form is not found.
    """
    if len(code) != 6:
        raise ClassificationPreconditionError("Expected six words, got %d" % (len(code)))
    if not isPartitionCode(code):
        raise ClassificationPreconditionError("The code is not a partition code")
    _checkNoTwinPair(code, "The code")
    d = code.dim
    for i in range(d):
        for v in code:
            if v[i] == STAR or any(v[j] != STAR for j in range(d) if j != i):
                continue
            others = [w for w in code if w != v]
            if any(w[i] != v[i] ^ 1 for w in others):
                continue
            inner = PolyboxCode(code.alphabet, [w.replace(i, STAR) for w in others], dim=d)
            try:
                five = classifyPartition5(inner)
            except (ClassificationPreconditionError, TemplateMismatchError):
                continue
            return SixStructure(coordinate=i, letter=v[i], inner=five)
    raise TemplateMismatchError("No coordinate splits the code into one and five words")


def _checkCoverHypotheses(code, u):
    u = Word(u)
    if not code.isStarFree() or not u.isStarFree():
        raise PolyboxUsageError("The code and the word must be star-free")
    if len(u) != code.dim:
        raise PolyboxUsageError("Word of dimension %d against a code of dimension %d" % (len(u), code.dim))
    if not covers(u, code):
        raise PolyboxUsageError("%s is not covered by the code" % (code.format(u)))
    if len(code) and (gValues(code, u) == 0).any():
        raise PolyboxUsageError("Some word of the code does not meet %s" % (code.format(u)))
    return u


def barCode(code, u):
    """Replace the letters of ``code`` agreeing with ``u`` by stars.

    Parameters
    ----------
    code : `lsst.polybox.PolyboxCode`
       Star-free code covering ``u``, every word meeting ``u``.
    u : `lsst.polybox.Word`
       Star-free word.

    Returns
    -------
    bar : `lsst.polybox.PolyboxCode`
       A partition code.

    Raises
    ------
    PolyboxUsageError
       Raised if the hypotheses fail.
    DefectError
       Raised if the result is not a partition code.
    """
    u = _checkCoverHypotheses(code, u)
    words = [Word(STAR if v[i] == u[i] else v[i] for i in range(code.dim)) for v in code]
    try:
        bar = PolyboxCode(code.alphabet, words, dim=code.dim)
    except CodeValidationError as e:
        raise DefectError("Bar code is not a polybox code: %s" % (e))
    if not isPartitionCode(bar):
        raise DefectError("Bar code %r is not a partition code" % (bar))
    return bar


def classifyCover5(code, u):
    """Recover the forced form of a five-word code covering a word it does not contain.

    Raises
    ------
    ClassificationPreconditionError
       Raised if the hypotheses fail.
    TemplateMismatchError
       Raised if the forced form is not found.
    """
    if len(code) != 5:
        raise ClassificationPreconditionError("Expected five words, got %d" % (len(code)))
    _checkNoTwinPair(code, "The code")
    if Word(u) in code:
        raise ClassificationPreconditionError("The covered word belongs to the code")
    try:
        bar = barCode(code, u)
    except PolyboxUsageError as e:
        raise ClassificationPreconditionError(str(e))
    inner = classifyPartition5(bar)
    structure = _matchFive(code, inner.coordinates, ambient=Word(u))
    if structure is None:
        raise TemplateMismatchError("The cover does not follow the five-word template")
    return structure


def _complementaryEverywhere(v, w):
    """Number of complementary coordinates, or -1 if some coordinate is neither equal nor complementary."""
    count = 0
    for a, b in zip(v, w):
        if a == b:
            continue
        if a != STAR and b == a ^ 1:
            count += 1
        else:
            return -1
    return count


def _firstOddPair(code):
    words = code.words
    for a in range(len(words)):
        for b in range(a + 1, len(words)):
            count = _complementaryEverywhere(words[a], words[b])
            if count > 0 and count % 2 == 1:
                return words[a], words[b]
    return None


def oddComplementPair(code):
    """Two words of a partition code that agree or are complementary everywhere,
    with an odd number of complementary coordinates.

    Such a pair always exists; None signals a defect.

    Raises
    ------
    PolyboxUsageError
       Raised if the code is not a partition code of at least two words.
    """
    if len(code) < 2 or not isPartitionCode(code):
        raise PolyboxUsageError("Expected a partition code of at least two words")
    return _firstOddPair(code)


def oddComplementPairInCover(code, v):
    """The analogous pair in a code covering a word ``v`` it does not contain.

    Raises
    ------
    PolyboxUsageError
       Raised if the code does not cover ``v``, contains it, or has stars.
    """
    v = Word(v)
    if not code.isStarFree() or not v.isStarFree():
        raise PolyboxUsageError("The code and the word must be star-free")
    if v in code or not covers(v, code):
        raise PolyboxUsageError("%s must be covered by the code without belonging to it"
                                % (code.format(v)))
    return _firstOddPair(code)


@dataclass(frozen=True)
class Composition:
    """Numbers of words per g-value level.

    ``counts[j]`` words have g-value ``2**(d - (minIndex + j))``.
    """
    counts: tuple
    minIndex: int = 1

    def __str__(self):
        return ','.join(str(c) for c in self.counts)

    @property
    def size(self):
        return sum(self.counts)

    def count(self, index):
        j = index - self.minIndex
        if 0 <= j < len(self.counts):
            return self.counts[j]
        return 0

    def gValueCounts(self, dim):
        """Mapping from g-value to the number of words carrying it."""
        return {1 << (dim - self.minIndex - j): c for j, c in enumerate(self.counts)}

    @classmethod
    def fromString(cls, text, minIndex=1):
        try:
            counts = tuple(int(t) for t in text.replace(' ', '').split(','))
        except ValueError:
            raise PolyboxUsageError("Cannot parse composition %r" % (text))
        if any(c < 0 for c in counts):
            raise PolyboxUsageError("Composition %r has negative entries" % (text))
        return cls(counts=counts, minIndex=minIndex)

    @classmethod
    def fromGValues(cls, values, dim, minIndex=1):
        counts = [0]*(dim - minIndex + 1)
        for g in values:
            index = dim - (int(g).bit_length() - 1)
            counts[index - minIndex] += 1
        return cls(counts=tuple(counts), minIndex=minIndex)


def coverCompositions(k, dim, minIndex=1):
    """All ways of writing ``2**dim`` as a sum of ``k`` powers ``2**(dim - i)``, ``minIndex <= i <= dim``.

    Returns
    -------
    compositions : `list` [`Composition`]
       In lexicographically decreasing order of counts.
    """
    if k < 1:
        raise PolyboxUsageError("k must be positive, got %d" % (k))
    if not 0 <= minIndex <= dim:
        raise PolyboxUsageError("minIndex must lie in [0, %d], got %d" % (dim, minIndex))
    indices = list(range(minIndex, dim + 1))
    out = []

    def extend(j, remainingMeasure, remainingCount, counts):
        if j == len(indices) - 1:
            # last level has weight 1
            if remainingMeasure == remainingCount:
                out.append(Composition(counts=tuple(counts + [remainingCount]), minIndex=minIndex))
            return
        weight = 1 << (dim - indices[j])
        for c in range(min(remainingCount, remainingMeasure // weight), -1, -1):
            extend(j + 1, remainingMeasure - c*weight, remainingCount - c, counts + [c])

    extend(0, 1 << dim, k, [])
    return out


def randomIsomorphism(dim, alphabet, rng):
    """A random coordinate permutation and complement-compatible letter maps."""
    maps = alphabet.compatibleMaps()
    sigma = [int(i) for i in rng.permutation(dim)]
    h = [maps[int(rng.integers(len(maps)))] for _ in range(dim)]
    return sigma, h


def randomPartitionCode(dim, alphabet, seed):
    """A random star-free partition code of ``2**dim`` words.

    The full space is split along random twin pairs (each split using a
    random letter pair) until no star is left, and the result is moved by a
    random isomorphism.  The output depends only on ``seed``.
    """
    if dim < 1:
        raise PolyboxUsageError("Dimension must be positive, got %d" % (dim))
    rng = np.random.default_rng(seed)
    pending = [Word([STAR]*dim)]
    done = []
    while pending:
        w = pending.pop(int(rng.integers(len(pending))))
        stars = [i for i in range(dim) if w[i] == STAR]
        if not stars:
            done.append(w)
            continue
        i = stars[int(rng.integers(len(stars)))]
        p = int(rng.integers(alphabet.nPairs))
        pending.append(w.replace(i, 2*p))
        pending.append(w.replace(i, 2*p + 1))
    code = PolyboxCode(alphabet, done, dim=dim, validate=False)
    sigma, h = randomIsomorphism(dim, alphabet, rng)
    return applyIsomorphism(code, sigma, h)
