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
"""Polybox codes and their syntactic predicates.

A polybox code is a set of pairwise dichotomous words.  `PolyboxCode`
keeps its words in lexicographic order together with a dense
``(n, d)`` uint8 array of letter ids, which the vectorized predicates in
this module and in `lsst.polybox.measure` work on.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .alphabet import STAR, Word
from .exceptions import PolyboxUsageError, CodeValidationError

__all__ = ['PolyboxCode', 'Distribution', 'DistributionGroup', 'isDichotomous', 'isTwinPair',
           'validatePolyboxCode', 'findTwinPair', 'twinPairs', 'distribution', 'project',
           'applyIsomorphism', 'canonicalForm', 'allWordsArray', 'wordKeys']


def _checkSameDim(u, v):
    if len(u) != len(v):
        raise PolyboxUsageError("Words %r and %r have different dimensions" % (u, v))


def isDichotomous(u, v):
    """True if some coordinate of ``u`` is a letter whose complement is in ``v``.

    Raises
    ------
    PolyboxUsageError
       Raised if the words have different dimensions.
    """
    _checkSameDim(u, v)
    return any(a != STAR and b == a ^ 1 for a, b in zip(u, v))


def isTwinPair(u, v):
    """True if ``u`` and ``v`` differ in exactly one, complementary, coordinate.

    Raises
    ------
    PolyboxUsageError
       Raised if the words have different dimensions.
    """
    _checkSameDim(u, v)
    nComplementary = 0
    for a, b in zip(u, v):
        if a == b:
            continue
        if a != STAR and b == a ^ 1:
            nComplementary += 1
        else:
            return False
    return nComplementary == 1


def allWordsArray(nLetters, dim):
    """All star-free words of length ``dim`` in lexicographic order.

    Returns
    -------
    words : `numpy.ndarray`
       Array of shape ``(nLetters**dim, dim)``, dtype uint8.
    """
    grid = np.indices((nLetters, )*dim, dtype=np.uint8)
    return grid.reshape(dim, -1).T.copy()


def wordKeys(array):
    """Integer keys of the rows of a word array; key order is lexicographic order."""
    array = np.asarray(array)
    dim = array.shape[-1]
    weights = np.array([256**(dim - 1 - j) for j in range(dim)], dtype=np.int64)
    return (array.astype(np.int64)*weights).sum(axis=-1)


class PolyboxCode:
    """A validated polybox code.

    Parameters
    ----------
    alphabet : `lsst.polybox.Alphabet`
       Alphabet of the letters.
    words : iterable of `lsst.polybox.Word` or sequences of letter ids
       The words of the code.
    dim : `int`, optional
       Dimension; required when ``words`` is empty.
    validate : `bool`, optional
       Check duplicates and pairwise dichotomy.  Only internal callers that
       already know the words form a code turn this off.

    Raises
    ------
    PolyboxUsageError
       Raised on a dimension mismatch or a letter outside the alphabet.
    CodeValidationError
       Raised on a duplicate word or a non-dichotomous pair; the error names
       the lexicographically first offending pair.
    """
    __slots__ = ('_alphabet', '_dim', '_words', '_array', '_index')

    def __init__(self, alphabet, words, dim=None, validate=True):
        words = [w if isinstance(w, Word) else Word(w) for w in words]
        if dim is None:
            if len(words) == 0:
                raise PolyboxUsageError("The dimension of an empty code must be given")
            dim = len(words[0])
        if dim < 1:
            raise PolyboxUsageError("Dimension must be positive, got %d" % (dim))
        for w in words:
            if len(w) != dim:
                raise PolyboxUsageError("Word %s has dimension %d, expected %d"
                                        % (alphabet.formatWord(w), len(w), dim))
            for letter in w:
                if letter != STAR and not 0 <= letter < alphabet.nLetters:
                    raise PolyboxUsageError("Letter id %d is not in %r" % (letter, alphabet))
        words.sort()
        self._alphabet = alphabet
        self._dim = dim
        self._words = tuple(words)
        self._array = None
        self._index = None
        if validate:
            self._validate()

    @classmethod
    def fromStrings(cls, alphabet, texts, dim=None):
        """Build a code from word strings such as ``"aa'b"`` or ``"a a' b"``."""
        return cls(alphabet, [alphabet.parseWord(t, dim=dim) for t in texts], dim=dim)

    def _validate(self):
        for a in range(1, len(self._words)):
            if self._words[a] == self._words[a - 1]:
                w = self._words[a]
                raise CodeValidationError("Duplicate word %s" % (self.format(w)), pair=(w, w))
        arr = self.array
        for a in range(len(self._words) - 1):
            dich = ((arr[a] ^ 1)[np.newaxis, :] == arr[a + 1:]).any(axis=1)
            if not dich.all():
                b = a + 1 + int(np.argmin(dich))
                u, v = self._words[a], self._words[b]
                raise CodeValidationError("Words %s and %s are not dichotomous"
                                          % (self.format(u), self.format(v)), pair=(u, v))

    @property
    def alphabet(self):
        return self._alphabet

    @property
    def dim(self):
        return self._dim

    @property
    def words(self):
        """Words in lexicographic order."""
        return self._words

    @property
    def array(self):
        """Letter ids as a read-only ``(n, d)`` uint8 array."""
        if self._array is None:
            arr = np.array(self._words, dtype=np.uint8).reshape(len(self._words), self._dim)
            arr.flags.writeable = False
            self._array = arr
        return self._array

    def __len__(self):
        return len(self._words)

    def __iter__(self):
        return iter(self._words)

    def __contains__(self, word):
        if self._index is None:
            self._index = frozenset(self._words)
        return Word(word) in self._index

    def __eq__(self, other):
        if not isinstance(other, PolyboxCode):
            return NotImplemented
        return self._dim == other._dim and self._words == other._words

    def __hash__(self):
        return hash((self._dim, self._words))

    def __repr__(self):
        return "PolyboxCode(d=%d, {%s})" % (self._dim, ', '.join(self.format(w) for w in self._words))

    def format(self, word):
        return self._alphabet.formatWord(word)

    def formatWords(self):
        return [self.format(w) for w in self._words]

    def index(self, word):
        return self._words.index(Word(word))

    def isStarFree(self):
        return len(self._words) == 0 or not (self.array == STAR).any()

    def withWords(self, words, validate=True):
        """A code over the same alphabet and dimension with other words."""
        return PolyboxCode(self._alphabet, words, dim=self._dim, validate=validate)

    def withAlphabet(self, alphabet):
        """The same words, interpreted over an extension of the alphabet."""
        if not self._alphabet.isSubAlphabetOf(alphabet):
            raise PolyboxUsageError("%r does not extend %r" % (alphabet, self._alphabet))
        return PolyboxCode(alphabet, self._words, dim=self._dim, validate=False)

    def union(self, other):
        """Union of two codes; validated, since the union need not be a code."""
        return self.withWords(set(self._words) | set(other.words))

    def isDisjoint(self, other):
        return not (set(self._words) & set(other.words))


def validatePolyboxCode(words, alphabet, dim=None):
    """Validate a set of words as a polybox code.

    Parameters
    ----------
    words : iterable of `lsst.polybox.Word`
       Candidate words.
    alphabet : `lsst.polybox.Alphabet`
       The alphabet.
    dim : `int`, optional
       Dimension (needed for an empty set).

    Returns
    -------
    code : `PolyboxCode`

    Raises
    ------
    CodeValidationError
       Raised for duplicates or the first non-dichotomous pair.
    """
    return PolyboxCode(alphabet, list(words), dim=dim)


def _twinMask(arr, a):
    """Twin-pair mask of word ``a`` against the words after it."""
    rest = arr[a + 1:]
    nComp = ((arr[a] ^ 1)[np.newaxis, :] == rest).sum(axis=1)
    nEqual = (arr[a][np.newaxis, :] == rest).sum(axis=1)
    return (nComp == 1) & (nEqual == arr.shape[1] - 1)


def findTwinPair(code):
    """The lexicographically first twin pair of a code, or None."""
    arr = code.array
    for a in range(len(code) - 1):
        mask = _twinMask(arr, a)
        if mask.any():
            b = a + 1 + int(np.argmax(mask))
            return code.words[a], code.words[b]
    return None


def twinPairs(code):
    """All twin pairs of a code in lexicographic order."""
    arr = code.array
    pairs = []
    for a in range(len(code) - 1):
        for b in np.nonzero(_twinMask(arr, a))[0]:
            pairs.append((code.words[a], code.words[a + 1 + int(b)]))
    return pairs


@dataclass(frozen=True)
class DistributionGroup:
    """Words carrying ``letter`` or its complement at the distribution coordinate."""
    letter: int
    words: tuple
    complementWords: tuple

    @property
    def size(self):
        return len(self.words) + len(self.complementWords)

    def allWords(self):
        return self.words + self.complementWords


@dataclass(frozen=True)
class Distribution:
    """Grouping of a code's words by letter pairs at one coordinate.

    Groups are ordered by pair; the representative letter of a group is the
    member of its pair with the smaller id.
    """
    coordinate: int
    groups: tuple
    leftover: tuple

    @property
    def nGroups(self):
        return len(self.groups)

    def group(self, letter):
        """The group whose pair contains ``letter``, or None."""
        for g in self.groups:
            if g.letter == letter & ~1:
                return g
        return None


def _checkCoordinate(code, i):
    if not 0 <= i < code.dim:
        raise PolyboxUsageError("Coordinate %d out of range for dimension %d" % (i, code.dim))


def distribution(code, i):
    """Distribution of the words of ``code`` at coordinate ``i`` (0-based)."""
    _checkCoordinate(code, i)
    byPair = {}
    leftover = []
    for w in code.words:
        letter = w[i]
        if letter == STAR:
            leftover.append(w)
            continue
        lists = byPair.setdefault(letter >> 1, ([], []))
        lists[letter & 1].append(w)
    groups = tuple(DistributionGroup(letter=2*p, words=tuple(byPair[p][0]),
                                     complementWords=tuple(byPair[p][1]))
                   for p in sorted(byPair))
    return Distribution(coordinate=i, groups=groups, leftover=tuple(leftover))


def project(code, coordinates):
    """Projections of the words onto ``coordinates``, in code order.

    The result is a list and may contain duplicates.
    """
    coordinates = list(coordinates)
    if len(coordinates) == 0:
        raise PolyboxUsageError("Cannot project onto an empty coordinate set")
    for i in coordinates:
        _checkCoordinate(code, i)
    return [w.project(coordinates) for w in code.words]


def _letterTable(alphabet, mapping):
    """Lookup table for a letter map given as a dict, a table or None."""
    table = np.arange(256, dtype=np.uint8)
    if mapping is None:
        return table
    if isinstance(mapping, np.ndarray):
        table[:] = mapping
    else:
        for src, dst in mapping.items():
            table[src] = dst
    if table[STAR] != STAR:
        raise PolyboxUsageError("A letter map must fix the star")
    full = {letter: int(table[letter]) for letter in alphabet.letters}
    if not alphabet.isCompatibleMap(full):
        raise PolyboxUsageError("Letter map %s is not a complement-compatible bijection"
                                % ({alphabet.name(k): alphabet.name(v) for k, v in full.items()}))
    return table


def applyIsomorphism(code, sigma=None, h=None):
    """Image of a code under a coordinate permutation and letter bijections.

    Coordinate ``i`` of an image word is ``h[i]`` applied to coordinate
    ``sigma[i]`` of the source word.

    Parameters
    ----------
    code : `PolyboxCode`
    sigma : sequence of `int`, optional
       Permutation of ``range(d)``; identity if None.
    h : sequence, optional
       Per-coordinate letter maps, each a dict (missing letters fixed), a
       lookup table, or None for the identity.

    Raises
    ------
    PolyboxUsageError
       Raised if ``sigma`` is not a permutation or a map does not commute
       with complementation.
    """
    d = code.dim
    if sigma is None:
        sigma = list(range(d))
    if sorted(sigma) != list(range(d)):
        raise PolyboxUsageError("%s is not a permutation of the coordinates" % (list(sigma)))
    if h is None:
        h = [None]*d
    if len(h) != d:
        raise PolyboxUsageError("Expected %d letter maps, got %d" % (d, len(h)))
    tables = [_letterTable(code.alphabet, m) for m in h]
    arr = code.array[:, list(sigma)]
    image = np.empty_like(arr)
    for i in range(d):
        image[:, i] = tables[i][arr[:, i]]
    return code.withWords([Word(row) for row in image], validate=False)


def _lexMinRow(rows):
    order = np.lexsort(rows.T[::-1])
    return rows[order[0]]


def canonicalForm(code, permuteCoordinates=True, letterMaps=None):
    """Lexicographically least image of a code under an isomorphism group.

    The group is generated by coordinate permutations (optional) and an
    independent letter map at every coordinate.

    Parameters
    ----------
    code : `PolyboxCode`
    permuteCoordinates : `bool`, optional
       Include the coordinate permutations.
    letterMaps : `numpy.ndarray`, optional
       Allowed letter maps as lookup tables, shape ``(nMaps, 256)``;
       defaults to every complement-compatible bijection of the alphabet.

    Returns
    -------
    canonical : `PolyboxCode`
    """
    if letterMaps is None:
        letterMaps = code.alphabet.compatibleMaps()
    n, d = len(code), code.dim
    if n == 0:
        return code
    nMaps = letterMaps.shape[0]
    # Up to this many coordinates are expanded with numpy; the rest in Python.
    nVector = min(d, 4)
    weights = np.array([256**(d - 1 - j) for j in range(d)], dtype=np.int64)
    sigmas = itertools.permutations(range(d)) if permuteCoordinates else [tuple(range(d))]
    best = None
    for sigma in sigmas:
        arr = code.array[:, list(sigma)]
        # images[m, j, i] for the vectorized tail coordinates
        tail = np.zeros((1, n), dtype=np.int64)
        for i in range(d - nVector, d):
            mapped = letterMaps[:, arr[:, i]].astype(np.int64)*weights[i]
            tail = (tail[:, np.newaxis, :] + mapped[np.newaxis, :, :]).reshape(-1, n)
        for head in itertools.product(range(nMaps), repeat=d - nVector):
            offset = np.zeros(n, dtype=np.int64)
            for i, m in enumerate(head):
                offset += letterMaps[m, arr[:, i]].astype(np.int64)*weights[i]
            keys = np.sort(tail + offset[np.newaxis, :], axis=1)
            candidate = _lexMinRow(keys)
            if best is None or tuple(candidate) < tuple(best):
                best = candidate
    words = [Word((int(k) >> (8*(d - 1 - j))) & 0xff for j in range(d)) for k in best]
    return code.withWords(words, validate=False)
