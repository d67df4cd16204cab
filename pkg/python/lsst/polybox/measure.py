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
"""Exact measure calculus of the equicomplementary realization.

Every letter is realized as a half of a fixed set and every pair of letters
that are neither equal nor complementary meet in a quarter of it, so all
measures are dyadic.  Integer computations here are carried out in
quarter units per coordinate: the intersection of two words of dimension
``d`` has measure ``sum / 4**d`` of the whole space.
"""

import itertools
import operator
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .alphabet import STAR, Word
from .exceptions import PolyboxUsageError
from .polyboxCode import PolyboxCode, distribution

__all__ = ['DyadicRatio', 'Cell', 'letterIntersectionMeasure', 'boxIntersectionMeasure',
           'QUARTER_TABLE', 'coverSums', 'selfMeasures', 'gValue', 'gValues', 'gSum',
           'barGValue', 'covers', 'equivalent', 'isPartitionCode', 'sliceCode', 'isCylinder',
           'sliceBound']


class DyadicRatio:
    """A non-negative rational number ``numerator / 2**exponent``.

    The value is always kept reduced: the numerator is odd, or zero with a
    zero exponent.

    Parameters
    ----------
    numerator : `int`
       Non-negative numerator.
    exponent : `int`, optional
       Power of two in the denominator.
    """
    __slots__ = ('_numerator', '_exponent')

    def __new__(cls, numerator=0, exponent=0):
        numerator = operator.index(numerator)
        exponent = operator.index(exponent)
        if numerator < 0:
            raise ValueError("DyadicRatio(%d, %d) is negative" % (numerator, exponent))
        self = super().__new__(cls)
        if numerator == 0:
            self._numerator, self._exponent = 0, 0
            return self
        shift = min(exponent, (numerator & -numerator).bit_length() - 1)
        numerator >>= shift
        exponent -= shift
        if exponent < 0:
            numerator <<= -exponent
            exponent = 0
        self._numerator = numerator
        self._exponent = exponent
        return self

    @property
    def numerator(self):
        return self._numerator

    @property
    def exponent(self):
        return self._exponent

    @property
    def denominator(self):
        return 1 << self._exponent

    def toFraction(self):
        return Fraction(self._numerator, 1 << self._exponent)

    def __repr__(self):
        return "DyadicRatio(%d, %d)" % (self._numerator, self._exponent)

    def __str__(self):
        if self._exponent == 0:
            return str(self._numerator)
        return "%d/%d" % (self._numerator, 1 << self._exponent)

    def __float__(self):
        return self._numerator / (1 << self._exponent)

    def __bool__(self):
        return self._numerator != 0

    @staticmethod
    def _align(a, b):
        k = max(a._exponent, b._exponent)
        return a._numerator << (k - a._exponent), b._numerator << (k - b._exponent), k

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, DyadicRatio):
            return other
        if isinstance(other, int) and other >= 0:
            return cls(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, k = self._align(self, other)
        return DyadicRatio(a + b, k)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, k = self._align(self, other)
        return DyadicRatio(a - b, k)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return DyadicRatio(self._numerator*other._numerator, self._exponent + other._exponent)

    __rmul__ = __mul__

    def __hash__(self):
        return hash(self.toFraction())

    def __eq__(self, other):
        if isinstance(other, Fraction):
            return self.toFraction() == other
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._numerator == other._numerator and self._exponent == other._exponent

    def _richcmp(self, other, op):
        if isinstance(other, Fraction):
            return op(self.toFraction(), other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, _ = self._align(self, other)
        return op(a, b)

    def __lt__(self, other):
        return self._richcmp(other, operator.lt)

    def __le__(self, other):
        return self._richcmp(other, operator.le)

    def __gt__(self, other):
        return self._richcmp(other, operator.gt)

    def __ge__(self, other):
        return self._richcmp(other, operator.ge)

    def __reduce__(self):
        return (self.__class__, (self._numerator, self._exponent))


def _quarterTable():
    table = np.ones((256, 256), dtype=np.int64)
    for s in range(256):
        table[s, s] = 2
        table[s, STAR] = 2
        table[STAR, s] = 2
        if s < STAR - 1:
            table[s, s ^ 1] = 0
    table[STAR, STAR] = 4
    return table


# Intersection measure of two letters in quarters of the letter space.
QUARTER_TABLE = _quarterTable()
QUARTER_TABLE.flags.writeable = False


def letterIntersectionMeasure(s, t):
    """Relative measure of the intersection of the realizations of two letters."""
    return DyadicRatio(int(QUARTER_TABLE[s, t]), 2)


def boxIntersectionMeasure(u, v):
    """Relative measure of the intersection of the realizations of two words.

    Raises
    ------
    PolyboxUsageError
       Raised if the words have different dimensions.
    """
    if len(u) != len(v):
        raise PolyboxUsageError("Words %r and %r have different dimensions" % (u, v))
    product = 1
    for s, t in zip(u, v):
        product *= int(QUARTER_TABLE[s, t])
    return DyadicRatio(product, 2*len(u))


def coverSums(words, code, chunk=4096):
    """Total intersection of each word with the code, in units of ``4**-d``.

    Parameters
    ----------
    words : `numpy.ndarray` or sequence of words
       Words to test, shape ``(m, d)``.
    code : `lsst.polybox.PolyboxCode`

    Returns
    -------
    sums : `numpy.ndarray`
       int64 array of length ``m``.
    """
    words = np.asarray(words, dtype=np.uint8).reshape(-1, code.dim)
    out = np.zeros(len(words), dtype=np.int64)
    if len(code) == 0:
        return out
    arr = code.array
    for start in range(0, len(words), chunk):
        block = words[start:start + chunk]
        factors = QUARTER_TABLE[block[:, np.newaxis, :], arr[np.newaxis, :, :]]
        out[start:start + chunk] = factors.prod(axis=2).sum(axis=1)
    return out


def selfMeasures(words):
    """Measure of each word, in units of ``4**-d``."""
    words = np.asarray(words, dtype=np.uint8)
    if words.ndim == 1:
        words = words[np.newaxis, :]
    return QUARTER_TABLE[words, words].prod(axis=1)


def _checkStarFree(w):
    if STAR in w:
        raise PolyboxUsageError("The word %r must not contain stars" % (w, ))


def gValue(v, w):
    """The g-value of ``v`` against the star-free word ``w``.

    A star in ``v`` contributes the same factor as the letter ``w_i``.

    Raises
    ------
    PolyboxUsageError
       Raised if ``w`` contains a star or the dimensions differ.
    """
    _checkStarFree(w)
    if len(v) != len(w):
        raise PolyboxUsageError("Words %r and %r have different dimensions" % (v, w))
    product = 1
    for s, t in zip(v, w):
        product *= int(QUARTER_TABLE[s, t])
    return product


def gValues(code, w):
    """g-values of every word of ``code`` against ``w``, in code order."""
    w = Word(w)
    _checkStarFree(w)
    if len(code) == 0:
        return np.zeros(0, dtype=np.int64)
    wArr = np.array(w, dtype=np.uint8)
    return QUARTER_TABLE[code.array, wArr[np.newaxis, :]].prod(axis=1)


def gSum(code, w):
    return int(gValues(code, w).sum())


def barGValue(v):
    """2 to the number of stars of ``v``."""
    return 1 << sum(1 for s in v if s == STAR)


def covers(w, code, method="gsum"):
    """True if the word ``w`` is covered by ``code``.

    Parameters
    ----------
    w : `lsst.polybox.Word`
    code : `lsst.polybox.PolyboxCode`
    method : `str`, optional
       ``"gsum"`` compares the integer g-sum (or, for a word with stars, the
       integer quarter-unit sum) with the measure of ``w``; ``"measure"``
       adds `DyadicRatio` intersection measures.  Both agree.

    Raises
    ------
    PolyboxUsageError
       Raised on a dimension mismatch or an unknown method.
    """
    w = Word(w)
    if len(w) != code.dim:
        raise PolyboxUsageError("Word of dimension %d tested against a code of dimension %d"
                                % (len(w), code.dim))
    if method == "gsum":
        if w.isStarFree():
            return gSum(code, w) == (1 << code.dim)
        return int(coverSums([w], code)[0]) == int(selfMeasures([w])[0])
    elif method == "measure":
        total = DyadicRatio(0)
        for v in code:
            total += boxIntersectionMeasure(w, v)
        return total == boxIntersectionMeasure(w, w)
    raise PolyboxUsageError("Unknown covering method %r" % (method))


def _checkComparable(V, W):
    if V.dim != W.dim:
        raise PolyboxUsageError("Codes of dimensions %d and %d cannot be compared" % (V.dim, W.dim))
    if not (V.alphabet.isSubAlphabetOf(W.alphabet) or W.alphabet.isSubAlphabetOf(V.alphabet)):
        raise PolyboxUsageError("Codes over %r and %r cannot be compared" % (V.alphabet, W.alphabet))


def _coversAll(words, code):
    if len(words) == 0:
        return True
    arr = np.array(words, dtype=np.uint8).reshape(len(words), code.dim)
    return bool((coverSums(arr, code) == selfMeasures(arr)).all())


def equivalent(V, W):
    """True if each code covers every word of the other.

    Raises
    ------
    PolyboxUsageError
       Raised if the codes have different dimensions or unrelated alphabets.
    """
    _checkComparable(V, W)
    return _coversAll(W.words, V) and _coversAll(V.words, W)


def isPartitionCode(code):
    """True if the words of ``code`` fill the whole space."""
    return sum(barGValue(v) for v in code) == (1 << code.dim)


@dataclass(frozen=True)
class Cell:
    """A point of the letter space, given by the chosen letter of every pair.

    ``choice[p]`` is ``2p`` or ``2p + 1``.
    """
    choice: tuple

    def __post_init__(self):
        for p, letter in enumerate(self.choice):
            if letter >> 1 != p:
                raise PolyboxUsageError("Cell chooses letter %d for pair %d" % (letter, p))

    @classmethod
    def fromLetters(cls, alphabet, letters):
        """Cell choosing ``letters`` and the even letter of every other pair.

        Raises
        ------
        PolyboxUsageError
           Raised if two of the letters are complementary.
        """
        choice = [2*p for p in range(alphabet.nPairs)]
        fixed = {}
        for letter in letters:
            p = letter >> 1
            if fixed.get(p, letter) != letter:
                raise PolyboxUsageError("A cell cannot choose both letters of a pair")
            fixed[p] = letter
            choice[p] = letter
        return cls(tuple(choice))

    def contains(self, letter):
        """True if the realization of ``letter`` contains this cell."""
        return letter == STAR or self.choice[letter >> 1] == letter

    def withChoice(self, letter):
        choice = list(self.choice)
        choice[letter >> 1] = letter
        return Cell(tuple(choice))


def sliceCode(code, i, cell):
    """The code cut by the hyperplane through ``cell`` at coordinate ``i``.

    Returns the words ``v`` with ``v_i`` a star or the letter chosen by
    ``cell``, with coordinate ``i`` deleted.

    Raises
    ------
    PolyboxUsageError
       Raised if ``d < 2`` or ``i`` is out of range.
    """
    if code.dim < 2:
        raise PolyboxUsageError("Cannot slice a code of dimension %d" % (code.dim))
    if not 0 <= i < code.dim:
        raise PolyboxUsageError("Coordinate %d out of range for dimension %d" % (i, code.dim))
    words = [v.without(i) for v in code if cell.contains(v[i])]
    return PolyboxCode(code.alphabet, words, dim=code.dim - 1)


def isCylinder(code, i):
    """True if the union of the code is an ``i``-cylinder in every letter pair.

    Raises
    ------
    PolyboxUsageError
       Raised if some word has a star at ``i``.
    """
    if any(v[i] == STAR for v in code):
        raise PolyboxUsageError("Coordinate %d carries a star" % (i))
    dist = distribution(code, i)
    for group in dist.groups:
        if code.dim == 1:
            if (len(group.words) == 0) != (len(group.complementWords) == 0):
                return False
            continue
        lower = PolyboxCode(code.alphabet, [v.without(i) for v in group.words], dim=code.dim - 1)
        upper = PolyboxCode(code.alphabet, [v.without(i) for v in group.complementWords],
                            dim=code.dim - 1)
        if not equivalent(lower, upper):
            return False
    return True


def sliceBound(code, i, l1, l2):
    """Lower bound on ``len(code)`` from slices at coordinate ``i``.

    Returns ``m + n``, where ``m`` is the least slice size over cells
    choosing ``l1`` and ``l2`` and ``n`` the least over cells choosing their
    complements.  Only pairs occurring at ``i`` are enumerated.

    Raises
    ------
    PolyboxUsageError
       Raised if ``l1`` and ``l2`` are equal or complementary, or the code
       has stars.
    """
    if l1 >> 1 == l2 >> 1:
        raise PolyboxUsageError("Letters %s and %s are equal or complementary"
                                % (code.alphabet.name(l1), code.alphabet.name(l2)))
    if not code.isStarFree():
        raise PolyboxUsageError("sliceBound needs a star-free code")
    fixedPairs = {l1 >> 1, l2 >> 1}
    freePairs = sorted({v[i] >> 1 for v in code} - fixedPairs)

    def leastSlice(letters):
        best = None
        for chosen in itertools.product((0, 1), repeat=len(freePairs)):
            cell = Cell.fromLetters(code.alphabet,
                                    list(letters) + [2*p + c for p, c in zip(freePairs, chosen)])
            size = sum(1 for v in code if cell.contains(v[i]))
            if best is None or size < best:
                best = size
        return best

    return leastSlice((l1, l2)) + leastSlice((l1 ^ 1, l2 ^ 1))
