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
"""Alphabets with complementation, and words over them.

Letters are interned to small integers.  The letters of an alphabet come in
complementary pairs, pair ``p`` holding the letters ``2p`` and ``2p + 1``,
so that the complement of a letter ``l`` is ``l ^ 1``.  The star symbol is
the reserved id `STAR` and is its own complement.
"""

import itertools
import re

import numpy as np

from .exceptions import PolyboxUsageError

__all__ = ['STAR', 'MAX_PAIRS', 'Alphabet', 'Word', 'complement']

STAR = 255
MAX_PAIRS = 127

_FRESH_BASES = ('x', 'y', 'z', 'u', 'v', 'w', 'p', 'q', 'r')
_NAME_RE = re.compile(r"^[^\s*#=:]+$")


def complement(letter):
    """Complement of a letter id (star is fixed)."""
    if letter == STAR:
        return STAR
    return letter ^ 1


class Word(tuple):
    """A word over an alphabet-with-star.

    A word is an immutable tuple of letter ids (`STAR` for the star).  It
    does not hold a reference to its alphabet; the alphabet belongs to the
    `~lsst.polybox.PolyboxCode` the word lives in.
    """
    __slots__ = ()

    def __new__(cls, entries):
        return super().__new__(cls, (int(e) for e in entries))

    @property
    def dim(self):
        return len(self)

    def isStarFree(self):
        return STAR not in self

    def project(self, coordinates):
        """The word restricted to ``coordinates``, in the given order."""
        return Word(self[i] for i in coordinates)

    def without(self, i):
        """The word with coordinate ``i`` deleted."""
        return Word(self[:i] + self[i + 1:])

    def replace(self, i, letter):
        """A copy with coordinate ``i`` set to ``letter``."""
        return Word(self[:i] + (letter,) + self[i + 1:])

    def __repr__(self):
        return "Word(%s)" % (list(self))


class Alphabet:
    """A finite letter set with a fixed-point-free complementation.

    Parameters
    ----------
    names : `list` [`str`]
       Letter names, complementary letters adjacent: ``names[2p]`` and
       ``names[2p + 1]`` form pair ``p``.

    Raises
    ------
    PolyboxUsageError
       Raised for an odd or empty name list, duplicated names, or names
       that clash with the file syntax.
    """
    def __init__(self, names):
        names = tuple(str(n) for n in names)
        if len(names) == 0 or len(names) % 2 != 0:
            raise PolyboxUsageError("An alphabet needs an even, positive number of letters, got %d"
                                    % (len(names)))
        if len(names) > 2*MAX_PAIRS:
            raise PolyboxUsageError("At most %d letter pairs are supported" % (MAX_PAIRS))
        if len(set(names)) != len(names):
            raise PolyboxUsageError("Duplicate letter names in %s" % (list(names)))
        for name in names:
            if not _NAME_RE.match(name):
                raise PolyboxUsageError("Invalid letter name %r" % (name))
        self._names = names
        self._lookup = {name: i for i, name in enumerate(names)}
        self._compact = all(len(name) == 1 or (len(name) == 2 and name[1] == "'")
                            for name in names)

    @classmethod
    def fromBaseNames(cls, baseNames):
        """Alphabet whose pairs are ``x, x'`` for every base name ``x``."""
        names = []
        for base in baseNames:
            names.extend([base, base + "'"])
        return cls(names)

    @classmethod
    def fromPairs(cls, pairs):
        """Alphabet from explicit ``(letter, complement)`` name pairs."""
        names = []
        for letter, comp in pairs:
            names.extend([letter, comp])
        return cls(names)

    @classmethod
    def keller(cls):
        """The alphabet {0, 1, 2, 3} with 0' = 2 and 1' = 3."""
        return cls.fromPairs([("0", "2"), ("1", "3")])

    @classmethod
    def ofSize(cls, nPairs):
        """The alphabet a, a', b, b', ... with ``nPairs`` pairs."""
        if nPairs > 26:
            return cls.fromBaseNames(["l%d" % (i) for i in range(nPairs)])
        return cls.fromBaseNames([chr(ord('a') + i) for i in range(nPairs)])

    @property
    def names(self):
        return self._names

    @property
    def nLetters(self):
        return len(self._names)

    @property
    def nPairs(self):
        return len(self._names) // 2

    @property
    def letters(self):
        return range(len(self._names))

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self._names == other._names

    def __hash__(self):
        return hash(self._names)

    def __repr__(self):
        return "Alphabet(%s)" % (list(self._names))

    def isSubAlphabetOf(self, other):
        """True if ``other`` starts with the same letters (an extension)."""
        return other._names[:len(self._names)] == self._names

    def name(self, letter):
        if letter == STAR:
            return '*'
        return self._names[letter]

    def letterId(self, name):
        """Letter id for a name; ``*`` maps to `STAR`.

        Raises
        ------
        PolyboxUsageError
           Raised for an undeclared name.
        """
        if name == '*':
            return STAR
        try:
            return self._lookup[name]
        except KeyError:
            raise PolyboxUsageError("Undeclared letter %r" % (name))

    def extended(self, nExtra):
        """Copy of the alphabet with ``nExtra`` fresh pairs appended.

        Existing letter ids are unchanged.
        """
        names = list(self._names)
        candidates = itertools.chain(_FRESH_BASES,
                                     ("%s%d" % (b, i) for i in itertools.count(1) for b in _FRESH_BASES))
        added = 0
        for base in candidates:
            if added == nExtra:
                break
            if base in self._lookup or base + "'" in self._lookup:
                continue
            names.extend([base, base + "'"])
            added += 1
        return Alphabet(names)

    def headerTokens(self):
        """Tokens declaring this alphabet in a code file header."""
        tokens = []
        for p in range(self.nPairs):
            letter, comp = self._names[2*p], self._names[2*p + 1]
            if comp == letter + "'":
                tokens.append(letter)
            else:
                tokens.append("%s=%s" % (letter, comp))
        return tokens

    def parseWord(self, text, dim=None):
        """Parse a word.

        Tokens are separated by whitespace.  A single token without
        whitespace is read letter by letter when every letter name is a
        single character (optionally primed), so ``"aa'b*"`` is accepted.

        Parameters
        ----------
        text : `str`
           Word text.
        dim : `int`, optional
           Expected dimension.

        Returns
        -------
        word : `Word`

        Raises
        ------
        PolyboxUsageError
           Raised on unknown letters or a dimension mismatch.
        """
        tokens = text.split()
        if len(tokens) == 1 and self._compact and (dim is None or dim > 1):
            tokens = self._splitCompact(tokens[0])
        word = Word(self.letterId(token) for token in tokens)
        if len(word) == 0:
            raise PolyboxUsageError("Empty word")
        if dim is not None and len(word) != dim:
            raise PolyboxUsageError("Word %r has %d letters, expected %d" % (text, len(word), dim))
        return word

    def _splitCompact(self, text):
        tokens = []
        i = 0
        while i < len(text):
            if i + 1 < len(text) and text[i + 1] == "'" and text[i:i + 2] in self._lookup:
                tokens.append(text[i:i + 2])
                i += 2
            else:
                tokens.append(text[i])
                i += 1
        return tokens

    def formatWord(self, word, compact=None):
        """Text form of a word; compact when every name is one character."""
        if compact is None:
            compact = self._compact
        parts = [self.name(letter) for letter in word]
        return ''.join(parts) if compact else ' '.join(parts)

    def isCompatibleMap(self, mapping):
        """True if ``mapping`` (letter -> letter) is a bijection commuting with complement."""
        if sorted(mapping.get(letter, -1) for letter in self.letters) != list(self.letters):
            return False
        return all(mapping[letter ^ 1] == mapping[letter] ^ 1 for letter in self.letters)

    def compatibleMaps(self):
        """All complement-compatible letter bijections as lookup tables.

        Returns
        -------
        maps : `numpy.ndarray`
           Array of shape ``(nMaps, 256)``, dtype uint8; row ``m`` maps each
           letter id (and `STAR` to itself).
        """
        p = self.nPairs
        tables = []
        for perm in itertools.permutations(range(p)):
            for flips in itertools.product((0, 1), repeat=p):
                table = np.arange(256, dtype=np.uint8)
                for src in range(p):
                    dst = perm[src]
                    table[2*src] = 2*dst + flips[src]
                    table[2*src + 1] = 2*dst + (1 - flips[src])
                tables.append(table)
        return np.array(tables, dtype=np.uint8)

    def swapMaps(self, pair=0):
        """Identity and the swap of one letter pair, as lookup tables."""
        identity = np.arange(256, dtype=np.uint8)
        swap = identity.copy()
        swap[2*pair], swap[2*pair + 1] = 2*pair + 1, 2*pair
        return np.array([identity, swap], dtype=np.uint8)
