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
"""Text formats for polybox codes (``.pbc``) and tilings (``.pbt``).

A code file starts with a header naming the alphabet and the dimension,
followed by one word per line::

    # Example
    alphabet: a b
    d: 2
    a a
    a' *

Alphabet tokens are base names ``x`` (declaring ``x`` and ``x'``) or
explicit pairs ``x=y``.  A tiling file has the header ``d: n`` followed by
``2**n`` rows of ``n`` integers, the translations in half units.
"""

import re

from .alphabet import Alphabet
from .exceptions import CodeParseError, CodeValidationError, PolyboxUsageError
from .polyboxCode import PolyboxCode
from .tiling import validateTiling

__all__ = ['parseAlphabet', 'parseCode', 'formatCode', 'readCodeFile', 'writeCodeFile',
           'parseTiling', 'formatTiling', 'readTilingFile', 'writeTilingFile']

_TOKEN_RE = re.compile(r"\S+")
_HEADER_RE = re.compile(r"^\s*(alphabet|d)\s*:(.*)$")


def _lines(text):
    """Non-blank lines with comments removed, as ``(lineNumber, line)``."""
    for lineNumber, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0]
        if line.strip():
            yield lineNumber, line


def _tokens(line):
    """Tokens of a line with their 1-based columns."""
    return [(m.start() + 1, m.group()) for m in _TOKEN_RE.finditer(line)]


def _parseAlphabet(value, lineNumber, offset):
    pairs = []
    for column, token in _tokens(value):
        if '=' in token:
            letter, _, comp = token.partition('=')
        else:
            letter, comp = token, token + "'"
        if not letter or not comp:
            raise CodeParseError("Malformed alphabet token %r" % (token), lineNumber, column + offset)
        pairs.append((letter, comp))
    if not pairs:
        raise CodeParseError("Empty alphabet", lineNumber)
    try:
        return Alphabet.fromPairs(pairs)
    except PolyboxUsageError as e:
        raise CodeParseError(str(e), lineNumber) from e


def parseAlphabet(text):
    """Alphabet from header tokens such as ``"a b"`` or ``"0=2 1=3"``."""
    return _parseAlphabet(text, 1, 0)


def _parseDim(value, lineNumber, offset):
    tokens = _tokens(value)
    if len(tokens) != 1 or not tokens[0][1].isdigit() or int(tokens[0][1]) < 1:
        column = tokens[0][0] + offset if tokens else None
        raise CodeParseError("Expected a positive dimension", lineNumber, column)
    return int(tokens[0][1])


def _parseHeader(line, lineNumber):
    match = _HEADER_RE.match(line)
    if match is None:
        return None, None
    return match.group(1), (match.group(2), match.start(2))


def parseCode(text):
    """Parse the text of a code file.

    Returns
    -------
    code : `lsst.polybox.PolyboxCode`

    Raises
    ------
    CodeParseError
       Raised on a syntax error, an undeclared letter, a word of the wrong
       length, a duplicate word or a non-dichotomous pair; the message and
       attributes give the line (and column where there is one).
    """
    alphabet = None
    dim = None
    words = []
    lineOf = {}
    for lineNumber, line in _lines(text):
        key, value = _parseHeader(line, lineNumber)
        if key is not None:
            if words:
                raise CodeParseError("Header line after the first word", lineNumber)
            if key == 'alphabet':
                alphabet = _parseAlphabet(value[0], lineNumber, value[1])
            else:
                dim = _parseDim(value[0], lineNumber, value[1])
            continue
        if alphabet is None:
            raise CodeParseError("Missing 'alphabet:' header before the first word", lineNumber)
        tokens = _tokens(line)
        if len(tokens) == 1:
            try:
                word = alphabet.parseWord(tokens[0][1], dim=dim)
            except PolyboxUsageError as e:
                raise CodeParseError(str(e), lineNumber, tokens[0][0]) from e
        else:
            letters = []
            for column, token in tokens:
                try:
                    letters.append(alphabet.letterId(token))
                except PolyboxUsageError as e:
                    raise CodeParseError(str(e), lineNumber, column) from e
            word = letters
        if dim is None:
            dim = len(word)
        if len(word) != dim:
            raise CodeParseError("Word has %d letters, expected %d" % (len(word), dim), lineNumber)
        word = tuple(word)
        if word in lineOf:
            raise CodeParseError("Duplicate word %s (first on line %d)"
                                 % (alphabet.formatWord(word), lineOf[word]), lineNumber,
                                 pair=(word, word))
        lineOf[word] = lineNumber
        words.append(word)

    if alphabet is None:
        raise CodeParseError("Missing 'alphabet:' header", 1)
    if dim is None:
        raise CodeParseError("Missing 'd:' header in a file without words", 1)
    try:
        return PolyboxCode(alphabet, words, dim=dim)
    except CodeValidationError as e:
        u, v = e.pair
        raise CodeParseError(str(e), max(lineOf[tuple(u)], lineOf[tuple(v)]), pair=e.pair) from e


def formatCode(code):
    """Text of a code file for ``code``."""
    lines = ["alphabet: %s" % (' '.join(code.alphabet.headerTokens())),
             "d: %d" % (code.dim)]
    lines.extend(code.alphabet.formatWord(w, compact=False) for w in code.words)
    return '\n'.join(lines) + '\n'


def readCodeFile(filename):
    with open(filename, encoding='utf-8') as f:
        return parseCode(f.read())


def writeCodeFile(code, filename):
    with open(filename, 'w', encoding='utf-8') as f:
        f.write(formatCode(code))


def parseTiling(text):
    """Parse the text of a tiling file.

    Returns
    -------
    tiling : `lsst.polybox.TwoPeriodicTiling`

    Raises
    ------
    CodeParseError
       Raised on a syntax error or an entry outside ``0..3``.
    TilingValidationError
       Raised if the rows do not form a tiling.
    """
    dim = None
    rows = []
    for lineNumber, line in _lines(text):
        key, value = _parseHeader(line, lineNumber)
        if key == 'd':
            if rows:
                raise CodeParseError("Header line after the first translation", lineNumber)
            dim = _parseDim(value[0], lineNumber, value[1])
            continue
        elif key is not None:
            raise CodeParseError("Unexpected %r header in a tiling file" % (key), lineNumber)
        if dim is None:
            raise CodeParseError("Missing 'd:' header before the first translation", lineNumber)
        tokens = _tokens(line)
        if len(tokens) != dim:
            raise CodeParseError("Row has %d entries, expected %d" % (len(tokens), dim), lineNumber)
        row = []
        for column, token in tokens:
            if token not in ('0', '1', '2', '3'):
                raise CodeParseError("Entry %r is not a half-unit offset in 0..3" % (token),
                                     lineNumber, column)
            row.append(int(token))
        rows.append(row)
    if dim is None:
        raise CodeParseError("Missing 'd:' header", 1)
    return validateTiling(rows, dim=dim)


def formatTiling(tiling):
    """Text of a tiling file for ``tiling``."""
    lines = ["d: %d" % (tiling.dim)]
    lines.extend(' '.join(str(int(h)) for h in row) for row in tiling.translations)
    return '\n'.join(lines) + '\n'


def readTilingFile(filename):
    with open(filename, encoding='utf-8') as f:
        return parseTiling(f.read())


def writeTilingFile(tiling, filename):
    with open(filename, 'w', encoding='utf-8') as f:
        f.write(formatTiling(tiling))
