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
"""Error kinds raised by polybox.

All of them derive from builtin exceptions, so callers that only care about
the broad category may catch `ValueError` or `RuntimeError`.
"""

__all__ = ['PolyboxUsageError', 'CodeValidationError', 'CodeParseError',
           'TilingValidationError', 'ClassificationPreconditionError',
           'TemplateMismatchError', 'GraphSizeError', 'BudgetExhaustedError',
           'DefectError']


class PolyboxUsageError(ValueError):
    """Arguments do not satisfy the preconditions of an operation."""
    pass


class CodeValidationError(ValueError):
    """A set of words is not a polybox code.

    Parameters
    ----------
    msg : `str`
       Description of the failure.
    pair : `tuple`, optional
       The offending pair of words (or the duplicated word twice).
    """
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class CodeParseError(CodeValidationError):
    """A code or tiling file could not be parsed.

    Parameters
    ----------
    msg : `str`
       Description of the failure.
    lineNumber : `int`
       1-based line number in the source text.
    column : `int`, optional
       1-based column of the offending token.
    """
    def __init__(self, msg, lineNumber, column=None, pair=None):
        if column is None:
            location = "line %d" % (lineNumber)
        else:
            location = "line %d, column %d" % (lineNumber, column)
        super().__init__("%s: %s" % (location, msg), pair=pair)
        self.lineNumber = lineNumber
        self.column = column


class TilingValidationError(ValueError):
    """A set of translation vectors is not a two-periodic cube tiling.

    Parameters
    ----------
    msg : `str`
       Description of the failure.
    witness : `object`, optional
       A cell, or a pair of translations, demonstrating the failure.
    """
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class ClassificationPreconditionError(ValueError):
    """The hypotheses of a structure classifier are not met."""
    pass


class TemplateMismatchError(RuntimeError):
    """A code satisfying a classifier's hypotheses did not match its forced form."""
    pass


class GraphSizeError(RuntimeError):
    """A requested graph exceeds the configured vertex limit."""
    pass


class BudgetExhaustedError(RuntimeError):
    """A search ran out of its time or node budget."""
    pass


class DefectError(RuntimeError):
    """An invariant guaranteed by the underlying mathematics was violated."""
    pass
