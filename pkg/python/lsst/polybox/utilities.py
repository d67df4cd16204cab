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
"""Utility functions shared by the polybox search tasks.

This file contains the budget bookkeeping used by every search engine and
a few helpers for integer bitsets, which is how vertex sets are represented
in the clique and cover searches.
"""

import time
import math

import lsst.pex.config as pexConfig

from .exceptions import BudgetExhaustedError, PolyboxUsageError

__all__ = ['BudgetConfig', 'Budget', 'parseBudgetString', 'lsbIndex', 'bitCount',
           'bitsToList', 'listToBits']


class BudgetConfig(pexConfig.Config):
    """Limits applied to a single search"""

    timeBudget = pexConfig.Field(
        doc="Wall-clock limit for the search in seconds (0 for no limit)",
        dtype=float,
        default=0.0,
    )
    nodeBudget = pexConfig.Field(
        doc="Limit on the number of search nodes expanded (0 for no limit)",
        dtype=int,
        default=0,
    )

    def validate(self):
        super().validate()
        if self.timeBudget < 0.0:
            msg = 'timeBudget must be non-negative'
            raise pexConfig.FieldValidationError(BudgetConfig.timeBudget, self, msg)
        if self.nodeBudget < 0:
            msg = 'nodeBudget must be non-negative'
            raise pexConfig.FieldValidationError(BudgetConfig.nodeBudget, self, msg)


class Budget:
    """Running budget for a search.

    The clock starts when the budget is constructed.  Engines call `tick`
    once per expanded node; it raises `BudgetExhaustedError` when either
    limit has been reached.

    Parameters
    ----------
    timeBudget : `float`, optional
       Seconds allowed; 0 or None means unlimited.
    nodeBudget : `int`, optional
       Nodes allowed; 0 or None means unlimited.
    """
    __slots__ = ("deadline", "nodeLimit", "nodes", "startTime", "exhausted")

    def __init__(self, timeBudget=None, nodeBudget=None):
        self.startTime = time.perf_counter()
        if timeBudget:
            self.deadline = self.startTime + timeBudget
        else:
            self.deadline = math.inf
        self.nodeLimit = nodeBudget if nodeBudget else math.inf
        self.nodes = 0
        self.exhausted = False

    @classmethod
    def fromConfig(cls, config):
        """Make a budget from a `BudgetConfig`."""
        return cls(timeBudget=config.timeBudget, nodeBudget=config.nodeBudget)

    def tick(self, n=1):
        """Account for ``n`` expanded nodes.

        Raises
        ------
        BudgetExhaustedError
           Raised when the node or time limit has been reached.
        """
        self.nodes += n
        if self.nodes > self.nodeLimit:
            self.exhausted = True
            raise BudgetExhaustedError("node budget of %d exhausted" % (self.nodeLimit))
        # The clock is only consulted every 256 nodes.
        if (self.nodes & 0xff) == 0 and time.perf_counter() > self.deadline:
            self.exhausted = True
            raise BudgetExhaustedError("time budget exhausted after %d nodes" % (self.nodes))

    def check(self):
        """Raise if the time limit has passed, without counting a node."""
        if time.perf_counter() > self.deadline:
            self.exhausted = True
            raise BudgetExhaustedError("time budget exhausted after %d nodes" % (self.nodes))

    @property
    def elapsed(self):
        return time.perf_counter() - self.startTime

    @property
    def remainingTime(self):
        """Seconds left, or None when unlimited."""
        if self.deadline == math.inf:
            return None
        return max(0.0, self.deadline - time.perf_counter())


def parseBudgetString(text):
    """Parse a command-line budget.

    ``"60"`` and ``"60s"`` are seconds, ``"500000n"`` is a node count.

    Parameters
    ----------
    text : `str`
       Budget specification.

    Returns
    -------
    timeBudget : `float`
    nodeBudget : `int`

    Raises
    ------
    PolyboxUsageError
       Raised if the text cannot be parsed.
    """
    value = text.strip().lower()
    try:
        if value.endswith('n'):
            return 0.0, int(value[:-1])
        if value.endswith('s'):
            value = value[:-1]
        return float(value), 0
    except ValueError:
        raise PolyboxUsageError("Cannot parse budget %r; use seconds (60, 60s) "
                                "or nodes (100000n)" % (text))


def lsbIndex(x):
    """Index of the lowest set bit of a non-zero integer."""
    return (x & -x).bit_length() - 1


def bitCount(bits):
    """Number of set bits of a non-negative integer."""
    return bin(bits).count('1')


def bitsToList(bits):
    """List the indices of the set bits of ``bits`` in increasing order."""
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def listToBits(indices):
    """Integer bitset with the given indices set."""
    bits = 0
    for i in indices:
        bits |= (1 << i)
    return bits
