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
"""Enumeration of twin-pair-free codes up to isomorphism."""

import collections

import lsst.pex.config as pexConfig
import lsst.pipe.base as pipeBase
from lsst.utils.timer import timeMethod

from .cliqueSearch import CliqueSearch
from .exceptions import BudgetExhaustedError
from .keller import buildKellerGraph
from .polyboxCode import canonicalForm
from .rigidity import RigidityTask
from .utilities import BudgetConfig, Budget

__all__ = ['TwinFreeEnumerationConfig', 'TwinFreeEnumerationTask']


class TwinFreeEnumerationConfig(pexConfig.Config):
    """Config for TwinFreeEnumerationTask"""

    budget = pexConfig.ConfigField(
        doc="Search budget for the clique enumeration",
        dtype=BudgetConfig,
    )
    maxSize = pexConfig.Field(
        doc="Largest code size to enumerate (0 for no limit)",
        dtype=int,
        default=0,
    )
    doRigidityCheck = pexConfig.Field(
        doc="Decide the rigidity of every enumerated class?",
        dtype=bool,
        default=False,
    )
    rigidity = pexConfig.ConfigurableField(
        target=RigidityTask,
        doc="Task deciding rigidity",
    )

    def validate(self):
        super().validate()
        if self.maxSize < 0:
            msg = 'maxSize must be non-negative'
            raise pexConfig.FieldValidationError(TwinFreeEnumerationConfig.maxSize, self, msg)


class TwinFreeEnumerationTask(pipeBase.Task):
    """
    List the twin-pair-free codes of a dimension up to isomorphism.

    These are the cliques of the Keller graph.  Isomorphisms act
    transitively on the vertices, so every class has a member through the
    first vertex; the cliques through it are enumerated by size and reduced
    with `lsst.polybox.canonicalForm`.
    """

    ConfigClass = TwinFreeEnumerationConfig
    _DefaultName = "twinFreeEnumeration"

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        if self.config.doRigidityCheck:
            self.makeSubtask("rigidity")

    @timeMethod
    def run(self, dim, alphabet=None):
        """
        Enumerate the classes.

        Parameters
        ----------
        dim : `int`
        alphabet : `lsst.polybox.Alphabet`, optional
           Defaults to ``{0, 1, 2, 3}``.

        Returns
        -------
        result : `lsst.pipe.base.Struct`
           ``codes`` (canonical codes sorted by size, then words),
           ``maxSize``, ``sizeCounts`` (size -> number of classes),
           ``rigidity`` (code -> status string, empty unless checked) and
           ``complete``.
        """
        kellerGraph = buildKellerGraph(dim, alphabet)
        graph = kellerGraph.graph
        budget = Budget.fromConfig(self.config.budget)
        search = CliqueSearch(graph, budget=budget)
        limit = self.config.maxSize if self.config.maxSize > 0 else graph.n

        classes = set()
        complete = True
        try:
            for size in range(1, limit + 1):
                before = len(classes)
                for bits in search.iterCliques(size, candidates=graph.adj[0], base=1):
                    classes.add(canonicalForm(kellerGraph.code(bits)))
                self.log.debug("%d classes of size %d", len(classes) - before, size)
                if len(classes) == before:
                    break
        except BudgetExhaustedError:
            complete = False
            self.log.warning("Budget exhausted after %d nodes; the enumeration is partial", budget.nodes)

        codes = sorted(classes, key=lambda c: (len(c), c.words))
        sizeCounts = collections.Counter(len(c) for c in codes)
        maxSize = max(sizeCounts, default=0)
        self.log.info("%d twin-pair-free classes in dimension %d, largest of size %d",
                      len(codes), kellerGraph.dim, maxSize)

        rigidity = {}
        if self.config.doRigidityCheck:
            for code in codes:
                rigidity[code] = self.rigidity.isRigid(code).status
            nRigid = sum(1 for s in rigidity.values() if s == "rigid")
            self.log.info("%d of %d classes are rigid", nRigid, len(codes))
        return pipeBase.Struct(codes=codes, maxSize=maxSize, sizeCounts=dict(sizeCounts),
                               rigidity=rigidity, complete=complete)
