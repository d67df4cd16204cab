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
"""Test the enumeration of twin-pair-free codes up to isomorphism.
"""

import unittest

import lsst.utils.tests
import lsst.pex.config as pexConfig

import lsst.polybox as polybox
from lsst.polybox import TwinFreeEnumerationTask


class TwinFreeEnumerationTestCase(lsst.utils.tests.TestCase):
    """
    Test class counts in low dimensions.
    """
    def testDimensionTwo(self):
        result = TwinFreeEnumerationTask().run(2)
        self.assertTrue(result.complete)
        self.assertEqual(result.maxSize, 2)
        self.assertEqual(result.sizeCounts, {1: 1, 2: 2})
        self.assertEqual(len(result.codes), 3)
        self.assertEqual(result.rigidity, {})
        for code in result.codes:
            self.assertEqual(polybox.canonicalForm(code), code)

    def testDimensionThree(self):
        config = polybox.TwinFreeEnumerationConfig()
        config.doRigidityCheck = True
        result = TwinFreeEnumerationTask(config=config).run(3)
        self.assertTrue(result.complete)
        self.assertEqual(result.maxSize, 5)
        self.assertEqual(set(result.rigidity), set(result.codes))
        self.assertTrue(all(status == "rigid" for status in result.rigidity.values()))

    def testMaxSize(self):
        config = polybox.TwinFreeEnumerationConfig()
        config.maxSize = 1
        result = TwinFreeEnumerationTask(config=config).run(3)
        self.assertEqual(result.sizeCounts, {1: 1})

        config.maxSize = -1
        with self.assertRaises(pexConfig.FieldValidationError):
            config.validate()


class TestMemory(lsst.utils.tests.MemoryTestCase):
    pass


def setup_module(module):
    lsst.utils.tests.init()


if __name__ == "__main__":
    lsst.utils.tests.init()
    unittest.main()
