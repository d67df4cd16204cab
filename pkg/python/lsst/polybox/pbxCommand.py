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
"""The ``pbx`` command.

Every subcommand prints a report of ``key: value`` lines (or a JSON object
with ``--json``) and exits with 0 on success or a true property, 1 when a
property is false or a defect was detected, 2 on usage and parse errors
and 3 when a search ran out of budget.  Coordinates are 1-based.
"""

import argparse
import ast
import json
import logging
import os
import sys
from fractions import Fraction

import lsst.utils.logging

from .alphabet import Word
from .classifiers import (Composition, classifyCover5, classifyPair2, classifyPartition5,
                          classifyPartition6, coverCompositions, randomPartitionCode)
from .codeEnumeration import TwinFreeEnumerationConfig, TwinFreeEnumerationTask
from .codeIo import formatCode, formatTiling, parseAlphabet, readCodeFile, readTilingFile
from .coverEnumeration import CoverEnumerationConfig, CoverEnumerationTask
from .exceptions import DefectError, PolyboxUsageError, TemplateMismatchError, TilingValidationError
from .keller import MaxCliqueConfig, MaxCliqueTask, equivalentCliques, spreadCertificate
from .measure import covers, equivalent, gValues, isPartitionCode
from .polyboxCode import findTwinPair
from .rigidity import RigidityConfig, RigidityTask, SearchStatus
from .siblings import checkSiblingInvariants, twinPairBySpread
from .tiling import (SamplePoint, TilingAnalysisConfig, TilingAnalysisTask, encodeSmall, lSet,
                     localPartition, randomTiling, twinPairCertificate)
from .utilities import parseBudgetString
from .version import __version__

__all__ = ['EXIT_OK', 'EXIT_FALSE', 'EXIT_USAGE', 'EXIT_INCONCLUSIVE', 'Report', 'makeParser', 'main']

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3

_log = lsst.utils.logging.getLogger(__name__)


class Report:
    """Ordered report fields.  A list value prints as one line per item."""

    def __init__(self):
        self.fields = {}

    def add(self, key, value):
        self.fields[key] = value

    def emit(self, asJson=False, stream=None):
        stream = sys.stdout if stream is None else stream
        if asJson:
            json.dump(self.fields, stream, indent=2, default=str)
            stream.write('\n')
            return
        for key, value in self.fields.items():
            if isinstance(value, list):
                for item in value:
                    stream.write("%s: %s\n" % (key, _text(item)))
            else:
                stream.write("%s: %s\n" % (key, _text(value)))


def _text(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    if isinstance(value, tuple):
        return "(%s)" % (", ".join(str(v) for v in value))
    return str(value)


def _codeText(code):
    return "{%s}" % (", ".join(code.formatWords()))


def _pairText(alphabet, pair):
    return [alphabet.formatWord(pair[0]), alphabet.formatWord(pair[1])]


def _vectorText(vector):
    return "(%s)" % (", ".join(str(Fraction(v)) for v in vector))


def _threads():
    value = os.environ.get("PBX_THREADS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        raise PolyboxUsageError("PBX_THREADS must be an integer, got %r" % (value))


def _applyOverrides(config, overrides):
    """Apply ``name=value`` overrides to a config, as ``--config`` does for tasks."""
    for override in overrides or []:
        name, sep, text = override.partition('=')
        if not sep:
            raise PolyboxUsageError("Config override %r is not of the form name=value" % (override))
        try:
            value = ast.literal_eval(text)
        except (ValueError, SyntaxError):
            value = text
        target = config
        parts = name.strip().split('.')
        try:
            for part in parts[:-1]:
                target = getattr(target, part)
            setattr(target, parts[-1], value)
        except (AttributeError, TypeError) as e:
            raise PolyboxUsageError("Cannot apply config override %r: %s" % (override, e)) from e


def _applyBudget(config, limits):
    """Set the budget of a config and of the subtask configs below it."""
    if hasattr(config, 'budget'):
        config.budget.timeBudget, config.budget.nodeBudget = limits
    for name in ('rigidity', 'coverEnumeration'):
        if hasattr(config, name):
            _applyBudget(getattr(config, name), limits)


def _makeConfig(ConfigClass, args, **values):
    config = ConfigClass()
    if args.budget is not None:
        _applyBudget(config, parseBudgetString(args.budget))
    if hasattr(config, 'nCore'):
        config.nCore = args.threads if args.threads is not None else _threads()
    for name, value in values.items():
        setattr(config, name, value)
    _applyOverrides(config, args.config)
    config.validate()
    return config


def _alphabet(args, default="a b"):
    return parseAlphabet(args.alphabet if args.alphabet is not None else default)


def _status(complete):
    return EXIT_OK if complete else EXIT_INCONCLUSIVE


def _check(args, report):
    code = readCodeFile(args.file)
    pair = findTwinPair(code)
    partition = isPartitionCode(code)
    report.add("dimension", code.dim)
    report.add("size", len(code))
    report.add("alphabet", ' '.join(code.alphabet.headerTokens()))
    report.add("star_free", code.isStarFree())
    report.add("partition", partition)
    report.add("twin_pair", None if pair is None else _pairText(code.alphabet, pair))
    if args.expect_twin_free and pair is not None:
        return EXIT_FALSE
    if args.expect_partition and not partition:
        return EXIT_FALSE
    return EXIT_OK


def _covers(args, report):
    code = readCodeFile(args.file)
    w = code.alphabet.parseWord(args.word, dim=code.dim)
    covered = covers(w, code, method="gsum")
    if covered != covers(w, code, method="measure"):
        raise DefectError("The g-sum and measure tests disagree on %s" % (code.format(w)))
    report.add("word", code.format(w))
    report.add("covered", covered)
    if w.isStarFree():
        values = gValues(code, w)
        report.add("g_values", ' '.join(str(int(g)) for g in values))
        report.add("g_sum", int(values.sum()))
    return EXIT_OK if covered else EXIT_FALSE


def _equiv(args, report):
    V = readCodeFile(args.first)
    W = readCodeFile(args.second)
    result = equivalentCliques(V, W) if args.cliques else equivalent(V, W)
    report.add("equivalent", result)
    return EXIT_OK if result else EXIT_FALSE


def _rigid(args, report):
    code = readCodeFile(args.file)
    task = RigidityTask(config=_makeConfig(RigidityConfig, args))
    result = task.isRigid(code)
    report.add("status", result.status)
    if result.witness is not None:
        report.add("witness", _codeText(result.witness))
    report.add("nodes", result.nodes)
    return {"rigid": EXIT_OK, "not_rigid": EXIT_FALSE}.get(result.status, EXIT_INCONCLUSIVE)


def _classify(args, report):
    code = readCodeFile(args.file)
    alphabet = code.alphabet
    if args.kind == "pair":
        if args.other is None:
            raise PolyboxUsageError("classify --kind pair needs --other")
        structure = classifyPair2(code, readCodeFile(args.other))
        report.add("coordinates", tuple(i + 1 for i in structure.coordinates))
        report.add("letters", (alphabet.name(structure.l1), alphabet.name(structure.l2)))
        report.add("common", alphabet.formatWord(structure.common))
        report.add("swapped", structure.swapped)
    elif args.kind in ("partition5", "cover5"):
        if args.kind == "cover5":
            if args.word is None:
                raise PolyboxUsageError("classify --kind cover5 needs --word")
            structure = classifyCover5(code, alphabet.parseWord(args.word, dim=code.dim))
        else:
            structure = classifyPartition5(code)
        report.add("coordinates", tuple(i + 1 for i in structure.coordinates))
        report.add("letters", tuple(alphabet.name(s) for s in structure.letters))
        if structure.ambient is not None:
            report.add("ambient", alphabet.formatWord(structure.ambient))
    else:
        structure = classifyPartition6(code)
        report.add("coordinate", structure.coordinate + 1)
        report.add("letter", alphabet.name(structure.letter))
        report.add("inner_coordinates", tuple(i + 1 for i in structure.inner.coordinates))
        report.add("inner_letters", tuple(alphabet.name(s) for s in structure.inner.letters))
    report.add("kind", args.kind)
    return EXIT_OK


def _enumCovers(args, report):
    alphabet = _alphabet(args)
    w = alphabet.parseWord(args.word, dim=args.d) if args.word else Word([2]*args.d)
    values = {"keepCodes": not args.count}
    if args.min_index is not None:
        values["minIndex"] = args.min_index
    config = _makeConfig(CoverEnumerationConfig, args, **values)
    task = CoverEnumerationTask(config=config)
    report.add("word", alphabet.formatWord(w))
    if args.table:
        result = task.tabulate(alphabet, w)
        report.add("row", ["%d (%s) %d" % (k, comp, count) for k, comp, count in result.table])
        return _status(result.complete)
    composition = None
    k = args.k
    if args.comp is not None:
        composition = Composition.fromString(args.comp, minIndex=config.minIndex)
        if k is None:
            k = composition.size
    if k is None:
        raise PolyboxUsageError("enum-covers needs --k or --comp")
    result = task.run(alphabet, w, k, composition=composition)
    report.add("count", result.count)
    report.add("complete", result.complete)
    if not args.count:
        report.add("code", [_codeText(c) for c in result.codes])
    return _status(result.complete)


def _compositions(args, report):
    comps = coverCompositions(args.k, args.d, minIndex=args.min_index)
    report.add("composition", ["(%s)" % (c) for c in comps])
    report.add("count", len(comps))
    return EXIT_OK


def _kellerClique(args, report):
    alphabet = _alphabet(args, default="0=2 1=3")
    task = MaxCliqueTask(config=_makeConfig(MaxCliqueConfig, args))
    result = task.run(args.d, alphabet)
    report.add("size", result.size)
    report.add("optimal", result.provenOptimal)
    report.add("nodes", result.nodes)
    report.add("clique", _codeText(result.clique))
    if args.certify:
        certificate = spreadCertificate(result.clique)
        report.add("spread_coordinate", None if certificate is None else certificate.coordinate + 1)
    return _status(result.provenOptimal)


def _siblings(args, report):
    code = readCodeFile(args.file)
    result = checkSiblingInvariants(code)
    report.add("edges", len(result.graph.edges))
    report.add("max_degree", result.maxDegree)
    report.add("average_degree", str(result.averageDegree))
    report.add("largest_group", result.largestGroup)
    report.add("violation", result.violations)
    report.add("passed", result.passed)
    return EXIT_OK if result.passed else EXIT_FALSE


def _spread(args, report):
    code = readCodeFile(args.file)
    pair = twinPairBySpread(code, args.coordinate - 1)
    report.add("twin_pair", None if pair is None else _pairText(code.alphabet, pair))
    return EXIT_OK if pair is not None else EXIT_FALSE


def _counterexample(args, report):
    alphabet = _alphabet(args)
    task = RigidityTask(config=_makeConfig(RigidityConfig, args))
    result = task.counterexampleSearch(args.d, alphabet, maxSize=args.max_size)
    report.add("status", result.status.value)
    report.add("tested", result.nTested)
    if result.pair is not None:
        report.add("V", _codeText(result.pair[0]))
        report.add("W", _codeText(result.pair[1]))
        report.add("defect", result.defect)
    if result.status == SearchStatus.FOUND:
        return EXIT_FALSE if result.defect else EXIT_OK
    if result.status == SearchStatus.EXHAUSTED:
        return EXIT_FALSE
    return EXIT_INCONCLUSIVE


def _enumCodes(args, report):
    alphabet = _alphabet(args)
    values = {"doRigidityCheck": args.rigid}
    if args.max_size is not None:
        values["maxSize"] = args.max_size
    task = TwinFreeEnumerationTask(config=_makeConfig(TwinFreeEnumerationConfig, args, **values))
    result = task.run(args.d, alphabet)
    report.add("classes", len(result.codes))
    report.add("max_size", result.maxSize)
    report.add("size_count", ["%d %d" % (s, n) for s, n in sorted(result.sizeCounts.items())])
    if args.rigid:
        nonRigid = [c for c, s in result.rigidity.items() if s != "rigid"]
        report.add("rigid", len(result.codes) - len(nonRigid))
        report.add("not_rigid", [_codeText(c) for c in nonRigid])
    return _status(result.complete)


def _point(text, dim):
    values = text.replace(',', ' ').split()
    try:
        point = SamplePoint.fromValues([Fraction(v) for v in values])
    except ValueError as e:
        raise PolyboxUsageError("Cannot parse point %r: %s" % (text, e)) from e
    if point.dim != dim:
        raise PolyboxUsageError("Point %r has %d coordinates, expected %d" % (text, point.dim, dim))
    return point


def _tilingValidate(args, report):
    try:
        tiling = readTilingFile(args.file)
    except TilingValidationError as e:
        report.add("valid", False)
        report.add("error", str(e))
        report.add("witness", e.witness)
        return EXIT_FALSE
    report.add("valid", True)
    report.add("dimension", tiling.dim)
    return EXIT_OK


def _tilingAnalyze(args, report):
    tiling = readTilingFile(args.file)
    task = TilingAnalysisTask(config=_makeConfig(TilingAnalysisConfig, args))
    result = task.run(tiling)
    report.add("r_minus", result.rMinus)
    report.add("r_plus", result.rPlus)
    if task.config.doTwinPairSearch:
        report.add("twin_pair", None if result.twinPair is None
                   else [_vectorText(v) for v in result.twinPair])
    if args.point is not None:
        x = _point(args.point, tiling.dim)
        for i in range(tiling.dim):
            report.add("L_%d" % (i + 1), "{%s}" % (", ".join(str(v) for v in sorted(lSet(tiling, x, i)))))
        report.add("local_partition", _codeText(localPartition(tiling, x)) if x.isGeneric() else None)
    return EXIT_OK


def _tilingEncode(args, report):
    tiling = readTilingFile(args.file)
    code = encodeSmall(tiling, _point(args.point, tiling.dim))
    report.add("code", _codeText(code))
    report.add("twin_pair", None if findTwinPair(code) is None
               else _pairText(code.alphabet, findTwinPair(code)))
    return EXIT_OK


def _tilingCertify(args, report):
    tiling = readTilingFile(args.file)
    result = twinPairCertificate(tiling)
    report.add("route", result.route)
    if result.point is not None:
        report.add("point", _vectorText(result.point.values))
    if result.coordinate is not None:
        report.add("coordinate", result.coordinate + 1)
    report.add("twin_pair", None if result.pair is None else [_vectorText(v) for v in result.pair])
    return EXIT_OK if result.pair is not None else EXIT_FALSE


def _output(args, report, text):
    if args.output:
        with open(args.output, 'w', encoding='utf-8') as f:
            f.write(text)
        report.add("output", args.output)
    else:
        report.add("text", text.rstrip('\n').split('\n'))


def _generatePartition(args, report):
    code = randomPartitionCode(args.d, _alphabet(args), args.seed)
    _output(args, report, formatCode(code))
    return EXIT_OK


def _generateTiling(args, report):
    tiling = randomTiling(args.d, args.seed, nShifts=args.shifts)
    _output(args, report, formatTiling(tiling))
    return EXIT_OK


def _addCommon(parser):
    parser.add_argument("--json", action="store_true", help="print the report as JSON")
    parser.add_argument("--budget", default=None,
                        help="search budget: seconds (60, 60s) or nodes (100000n)")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: $PBX_THREADS or 1)")
    parser.add_argument("--config", action="append", metavar="NAME=VALUE",
                        help="config override, may be repeated")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="level of the lsst loggers")


def makeParser():
    """Build the ``pbx`` argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    _addCommon(common)
    parser = argparse.ArgumentParser(prog="pbx", description="Polybox codes, Keller graphs and tilings.")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validate a code file")
    p.add_argument("file")
    p.add_argument("--expect-twin-free", action="store_true", help="exit 1 if there is a twin pair")
    p.add_argument("--expect-partition", action="store_true", help="exit 1 unless a partition code")
    p.set_defaults(func=_check)

    p = sub.add_parser("covers", parents=[common], help="test whether a code covers a word")
    p.add_argument("file")
    p.add_argument("--word", required=True)
    p.set_defaults(func=_covers)

    p = sub.add_parser("equiv", parents=[common], help="test whether two codes are equivalent")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--cliques", action="store_true", help="require both codes to be Keller cliques")
    p.set_defaults(func=_equiv)

    p = sub.add_parser("rigid", parents=[common], help="decide rigidity")
    p.add_argument("file")
    p.set_defaults(func=_rigid)

    p = sub.add_parser("classify", parents=[common], help="recover a forced structure")
    p.add_argument("file")
    p.add_argument("--kind", required=True, choices=["pair", "partition5", "partition6", "cover5"])
    p.add_argument("--other", help="second code for --kind pair")
    p.add_argument("--word", help="covered word for --kind cover5")
    p.set_defaults(func=_classify)

    p = sub.add_parser("enum-covers", parents=[common], help="enumerate twin-pair-free covers of a word")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alphabet")
    p.add_argument("--word",
                   help="covered word (default: the first letter of the second pair everywhere)")
    p.add_argument("--k", type=int)
    p.add_argument("--comp", help="composition, e.g. 2,3,2")
    p.add_argument("--min-index", type=int)
    p.add_argument("--count", action="store_true", help="only count")
    p.add_argument("--table", action="store_true", help="count every composition of 5, 7, 8 and 9 words")
    p.set_defaults(func=_enumCovers)

    p = sub.add_parser("compositions", parents=[common], help="solve the g-value composition equation")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--min-index", type=int, default=1)
    p.set_defaults(func=_compositions)

    keller = sub.add_parser("keller", help="Keller graph commands")
    kellerSub = keller.add_subparsers(dest="kellerCommand", required=True)
    p = kellerSub.add_parser("clique", parents=[common], help="maximum clique of the Keller graph")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alphabet")
    p.add_argument("--certify", action="store_true", help="look for a spread certificate")
    p.set_defaults(func=_kellerClique)

    p = sub.add_parser("siblings", parents=[common], help="check the sibling graph bounds")
    p.add_argument("file")
    p.set_defaults(func=_siblings)

    p = sub.add_parser("spread", parents=[common], help="twin pair of a partition code by spread")
    p.add_argument("file")
    p.add_argument("--coordinate", type=int, default=1)
    p.set_defaults(func=_spread)

    p = sub.add_parser("counterexample", parents=[common],
                       help="search disjoint equivalent twin-pair-free codes")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alphabet")
    p.add_argument("--max-size", type=int)
    p.set_defaults(func=_counterexample)

    p = sub.add_parser("enum-codes", parents=[common], help="twin-pair-free codes up to isomorphism")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alphabet")
    p.add_argument("--max-size", type=int)
    p.add_argument("--rigid", action="store_true", help="decide rigidity of every class")
    p.set_defaults(func=_enumCodes)

    tiling = sub.add_parser("tiling", help="two-periodic tiling commands")
    tilingSub = tiling.add_subparsers(dest="tilingCommand", required=True)
    p = tilingSub.add_parser("validate", parents=[common], help="validate a tiling file")
    p.add_argument("file")
    p.set_defaults(func=_tilingValidate)
    p = tilingSub.add_parser("analyze", parents=[common], help="r-, r+ and twin pairs")
    p.add_argument("file")
    p.add_argument("--point", help="also report L-sets and the local partition at this point")
    p.set_defaults(func=_tilingAnalyze)
    p = tilingSub.add_parser("encode", parents=[common], help="local partition over {a, a', b, b'}")
    p.add_argument("file")
    p.add_argument("--point", required=True, help="sample point, e.g. '3/4 1/4'")
    p.set_defaults(func=_tilingEncode)
    p = tilingSub.add_parser("certify", parents=[common], help="twin pair from spread or small alphabet")
    p.add_argument("file")
    p.set_defaults(func=_tilingCertify)

    generate = sub.add_parser("generate", help="random generators")
    generateSub = generate.add_subparsers(dest="generateCommand", required=True)
    p = generateSub.add_parser("partition", parents=[common], help="random partition code")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alphabet")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=_generatePartition)
    p = generateSub.add_parser("tiling", parents=[common], help="random tiling by column shifts")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shifts", type=int)
    p.add_argument("--output")
    p.set_defaults(func=_generateTiling)
    return parser


def main(argv=None, stream=None):
    """Run ``pbx``; returns the exit code."""
    parser = makeParser()
    args = parser.parse_args(argv)
    logging.basicConfig(format="%(name)s %(levelname)s: %(message)s")
    logging.getLogger("lsst").setLevel(args.log_level)

    report = Report()
    try:
        status = args.func(args, report)
    except (DefectError, TemplateMismatchError) as e:
        _log.error("Defect: %s", e)
        report.add("defect", str(e))
        status = EXIT_FALSE
    except (ValueError, OSError, RuntimeError) as e:
        sys.stderr.write("pbx: error: %s\n" % (e))
        return EXIT_USAGE
    report.emit(asJson=args.json, stream=stream)
    return status


if __name__ == "__main__":
    sys.exit(main())
