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
"""Two-periodic cube tilings with half-integer translations.

A tiling ``[0, 1)**d + T + 2Z**d`` is stored by its ``2**d`` translation
vectors in half units (each coordinate in ``0..3``).  Sample points live
on the quarter grid (coordinates in ``0..7`` quarter units): all cube faces
lie on half-integer hyperplanes, so the quarter grid meets every
combinatorial type of point, with odd entries in the open strata.  Local
partitions are cut at generic points only, where every box of the cube
has a proper interval at each coordinate.
"""

from dataclasses import dataclass
from fractions import Fraction
import itertools

import numpy as np

import lsst.pex.config as pexConfig
import lsst.pipe.base as pipeBase
import lsst.utils.logging
from lsst.utils.timer import timeMethod

from .alphabet import Alphabet, Word
from .exceptions import DefectError, PolyboxUsageError, TilingValidationError
from .keller import spreadThreshold
from .polyboxCode import PolyboxCode, findTwinPair
from .siblings import twinPairBySpread

__all__ = ['TwoPeriodicTiling', 'SamplePoint', 'validateTiling', 'latticeTiling', 'meetingTiles',
           'lSet', 'rStats', 'localFamily', 'localPartition', 'encodeSmall', 'findTwinPairInTiling',
           'randomTiling', 'twinPairCertificate', 'TilingAnalysisConfig', 'TilingAnalysisTask']

_log = lsst.utils.logging.getLogger(__name__)


class TwoPeriodicTiling:
    """A validated two-periodic tiling; build it with `validateTiling`.

    Attributes
    ----------
    dim : `int`
    translations : `numpy.ndarray`
       Read-only ``(2**d, d)`` array of half units, rows sorted.
    """
    __slots__ = ('dim', 'translations')

    def __init__(self, dim, translations):
        self.dim = dim
        translations.flags.writeable = False
        self.translations = translations

    def __len__(self):
        return len(self.translations)

    def __eq__(self, other):
        if not isinstance(other, TwoPeriodicTiling):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.translations, other.translations)

    def __repr__(self):
        return "TwoPeriodicTiling(d=%d, %s)" % (self.dim, self.translations.tolist())

    def vector(self, k):
        """Translation ``k`` in real coordinates."""
        return tuple(Fraction(int(h), 2) for h in self.translations[k])


@dataclass(frozen=True)
class SamplePoint:
    """A point of ``[0, 2)**d`` in quarter units."""
    coordinates: tuple

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coordinates)
        for c in coords:
            if not 0 <= c < 8:
                raise PolyboxUsageError("Sample coordinates must lie in 0..7 quarter units, got %s"
                                        % (list(coords)))
        object.__setattr__(self, 'coordinates', coords)

    @classmethod
    def fromValues(cls, values):
        """Point from real coordinates that are multiples of 1/4, reduced modulo 2."""
        quarters = []
        for v in values:
            q = Fraction(v)*4
            if q.denominator != 1:
                raise PolyboxUsageError("%s is not a multiple of 1/4" % (v))
            quarters.append(int(q) % 8)
        return cls(tuple(quarters))

    @property
    def dim(self):
        return len(self.coordinates)

    @property
    def values(self):
        return tuple(Fraction(c, 4) for c in self.coordinates)

    def isGeneric(self):
        """True if no coordinate lies on a face hyperplane."""
        return all(c % 2 == 1 for c in self.coordinates)


def _cells(t):
    """The half-unit grid cells covered by a tile, as index arrays."""
    choices = [((h, (h + 1) % 4)) for h in t]
    return tuple(np.array(c) for c in zip(*itertools.product(*choices)))


def validateTiling(translations, dim=None):
    """Validate translation vectors as a two-periodic tiling.

    Parameters
    ----------
    translations : array-like
       ``2**d`` vectors of half units in ``0..3``.
    dim : `int`, optional
       Expected dimension.

    Returns
    -------
    tiling : `TwoPeriodicTiling`

    Raises
    ------
    TilingValidationError
       Raised on a wrong count, an out-of-range entry, an overlap, a gap or
       a pair violating Keller's condition; ``witness`` names the cell or
       vectors involved.
    """
    arr = np.asarray(translations, dtype=np.int64)
    if arr.ndim != 2:
        if arr.size == 0 and dim is not None:
            arr = arr.reshape(0, dim)
        else:
            raise TilingValidationError("Translations must form a two-dimensional array")
    if dim is None:
        dim = arr.shape[1]
    if dim < 1 or arr.shape[1] != dim:
        raise TilingValidationError("Translations have %d coordinates, expected %d" % (arr.shape[1], dim))
    if len(arr) != 1 << dim:
        raise TilingValidationError("A %d-dimensional tiling needs %d translations, got %d"
                                    % (dim, 1 << dim, len(arr)), witness=len(arr))
    bad = np.nonzero(((arr < 0) | (arr > 3)).any(axis=1))[0]
    if len(bad):
        row = tuple(int(h) for h in arr[bad[0]])
        raise TilingValidationError("Translation %s has entries outside 0..3 half units" % (row, ),
                                    witness=row)

    counts = np.zeros((4,)*dim, dtype=np.int64)
    owner = np.full((4,)*dim, -1, dtype=np.int64)
    for k, t in enumerate(arr):
        cells = _cells(t)
        hit = counts[cells] > 0
        if hit.any():
            cell = tuple(int(c[np.argmax(hit)]) for c in cells)
            other = tuple(int(h) for h in arr[owner[cell]])
            raise TilingValidationError("Tiles %s and %s overlap in cell %s"
                                        % (other, tuple(int(h) for h in t), cell),
                                        witness=(other, tuple(int(h) for h in t)))
        counts[cells] += 1
        owner[cells] = k
    if (counts == 0).any():
        cell = tuple(int(c) for c in np.argwhere(counts == 0)[0])
        raise TilingValidationError("Cell %s is not covered" % (cell, ), witness=cell)

    # distinct tiles must differ by an odd integer at some coordinate
    diff = (arr[:, np.newaxis, :] - arr[np.newaxis, :, :]) % 4
    keller = (diff == 2).any(axis=2)
    np.fill_diagonal(keller, True)
    if not keller.all():
        a, b = (int(x) for x in np.argwhere(~keller)[0])
        pair = (tuple(int(h) for h in arr[a]), tuple(int(h) for h in arr[b]))
        raise TilingValidationError("Tiles %s and %s violate Keller's condition" % pair, witness=pair)

    order = np.lexsort(arr.T[::-1])
    return TwoPeriodicTiling(dim, arr[order].copy())


def latticeTiling(dim):
    """The lattice tiling by ``Z**d``."""
    return validateTiling(list(itertools.product((0, 2), repeat=dim)), dim=dim)


def _offsets(tiling, points):
    """Nearest periodic offsets of every tile from every point.

    Returns
    -------
    offsets : `numpy.ndarray`
       ``(P, n, d)`` quarter-unit offsets ``t - x`` of the periodic copy
       closest to each point, in ``-4..3``.
    meets : `numpy.ndarray`
       ``(P, n)`` mask of tiles whose cube overlaps the cube at the point
       in a set of positive volume.
    """
    q = 2*tiling.translations.astype(np.int64)
    diff = q[np.newaxis, :, :] - np.asarray(points, dtype=np.int64)[:, np.newaxis, :]
    offsets = (diff + 4) % 8 - 4
    meets = (offsets != -4).all(axis=2)
    return offsets, meets


def _checkPoint(tiling, x):
    if not isinstance(x, SamplePoint):
        x = SamplePoint(tuple(x))
    if x.dim != tiling.dim:
        raise PolyboxUsageError("Sample point of dimension %d for a tiling of dimension %d"
                                % (x.dim, tiling.dim))
    return x


def meetingTiles(tiling, x):
    """Tiles meeting the cube at ``x``.

    Returns
    -------
    tiles : `list` [`tuple`]
       ``(k, position)`` for each tile ``k``, with ``position`` the
       quarter-unit corner of the periodic copy that meets the cube.
    """
    x = _checkPoint(tiling, x)
    offsets, meets = _offsets(tiling, [x.coordinates])
    base = np.array(x.coordinates, dtype=np.int64)
    return [(int(k), tuple(int(c) for c in base + offsets[0, k])) for k in np.nonzero(meets[0])[0]]


def lSet(tiling, x, i):
    """The i-th corner coordinates of the tiles meeting the cube at ``x`` from below.

    Parameters
    ----------
    tiling : `TwoPeriodicTiling`
    x : `SamplePoint`
    i : `int`
       Coordinate (0-based).

    Returns
    -------
    values : `frozenset` [`fractions.Fraction`]
    """
    x = _checkPoint(tiling, x)
    if not 0 <= i < tiling.dim:
        raise PolyboxUsageError("Coordinate %d out of range for dimension %d" % (i, tiling.dim))
    return frozenset(Fraction(position[i], 4) for _, position in meetingTiles(tiling, x)
                     if position[i] <= x.coordinates[i])


def _lSizes(tiling, points, chunk=4096):
    """``|L(T, x, i)|`` for every point and coordinate, shape ``(P, d)``."""
    points = np.asarray(points, dtype=np.int64).reshape(-1, tiling.dim)
    out = np.zeros(points.shape, dtype=np.int64)
    for start in range(0, len(points), chunk):
        offsets, meets = _offsets(tiling, points[start:start + chunk])
        for value in range(-3, 1):
            out[start:start + chunk] += ((offsets == value) & meets[:, :, np.newaxis]).any(axis=1)
    return out


def _allPoints(dim, genericOnly=False):
    values = range(1, 8, 2) if genericOnly else range(8)
    return np.array(list(itertools.product(values, repeat=dim)), dtype=np.int64).reshape(-1, dim)


def rStats(tiling, genericOnly=False):
    """The least and largest over sample points of ``max_i |L(T, x, i)|``.

    Parameters
    ----------
    tiling : `TwoPeriodicTiling`
    genericOnly : `bool`, optional
       Sweep only the points off every face hyperplane.

    Returns
    -------
    result : `lsst.pipe.base.Struct`
       ``rMinus``, ``rPlus``, and points attaining them, ``minPoint`` and
       ``maxPoint`` (the first in lexicographic order).
    """
    points = _allPoints(tiling.dim, genericOnly=genericOnly)
    widths = _lSizes(tiling, points).max(axis=1)
    lo, hi = int(np.argmin(widths)), int(np.argmax(widths))
    return pipeBase.Struct(rMinus=int(widths[lo]), rPlus=int(widths[hi]),
                           minPoint=SamplePoint(tuple(points[lo])),
                           maxPoint=SamplePoint(tuple(points[hi])))


def _checkGeneric(tiling, x):
    x = _checkPoint(tiling, x)
    if not x.isGeneric():
        raise PolyboxUsageError("The point %s lies on a face hyperplane; local partitions are "
                                "taken at points with odd quarter-unit coordinates" % (_formatPoint(x)))
    return x


def localFamily(tiling, x):
    """Words of the boxes cut from the cube at ``x`` by the tiles meeting it.

    At each coordinate the cut points inside the cube are ranked; the box
    below cut ``j`` gets letter ``2j`` and the box above it ``2j + 1``.

    Parameters
    ----------
    tiling : `TwoPeriodicTiling`
    x : `SamplePoint`
       Generic point (no coordinate on a face hyperplane).

    Returns
    -------
    family : `list` [`tuple`]
       ``(word, position)`` pairs, ``position`` being the quarter-unit
       corner of the meeting tile.
    nPairs : `list` [`int`]
       Number of cut points at each coordinate, equal to ``|L(T, x, i)|``.

    Raises
    ------
    PolyboxUsageError
       Raised if ``x`` is not generic.
    """
    x = _checkGeneric(tiling, x)
    tiles = meetingTiles(tiling, x)
    cuts = [set() for _ in range(tiling.dim)]
    for _, position in tiles:
        for i, p in enumerate(position):
            cuts[i].add(p + 4 if p < x.coordinates[i] else p)
    rank = [{c: j for j, c in enumerate(sorted(cs))} for cs in cuts]
    family = []
    for _, position in tiles:
        word = [2*rank[i][p + 4] if p < x.coordinates[i] else 2*rank[i][p] + 1
                for i, p in enumerate(position)]
        family.append((Word(word), position))
    return family, [len(cs) for cs in cuts]


def localPartition(tiling, x):
    """The partition code of the ``2**d`` boxes cut from the cube at ``x``.

    Raises
    ------
    PolyboxUsageError
       Raised if ``x`` is not generic.
    DefectError
       Raised if the boxes do not form a partition code of ``2**d`` words.
    """
    family, nPairs = localFamily(tiling, x)
    alphabet = Alphabet.ofSize(max(nPairs))
    try:
        code = PolyboxCode(alphabet, [w for w, _ in family], dim=tiling.dim)
    except ValueError as e:
        raise DefectError("Boxes cut at %s do not form a polybox code: %s" % (x, e)) from e
    if len(code) != 1 << tiling.dim:
        raise DefectError("%d boxes cut at %s, expected %d" % (len(code), x, 1 << tiling.dim))
    return code


def encodeSmall(tiling, x):
    """The local partition at ``x`` over the alphabet ``{a, a', b, b'}``.

    Raises
    ------
    PolyboxUsageError
       Raised if ``x`` is not generic or some coordinate has more than two
       cut points.
    """
    family, nPairs = localFamily(tiling, x)
    wide = [i for i, n in enumerate(nPairs) if n > 2]
    if wide:
        raise PolyboxUsageError("|L(T, x, %d)| exceeds 2 at x = %s" % (wide[0] + 1, _formatPoint(x)))
    return PolyboxCode(Alphabet.fromBaseNames(["a", "b"]), [w for w, _ in family], dim=tiling.dim)


def _formatPoint(x):
    return "(%s)" % (", ".join(str(v) for v in x.values))


def _isTwinVectors(p, q):
    diff = [abs(a - b) for a, b in zip(p, q)]
    return sorted(diff)[-1] == 4 and sum(1 for c in diff if c) == 1


def _tilePair(family, pair):
    lookup = {w: position for w, position in family}
    p, q = lookup[pair[0]], lookup[pair[1]]
    if not _isTwinVectors(p, q):
        raise DefectError("Twin words %s, %s come from tiles that share no facet" % pair)
    return (tuple(Fraction(c, 4) for c in p), tuple(Fraction(c, 4) for c in q))


def findTwinPairInTiling(tiling):
    """A pair of tiles sharing a complete facet.

    Local partitions are searched at every generic sample point in
    lexicographic order; a twin pair of tiles shows up as a twin pair of
    words at the points whose cube straddles the shared facet.

    Returns
    -------
    pair : `tuple` or None
       Two corner vectors in real coordinates (periodic copies chosen to
       touch), or None if no local partition has a twin pair.
    """
    for point in _allPoints(tiling.dim, genericOnly=True):
        x = SamplePoint(tuple(point))
        family, nPairs = localFamily(tiling, x)
        code = PolyboxCode(Alphabet.ofSize(max(nPairs)), [w for w, _ in family],
                           dim=tiling.dim, validate=False)
        pair = findTwinPair(code)
        if pair is not None:
            return _tilePair(family, pair)
    return None


def randomTiling(dim, seed, nShifts=None):
    """A random tiling obtained from the lattice by shifting columns.

    A column along axis ``k`` is a pair of tiles with equal coordinates
    off ``k`` and ``k``-coordinates two half units apart; it fills a prism
    and may be moved along ``k`` by any number of half units.

    Parameters
    ----------
    dim : `int`
    seed : `int`
    nShifts : `int`, optional
       Number of attempted shifts, ``2*dim`` by default.
    """
    if dim < 1:
        raise PolyboxUsageError("Dimension must be positive, got %d" % (dim))
    rng = np.random.default_rng(seed)
    if nShifts is None:
        nShifts = 2*dim
    arr = np.array(list(itertools.product((0, 2), repeat=dim)), dtype=np.int64)
    for _ in range(nShifts):
        k = int(rng.integers(dim))
        others = [i for i in range(dim) if i != k]
        groups = {}
        for row, t in enumerate(arr):
            groups.setdefault(tuple(t[others]), []).append(row)
        columns = [rows for rows in groups.values()
                   if len(rows) == 2 and (arr[rows[0], k] - arr[rows[1], k]) % 4 == 2]
        if not columns:
            continue
        rows = columns[int(rng.integers(len(columns)))]
        arr[rows, k] = (arr[rows, k] + int(rng.integers(1, 4))) % 4
    return validateTiling(arr, dim=dim)


def twinPairCertificate(tiling):
    """Explain why a tiling has a twin pair, when a known argument applies.

    With more than ``2**(d-3)/3`` cut points at some coordinate of a
    generic point, the local partition there has a twin pair by the
    spread argument.  Otherwise, at a generic point with at most two cut
    points per coordinate the local partition is a ``2**d``-word code over
    ``{a, a', b, b'}``, which has a twin pair whenever the Keller graph has
    no clique of size ``2**d``.

    Returns
    -------
    result : `lsst.pipe.base.Struct`
       ``route`` (``"spread"``, ``"small-alphabet"`` or ``"open"``),
       ``point``, ``coordinate`` (spread route only) and ``pair`` (two tile
       corners, or None).
    """
    d = tiling.dim
    points = _allPoints(d, genericOnly=True)
    sizes = _lSizes(tiling, points)
    widths = sizes.max(axis=1)
    hi = int(np.argmax(widths))
    if int(widths[hi]) > spreadThreshold(d):
        x = SamplePoint(tuple(points[hi]))
        i = int(np.argmax(sizes[hi]))
        family, _ = localFamily(tiling, x)
        pair = twinPairBySpread(localPartition(tiling, x), i)
        _log.debug("Spread route at %s, coordinate %d", _formatPoint(x), i + 1)
        return pipeBase.Struct(route="spread", point=x, coordinate=i, pair=_tilePair(family, pair))
    lo = int(np.argmin(widths))
    if int(widths[lo]) <= 2:
        x = SamplePoint(tuple(points[lo]))
        family, _ = localFamily(tiling, x)
        pair = findTwinPair(encodeSmall(tiling, x))
        if pair is None:
            _log.warning("The local partition at %s is a twin-pair-free code over {a, a', b, b'}",
                         _formatPoint(x))
            return pipeBase.Struct(route="small-alphabet", point=x, coordinate=None, pair=None)
        return pipeBase.Struct(route="small-alphabet", point=x, coordinate=None,
                               pair=_tilePair(family, pair))
    return pipeBase.Struct(route="open", point=None, coordinate=None, pair=None)


class TilingAnalysisConfig(pexConfig.Config):
    """Config for TilingAnalysisTask"""

    doTwinPairSearch = pexConfig.Field(
        doc="Search the local partitions for a twin pair?",
        dtype=bool,
        default=True,
    )
    doCertificate = pexConfig.Field(
        doc="Derive a twin pair from the spread or small-alphabet argument?",
        dtype=bool,
        default=False,
    )


class TilingAnalysisTask(pipeBase.Task):
    """
    Compute ``r-``, ``r+`` and twin pairs of a two-periodic tiling.
    """

    ConfigClass = TilingAnalysisConfig
    _DefaultName = "tilingAnalysis"

    @timeMethod
    def run(self, tiling):
        """
        Analyze a tiling.

        Parameters
        ----------
        tiling : `TwoPeriodicTiling`

        Returns
        -------
        result : `lsst.pipe.base.Struct`
           ``rMinus``, ``rPlus``, ``minPoint``, ``maxPoint``, ``twinPair``
           (None if not searched or not found) and ``certificate`` (None
           unless ``doCertificate``).
        """
        stats = rStats(tiling)
        self.log.info("r- = %d, r+ = %d", stats.rMinus, stats.rPlus)
        if not 1 <= stats.rMinus <= stats.rPlus <= 1 << (tiling.dim - 1):
            raise DefectError("r- = %d, r+ = %d outside [1, 2**(d-1)]" % (stats.rMinus, stats.rPlus))
        twinPair = None
        if self.config.doTwinPairSearch:
            twinPair = findTwinPairInTiling(tiling)
            if twinPair is None:
                self.log.warning("No twin pair in any local partition")
            else:
                self.log.info("Twin pair %s, %s", *twinPair)
        certificate = None
        if self.config.doCertificate:
            certificate = twinPairCertificate(tiling)
            self.log.info("Certificate route: %s", certificate.route)
        return pipeBase.Struct(rMinus=stats.rMinus, rPlus=stats.rPlus, minPoint=stats.minPoint,
                               maxPoint=stats.maxPoint, twinPair=twinPair, certificate=certificate)
