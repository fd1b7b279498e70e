"""Dimension covers of R^{2n} by k families of lattice cubes."""

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

from ..errors import ParameterError
from ..geometry import (
    Box,
    CompressedGrid,
    Point,
    RectilinearRegion,
    projected_distance_sq,
)
from ..log import get_logger
from ..utils import common_denominator, exact_sqrt

logger = get_logger(__name__)


@dataclass(frozen=True)
class CoverMatrix:
    """Upper bidiagonal lattice matrix with diagonal (k, 1, ..., 1)."""

    n: int
    k: int
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def size(self) -> int:
        return 2 * self.n

    def apply(self, vector: Sequence[int]) -> tuple[Fraction, ...]:
        size = self.size
        return tuple(
            self.entries[r][r] * vector[r]
            + (self.entries[r][r + 1] * vector[r + 1] if r + 1 < size else 0)
            for r in range(size)
        )


@dataclass(frozen=True)
class LatticeCube:
    """One cube of colour `color`, lattice index `index`, side `scale`."""

    color: int
    index: tuple[int, ...]
    scale: Fraction
    anchor: Point

    @property
    def box(self) -> Box:
        return Box.cube(self.anchor, self.scale)


@dataclass(frozen=True)
class DimensionCover:
    """The k colour classes of translated lattice cubes."""

    matrix: CoverMatrix
    delta: Fraction
    periods: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def k(self) -> int:
        return self.matrix.k

    @property
    def dim(self) -> int:
        return self.matrix.size

    def check_color(self, color: int) -> None:
        if not 1 <= color <= self.k:
            raise ParameterError(f"colour must be in 1..{self.k}, got {color}")

    def anchor(
        self,
        color: int,
        index: Sequence[int],
        scale: Fraction = Fraction(1),
        origin: Optional[Point] = None,
    ) -> Point:
        """Anchor d * (M v + (j - 1) e_1) + origin."""
        raw = list(self.matrix.apply(index))
        raw[0] += color - 1
        coords = tuple(scale * value for value in raw)
        point = Point(coords)
        return point if origin is None else point + origin

    def cube(
        self,
        color: int,
        index: Sequence[int],
        scale: Fraction = Fraction(1),
        origin: Optional[Point] = None,
    ) -> LatticeCube:
        self.check_color(color)
        return LatticeCube(
            color, tuple(index), scale, self.anchor(color, index, scale, origin)
        )


def build_cover(n: int, k: int) -> DimensionCover:
    """
    Build the dimension cover for R^{2n} with k colours.

    Args:
        n: Half dimension
        k: Number of colours, at least 2n + 1

    Returns:
        The cover with its matrix, gap delta and axis periods

    Raises:
        ParameterError: If n < 1 or k <= 2n (no positive gap)
    """
    if n < 1:
        raise ParameterError(f"half dimension must be positive, got {n}")
    size = 2 * n
    if k <= size:
        raise ParameterError(f"no positive gap: k must be at least {size + 1}")
    rows = [[Fraction(0)] * size for _ in range(size)]
    rows[0][0] = Fraction(k)
    for r in range(1, size):
        rows[r][r] = Fraction(1)
    rows[0][1] = Fraction(k, size)
    for r in range(1, size - 1):
        rows[r][r + 1] = Fraction(size - r + 1, size - r)
    matrix = CoverMatrix(n, k, tuple(tuple(row) for row in rows))
    delta = min(Fraction(k - size, size), Fraction(1, size - 1))
    periods = (k,) + tuple(size - m + 2 for m in range(2, size + 1))
    return DimensionCover(matrix, delta, periods)


def enumerate_cubes(
    cover: DimensionCover,
    color: int,
    window: Box,
    scale: Fraction = Fraction(1),
    origin: Optional[Point] = None,
) -> list[LatticeCube]:
    """
    All cubes of one colour whose closed box meets the window.

    Indices are solved by back substitution through the bidiagonal matrix,
    so no candidate outside the window is ever generated.

    Returns:
        Cubes sorted lexicographically by lattice index
    """
    cover.check_color(color)
    scale = Fraction(scale)
    if scale <= 0:
        raise ParameterError(f"scale must be positive, got {scale}")
    size = cover.dim
    if window.dim != size:
        raise ParameterError(f"window must have dimension {size}")
    offset = origin if origin is not None else Point.zero(size)
    lower = []
    upper = []
    for m in range(size):
        shift = color - 1 if m == 0 else 0
        lower.append((window.lo[m] - offset[m]) / scale - 1 - shift)
        upper.append((window.hi[m] - offset[m]) / scale - shift)

    entries = cover.matrix.entries
    found: list[tuple[int, ...]] = []

    def solve(m: int, tail: tuple[int, ...]) -> None:
        if m < 0:
            found.append(tail)
            return
        coupling = entries[m][m + 1] * tail[0] if m + 1 < size else Fraction(0)
        diag = entries[m][m]
        start = -((coupling - lower[m]) // diag)
        stop = (upper[m] - coupling) // diag
        for value in range(int(start), int(stop) + 1):
            solve(m - 1, (value,) + tail)

    solve(size - 1, ())
    found.sort()
    return [cover.cube(color, index, scale, origin) for index in found]


def _integer_boxes(
    cubes: Sequence[LatticeCube],
) -> tuple[int, list[tuple[tuple[int, ...], tuple[int, ...]]]]:
    values = [c for cube in cubes for c in cube.anchor] + [
        cube.scale for cube in cubes
    ]
    denominator = common_denominator(values)
    boxes = []
    for cube in cubes:
        lo = tuple(int(c * denominator) for c in cube.anchor)
        width = int(cube.scale * denominator)
        boxes.append((lo, tuple(a + width for a in lo)))
    return denominator, boxes


@dataclass
class GapReport:
    """Minimal same-colour distance inside a window."""

    color: int
    cube_count: int
    min_gap_sq: Fraction
    expected: Fraction
    passed: bool

    @property
    def min_gap(self) -> Optional[Fraction]:
        return exact_sqrt(self.min_gap_sq)


def verify_gap(
    cover: DimensionCover,
    color: int,
    window: Box,
    scale: Fraction = Fraction(1),
) -> GapReport:
    """
    Exact minimum distance between distinct same-colour cubes in a window.

    Only cubes lying entirely inside the window take part. The comparison
    against delta * scale is an exact equality.

    Raises:
        ParameterError: If fewer than two cubes fit into the window
    """
    cubes = [
        cube
        for cube in enumerate_cubes(cover, color, window, scale)
        if window.contains_box(cube.box)
    ]
    if len(cubes) < 2:
        raise ParameterError("window too small: fewer than two cubes inside")
    denominator, boxes = _integer_boxes(cubes)
    boxes.sort()
    best: Optional[int] = None
    for i, (alo, ahi) in enumerate(boxes):
        for blo, bhi in boxes[i + 1 :]:
            lead = blo[0] - ahi[0]
            if best is not None and lead > 0 and lead * lead >= best:
                break
            total = 0
            for a0, a1, b0, b1 in zip(alo, ahi, blo, bhi):
                gap = max(0, b0 - a1, a0 - b1)
                total += gap * gap
            if best is None or total < best:
                best = total
    assert best is not None
    min_gap_sq = Fraction(best, denominator * denominator)
    expected = cover.delta * Fraction(scale)
    passed = min_gap_sq == expected * expected
    logger.info(
        "gap check colour %d: %d cubes, min gap^2 %s, expected %s",
        color,
        len(cubes),
        min_gap_sq,
        expected,
    )
    return GapReport(color, len(cubes), min_gap_sq, expected, passed)


@dataclass
class CoverageReport:
    """Result of the covering and interior disjointness check."""

    covered: bool
    remainder: RectilinearRegion
    interior_overlap_pairs: int
    cube_count: int

    @property
    def remainder_area(self) -> Fraction:
        return self.remainder.area


def verify_covering_and_disjointness(
    cover: DimensionCover,
    window: Box,
    scale: Fraction = Fraction(1),
) -> CoverageReport:
    """
    Check that all colours together cover the window with disjoint interiors.

    The window is cut along every cube face; a grid cell is uncovered exactly
    when no cube contains it, so the remainder region is exact.
    """
    cubes: list[LatticeCube] = []
    for color in range(1, cover.k + 1):
        cubes.extend(enumerate_cubes(cover, color, window, scale))
    boxes = [cube.box for cube in cubes]
    grid = CompressedGrid(window, boxes)
    counts = grid.coverage(boxes)
    remainder = grid.region(counts == 0)
    overlaps = 0
    if counts.size and int(counts.max()) > 1:
        overlaps = _count_overlaps(cubes)
    logger.info(
        "cover check: %d cubes, remainder area %s, %d overlapping pairs",
        len(cubes),
        remainder.area,
        overlaps,
    )
    return CoverageReport(remainder.is_empty, remainder, overlaps, len(cubes))


def _count_overlaps(cubes: Sequence[LatticeCube]) -> int:
    _, boxes = _integer_boxes(cubes)
    boxes.sort()
    count = 0
    for i, (alo, ahi) in enumerate(boxes):
        for blo, bhi in boxes[i + 1 :]:
            if blo[0] >= ahi[0]:
                break
            if all(
                a0 < b1 and b0 < a1 for a0, a1, b0, b1 in zip(alo, ahi, blo, bhi)
            ):
                count += 1
    return count


@dataclass
class CylinderReport:
    """Cubes met by the cylinder over a cube versus its periodic translates."""

    axis: int
    period: int
    passed: bool
    found: list[tuple[int, ...]] = field(default_factory=list)
    expected: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def unexpected(self) -> list[tuple[int, ...]]:
        return sorted(set(self.found) - set(self.expected))

    @property
    def missing(self) -> list[tuple[int, ...]]:
        return sorted(set(self.expected) - set(self.found))


def _meets_open_slab(base: Box, other: Box, axis: int) -> bool:
    return all(
        b0 < a1 and b1 > a0
        for m, (a0, a1, b0, b1) in enumerate(zip(base.lo, base.hi, other.lo, other.hi))
        if m != axis
    )


def verify_cylinder_law(
    cover: DimensionCover,
    color: int,
    cube: LatticeCube,
    axis: int,
    window: Box,
) -> CylinderReport:
    """
    Compare the cubes met by a cylinder over `cube` with its axis translates.

    For axis 1 the cylinder is over the open cube; for axes m >= 2 it is over
    the open delta-neighbourhood. The law holds when the cubes met are exactly
    the translates of `cube` by multiples of the axis period.

    Args:
        cover: The dimension cover
        color: Colour of `cube`
        cube: The base cube
        axis: Axis m, 1-based
        window: Finite window of the lattice to inspect

    Raises:
        ParameterError: If the axis is out of range, the cube has another
            colour, or the window holds fewer than two translates
    """
    cover.check_color(color)
    if not 1 <= axis <= cover.dim:
        raise ParameterError(f"axis must be in 1..{cover.dim}, got {axis}")
    if cube.color != color:
        raise ParameterError(f"cube has colour {cube.color}, not {color}")
    m = axis - 1
    period = cover.periods[m]
    base = cube.box
    step = period * cube.scale
    radius_sq = (cover.delta * cube.scale) ** 2
    found = []
    expected = []
    for other in enumerate_cubes(cover, color, window, cube.scale):
        box = other.box
        if m == 0:
            meets = _meets_open_slab(base, box, m)
        else:
            meets = projected_distance_sq(base, box, m) < radius_sq
        if meets:
            found.append(other.index)
        shift = other.anchor - cube.anchor
        if shift.support() in ([], [m]) and (shift[m] / step).denominator == 1:
            expected.append(other.index)
    if len(expected) < 2:
        raise ParameterError("window must contain several periods along the axis")
    passed = sorted(found) == sorted(expected)
    logger.info(
        "cylinder check axis %d: %d cubes met, %d translates, passed=%s",
        axis,
        len(found),
        len(expected),
        passed,
    )
    return CylinderReport(axis, period, passed, sorted(found), sorted(expected))


def default_window(cover: DimensionCover, scale: Fraction = Fraction(1)) -> Box:
    """The window [0, 4k/n * scale]^{2n} used when none is given."""
    side = Fraction(4 * cover.k, cover.n) * scale
    return Box.from_bounds([(0, side)] * cover.dim)


def default_cylinder_window(
    cover: DimensionCover,
    cube: LatticeCube,
    axis: int,
    periods: int = 4,
    reach: Optional[Fraction] = None,
) -> Box:
    """
    Window for the cylinder check around `cube`.

    Along the axis it spans `periods` periods each way, or `reach` past the
    cube on both sides when given. Axes before it get one cube side of
    slack. Axes after it are kept inside the middle half of the cube: cubes
    stacked across a later-axis facet touch the cylinder at distance zero,
    so they are excluded from the inspected slab.
    """
    m = axis - 1
    d = cube.scale
    bounds = []
    if reach is None:
        reach = periods * cover.periods[m] * d
    if reach <= 0:
        raise ParameterError("the cylinder must reach past the cube")
    for i, (lo, hi) in enumerate(cube.box.bounds()):
        if i == m:
            bounds.append((lo - reach, hi + reach))
        elif i < m or m == 0:
            bounds.append((lo - d, hi + d))
        else:
            bounds.append((lo + d / 4, hi - d / 4))
    return Box.from_bounds(bounds)


def pairwise_interior_disjoint(boxes: Sequence[Box]) -> bool:
    """Brute-force interior disjointness of a small family."""
    return not any(a.interior_intersects(b) for a, b in combinations(boxes, 2))
