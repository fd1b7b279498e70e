"""Exact rational geometry: points, boxes and rectilinear regions.

Everything here is exact. Coordinates are Fractions; numpy is used only for
integer bookkeeping on compressed grids.
"""

import math
from bisect import bisect_left
from collections import defaultdict, deque
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

import numpy as np

from .errors import GeometryError
from .utils import RatLike, parse_rat


@dataclass(frozen=True)
class Point:
    """A point of R^{2n} with rational coordinates."""

    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coords = tuple(parse_rat(c) for c in self.coords)
        if len(coords) < 2 or len(coords) % 2:
            raise GeometryError(
                f"points need an even number (>= 2) of coordinates, got {len(coords)}"
            )
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, *values: RatLike) -> "Point":
        return cls(tuple(parse_rat(v) for v in values))

    @classmethod
    def zero(cls, dim: int) -> "Point":
        return cls(tuple(Fraction(0) for _ in range(dim)))

    @classmethod
    def unit(cls, dim: int, axis: int, length: RatLike = 1) -> "Point":
        """The vector length * e_axis (axis is 0-based)."""
        value = parse_rat(length)
        return cls(
            tuple(value if m == axis else Fraction(0) for m in range(dim))
        )

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)

    def __getitem__(self, axis: int) -> Fraction:
        return self.coords[axis]

    def _check(self, other: "Point") -> None:
        if self.dim != other.dim:
            raise GeometryError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Point") -> "Point":
        self._check(other)
        return Point(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Point") -> "Point":
        self._check(other)
        return Point(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Point":
        return Point(tuple(-a for a in self.coords))

    def scaled(self, factor: RatLike) -> "Point":
        value = parse_rat(factor)
        return Point(tuple(a * value for a in self.coords))

    def norm_sq(self) -> Fraction:
        return sum((a * a for a in self.coords), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def support(self) -> list[int]:
        """Axes with a nonzero coordinate."""
        return [m for m, a in enumerate(self.coords) if a != 0]


@dataclass(frozen=True)
class Box:
    """A closed axis-parallel box [lo, hi] of positive width on every axis."""

    lo: Point
    hi: Point

    def __post_init__(self) -> None:
        if self.lo.dim != self.hi.dim:
            raise GeometryError(
                f"box corners differ in dimension: {self.lo.dim} vs {self.hi.dim}"
            )
        for m, (a, b) in enumerate(zip(self.lo, self.hi)):
            if a >= b:
                raise GeometryError(f"degenerate box on axis {m}: [{a}, {b}]")

    @classmethod
    def from_bounds(cls, bounds: Sequence[tuple[RatLike, RatLike]]) -> "Box":
        return cls(
            Point(tuple(parse_rat(lo) for lo, _ in bounds)),
            Point(tuple(parse_rat(hi) for _, hi in bounds)),
        )

    @classmethod
    def cube(cls, anchor: Point, width: RatLike) -> "Box":
        """The cube anchor + [0, width]^{2n}."""
        value = parse_rat(width)
        return cls(anchor, Point(tuple(a + value for a in anchor)))

    @property
    def dim(self) -> int:
        return self.lo.dim

    @property
    def widths(self) -> tuple[Fraction, ...]:
        return tuple(b - a for a, b in zip(self.lo, self.hi))

    @property
    def area(self) -> Fraction:
        """Lebesgue measure of the box."""
        result = Fraction(1)
        for width in self.widths:
            result *= width
        return result

    @property
    def center(self) -> Point:
        return Point(tuple((a + b) / 2 for a, b in zip(self.lo, self.hi)))

    def bounds(self) -> list[tuple[Fraction, Fraction]]:
        return list(zip(self.lo, self.hi))

    def _check(self, other: "Box") -> None:
        if self.dim != other.dim:
            raise GeometryError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def interior_intersects(self, other: "Box") -> bool:
        self._check(other)
        return all(
            a < d and c < b
            for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi)
        )

    def intersects(self, other: "Box") -> bool:
        """Closed intersection test (touching counts)."""
        self._check(other)
        return all(
            a <= d and c <= b
            for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi)
        )

    def contains_box(self, other: "Box") -> bool:
        self._check(other)
        return all(
            a <= c and d <= b
            for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi)
        )

    def contains_point(self, point: Point) -> bool:
        return all(a <= p <= b for a, b, p in zip(self.lo, self.hi, point))

    def intersection(self, other: "Box") -> Optional["Box"]:
        """The common part, or None when the interiors are disjoint."""
        if not self.interior_intersects(other):
            return None
        return Box(
            Point(tuple(max(a, c) for a, c in zip(self.lo, other.lo))),
            Point(tuple(min(b, d) for b, d in zip(self.hi, other.hi))),
        )

    def translate(self, vector: Point) -> "Box":
        return Box(self.lo + vector, self.hi + vector)

    def hull(self, other: "Box") -> "Box":
        """Smallest box containing both boxes."""
        self._check(other)
        return Box(
            Point(tuple(min(a, c) for a, c in zip(self.lo, other.lo))),
            Point(tuple(max(b, d) for b, d in zip(self.hi, other.hi))),
        )

    def fatten(self, radius: RatLike) -> "Box":
        value = parse_rat(radius)
        return Box(
            Point(tuple(a - value for a in self.lo)),
            Point(tuple(b + value for b in self.hi)),
        )

    def with_axis(self, axis: int, lo: Fraction, hi: Fraction) -> "Box":
        """Copy of the box with the extent on one axis replaced."""
        los = list(self.lo)
        his = list(self.hi)
        los[axis], his[axis] = lo, hi
        return Box(Point(tuple(los)), Point(tuple(his)))

    def subtract(self, other: "Box") -> list["Box"]:
        """
        Split self minus the interior of other into disjoint slabs.

        Args:
            other: Box to remove

        Returns:
            Boxes with pairwise disjoint interiors covering self minus other
        """
        if not self.interior_intersects(other):
            return [self]
        pieces: list[Box] = []
        los = list(self.lo)
        his = list(self.hi)
        for m in range(self.dim):
            if los[m] < other.lo[m]:
                piece_hi = list(his)
                piece_hi[m] = other.lo[m]
                pieces.append(Box(Point(tuple(los)), Point(tuple(piece_hi))))
                los[m] = other.lo[m]
            if other.hi[m] < his[m]:
                piece_lo = list(los)
                piece_lo[m] = other.hi[m]
                pieces.append(Box(Point(tuple(piece_lo)), Point(tuple(his))))
                his[m] = other.hi[m]
        return pieces


def box_distance_sq(a: Box, b: Box) -> Fraction:
    """Squared Euclidean distance between two closed boxes."""
    if a.dim != b.dim:
        raise GeometryError(f"dimension mismatch: {a.dim} vs {b.dim}")
    total = Fraction(0)
    for alo, ahi, blo, bhi in zip(a.lo, a.hi, b.lo, b.hi):
        gap = max(Fraction(0), blo - ahi, alo - bhi)
        total += gap * gap
    return total


def projected_distance_sq(a: Box, b: Box, skip_axis: int) -> Fraction:
    """Squared distance of the projections that forget one axis."""
    total = Fraction(0)
    for m, (alo, ahi, blo, bhi) in enumerate(zip(a.lo, a.hi, b.lo, b.hi)):
        if m == skip_axis:
            continue
        gap = max(Fraction(0), blo - ahi, alo - bhi)
        total += gap * gap
    return total


def neighborhood(box: Box, nu: RatLike) -> Box:
    """Smallest box containing the nu-neighbourhood of a box."""
    value = parse_rat(nu)
    if value < 0:
        raise GeometryError(f"neighbourhood radius must be >= 0, got {value}")
    return box.fatten(value)


def hull_of(boxes: Iterable[Box]) -> Box:
    """Bounding box of a nonempty family of boxes."""
    result: Optional[Box] = None
    for box in boxes:
        result = box if result is None else result.hull(box)
    if result is None:
        raise GeometryError("bounding box of an empty family")
    return result


@dataclass(frozen=True)
class RectilinearRegion:
    """
    A finite union of boxes with pairwise disjoint interiors.

    Construct through from_box/from_boxes or the set operations, which keep
    the cells disjoint. The raw constructor trusts its input.
    """

    cells: tuple[Box, ...] = ()

    @classmethod
    def empty(cls) -> "RectilinearRegion":
        return cls(())

    @classmethod
    def from_box(cls, box: Box) -> "RectilinearRegion":
        return cls((box,))

    @classmethod
    def from_boxes(cls, boxes: Iterable[Box]) -> "RectilinearRegion":
        """Union of arbitrary (possibly overlapping) boxes."""
        boxes = list(boxes)
        if not boxes:
            return cls.empty()
        if len(boxes) == 1:
            return cls((boxes[0],))
        grid = CompressedGrid(hull_of(boxes), boxes)
        return grid.region(grid.coverage(boxes) > 0)

    @property
    def dim(self) -> Optional[int]:
        return self.cells[0].dim if self.cells else None

    @property
    def is_empty(self) -> bool:
        return not self.cells

    @property
    def area(self) -> Fraction:
        return sum((cell.area for cell in self.cells), Fraction(0))

    def __iter__(self) -> Iterator[Box]:
        return iter(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def bounding_box(self) -> Optional[Box]:
        return hull_of(self.cells) if self.cells else None

    def subtract_box(self, box: Box) -> "RectilinearRegion":
        pieces: list[Box] = []
        for cell in self.cells:
            pieces.extend(cell.subtract(box))
        return RectilinearRegion(tuple(pieces))

    def subtract(self, other: "RectilinearRegion") -> "RectilinearRegion":
        result = self
        for box in other.cells:
            if result.interior_intersects_box(box):
                result = result.subtract_box(box)
        return result

    def union(self, other: "RectilinearRegion") -> "RectilinearRegion":
        return RectilinearRegion(self.cells + other.subtract(self).cells)

    def intersect_box(self, box: Box) -> "RectilinearRegion":
        parts = (cell.intersection(box) for cell in self.cells)
        return RectilinearRegion(tuple(p for p in parts if p is not None))

    def intersect(self, other: "RectilinearRegion") -> "RectilinearRegion":
        pieces: list[Box] = []
        for box in other.cells:
            pieces.extend(self.intersect_box(box).cells)
        return RectilinearRegion(tuple(pieces))

    def interior_intersects_box(self, box: Box) -> bool:
        return any(cell.interior_intersects(box) for cell in self.cells)

    def interior_intersects(self, other: "RectilinearRegion") -> bool:
        return any(self.interior_intersects_box(box) for box in other.cells)

    def contains_box(self, box: Box) -> bool:
        """Whether the box lies inside the closed region (exact)."""
        remainder = RectilinearRegion.from_box(box)
        for cell in self.cells:
            if cell.interior_intersects(box):
                remainder = remainder.subtract_box(cell)
                if remainder.is_empty:
                    return True
        return remainder.is_empty

    def contains_region(self, other: "RectilinearRegion") -> bool:
        return all(self.contains_box(box) for box in other.cells)

    def translate(self, vector: Point) -> "RectilinearRegion":
        return RectilinearRegion(tuple(cell.translate(vector) for cell in self.cells))


class CompressedGrid:
    """
    Coordinate-compressed grid spanned by a frame and a family of boxes.

    Every box of the family is an exact union of grid cells inside the frame,
    so counting and flood fills on the grid are exact statements about the
    boxes.
    """

    def __init__(self, frame: Box, boxes: Iterable[Box]):
        self.frame = frame
        breaks: list[set[Fraction]] = [{lo, hi} for lo, hi in frame.bounds()]
        for box in boxes:
            for m, (lo, hi) in enumerate(box.bounds()):
                flo, fhi = frame.lo[m], frame.hi[m]
                if flo < lo < fhi:
                    breaks[m].add(lo)
                if flo < hi < fhi:
                    breaks[m].add(hi)
        self.breaks = [sorted(axis) for axis in breaks]
        self.shape = tuple(len(axis) - 1 for axis in self.breaks)

    def slices(self, box: Box) -> Optional[tuple[slice, ...]]:
        """Index ranges of the cells covered by a box, or None if none are."""
        result = []
        for m, (lo, hi) in enumerate(box.bounds()):
            lo = max(lo, self.frame.lo[m])
            hi = min(hi, self.frame.hi[m])
            if lo >= hi:
                return None
            start = bisect_left(self.breaks[m], lo)
            stop = bisect_left(self.breaks[m], hi)
            result.append(slice(start, stop))
        return tuple(result)

    def coverage(self, boxes: Iterable[Box]) -> np.ndarray:
        """Number of boxes covering each grid cell."""
        counts = np.zeros(self.shape, dtype=np.int64)
        for box in boxes:
            index = self.slices(box)
            if index is not None:
                counts[index] += 1
        return counts

    def cell_box(self, index: Sequence[int]) -> Box:
        return Box(
            Point(tuple(self.breaks[m][i] for m, i in enumerate(index))),
            Point(tuple(self.breaks[m][i + 1] for m, i in enumerate(index))),
        )

    def measure(self, mask: np.ndarray) -> Fraction:
        total = Fraction(0)
        for index in np.argwhere(mask):
            total += self.cell_box(tuple(int(i) for i in index)).area
        return total

    def region(self, mask: np.ndarray) -> RectilinearRegion:
        """Cells selected by the mask, merged into runs along the last axis."""
        cells: list[Box] = []
        last = len(self.shape) - 1
        for index in np.argwhere(mask):
            index = tuple(int(i) for i in index)
            if index[last] > 0 and mask[index[:last] + (index[last] - 1,)]:
                continue
            stop = index[last]
            while stop + 1 < self.shape[last] and mask[index[:last] + (stop + 1,)]:
                stop += 1
            lo = Point(tuple(self.breaks[m][i] for m, i in enumerate(index)))
            hi = Point(
                tuple(self.breaks[m][i + 1] for m, i in enumerate(index[:last]))
                + (self.breaks[last][stop + 1],)
            )
            cells.append(Box(lo, hi))
        return RectilinearRegion(tuple(cells))

    def components(self, mask: np.ndarray) -> list[list[tuple[int, ...]]]:
        """Facet-connected components of the selected cells, in index order."""
        seen = np.zeros(self.shape, dtype=bool)
        found: list[list[tuple[int, ...]]] = []
        for start in np.argwhere(mask):
            start = tuple(int(i) for i in start)
            if seen[start]:
                continue
            seen[start] = True
            queue = deque([start])
            members = []
            while queue:
                current = queue.popleft()
                members.append(current)
                for m in range(len(self.shape)):
                    for step in (-1, 1):
                        j = current[m] + step
                        if not 0 <= j < self.shape[m]:
                            continue
                        neighbour = current[:m] + (j,) + current[m + 1 :]
                        if mask[neighbour] and not seen[neighbour]:
                            seen[neighbour] = True
                            queue.append(neighbour)
            found.append(sorted(members))
        return found

    def touches_frame(self, index: Sequence[int]) -> bool:
        return any(i == 0 or i == n - 1 for i, n in zip(index, self.shape))


@dataclass(frozen=True)
class ComplementComponent:
    """A connected piece of universe minus region."""

    region: RectilinearRegion
    bounded: bool


def complement_components(
    region: RectilinearRegion, universe: Box
) -> list[ComplementComponent]:
    """
    Connected components of universe minus region.

    Components are edge-connected (shared facets of positive measure). A
    component touching the boundary of the universe is tagged unbounded.

    Args:
        region: Region inside the universe
        universe: Enclosing box

    Returns:
        Components in lexicographic order of their first grid cell

    Raises:
        GeometryError: If the region leaves the universe
    """
    for cell in region.cells:
        if not universe.contains_box(cell):
            raise GeometryError("region is not inside the universe")
    grid = CompressedGrid(universe, region.cells)
    free = grid.coverage(region.cells) == 0
    result = []
    for members in grid.components(free):
        mask = np.zeros(grid.shape, dtype=bool)
        for index in members:
            mask[index] = True
        bounded = not any(grid.touches_frame(index) for index in members)
        result.append(ComplementComponent(grid.region(mask), bounded))
    return result


def region_minus_boxes(
    region: RectilinearRegion, boxes: Sequence[Box]
) -> RectilinearRegion:
    """Exact remainder of a region after removing many boxes."""
    frame = region.bounding_box()
    if frame is None:
        return RectilinearRegion.empty()
    grid = CompressedGrid(frame, list(region.cells) + list(boxes))
    inside = grid.coverage(region.cells) > 0
    covered = grid.coverage(boxes) > 0
    return grid.region(inside & ~covered)


class BoxIndex:
    """
    Uniform bucket grid over keyed boxes.

    `query` returns a superset of the keys whose boxes meet a given box;
    callers filter the candidates with an exact test.
    """

    def __init__(self, bucket: RatLike, boxes: Optional[Mapping[str, Box]] = None):
        self.bucket = parse_rat(bucket)
        if self.bucket <= 0:
            raise GeometryError("bucket size must be positive")
        self._buckets: dict[tuple[int, ...], set[str]] = defaultdict(set)
        self._spans: dict[str, list[tuple[int, ...]]] = {}
        for key, box in (boxes or {}).items():
            self.insert(key, box)

    def __len__(self) -> int:
        return len(self._spans)

    def __contains__(self, key: object) -> bool:
        return key in self._spans

    def _span(self, box: Box) -> list[tuple[int, ...]]:
        ranges = [
            range(math.floor(lo / self.bucket), math.floor(hi / self.bucket) + 1)
            for lo, hi in box.bounds()
        ]
        return list(product(*ranges))

    def insert(self, key: str, box: Box) -> None:
        if key in self._spans:
            self.remove(key)
        span = self._span(box)
        self._spans[key] = span
        for bucket in span:
            self._buckets[bucket].add(key)

    def remove(self, key: str) -> None:
        for bucket in self._spans.pop(key):
            members = self._buckets[bucket]
            members.discard(key)
            if not members:
                del self._buckets[bucket]

    def query(self, box: Box) -> set[str]:
        found: set[str] = set()
        for bucket in self._span(box):
            found.update(self._buckets.get(bucket, ()))
        return found
