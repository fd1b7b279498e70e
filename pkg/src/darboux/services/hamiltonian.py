"""Compactly supported Hamiltonian translation of a box."""

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ..errors import ParameterError
from ..geometry import Box, Point
from ..log import get_logger
from ..models.reports import TranslationReport

logger = get_logger(__name__)

DEFAULT_STEPS = 1000
FD_STEP = 1e-6


@dataclass(frozen=True)
class BumpProfile:
    """Smoothstep f with f = 1 on [0, inner] and f = 0 on [outer, inf)."""

    inner: Fraction
    outer: Fraction

    def __post_init__(self) -> None:
        if not 0 < self.inner < self.outer:
            raise ParameterError(
                f"need 0 < inner < outer, got {self.inner} and {self.outer}"
            )

    def _ramp(self, s: np.ndarray) -> np.ndarray:
        inner, outer = float(self.inner), float(self.outer)
        return np.clip((s - inner) / (outer - inner), 0.0, 1.0)

    def value(self, s: np.ndarray) -> np.ndarray:
        t = self._ramp(s)
        return 1.0 - t * t * (3.0 - 2.0 * t)

    def slope(self, s: np.ndarray) -> np.ndarray:
        t = self._ramp(s)
        return -6.0 * t * (1.0 - t) / float(self.outer - self.inner)


def complex_structure(v: np.ndarray) -> np.ndarray:
    """Apply J(x, y) = (-y, x) to every (x_i, y_i) pair along the last axis."""
    out = np.empty_like(v)
    out[..., 0::2] = -v[..., 1::2]
    out[..., 1::2] = v[..., 0::2]
    return out


@dataclass(frozen=True)
class TranslationField:
    """
    Hamiltonian field moving `core` to `core + shift` inside a box.

    H(z) = f(z) <z - c, -J q> where f is the bump profile applied to the
    distance from the hull of core and its translate, and c is the hull
    center. On the hull the field is exactly q; beyond `outer` it vanishes.
    """

    core: Box
    shift: Point
    profile: BumpProfile

    def __post_init__(self) -> None:
        if self.core.dim != self.shift.dim:
            raise ParameterError("core and shift differ in dimension")

    @property
    def hull(self) -> Box:
        return self.core.hull(self.core.translate(self.shift))

    @property
    def support(self) -> Box:
        """The box U outside which the flow is the identity."""
        return self.hull.fatten(self.profile.outer)

    def _distance(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        hull = self.hull
        lo = np.array([float(c) for c in hull.lo])
        hi = np.array([float(c) for c in hull.hi])
        offset = z - np.clip(z, lo, hi)
        return np.linalg.norm(offset, axis=-1), offset

    def velocity(self, z: np.ndarray) -> np.ndarray:
        """X_H = f q + <z - c, -J q> J grad f at each row of z."""
        q = np.array([float(c) for c in self.shift])
        center = np.array([float(c) for c in self.hull.center])
        dist, offset = self._distance(z)
        f = self.profile.value(dist)
        slope = self.profile.slope(dist)
        safe = np.where(dist > 0, dist, 1.0)
        grad_f = (slope / safe)[..., None] * offset
        pairing = (z - center) @ (-complex_structure(q))
        return f[..., None] * q + pairing[..., None] * complex_structure(grad_f)

    def is_idle(self, z: np.ndarray) -> np.ndarray:
        """Rows where the field vanishes identically."""
        dist, _ = self._distance(z)
        return dist >= float(self.profile.outer)


def flow(field: TranslationField, points: np.ndarray, steps: int) -> np.ndarray:
    """
    Time-1 map of the field by fixed-step RK4, applied to many points.

    Points where the field vanishes are returned unchanged.
    """
    if steps < 1:
        raise ParameterError(f"steps must be >= 1, got {steps}")
    z = np.array(points, dtype=float, copy=True)
    if field.shift.is_zero():
        return z
    idle = field.is_idle(z)
    z[~idle] = _advance(field, z[~idle], steps, steps)
    return z


def translate_flow(
    field: TranslationField, z: Sequence[float], steps: int = DEFAULT_STEPS
) -> np.ndarray:
    """Image of one point under the time-1 map."""
    return flow(field, np.array([z], dtype=float), steps)[0]


def _grid_points(sample: Box, grid: int) -> np.ndarray:
    axes = [np.linspace(float(lo), float(hi), grid) for lo, hi in sample.bounds()]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def area_distortion_check(
    field: TranslationField,
    sample: Box,
    grid: int,
    steps: int = DEFAULT_STEPS,
    step: float = FD_STEP,
) -> float:
    """
    Largest |det D(phi) - 1| over a grid of the sample box.

    The Jacobian is taken by central differences of the RK4 map.
    """
    if grid < 2:
        raise ParameterError(f"grid must be >= 2, got {grid}")
    points = _grid_points(sample, grid)
    dim = points.shape[1]
    shifted = []
    for axis in range(dim):
        e = np.zeros(dim)
        e[axis] = step
        shifted.append(points + e)
        shifted.append(points - e)
    images = flow(field, np.concatenate(shifted), steps).reshape(
        2 * dim, len(points), dim
    )
    columns = [(images[2 * a] - images[2 * a + 1]) / (2 * step) for a in range(dim)]
    jacobians = np.stack(columns, axis=-1)
    deviation = np.abs(np.linalg.det(jacobians) - 1.0)
    return float(deviation.max())


def demo_field() -> TranslationField:
    """K = [0,1]^2 moved by q = (0, 2) with a generous support."""
    return TranslationField(
        core=Box.from_bounds([(0, 1), (0, 1)]),
        shift=Point.of(0, 2),
        profile=BumpProfile(Fraction(1, 4), Fraction(1)),
    )


def run_translation_checks(
    field: Optional[TranslationField] = None,
    steps: int = DEFAULT_STEPS,
    grid: int = 21,
    endpoint_tolerance: float = 1e-6,
    jacobian_tolerance: float = 1e-3,
) -> TranslationReport:
    """Endpoint, identity and area checks for a translation field."""
    field = field or demo_field()
    core_points = _grid_points(field.core, grid)
    q = np.array([float(c) for c in field.shift])
    images = flow(field, core_points, steps)
    endpoint_error = float(np.abs(images - (core_points + q)).max())

    outside = _grid_points(field.support.fatten(1), 5)
    outside = outside[field.is_idle(outside)]
    identity = bool(np.array_equal(flow(field, outside, steps), outside))

    core_dev = area_distortion_check(field, field.core, 5, steps)
    margin = (field.profile.inner + field.profile.outer) / 2
    annulus_dev = area_distortion_check(field, field.hull.fatten(margin), 9, steps)
    passed = (
        endpoint_error < endpoint_tolerance
        and identity
        and core_dev <= jacobian_tolerance / 10
        and annulus_dev <= jacobian_tolerance
    )
    logger.info(
        "translation checks: endpoint %.3g, core %.3g, annulus %.3g",
        endpoint_error,
        core_dev,
        annulus_dev,
    )
    return TranslationReport(
        steps=steps,
        max_endpoint_error=endpoint_error,
        identity_outside_exact=identity,
        jacobian_deviation_core=core_dev,
        jacobian_deviation_annulus=annulus_dev,
        passed=passed,
    )


def sample_trajectories(
    field: TranslationField,
    samples: int,
    seed: int,
    steps: int = DEFAULT_STEPS,
    record_every: int = 100,
) -> list[tuple[int, int, list[float]]]:
    """
    Trajectories of seeded random starting points inside the support.

    Returns:
        Rows (sample, step, coordinates) every `record_every` steps
    """
    if samples < 1:
        raise ParameterError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)
    support = field.support
    lo = np.array([float(c) for c in support.lo])
    hi = np.array([float(c) for c in support.hi])
    z = lo + rng.random((samples, support.dim)) * (hi - lo)
    rows = [(i, 0, list(z[i])) for i in range(samples)]
    done = 0
    while done < steps:
        chunk = min(record_every, steps - done)
        # Chunks of the same global step keep the RK4 grid identical.
        z = _advance(field, z, chunk, steps)
        done += chunk
        rows.extend((i, done, list(z[i])) for i in range(samples))
    return rows


def _advance(
    field: TranslationField, points: np.ndarray, count: int, steps: int
) -> np.ndarray:
    dt = 1.0 / steps
    z = np.array(points, dtype=float, copy=True)
    for _ in range(count):
        k1 = field.velocity(z)
        k2 = field.velocity(z + 0.5 * dt * k1)
        k3 = field.velocity(z + 0.5 * dt * k2)
        k4 = field.velocity(z + dt * k3)
        z = z + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return z
