"""Poisson point process deployments and directional coverage geometry.

Positions are planar ``(x, y)`` coordinates on a rectangular region.
Angles are radians in ``[0, 2*pi)``, counter-clockwise from the +x axis.

A user transmits through a circular-sector beam (orientation ``alpha``,
angular width ``theta``, range ``r``) and *covers* a base station when the
station lies within range and within half a beam-width of the boresight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .seeding import stream

TWO_PI = 2.0 * math.pi

BOUNDARY_MODES = ("hard", "torus")


@dataclass(frozen=True)
class Region:
    """Rectangular deployment surface, unit square by default.

    ``boundary_mode`` selects how the displacement between two points is
    measured: "hard" uses the plain Euclidean difference, "torus" wraps both
    axes and uses the minimum-image (shortest wrapped) displacement.
    """

    width: float = 1.0
    height: float = 1.0
    boundary_mode: str = "hard"

    def __post_init__(self) -> None:
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"region sides must be positive, got {self.width} x {self.height}")
        if self.boundary_mode not in BOUNDARY_MODES:
            raise ValueError(f"boundary_mode must be one of {BOUNDARY_MODES}, got {self.boundary_mode!r}")

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains(self, point) -> bool:
        x, y = float(point[0]), float(point[1])
        return 0.0 <= x <= self.width and 0.0 <= y <= self.height


@dataclass(frozen=True)
class Beam:
    """Directional transmission beam: a circular sector of radius ``r``.

    ``theta == 2*pi`` degenerates to an omnidirectional disc.
    """

    alpha: float
    theta: float
    r: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha < TWO_PI:
            raise ValueError(f"alpha must lie in [0, 2*pi), got {self.alpha}")
        if not 0.0 < self.theta <= TWO_PI:
            raise ValueError(f"theta must lie in (0, 2*pi], got {self.theta}")
        if not self.r > 0.0:
            raise ValueError(f"r must be positive, got {self.r}")


@dataclass(frozen=True)
class PppParams:
    """Intensities of the two point processes plus the per-slot activity factor.

    The activity factor thins the user process: transmitting users form a
    PPP of intensity ``p * lambda_ue``.
    """

    lambda_ue: float
    lambda_bs: float
    p: float = 1.0

    def __post_init__(self) -> None:
        if self.lambda_ue < 0 or self.lambda_bs < 0:
            raise ValueError("intensities must be non-negative")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"activity factor must lie in [0, 1], got {self.p}")


class PolarOffset(NamedTuple):
    d_ij: float
    alpha_ij: float


@dataclass(frozen=True)
class Deployment:
    """One sampled realization: base stations plus users with beam parameters.

    Per-user beam parameters are stored as parallel arrays; ``ue_beams``
    materializes them as ``Beam`` values. Arrays are read-only: a deployment
    is immutable after construction and safe to share across workers.
    """

    region: Region
    ue_positions: np.ndarray  # (n_ue, 2)
    ue_alpha: np.ndarray  # (n_ue,)
    ue_theta: np.ndarray  # (n_ue,)
    ue_r: np.ndarray  # (n_ue,)
    bs_positions: np.ndarray  # (n_bs, 2)
    seed: int

    def __post_init__(self) -> None:
        n_ue = self.ue_positions.shape[0]
        if self.ue_positions.shape != (n_ue, 2):
            raise ValueError("ue_positions must have shape (n_ue, 2)")
        if self.bs_positions.ndim != 2 or self.bs_positions.shape[1] != 2:
            raise ValueError("bs_positions must have shape (n_bs, 2)")
        for name in ("ue_alpha", "ue_theta", "ue_r"):
            if getattr(self, name).shape != (n_ue,):
                raise ValueError(f"{name} must be parallel to ue_positions")
        for arr in (self.ue_positions, self.ue_alpha, self.ue_theta, self.ue_r, self.bs_positions):
            arr.setflags(write=False)

    @property
    def n_ue(self) -> int:
        return self.ue_positions.shape[0]

    @property
    def n_bs(self) -> int:
        return self.bs_positions.shape[0]

    @property
    def ue_beams(self) -> list[Beam]:
        return [
            Beam(alpha=float(a), theta=float(t), r=float(r))
            for a, t, r in zip(self.ue_alpha, self.ue_theta, self.ue_r)
        ]


def sample_deployment(
    params: PppParams,
    region: Region,
    seed: int,
    *,
    theta: float,
    r: float,
) -> Deployment:
    """Sample one deployment: PPP base stations and thinned-PPP users.

    Counts are Poisson with means ``lambda_bs * area`` and
    ``p * lambda_ue * area``; positions are i.i.d. uniform on the region;
    each user's beam orientation is uniform on ``[0, 2*pi)`` while ``theta``
    and ``r`` are shared by all users. The two point processes draw from
    independent sub-streams of ``seed``, so changing one intensity never
    perturbs the other process.
    """
    if not 0.0 < theta <= TWO_PI:
        raise ValueError(f"theta must lie in (0, 2*pi], got {theta}")
    if not r > 0.0:
        raise ValueError(f"r must be positive, got {r}")

    bs_rng = stream(seed, "bs-process")
    n_bs = int(bs_rng.poisson(params.lambda_bs * region.area))
    bs_xy = np.column_stack(
        (bs_rng.uniform(0.0, region.width, n_bs), bs_rng.uniform(0.0, region.height, n_bs))
    )

    ue_rng = stream(seed, "ue-process")
    n_ue = int(ue_rng.poisson(params.p * params.lambda_ue * region.area))
    ue_xy = np.column_stack(
        (ue_rng.uniform(0.0, region.width, n_ue), ue_rng.uniform(0.0, region.height, n_ue))
    )
    alpha = ue_rng.uniform(0.0, TWO_PI, n_ue)

    return Deployment(
        region=region,
        ue_positions=ue_xy,
        ue_alpha=alpha,
        ue_theta=np.full(n_ue, float(theta)),
        ue_r=np.full(n_ue, float(r)),
        bs_positions=bs_xy,
        seed=int(seed),
    )


def displacements(region: Region, from_xy: np.ndarray, to_xy: np.ndarray) -> np.ndarray:
    """Displacement vectors ``to - from``, minimum-image wrapped on a torus.

    Points lie inside the region, so one wrap per axis suffices; ties at
    exactly half the side keep the positive representative.
    """
    d = np.asarray(to_xy, dtype=float) - np.asarray(from_xy, dtype=float)
    if region.boundary_mode == "torus":
        for axis, side in ((0, region.width), (1, region.height)):
            c = d[..., axis]
            d[..., axis] = np.where(c > side * 0.5, c - side, np.where(c < -side * 0.5, c + side, c))
    return d


def circular_angle_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Smallest absolute angular difference between ``a`` and ``b``, in [0, pi]."""
    return np.abs(np.mod(np.asarray(a) - np.asarray(b) + math.pi, TWO_PI) - math.pi)


def polar_offset(ue, bs, region: Region) -> PolarOffset:
    """Distance and bearing from a user to a base station.

    The bearing is measured from the +x reference direction and returned in
    ``[0, 2*pi)``. Under torus boundaries both quantities use the
    minimum-image displacement.
    """
    d = displacements(region, np.asarray(ue, dtype=float), np.asarray(bs, dtype=float))
    dist = float(np.hypot(d[0], d[1]))
    bearing = float(np.mod(math.atan2(d[1], d[0]), TWO_PI))
    return PolarOffset(d_ij=dist, alpha_ij=bearing)


class BeamTrig(NamedTuple):
    """Per-user boresight cosine/sine and half-width cosine, precomputed.

    The angular part of the coverage test compares the projection of the
    displacement onto the boresight against ``d * cos(theta/2)``; cosine is
    monotone on [0, pi], so this is exactly the circular-angular-distance
    test without evaluating bearings. Full-circle beams are flagged so the
    angular test (identically true for them) is skipped.
    """

    cos_alpha: np.ndarray
    sin_alpha: np.ndarray
    cos_half_theta: np.ndarray
    is_full: np.ndarray


def beam_trig(deployment: Deployment) -> BeamTrig:
    return BeamTrig(
        cos_alpha=np.cos(deployment.ue_alpha),
        sin_alpha=np.sin(deployment.ue_alpha),
        cos_half_theta=np.cos(deployment.ue_theta * 0.5),
        is_full=deployment.ue_theta == TWO_PI,
    )


def sector_mask(
    dx: np.ndarray,
    dy: np.ndarray,
    r: np.ndarray,
    cos_alpha: np.ndarray,
    sin_alpha: np.ndarray,
    cos_half_theta: np.ndarray,
    is_full: np.ndarray,
) -> np.ndarray:
    """Coverage test on displacement components, one entry per pair."""
    d2 = dx * dx + dy * dy
    mask = d2 <= r * r
    narrow = mask & ~is_full
    if np.any(narrow):
        sel = np.flatnonzero(narrow)
        proj = dx[sel] * cos_alpha[sel] + dy[sel] * sin_alpha[sel]
        mask[sel] = proj >= np.sqrt(d2[sel]) * cos_half_theta[sel]
    return mask


def covers(ue, beam: Beam, bs, region: Region) -> bool:
    """Coverage indicator: does the user's beam sector contain the station?

    True iff the distance is within ``beam.r`` and the circular angular
    offset between the station bearing and the boresight is within
    ``beam.theta/2``, both endpoints inclusive.
    """
    d = displacements(region, np.asarray(ue, dtype=float), np.asarray(bs, dtype=float))
    mask = sector_mask(
        dx=d[..., 0].reshape(1),
        dy=d[..., 1].reshape(1),
        r=np.asarray([beam.r], dtype=float),
        cos_alpha=np.cos(np.asarray([beam.alpha])),
        sin_alpha=np.sin(np.asarray([beam.alpha])),
        cos_half_theta=np.cos(np.asarray([beam.theta]) * 0.5),
        is_full=np.asarray([beam.theta == TWO_PI]),
    )
    return bool(mask[0])


def coverage_mask(
    deployment: Deployment,
    ue_idx: np.ndarray,
    bs_idx: np.ndarray,
    trig: BeamTrig | None = None,
) -> np.ndarray:
    """Vectorized coverage test for paired (user, station) index arrays."""
    if trig is None:
        trig = beam_trig(deployment)
    d = displacements(
        deployment.region,
        deployment.ue_positions[ue_idx],
        deployment.bs_positions[bs_idx],
    )
    return sector_mask(
        dx=d[..., 0],
        dy=d[..., 1],
        r=deployment.ue_r[ue_idx],
        cos_alpha=trig.cos_alpha[ue_idx],
        sin_alpha=trig.sin_alpha[ue_idx],
        cos_half_theta=trig.cos_half_theta[ue_idx],
        is_full=trig.is_full[ue_idx],
    )
