"""Declarative compact sets, deterministic grids and sup-norm evaluation.

Compact sets are described by a small catalog of primitives (filled disks,
circles, segments, annulus sectors, explicit point sets) and realized as
finite grids by a deterministic sampler.  Sups over compacts are taken as
maxima over the grids; tolerance budgets elsewhere include a refinement
margin for this discretization.  Connected complements are guaranteed by
the curated catalog, not verified topologically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    EmptyResultError,
    EmptySpecError,
    UnsupportedDomainError,
)
from .series import complex_to_pair, pair_to_complex

TWO_PI = 2.0 * math.pi

DEFAULT_SAMPLES = 64


@dataclass(frozen=True)
class FilledDisk:
    center: complex
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex


@dataclass(frozen=True)
class AnnulusSector:
    center: complex
    r_in: float
    r_out: float
    theta_a: float
    theta_b: float

    def __post_init__(self):
        if self.r_in < 0 or self.r_out < 0:
            raise ValueError("radii must be nonnegative")
        if self.r_in > self.r_out:
            raise ValueError("r_in must not exceed r_out")
        if self.theta_b < self.theta_a:
            raise ValueError("theta_b must not precede theta_a")


@dataclass(frozen=True)
class PointSet:
    points: tuple[complex, ...]

    def __init__(self, points: Sequence[complex]):
        object.__setattr__(self, "points", tuple(complex(p) for p in points))
        if not self.points:
            raise ValueError("point set must be non-empty")


Primitive = FilledDisk | Circle | Segment | AnnulusSector | PointSet


@dataclass(frozen=True)
class CompactSpec:
    """A finite union of primitives plus a sampling density."""

    primitives: tuple[Primitive, ...]
    samples_per_primitive: int = DEFAULT_SAMPLES

    def __init__(self, primitives: Sequence[Primitive], samples_per_primitive: int = DEFAULT_SAMPLES):
        object.__setattr__(self, "primitives", tuple(primitives))
        object.__setattr__(self, "samples_per_primitive", int(samples_per_primitive))
        if self.samples_per_primitive < 8:
            raise ValueError("samples_per_primitive must be at least 8")

    def to_json(self) -> dict:
        return {
            "primitives": [_primitive_to_json(p) for p in self.primitives],
            "samples_per_primitive": self.samples_per_primitive,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CompactSpec":
        if "primitives" in obj:
            prims = [_primitive_from_json(p) for p in obj["primitives"]]
            samples = int(obj.get("samples_per_primitive", obj.get("samples", DEFAULT_SAMPLES)))
            return cls(prims, samples)
        # shorthand: a single primitive object with an optional sample count
        samples = int(obj.get("samples", DEFAULT_SAMPLES))
        return cls([_primitive_from_json(obj)], samples)


@dataclass(frozen=True)
class Grid:
    """Finite sample of a compact set."""

    points: tuple[complex, ...]
    source: CompactSpec

    def __len__(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=complex)


def _primitive_to_json(p: Primitive) -> dict:
    if isinstance(p, FilledDisk):
        return {"kind": "filled_disk", "center": complex_to_pair(p.center), "radius": p.radius}
    if isinstance(p, Circle):
        return {"kind": "circle", "center": complex_to_pair(p.center), "radius": p.radius}
    if isinstance(p, Segment):
        return {"kind": "segment", "a": complex_to_pair(p.a), "b": complex_to_pair(p.b)}
    if isinstance(p, AnnulusSector):
        return {
            "kind": "annulus_sector",
            "center": complex_to_pair(p.center),
            "r_in": p.r_in,
            "r_out": p.r_out,
            "theta_a": p.theta_a,
            "theta_b": p.theta_b,
        }
    if isinstance(p, PointSet):
        return {"kind": "point_set", "points": [complex_to_pair(z) for z in p.points]}
    raise TypeError(f"unknown primitive {p!r}")


def _primitive_from_json(obj: dict) -> Primitive:
    kind = obj.get("kind")
    if kind == "filled_disk":
        return FilledDisk(pair_to_complex(obj["center"]), float(obj["radius"]))
    if kind == "circle":
        return Circle(pair_to_complex(obj["center"]), float(obj["radius"]))
    if kind == "segment":
        return Segment(pair_to_complex(obj["a"]), pair_to_complex(obj["b"]))
    if kind == "annulus_sector":
        return AnnulusSector(
            pair_to_complex(obj["center"]),
            float(obj["r_in"]),
            float(obj["r_out"]),
            float(obj["theta_a"]),
            float(obj["theta_b"]),
        )
    if kind == "point_set":
        return PointSet([pair_to_complex(z) for z in obj["points"]])
    raise ValueError(f"unknown primitive kind {kind!r}")


def _sample_circle(c: Circle, n: int) -> list[complex]:
    return [c.center + c.radius * np.exp(2j * math.pi * k / n) for k in range(n)]


def _sample_segment(s: Segment, n: int) -> list[complex]:
    if n == 1:
        return [s.a]
    return [s.a + (s.b - s.a) * (k / (n - 1)) for k in range(n)]


def _sample_filled_disk(d: FilledDisk, n: int) -> list[complex]:
    """Center plus concentric rings; the boundary ring is always included.

    Ring ``j`` of ``m`` sits at radius ``r j/m`` and receives a share of the
    budget proportional to ``j``, so the boundary carries the most points.
    """
    if d.radius == 0:
        return [d.center]
    m = max(2, int(round(math.sqrt(n / 2.0))))
    weights = m * (m + 1) // 2
    budget = n - 1
    counts = [max(1, (budget * j) // weights) for j in range(1, m + 1)]
    # hand any remainder to the boundary ring
    counts[-1] += budget - sum(counts)
    pts = [d.center]
    for j, cnt in enumerate(counts, start=1):
        radius = d.radius * j / m
        pts.extend(d.center + radius * np.exp(2j * math.pi * k / cnt) for k in range(cnt))
    return pts


def _sample_annulus_sector(a: AnnulusSector, n: int) -> list[complex]:
    full_circle = (a.theta_b - a.theta_a) >= TWO_PI - 1e-12
    m_r = max(2, int(round(math.sqrt(n / 4.0))) + 1)
    per_ring = max(4, n // m_r)
    pts: list[complex] = []
    for i in range(m_r):
        radius = a.r_in + (a.r_out - a.r_in) * (i / (m_r - 1))
        if full_circle:
            angles = [a.theta_a + TWO_PI * k / per_ring for k in range(per_ring)]
        else:
            angles = [
                a.theta_a + (a.theta_b - a.theta_a) * (k / (per_ring - 1))
                for k in range(per_ring)
            ]
        pts.extend(a.center + radius * np.exp(1j * t) for t in angles)
    return pts


def discretize(spec: CompactSpec) -> Grid:
    """Deterministic grid for a compact spec.

    Circles by equal angles, segments by equal spacing with endpoints,
    filled disks by concentric rings plus center, annulus sectors by a
    polar mesh.  No randomness anywhere, so grids are reproducible.
    """
    if not spec.primitives:
        raise EmptySpecError("compact spec has no primitives")
    n = spec.samples_per_primitive
    pts: list[complex] = []
    for p in spec.primitives:
        if isinstance(p, Circle):
            pts.extend(_sample_circle(p, n))
        elif isinstance(p, Segment):
            pts.extend(_sample_segment(p, n))
        elif isinstance(p, FilledDisk):
            pts.extend(_sample_filled_disk(p, n))
        elif isinstance(p, AnnulusSector):
            pts.extend(_sample_annulus_sector(p, n))
        elif isinstance(p, PointSet):
            pts.extend(p.points)
        else:
            raise TypeError(f"unknown primitive {p!r}")
    return Grid(tuple(pts), spec)


def sup_norm(g: Callable, grid: Grid) -> float:
    """``max |g(z)|`` over the grid; evaluator errors propagate."""
    z = grid.as_array()
    values = g(z)
    return float(np.max(np.abs(np.asarray(values))))


def double_sup(h: Callable, outer: Grid, inner: Grid):
    """``max |h(zeta, z)|`` over the product grid, with the argmax pair.

    ``h(zeta, z_array)`` must accept one outer point and the whole inner
    array, returning an array of values.
    """
    best = -1.0
    best_pair = (outer.points[0], inner.points[0])
    z = inner.as_array()
    for zeta in outer.points:
        values = np.abs(np.asarray(h(zeta, z)))
        idx = int(np.argmax(values))
        if values[idx] > best:
            best = float(values[idx])
            best_pair = (zeta, complex(z[idx]))
    return best, best_pair


@dataclass(frozen=True)
class DomainSpec:
    """A simply connected planar domain from a small catalog.

    kinds: ``disk`` (center, radius), ``half_plane`` (unit normal, offset;
    the domain is ``Re(conj(normal) z) < offset``), ``disk_complement``
    (the unbounded exterior of a closed disk) and ``disk_union`` (a custom
    union of open disks, assumed connected by the caller).
    """

    kind: str
    center: complex = 0.0
    radius: float = 0.0
    normal: complex = 1.0
    offset: float = 0.0
    disks: tuple[tuple[complex, float], ...] = ()

    def __post_init__(self):
        if self.kind not in {"disk", "half_plane", "disk_complement", "disk_union"}:
            raise UnsupportedDomainError(f"unknown domain kind {self.kind!r}")
        if self.kind in {"disk", "disk_complement"} and self.radius <= 0:
            raise ValueError("domain radius must be positive")
        if self.kind == "half_plane" and abs(self.normal) == 0:
            raise ValueError("half-plane normal must be nonzero")
        if self.kind == "disk_union" and not self.disks:
            raise ValueError("disk_union needs at least one disk")

    def unit_normal(self) -> complex:
        return self.normal / abs(self.normal)

    def distance_from(self, z: complex) -> float:
        """Distance from ``z`` to the closure of the domain (0 inside)."""
        if self.kind == "disk":
            return max(0.0, abs(z - self.center) - self.radius)
        if self.kind == "half_plane":
            u = self.unit_normal()
            return max(0.0, (np.conj(u) * z).real - self.offset)
        if self.kind == "disk_complement":
            return max(0.0, self.radius - abs(z - self.center))
        return min(max(0.0, abs(z - c) - r) for c, r in self.disks)

    def contains(self, z: complex) -> bool:
        if self.kind == "disk":
            return abs(z - self.center) < self.radius
        if self.kind == "half_plane":
            u = self.unit_normal()
            return (np.conj(u) * z).real < self.offset
        if self.kind == "disk_complement":
            return abs(z - self.center) > self.radius
        return any(abs(z - c) < r for c, r in self.disks)

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind in {"disk", "disk_complement"}:
            out["center"] = complex_to_pair(self.center)
            out["radius"] = self.radius
        elif self.kind == "half_plane":
            out["normal"] = complex_to_pair(self.normal)
            out["offset"] = self.offset
        else:
            out["disks"] = [
                {"center": complex_to_pair(c), "radius": r} for c, r in self.disks
            ]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "DomainSpec":
        kind = obj["kind"]
        if kind in {"disk", "disk_complement"}:
            return cls(kind=kind, center=pair_to_complex(obj["center"]), radius=float(obj["radius"]))
        if kind == "half_plane":
            return cls(kind=kind, normal=pair_to_complex(obj["normal"]), offset=float(obj["offset"]))
        if kind == "disk_union":
            disks = tuple(
                (pair_to_complex(d["center"]), float(d["radius"])) for d in obj["disks"]
            )
            return cls(kind=kind, disks=disks)
        raise UnsupportedDomainError(f"unknown domain kind {kind!r}")


def _inscribed_half_plane_disk(u: complex, bound: float, k: float) -> FilledDisk:
    """Largest disk inside ``{Re(conj(u) z) <= bound} ∩ {|z| <= k}``."""
    if bound <= -k:
        raise EmptyResultError("half-plane slab does not meet the radius-k ball")
    rho = min((bound + k) / 2.0, k)
    center = u * (bound - k) / 2.0 if bound < k else 0.0
    return FilledDisk(center, rho)


def exhausting_family(
    domain: DomainSpec,
    k: int,
    mode: str = "interior",
    samples: int = DEFAULT_SAMPLES,
) -> CompactSpec:
    """k-th member of an increasing compact family filling the domain.

    ``interior`` mode keeps distance ``1/k`` from the boundary and radius
    ``k`` from the origin (members are compact subsets of the open domain);
    ``boundary`` mode intersects the closure with the closed radius-``k``
    ball.  Members are monotone in ``k`` by construction.
    """
    if k < 1:
        raise ValueError("family index k must be >= 1")
    if mode not in {"interior", "boundary"}:
        raise ValueError(f"unknown mode {mode!r}")
    shrink = 1.0 / k if mode == "interior" else 0.0

    if domain.kind == "disk":
        rho = domain.radius - shrink
        cap = k - abs(domain.center)
        radius = min(rho, cap) if mode == "interior" else min(domain.radius, cap)
        if radius <= 0:
            raise EmptyResultError(f"family member {k} is empty for this disk")
        return CompactSpec([FilledDisk(domain.center, radius)], samples)

    if domain.kind == "half_plane":
        disk = _inscribed_half_plane_disk(domain.unit_normal(), domain.offset - shrink, float(k))
        if disk.radius <= 0:
            raise EmptyResultError(f"family member {k} is empty for this half-plane")
        return CompactSpec([disk], samples)

    if domain.kind == "disk_complement":
        inner = domain.radius + shrink
        outer = k - abs(domain.center)
        if outer <= inner:
            raise EmptyResultError(f"family member {k} is empty for this exterior domain")
        return CompactSpec(
            [AnnulusSector(domain.center, inner, outer, 0.0, TWO_PI)], samples
        )

    if domain.kind == "disk_union":
        disks = []
        for c, r in domain.disks:
            radius = min(r - shrink if mode == "interior" else r, k - abs(c))
            if radius > 0:
                disks.append(FilledDisk(c, radius))
        if not disks:
            raise EmptyResultError(f"family member {k} is empty for this union")
        return CompactSpec(disks, samples)

    raise UnsupportedDomainError(f"unsupported domain kind {domain.kind!r}")


def outer_family(
    domain: DomainSpec,
    m: int,
    mode: str = "off-closure",
    samples: int = DEFAULT_SAMPLES,
) -> CompactSpec:
    """m-th member of a growing family of compacts outside the domain.

    ``off-closure`` keeps distance at least ``1/m`` from the domain;
    ``off-domain`` may touch the boundary.  Placement is a documented preset
    per domain kind (a real-axis segment for bounded domains) and members
    are nested in ``m``.  All members have connected complements by
    construction.
    """
    if m < 1:
        raise ValueError("family index m must be >= 1")
    if mode not in {"off-closure", "off-domain"}:
        raise ValueError(f"unknown mode {mode!r}")
    gap = 1.0 / m if mode == "off-closure" else 0.0

    if domain.kind == "disk":
        start = domain.center + domain.radius + gap
        return CompactSpec([Segment(start, start + m)], samples)

    if domain.kind == "half_plane":
        u = domain.unit_normal()
        start = u * (domain.offset + gap)
        return CompactSpec([Segment(start, start + u * m)], samples)

    if domain.kind == "disk_complement":
        radius = domain.radius - gap
        if radius <= 0:
            raise EmptyResultError(
                f"no compact at distance 1/{m} inside the complementary disk"
            )
        return CompactSpec([FilledDisk(domain.center, radius)], samples)

    if domain.kind == "disk_union":
        reach = max(c.real + r for c, r in domain.disks)
        start = complex(reach + gap, 0.0)
        return CompactSpec([Segment(start, start + m)], samples)

    raise UnsupportedDomainError(f"unsupported domain kind {domain.kind!r}")


def grid_domain_distance(grid: Grid, domain: DomainSpec) -> float:
    """Smallest distance from a grid point to the closure of the domain."""
    return min(domain.distance_from(z) for z in grid.points)


def grids_min_distance(a: Grid, b: Grid) -> float:
    """Smallest pairwise distance between two grids."""
    za = a.as_array()[:, None]
    zb = b.as_array()[None, :]
    return float(np.min(np.abs(za - zb)))


def spec_region_contains(spec: CompactSpec, z: complex, pad: float = 1e-9) -> bool:
    """Whether ``z`` lies in the pointwise region described by ``spec``.

    Membership is primitive-wise with a ``pad`` slack; used by monotonicity
    checks, not by numerical kernels.
    """
    for p in spec.primitives:
        if isinstance(p, FilledDisk):
            if abs(z - p.center) <= p.radius + pad:
                return True
        elif isinstance(p, Circle):
            if abs(abs(z - p.center) - p.radius) <= pad:
                return True
        elif isinstance(p, Segment):
            d = p.b - p.a
            if abs(d) == 0:
                if abs(z - p.a) <= pad:
                    return True
                continue
            t = ((z - p.a) * np.conj(d)).real / abs(d) ** 2
            t = min(1.0, max(0.0, t))
            if abs(z - (p.a + t * d)) <= pad:
                return True
        elif isinstance(p, AnnulusSector):
            w = z - p.center
            r = abs(w)
            if p.r_in - pad <= r <= p.r_out + pad:
                if (p.theta_b - p.theta_a) >= TWO_PI - 1e-12:
                    return True
                ang = math.atan2(w.imag, w.real)
                for shift in (-TWO_PI, 0.0, TWO_PI):
                    if p.theta_a - pad <= ang + shift <= p.theta_b + pad:
                        return True
        elif isinstance(p, PointSet):
            if any(abs(z - w) <= pad for w in p.points):
                return True
    return False
