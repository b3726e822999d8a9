"""Rigid-body math and ray casting against capsule scenes.

Conventions used throughout the package: right-handed coordinates, +Y up,
all lengths in meters. Rotations are unit quaternions stored as (w, x, y, z).
Everything here is a pure function on immutable values and safe to call from
any thread.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

QUAT_NORM_TOL = 1e-9


def _as_vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=np.float64)
    if a.shape != (3,):
        raise ValueError(f"expected 3-vector, got shape {a.shape}")
    return a


def normalize(v: np.ndarray) -> np.ndarray:
    """Unit vector along v. Raises on near-zero input."""
    n = np.linalg.norm(v)
    if n < 1e-12:
        raise ValueError("cannot normalize near-zero vector")
    return v / n


# ---------------------------------------------------------------------------
# Quaternions
# ---------------------------------------------------------------------------

def quat_identity() -> np.ndarray:
    return np.array([1.0, 0.0, 0.0, 0.0])


def quat_normalize(q) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    return q / np.linalg.norm(q)


def quat_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])


def quat_conjugate(q: np.ndarray) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_from_axis_angle(axis, angle: float) -> np.ndarray:
    axis = normalize(_as_vec3(axis))
    half = 0.5 * angle
    return np.concatenate(([np.cos(half)], np.sin(half) * axis))


def quat_to_rotvec(q: np.ndarray) -> np.ndarray:
    """Rotation vector (axis * angle) for a unit quaternion."""
    q = quat_normalize(q)
    if q[0] < 0:
        q = -q
    sin_half = np.linalg.norm(q[1:])
    if sin_half < 1e-12:
        return np.zeros(3)
    angle = 2.0 * np.arctan2(sin_half, q[0])
    return q[1:] / sin_half * angle


def quat_from_rotvec(rv) -> np.ndarray:
    rv = _as_vec3(rv)
    angle = np.linalg.norm(rv)
    if angle < 1e-12:
        return quat_identity()
    return quat_from_axis_angle(rv / angle, angle)


def quat_rotate(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rotate vector(s) v by unit quaternion q. v may be (3,) or (n, 3)."""
    w = q[0]
    u = q[1:]
    v = np.asarray(v, dtype=np.float64)
    uv = np.cross(u, v)
    return v + 2.0 * (w * uv + np.cross(u, uv))


def quat_to_matrix(q: np.ndarray) -> np.ndarray:
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def quat_slerp(a: np.ndarray, b: np.ndarray, t: float) -> np.ndarray:
    a = quat_normalize(a)
    b = quat_normalize(b)
    dot = float(np.dot(a, b))
    if dot < 0.0:
        b = -b
        dot = -dot
    if dot > 1.0 - 1e-10:
        return quat_normalize(a + t * (b - a))
    theta = np.arccos(np.clip(dot, -1.0, 1.0))
    s = np.sin(theta)
    return (np.sin((1.0 - t) * theta) * a + np.sin(t * theta) * b) / s


def quat_angle_between(a: np.ndarray, b: np.ndarray) -> float:
    """Rotation angle (radians) taking a to b."""
    d = quat_multiply(quat_conjugate(a), b)
    return float(np.linalg.norm(quat_to_rotvec(d)))


def angle_between(u, v) -> float:
    """Angle (radians) between two vectors."""
    u = normalize(_as_vec3(u))
    v = normalize(_as_vec3(v))
    return float(np.arccos(np.clip(np.dot(u, v), -1.0, 1.0)))


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Transform:
    """Rigid transform: rotate by `rotation` (unit quaternion), then translate."""

    rotation: np.ndarray = field(default_factory=quat_identity)
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "rotation", np.asarray(self.rotation, dtype=np.float64))
        object.__setattr__(self, "translation", _as_vec3(self.translation))
        n = np.linalg.norm(self.rotation)
        if abs(n - 1.0) > 1e-6:
            raise ValueError(f"rotation quaternion norm {n} not unit")
        object.__setattr__(self, "rotation", self.rotation / n)

    @staticmethod
    def identity() -> "Transform":
        return Transform()

    @staticmethod
    def from_rotation(q) -> "Transform":
        return Transform(rotation=np.asarray(q, dtype=np.float64))

    @staticmethod
    def from_translation(t) -> "Transform":
        return Transform(translation=_as_vec3(t))

    def apply_point(self, p) -> np.ndarray:
        return quat_rotate(self.rotation, np.asarray(p, dtype=np.float64)) + self.translation

    def apply_vector(self, v) -> np.ndarray:
        return quat_rotate(self.rotation, np.asarray(v, dtype=np.float64))


def compose(a: Transform, b: Transform) -> Transform:
    """Transform equivalent to applying b first, then a."""
    return Transform(
        rotation=quat_normalize(quat_multiply(a.rotation, b.rotation)),
        translation=a.apply_point(b.translation),
    )


def invert(t: Transform) -> Transform:
    qi = quat_conjugate(t.rotation)
    return Transform(rotation=qi, translation=-quat_rotate(qi, t.translation))


def look_rotation(forward, up) -> np.ndarray:
    """Quaternion whose local +Z maps to `forward` and local +Y is near `up`."""
    f = normalize(_as_vec3(forward))
    u = _as_vec3(up)
    r = np.cross(u, f)
    rn = np.linalg.norm(r)
    if rn < 1e-9:
        # forward parallel to up: pick any perpendicular right vector
        alt = np.array([1.0, 0.0, 0.0]) if abs(f[0]) < 0.9 else np.array([0.0, 0.0, 1.0])
        r = np.cross(alt, f)
        rn = np.linalg.norm(r)
    r = r / rn
    u2 = np.cross(f, r)
    m = np.column_stack([r, u2, f])
    return _matrix_to_quat(m)


def _matrix_to_quat(m: np.ndarray) -> np.ndarray:
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    if tr > 0:
        s = np.sqrt(tr + 1.0) * 2
        w = 0.25 * s
        x = (m[2, 1] - m[1, 2]) / s
        y = (m[0, 2] - m[2, 0]) / s
        z = (m[1, 0] - m[0, 1]) / s
    elif m[0, 0] > m[1, 1] and m[0, 0] > m[2, 2]:
        s = np.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2]) * 2
        w = (m[2, 1] - m[1, 2]) / s
        x = 0.25 * s
        y = (m[0, 1] + m[1, 0]) / s
        z = (m[0, 2] + m[2, 0]) / s
    elif m[1, 1] > m[2, 2]:
        s = np.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2]) * 2
        w = (m[0, 2] - m[2, 0]) / s
        x = (m[0, 1] + m[1, 0]) / s
        y = 0.25 * s
        z = (m[1, 2] + m[2, 1]) / s
    else:
        s = np.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1]) * 2
        w = (m[1, 0] - m[0, 1]) / s
        x = (m[0, 2] + m[2, 0]) / s
        y = (m[1, 2] + m[2, 1]) / s
        z = 0.25 * s
    return quat_normalize(np.array([w, x, y, z]))


# ---------------------------------------------------------------------------
# Capsules and rays
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Capsule:
    """Segment from endpoint_a to endpoint_b swept by a sphere of `radius`.

    Coincident endpoints are allowed; the capsule degenerates to a sphere.
    """

    endpoint_a: np.ndarray
    endpoint_b: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "endpoint_a", _as_vec3(self.endpoint_a))
        object.__setattr__(self, "endpoint_b", _as_vec3(self.endpoint_b))
        if self.radius <= 0:
            raise ValueError("capsule radius must be positive")

    @property
    def axis_length(self) -> float:
        return float(np.linalg.norm(self.endpoint_b - self.endpoint_a))

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.endpoint_a + self.endpoint_b)

    def transformed(self, t: Transform) -> "Capsule":
        return Capsule(t.apply_point(self.endpoint_a), t.apply_point(self.endpoint_b), self.radius)


@dataclass(frozen=True)
class Ray:
    origin: np.ndarray
    direction: np.ndarray  # unit

    def __post_init__(self):
        object.__setattr__(self, "origin", _as_vec3(self.origin))
        d = _as_vec3(self.direction)
        n = np.linalg.norm(d)
        if abs(n - 1.0) > 1e-6:
            raise ValueError("ray direction must be normalized")
        object.__setattr__(self, "direction", d / n)

    def at(self, t: float) -> np.ndarray:
        return self.origin + t * self.direction


@dataclass(frozen=True)
class Hit:
    distance: float
    point: np.ndarray
    normal: np.ndarray  # unit, pointing out of the surface
    part: object = None  # BodyPartId in scene queries; None for bare capsules


def point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = b - a
    denom = float(np.dot(ab, ab))
    if denom < 1e-18:
        return float(np.linalg.norm(p - a))
    t = np.clip(np.dot(p - a, ab) / denom, 0.0, 1.0)
    return float(np.linalg.norm(p - (a + t * ab)))


def segment_segment_distance(p1: np.ndarray, q1: np.ndarray,
                             p2: np.ndarray, q2: np.ndarray) -> float:
    """Minimum distance between segments [p1,q1] and [p2,q2]."""
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = float(np.dot(d1, d1))
    e = float(np.dot(d2, d2))
    f = float(np.dot(d2, r))
    eps = 1e-18
    if a <= eps and e <= eps:
        return float(np.linalg.norm(r))
    if a <= eps:
        s = 0.0
        t = np.clip(f / e, 0.0, 1.0)
    else:
        c = float(np.dot(d1, r))
        if e <= eps:
            t = 0.0
            s = np.clip(-c / a, 0.0, 1.0)
        else:
            b = float(np.dot(d1, d2))
            denom = a * e - b * b
            if denom > eps:
                s = np.clip((b * f - c * e) / denom, 0.0, 1.0)
            else:
                s = 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t = 0.0
                s = np.clip(-c / a, 0.0, 1.0)
            elif t > 1.0:
                t = 1.0
                s = np.clip((b - c) / a, 0.0, 1.0)
    c1 = p1 + s * d1
    c2 = p2 + t * d2
    return float(np.linalg.norm(c1 - c2))


def capsule_capsule_distance(c1: Capsule, c2: Capsule) -> float:
    """Surface-to-surface distance; negative means interpenetration."""
    d = segment_segment_distance(c1.endpoint_a, c1.endpoint_b, c2.endpoint_a, c2.endpoint_b)
    return d - c1.radius - c2.radius


def _ray_sphere_t(origins: np.ndarray, dirs: np.ndarray, center: np.ndarray,
                  radius: float) -> np.ndarray:
    """Smallest non-negative ray parameter hitting the sphere, inf if none."""
    oc = origins - center
    b = np.einsum("ij,ij->i", dirs, oc)
    c = np.einsum("ij,ij->i", oc, oc) - radius * radius
    disc = b * b - c
    t = np.full(origins.shape[0], np.inf)
    ok = disc >= 0.0
    sq = np.sqrt(np.where(ok, disc, 0.0))
    t0 = -b - sq
    t1 = -b + sq
    cand = np.where(t0 >= 0.0, t0, np.where(t1 >= 0.0, t1, np.inf))
    t[ok] = cand[ok]
    return t


def ray_capsule_intersect_batch(origins: np.ndarray, dirs: np.ndarray,
                                capsule: Capsule) -> np.ndarray:
    """Nearest non-negative hit parameter per ray against one capsule.

    origins, dirs: (n, 3) with unit dirs. Returns (n,) distances, inf = miss.
    """
    origins = np.atleast_2d(np.asarray(origins, dtype=np.float64))
    dirs = np.atleast_2d(np.asarray(dirs, dtype=np.float64))
    a = capsule.endpoint_a
    b = capsule.endpoint_b
    r = capsule.radius
    ab = b - a
    ab2 = float(np.dot(ab, ab))

    if ab2 < 1e-18:
        return _ray_sphere_t(origins, dirs, a, r)

    t_best = np.full(origins.shape[0], np.inf)

    # Infinite cylinder around the axis, then restrict to the segment span.
    axis = ab / np.sqrt(ab2)
    oa = origins - a
    d_par = dirs @ axis
    o_par = oa @ axis
    d_perp = dirs - np.outer(d_par, axis)
    o_perp = oa - np.outer(o_par, axis)
    A = np.einsum("ij,ij->i", d_perp, d_perp)
    B = np.einsum("ij,ij->i", d_perp, o_perp)
    C = np.einsum("ij,ij->i", o_perp, o_perp) - r * r
    disc = B * B - A * C
    valid = (A > 1e-18) & (disc >= 0.0)
    sq = np.sqrt(np.where(valid, disc, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        for t_cyl in ((-B - sq) / A, (-B + sq) / A):
            s = o_par + t_cyl * d_par  # axial coordinate of the hit
            ok = valid & (t_cyl >= 0.0) & (s >= 0.0) & (s <= np.sqrt(ab2))
            t_best = np.where(ok & (t_cyl < t_best), t_cyl, t_best)

    # Sphere caps.
    for center in (a, b):
        t_cap = _ray_sphere_t(origins, dirs, center, r)
        t_best = np.minimum(t_best, t_cap)

    return t_best


def capsule_surface_normal(point: np.ndarray, capsule: Capsule) -> np.ndarray:
    """Outward normal at a point on (or near) the capsule surface."""
    a, b = capsule.endpoint_a, capsule.endpoint_b
    ab = b - a
    ab2 = float(np.dot(ab, ab))
    if ab2 < 1e-18:
        return normalize(point - a)
    t = np.clip(np.dot(point - a, ab) / ab2, 0.0, 1.0)
    closest = a + t * ab
    return normalize(point - closest)


def ray_capsule_intersect(ray: Ray, capsule: Capsule) -> Optional[Hit]:
    """Nearest non-negative intersection of a ray with a capsule, if any."""
    t = float(ray_capsule_intersect_batch(ray.origin[None, :], ray.direction[None, :], capsule)[0])
    if not np.isfinite(t):
        return None
    point = ray.at(t)
    return Hit(distance=t, point=point, normal=capsule_surface_normal(point, capsule))


def ray_scene_intersect(ray: Ray, scene: Sequence[tuple]) -> Optional[Hit]:
    """Globally nearest hit over (Capsule, part_label) pairs, with its label."""
    best_t = np.inf
    best = None
    for capsule, part in scene:
        t = float(ray_capsule_intersect_batch(ray.origin[None, :], ray.direction[None, :], capsule)[0])
        if t < best_t:
            best_t = t
            best = (capsule, part)
    if best is None:
        return None
    capsule, part = best
    point = ray.at(best_t)
    return Hit(distance=best_t, point=point,
               normal=capsule_surface_normal(point, capsule), part=part)


def smoothstep(edge0: float, edge1: float, x) -> np.ndarray:
    """Hermite smoothstep, clamped to [0, 1]."""
    t = np.clip((np.asarray(x, dtype=np.float64) - edge0) / (edge1 - edge0), 0.0, 1.0)
    return t * t * (3.0 - 2.0 * t)
