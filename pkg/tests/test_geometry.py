import numpy as np
import pytest

from skindisplay.geometry import (
    Capsule,
    Hit,
    Ray,
    Transform,
    capsule_capsule_distance,
    compose,
    invert,
    point_segment_distance,
    quat_from_axis_angle,
    ray_capsule_intersect,
    ray_scene_intersect,
)


def random_transform(rng) -> Transform:
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    q = quat_from_axis_angle(axis, rng.uniform(-np.pi, np.pi))
    return Transform(rotation=q, translation=rng.uniform(-2, 2, size=3))


def transforms_close(a: Transform, b: Transform, tol=1e-9) -> bool:
    # q and -q encode the same rotation
    dq = min(np.abs(a.rotation - b.rotation).max(), np.abs(a.rotation + b.rotation).max())
    return dq < tol and np.abs(a.translation - b.translation).max() < tol


class TestTransform:
    def test_identity_compose(self):
        rng = np.random.default_rng(0)
        t = random_transform(rng)
        assert transforms_close(compose(Transform.identity(), t), t)
        assert transforms_close(compose(t, Transform.identity()), t)

    def test_inverse(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            t = random_transform(rng)
            assert transforms_close(compose(t, invert(t)), Transform.identity())
            assert transforms_close(compose(invert(t), t), Transform.identity())

    def test_rot90z_squared_is_rot180z(self):
        rot90 = Transform.from_rotation(quat_from_axis_angle([0, 0, 1], np.pi / 2))
        rot180 = Transform.from_rotation(quat_from_axis_angle([0, 0, 1], np.pi))
        got = compose(rot90, rot90)
        assert transforms_close(got, rot180, tol=1e-12)
        assert np.allclose(got.translation, 0.0)

    def test_associativity_random_triples(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            a, b, c = (random_transform(rng) for _ in range(3))
            assert transforms_close(compose(compose(a, b), c), compose(a, compose(b, c)))

    def test_apply_point_matches_compose(self):
        rng = np.random.default_rng(3)
        a, b = random_transform(rng), random_transform(rng)
        p = rng.uniform(-1, 1, size=3)
        assert np.allclose(compose(a, b).apply_point(p), a.apply_point(b.apply_point(p)))

    def test_rejects_non_unit_quaternion(self):
        with pytest.raises(ValueError):
            Transform(rotation=np.array([2.0, 0.0, 0.0, 0.0]))


def marching_oracle(ray: Ray, capsule: Capsule, t_max=20.0, samples=10_000):
    """First ray parameter whose point lies within `radius` of the axis segment.

    Brute force: march the ray, detect the first inside sample, then bisect
    the bracketing interval. Independent of the analytic intersection path.
    """
    ts = np.linspace(0.0, t_max, samples)
    inside = np.array([
        point_segment_distance(ray.at(t), capsule.endpoint_a, capsule.endpoint_b)
        <= capsule.radius
        for t in ts
    ])
    idx = np.argmax(inside)
    if not inside[idx]:
        return None
    if idx == 0:
        return 0.0
    lo, hi = ts[idx - 1], ts[idx]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        d = point_segment_distance(ray.at(mid), capsule.endpoint_a, capsule.endpoint_b)
        if d <= capsule.radius:
            hi = mid
        else:
            lo = mid
    return hi


class TestRayCapsule:
    def test_axial_ray_hits_cap(self):
        cap = Capsule([0, 0, 0], [0, 0, 1], 0.25)
        d = 3.0
        ray = Ray(origin=[0, 0, -d], direction=[0, 0, 1])
        hit = ray_capsule_intersect(ray, cap)
        assert hit is not None
        assert hit.distance == pytest.approx(d - 0.25, abs=1e-9)

    def test_lateral_miss(self):
        cap = Capsule([0, 0, 0], [0, 0, 1], 0.25)
        ray = Ray(origin=[0.26, 0, -3], direction=[0, 0, 1])
        assert ray_capsule_intersect(ray, cap) is None

    def test_degenerate_sphere(self):
        cap = Capsule([1, 2, 3], [1, 2, 3], 0.5)
        ray = Ray(origin=[1, 2, 0], direction=[0, 0, 1])
        hit = ray_capsule_intersect(ray, cap)
        assert hit.distance == pytest.approx(2.5, abs=1e-9)

    def test_against_marching_oracle(self):
        rng = np.random.default_rng(7)
        n_checked = 0
        for _ in range(60):
            a = rng.uniform(-1, 1, size=3)
            b = a + rng.uniform(-1, 1, size=3)
            cap = Capsule(a, b, rng.uniform(0.05, 0.5))
            origin = rng.uniform(-4, 4, size=3)
            if point_segment_distance(origin, cap.endpoint_a, cap.endpoint_b) <= cap.radius + 0.05:
                continue  # oracle assumes an outside start
            # aim near the capsule so a good fraction of rays actually hit
            aim = cap.endpoint_a + rng.uniform(0, 1) * (cap.endpoint_b - cap.endpoint_a)
            aim = aim + rng.normal(scale=cap.radius, size=3)
            direction = aim - origin
            direction /= np.linalg.norm(direction)
            ray = Ray(origin=origin, direction=direction)

            expected = marching_oracle(ray, cap)
            got = ray_capsule_intersect(ray, cap)
            if expected is None:
                assert got is None or got.distance > 19.0
            else:
                assert got is not None
                assert got.distance == pytest.approx(expected, abs=1e-4)
                n_checked += 1
        assert n_checked >= 20

    def test_hit_contract(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            cap = Capsule(rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3), rng.uniform(0.05, 0.4))
            d = rng.normal(size=3)
            d /= np.linalg.norm(d)
            ray = Ray(origin=rng.uniform(-4, 4, 3), direction=d)
            hit = ray_capsule_intersect(ray, cap)
            if hit is None:
                continue
            assert hit.distance >= 0.0
            assert np.allclose(hit.point, ray.at(hit.distance), atol=1e-6)
            surf = point_segment_distance(hit.point, cap.endpoint_a, cap.endpoint_b)
            assert abs(surf - cap.radius) < 1e-6
            assert np.linalg.norm(hit.normal) == pytest.approx(1.0, abs=1e-6)

    def test_deterministic(self):
        cap = Capsule([0.1, -0.2, 0.3], [0.5, 0.9, -0.1], 0.2)
        ray = Ray(origin=[2, 2, 2], direction=np.array([-1, -1, -1]) / np.sqrt(3))
        h1 = ray_capsule_intersect(ray, cap)
        h2 = ray_capsule_intersect(ray, cap)
        assert h1.distance == h2.distance
        assert (h1.point == h2.point).all()
        assert (h1.normal == h2.normal).all()


class TestRayScene:
    def test_collinear_capsules_nearest_label(self):
        near = Capsule([0, 0, 1], [0, 0, 2], 0.2)
        far = Capsule([0, 0, 4], [0, 0, 5], 0.2)
        ray = Ray(origin=[0, 0, -1], direction=[0, 0, 1])
        hit = ray_scene_intersect(ray, [(far, "far"), (near, "near")])
        assert hit.part == "near"

    def test_empty_scene(self):
        ray = Ray(origin=[0, 0, 0], direction=[0, 0, 1])
        assert ray_scene_intersect(ray, []) is None

    def test_random_scenes_match_per_capsule_reduction(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            scene = []
            for k in range(rng.integers(1, 6)):
                a = rng.uniform(-2, 2, 3)
                scene.append((Capsule(a, a + rng.uniform(-1, 1, 3), rng.uniform(0.05, 0.4)), k))
            d = rng.normal(size=3)
            d /= np.linalg.norm(d)
            ray = Ray(origin=rng.uniform(-5, 5, 3), direction=d)

            hits = [(ray_capsule_intersect(ray, c), part) for c, part in scene]
            hits = [(h.distance, part) for h, part in hits if h is not None]
            got = ray_scene_intersect(ray, scene)
            if not hits:
                assert got is None
            else:
                best_t, best_part = min(hits)
                assert got.distance == best_t
                assert got.part == best_part


class TestCapsuleDistance:
    def test_parallel_capsules(self):
        c1 = Capsule([0, 0, 0], [1, 0, 0], 0.1)
        c2 = Capsule([0, 1, 0], [1, 1, 0], 0.2)
        assert capsule_capsule_distance(c1, c2) == pytest.approx(0.7, abs=1e-12)

    def test_interpenetration_negative(self):
        c1 = Capsule([0, 0, 0], [1, 0, 0], 0.3)
        c2 = Capsule([0.5, 0.1, 0], [0.5, 1, 0], 0.3)
        assert capsule_capsule_distance(c1, c2) < 0

    def test_matches_sampled_minimum(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            p1, q1 = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
            p2, q2 = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
            c1 = Capsule(p1, q1, 0.05)
            c2 = Capsule(p2, q2, 0.05)
            ts = np.linspace(0, 1, 200)
            pts1 = p1[None] + ts[:, None] * (q1 - p1)[None]
            pts2 = p2[None] + ts[:, None] * (q2 - p2)[None]
            sampled = np.min(np.linalg.norm(pts1[:, None, :] - pts2[None, :, :], axis=-1))
            got = capsule_capsule_distance(c1, c2) + 0.1
            assert got <= sampled + 1e-9
            assert got >= sampled - 5e-3  # sampling resolution
