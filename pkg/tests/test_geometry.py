import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import ndimage

from conftest import random_convex_polygon, random_interior
from intrinsic_metrics.errors import DomainError
from intrinsic_metrics.geometry import (
    ConvexPolygon,
    PlanarGraph,
    Rectangle,
    boundary_distance,
    distance_to_boundary,
    hausdorff,
    medial_axis,
    medial_graph,
    nearest_side_labels,
    rect_nearest_side_regions,
    s_circle,
    s_metric,
    s_metric_oracle,
    s_metric_values,
    sigma_segments,
)


def regular_polygon(n, radius=1.0, center=0j):
    return ConvexPolygon(tuple(center + radius * np.exp(2j * np.pi * np.arange(n) / n)))


def on_boundary(poly, z, tol=1e-10):
    d = poly.signed_distances(z)
    return abs(np.min(d)) <= tol and np.all(d >= -tol)


class TestConvexPolygon:
    def test_rectangle_vertices(self):
        R = Rectangle(2)
        assert R.polygon.vertices == (-2 - 1j, 2 - 1j, 2 + 1j, -2 + 1j)
        assert R.polygon.perimeter() == pytest.approx(12.0)

    @pytest.mark.parametrize(
        "verts",
        [
            (0, 1, 1j, 0),
            (0, 1),
            (0, 1j, 1),
            (0, 1, 2, 1j),
            (0, 1, 1 + 1j, 1j, complex(math.inf, 0)),
            (0, 1, 1 + 1j, 0.5 + 0.2j, 1j),
        ],
    )
    def test_invalid(self, verts):
        with pytest.raises(DomainError):
            ConvexPolygon(verts)

    def test_winding_twice(self):
        pentagram = tuple(np.exp(4j * np.pi * np.arange(5) / 5))
        with pytest.raises(DomainError):
            ConvexPolygon(pentagram)

    def test_json_round_trip(self, tmp_path):
        P = regular_polygon(6)
        data = P.to_json()
        assert ConvexPolygon.from_json(data) == P
        assert ConvexPolygon.from_json(json.dumps(data)) == P
        path = tmp_path / "hex.json"
        path.write_text(json.dumps(data))
        assert ConvexPolygon.from_json(str(path)) == P

    def test_rectangle_normalization(self):
        R, c = Rectangle(0.5).normalized()
        assert R.k == 2.0
        corners = np.array(Rectangle(0.5).polygon.vertices) * c
        assert set(np.round(corners, 12)) == set(np.round(R.polygon.vertices, 12))
        with pytest.raises(DomainError):
            Rectangle(0)


class TestBoundaryDistance:
    def test_center_two_contacts(self):
        bc = boundary_distance(Rectangle(2), 0j)
        assert bc.distance == 1.0
        assert sorted(bc.contacts, key=lambda z: z.imag) == [-1j, 1j]

    def test_three_contacts(self):
        bc = boundary_distance(Rectangle(2), 1 + 0j)
        assert bc.distance == 1.0
        assert set(bc.contacts) == {1 + 1j, 1 - 1j, 2 + 0j}

    def test_square_center_four_contacts(self):
        assert len(boundary_distance(Rectangle(1), 0j).contacts) == 4

    @pytest.mark.parametrize("p", [2 + 0j, 3 + 0j, 1j, 1.9999999999999 + 0j])
    def test_outside(self, p):
        with pytest.raises(DomainError):
            boundary_distance(Rectangle(2), p)

    def test_random_polygon_against_dense_samples(self, rng):
        for _ in range(3):
            P = random_convex_polygon(rng, int(rng.integers(3, 9)))
            t = np.linspace(0, 1, 1_000_000 // P.n, endpoint=False)
            samples = np.concatenate([a + t * (b - a) for a, b in (P.edge(j) for j in range(P.n))])
            for p in random_interior(rng, P, 5, margin=1e-3):
                bc = boundary_distance(P, p)
                assert abs(bc.distance - np.min(np.abs(samples - p))) <= 1e-5
                for c in bc.contacts:
                    assert on_boundary(P, c)
                    assert abs(abs(p - c) - bc.distance) <= 1e-10

    def test_vectorized(self, rng):
        R = Rectangle(1.7)
        pts = random_interior(rng, R, 200)
        vec = distance_to_boundary(R, pts)
        ref = np.minimum(R.k - np.abs(pts.real), 1 - np.abs(pts.imag))
        assert np.max(np.abs(vec - ref)) <= 1e-15


class TestSMetric:
    def test_equal_points(self):
        assert s_metric(Rectangle(2), 0.3j, 0.3j).s == 0.0
        assert s_metric_oracle(Rectangle(2), 0.3j, 0.3j) == 0.0

    def test_symmetric_reflection(self):
        a = 0.5
        res = s_metric(Rectangle(2), -a + 0j, a + 0j)
        assert res.s == pytest.approx(a / math.sqrt(1 + a * a), abs=1e-15)
        assert abs(abs(res.z_min.imag) - 1) <= 1e-15 and abs(res.z_min.real) <= 1e-15
        assert res.s == pytest.approx(s_metric_oracle(Rectangle(2), -a + 0j, a + 0j), abs=1e-10)

    def test_clamped_endpoint(self):
        # thin triangle: the unclamped reflection point can leave the edge
        P = ConvexPolygon((0, 1, 0.5 + 0.1j))
        x, y = 0.2 + 0.03j, 0.8 + 0.03j
        assert s_metric(P, x, y).s == pytest.approx(s_metric_oracle(P, x, y), abs=1e-10)

    def test_against_oracle(self, rng):
        for i in range(40):
            P = Rectangle(rng.uniform(0.3, 3)) if i % 2 else random_convex_polygon(rng, 6)
            x, y = random_interior(rng, P, 2)
            res = s_metric(P, x, y)
            assert abs(res.s - s_metric_oracle(P, x, y)) <= 1e-8
            assert 0 < res.s <= 1
            assert on_boundary(P.polygon if isinstance(P, Rectangle) else P, res.z_min)

    def test_oracle_refinement_monotone(self, rng):
        P = random_convex_polygon(rng, 5)
        for x, y in random_interior(rng, P, 20).reshape(10, 2):
            coarse = s_metric_oracle(P, x, y, samples=2000)
            fine = s_metric_oracle(P, x, y, samples=4000)
            # a smaller infimum means a larger s
            assert fine >= coarse - 1e-12

    def test_outside(self):
        with pytest.raises(DomainError):
            s_metric(Rectangle(1), 0j, 2 + 0j)
        with pytest.raises(DomainError):
            s_metric_values(Rectangle(1), np.zeros(2), np.array([0.5, 1.0 + 0j]))

    def test_axioms(self, rng):
        R = Rectangle(1.4)
        x, y, z = (random_interior(rng, R, 10_000) for _ in range(3))
        sxy = s_metric_values(R, x, y)
        assert np.array_equal(sxy, s_metric_values(R, y, x))
        assert np.all((sxy > 0) & (sxy <= 1))
        assert np.all(s_metric_values(R, x, z) <= sxy + s_metric_values(R, y, z) + 1e-12)
        assert np.all(s_metric_values(R, x, x) == 0)

    @settings(max_examples=200, deadline=None)
    @given(
        st.floats(0.2, 5),
        st.floats(-0.999, 0.999),
        st.floats(-0.999, 0.999),
        st.floats(-0.999, 0.999),
        st.floats(-0.999, 0.999),
    )
    def test_dihedral_invariance(self, k, a, b, c, d):
        R = Rectangle(k)
        x, y = complex(a * k, b), complex(c * k, d)
        s = s_metric(R, x, y).s
        for f in (np.conj, lambda z: -z, lambda z: -np.conj(z)):
            assert abs(s_metric(R, f(x), f(y)).s - s) <= 1e-14

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9), st.floats(0.05, 3))
    def test_similarity_invariance(self, a, b, scale):
        P = regular_polygon(7)
        Q = ConvexPolygon(tuple(scale * 1j * np.array(P.vertices) + 2))
        x, y = complex(a, b) * 0.6, complex(b, -a) * 0.5
        assert abs(s_metric(P, x, y).s - s_metric(Q, scale * 1j * x + 2, scale * 1j * y + 2).s) <= 1e-12


def _flood_components(labels, value):
    return ndimage.label(labels == value)[1]


class TestNearestSideRegions:
    def test_figure_point(self):
        R = Rectangle(1.4)
        regions = rect_nearest_side_regions(R, 0.7 - 0.4j, 200)
        assert regions.orientation == -1
        assert regions.trapezoid_sides == "bottom-top"
        assert set(np.unique(regions.labels)) == {0, 1, 2, 3}

    def test_orientation_other_branch(self):
        regions = rect_nearest_side_regions(Rectangle(1.4), 1.3 - 0.1j, 20)
        assert regions.trapezoid_sides == "left-right"

    def test_square_center_symmetric(self):
        regions = rect_nearest_side_regions(Rectangle(1), 0j, 100)
        # cells centred on a diagonal are ties
        X, Y = np.meshgrid(regions.xs, regions.ys)
        off = np.abs(np.abs(X) - np.abs(Y)) > 1e-9
        counts = np.bincount(regions.labels[off], minlength=4)
        assert len(set(counts)) == 1
        assert np.array_equal(np.rot90(regions.labels)[off], ((regions.labels + 1) % 4)[off])

    @pytest.mark.parametrize("x", [0.7 - 0.4j, 0.1 - 0.9j, -1.2 + 0.5j, 0j])
    def test_connected_and_contains_midpoints(self, x):
        R = Rectangle(1.4)
        regions = rect_nearest_side_regions(R, x, 160)
        mids = [(-1, 0.0), (0, 1.4), (1, 0.0), (0, -1.4)]
        for side in range(4):
            assert _flood_components(regions.labels, side) == 1
            which, where = mids[side]
            if which:  # horizontal side
                row = 0 if which < 0 else -1
                col = np.argmin(np.abs(regions.xs - where))
            else:
                col = -1 if where > 0 else 0
                row = np.argmin(np.abs(regions.ys))
            assert regions.labels[row, col] == side

    def test_grid_errors(self):
        with pytest.raises(DomainError):
            rect_nearest_side_regions(Rectangle(1), 0j, 1)
        with pytest.raises(DomainError):
            rect_nearest_side_regions(Rectangle(1), 1 + 0j, 10)


class TestSigmaAndMedial:
    def test_sigma_k2(self):
        g = sigma_segments(Rectangle(2))
        seg = dict(zip(g.labels, g.segments()))
        assert set(seg["sigma0"]) == {-1 + 0j, 1 + 0j}
        assert set(seg["sigma1"]) == {-2 - 1j, -1 + 0j}

    def test_sigma_square(self):
        g = sigma_segments(Rectangle(1))
        assert 0j in g.nodes and "sigma0" not in g.labels
        assert all(0j in s for s in g.segments())

    def test_sigma_requires_normalized(self):
        with pytest.raises(DomainError):
            sigma_segments(Rectangle(0.5))

    @pytest.mark.parametrize("k", [1.0, 1.4, 2.0, 3.5])
    def test_sigma_contacts(self, k):
        R = Rectangle(k)
        g = sigma_segments(R)
        for label, (a, b) in zip(g.labels, g.segments()):
            if label == "sigma0":
                continue
            for t in np.linspace(0.02, 0.98, 25):
                p = a + t * (b - a)
                assert len(boundary_distance(R, p).contacts) == 2

    @pytest.mark.parametrize("k", [1.0001, 1.4, 2.0, 7.0])
    def test_gr_rectangle(self, k):
        g = medial_graph(Rectangle(k))
        assert len(g.nodes) == 2 and len(g.edges) == 1
        sigma0 = np.linspace(-(k - 1), k - 1, 2001) + 0j
        assert hausdorff(g.sample(2001, include_ends=True), sigma0) <= 1e-10
        nodes = sorted(g.nodes, key=lambda z: z.real)
        assert np.allclose(nodes, [-(k - 1), k - 1], rtol=0, atol=1e-12)

    def test_gr_square_is_centre(self):
        g = medial_graph(Rectangle(1))
        assert len(g.nodes) == 1 and not g.edges
        assert abs(g.nodes[0]) <= 1e-12

    @pytest.mark.parametrize("n", [3, 5, 6, 9, 12])
    def test_gr_regular_is_centre(self, n):
        g = medial_graph(regular_polygon(n, 1.3, 0.2 - 0.1j))
        assert len(g.nodes) == 1 and not g.edges
        assert abs(g.nodes[0] - (0.2 - 0.1j)) <= 1e-12

    def test_gr_tangential_quadrilateral(self):
        # kite: has an incircle, so Gr collapses to its centre
        kite = ConvexPolygon((-1j, 2 + 0j, 1j, -0.5 + 0j))
        g = medial_graph(kite)
        assert len(g.nodes) == 1

    def test_random_polygon_contacts(self, rng):
        for _ in range(6):
            P = random_convex_polygon(rng, int(rng.integers(4, 10)))
            axis = medial_axis(P)
            assert len(axis.edges) == len(axis.nodes) - 1  # a tree
            assert all(abs(axis.nodes[i] - axis.nodes[j]) > 0 for i, j in axis.edges)
            g = medial_graph(P)
            for p in g.sample(20):
                assert len(boundary_distance(P, p, tol=1e-8).contacts) >= 2
            for p in g.nodes:
                assert len(boundary_distance(P, p, tol=1e-8).contacts) >= 3

    def test_graph_sample_isolated(self):
        g = PlanarGraph((1j,), ())
        assert np.array_equal(g.sample(), np.array([1j]))


class TestSCircle:
    R = Rectangle(1.4)
    x = 0.7 - 0.4j

    @pytest.mark.parametrize("r", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_level_set(self, r):
        c = s_circle(self.R, self.x, r, directions=360)
        s = s_metric_values(self.R, np.full(c.points.size, self.x), c.points)
        assert np.max(np.abs(s - r)) <= 1e-9
        assert not c.nonmonotone

    @pytest.mark.parametrize("r", [0.2, 0.5, 0.8])
    def test_convex(self, r):
        pts = s_circle(self.R, self.x, r, directions=360).closed()
        e = np.diff(np.append(pts, pts[1:2]))
        cross = (np.conj(e[:-1]) * e[1:]).imag
        assert np.all(cross >= -1e-9 * np.abs(e[:-1]) * np.abs(e[1:]))

    def test_corners_on_separators(self):
        c = s_circle(self.R, self.x, 0.5, directions=360)
        corners = c.points[c.corner]
        assert corners.size >= 2
        ring = 1e-3 * np.exp(2j * np.pi * np.arange(16) / 16)
        for p in corners:
            labels = nearest_side_labels(self.R, self.x, p + ring)
            assert len(set(labels.tolist())) >= 2

    def test_nested(self):
        radii = [0.1 * j for j in range(1, 10)]
        curves = [s_circle(self.R, self.x, r, directions=180) for r in radii]
        angles = 2 * np.pi * np.arange(180) / 180

        def radius_by_ray(c):
            theta = np.mod(np.angle(c.points - self.x), 2 * np.pi)
            idx = np.abs(theta[:, None] - angles[None, :]).argmin(axis=0)
            return np.abs(c.points[idx] - self.x)

        for inner, outer in zip(curves, curves[1:]):
            assert not inner.omitted and not outer.omitted
            assert np.all(radius_by_ray(inner) < radius_by_ray(outer))

    def test_small_radius_is_euclidean(self):
        r = 1e-3
        c = s_circle(self.R, self.x, r, directions=360)
        d = float(distance_to_boundary(self.R, self.x))
        assert np.max(np.abs(np.abs(c.points - self.x) - 2 * d * r)) <= 1e-4

    def test_polygon_input(self, rng):
        P = random_convex_polygon(rng, 6)
        x = random_interior(rng, P, 1, margin=0.1)[0]
        c = s_circle(P, x, 0.4, directions=180)
        s = s_metric_values(P, np.full(c.points.size, x), c.points)
        assert np.max(np.abs(s - 0.4)) <= 1e-9

    @pytest.mark.parametrize("r", [0.0, 1.0, -0.1])
    def test_bad_radius(self, r):
        with pytest.raises(DomainError):
            s_circle(self.R, self.x, r)
