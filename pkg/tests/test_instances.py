"""The certified instance roster and the CLI name registries."""

import numpy as np
import pytest

from fwpoly.instances import (
    ALL_CERTIFIED,
    edge_mid_std,
    fw_power4,
    fw_segment,
    fwipw_mid,
    fwipw_simplex5,
    interior_quadratic,
    named_objective,
    named_polytope,
    random_vrep,
    truncated_simplex,
    wolfe_edge,
)
from fwpoly.polytope import Box, Simplex, StdFormPolytope


class TestRoster:
    def test_every_instance_is_certified(self):
        names = set()
        for factory in ALL_CERTIFIED:
            inst = factory()
            names.add(inst.name)
            assert inst.L > 0
            assert inst.cert.mu > 0
            assert 0 < inst.cert.theta <= 0.5
            for kind, cert in inst.derived.items():
                assert cert.valid, f"{inst.name}: {kind} certificate is degenerate"
                assert cert.mu > 0
        assert len(names) == len(ALL_CERTIFIED)

    def test_optimal_values(self):
        assert interior_quadratic().fstar == pytest.approx(0.0, abs=1e-12)
        assert fw_segment().fstar == pytest.approx(0.0, abs=1e-12)
        assert fw_power4().fstar == pytest.approx(0.0, abs=1e-12)
        assert wolfe_edge().fstar == pytest.approx(-1.6, abs=1e-12)
        assert edge_mid_std().fstar == pytest.approx(-1.5, abs=1e-12)
        assert fwipw_mid().fstar == pytest.approx(0.0, abs=1e-12)
        assert fwipw_simplex5().fstar == pytest.approx(0.0, abs=1e-12)

    def test_optimal_points(self):
        assert np.allclose(wolfe_edge().xstar_points[0], [0.6, 0.4, 0.0], atol=1e-10)
        assert np.allclose(edge_mid_std().xstar_points[0], [0.5, 0.5, 0.0], atol=1e-10)

    def test_pinned_starts_feasible(self):
        for factory in ALL_CERTIFIED:
            inst = factory()
            if inst.x0 is not None:
                assert inst.poly.contains(inst.x0, tol=1e-12)
        assert wolfe_edge().poly.is_vertex(wolfe_edge().x0)

    def test_factories_cache(self):
        assert interior_quadratic() is interior_quadratic()
        assert fwipw_mid() is fwipw_mid()

    def test_curvature_values(self):
        # squared distance on the probability simplex: 2 * diam^2 = 4
        assert interior_quadratic().L == pytest.approx(4.0, abs=1e-12)
        assert fwipw_mid().L == pytest.approx(4.0, abs=1e-12)


class TestBuilders:
    def test_truncated_simplex_vertices(self):
        poly = truncated_simplex(0.6)
        V = np.asarray(poly.enumerate_vertices())
        assert len(V) == 6
        assert np.allclose(V.sum(axis=1), 1.0)
        assert V.max() <= 0.6 + 1e-12

    def test_random_vrep_shape(self):
        rng = np.random.default_rng(0)
        poly = random_vrep(rng, n_points=9, dim=2)
        V = np.asarray(poly.enumerate_vertices())
        assert V.shape[1] == 2
        assert 3 <= len(V) <= 9


class TestRegistries:
    def test_named_polytopes(self):
        assert isinstance(named_polytope("simplex3"), Simplex)
        assert isinstance(named_polytope("box2"), Box)
        box = named_polytope("box_2x1")
        assert np.allclose(box.hi, [2.0, 1.0])
        assert isinstance(named_polytope("simplex3std"), StdFormPolytope)
        assert named_polytope("wolfe1").dim() == 2

    def test_named_objectives(self):
        assert named_objective("wolfe1").value(np.array([0.6, 0.4, 0.0])) == \
            pytest.approx(-1.6, abs=1e-12)
        assert named_objective("power4").value(np.array([0.58, 0.42])) == \
            pytest.approx(0.0, abs=1e-15)

    def test_unknown_names_raise(self):
        with pytest.raises(KeyError):
            named_polytope("dodecahedron")
        with pytest.raises(KeyError):
            named_objective("entropy")
