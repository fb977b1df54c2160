"""Tests for graded grids and weighted grid functions."""

import numpy as np
import pytest

from hilferbvp.gridfn import (
    Grid,
    GridError,
    SingularNode,
    WeightedGridFunction,
    csv_text,
    unweighted_value,
    weighted_norm,
    write_csv,
)


def test_grid_basic_properties():
    g = Grid(0.0, 1.0, 8, 2.0)
    assert g.nodes.shape == (9,)
    assert g.n_nodes == 9
    assert g.nodes[0] == 0.0
    assert g.nodes[-1] == 1.0
    assert np.all(np.diff(g.nodes) > 0)


def test_grid_matches_power_law():
    g = Grid(0.0, 2.0, 10, 3.0)
    for i in range(11):
        assert g.nodes[i] == pytest.approx(2.0 * (i / 10.0) ** 3.0, abs=1e-15)


def test_grid_uniform_when_grading_one():
    g = Grid(1.0, 3.0, 4, 1.0)
    assert np.allclose(g.nodes, [1.0, 1.5, 2.0, 2.5, 3.0])


def test_grid_endpoints_exact():
    g = Grid(0.25, 0.75, 7, 2.5)
    assert g.nodes[0] == 0.25
    assert g.nodes[-1] == 0.75


def test_grid_offsets():
    g = Grid(2.0, 5.0, 6, 2.0)
    assert np.allclose(g.offsets(), g.nodes - 2.0)
    assert g.offsets()[0] == 0.0


def test_grid_strictly_increasing_large():
    # heavy grading near the left endpoint must not collapse nodes
    g = Grid(0.0, 1.0, 1_000_000, 4.0)
    assert np.all(np.diff(g.nodes) > 0)


def test_grid_validation():
    with pytest.raises(GridError):
        Grid(1.0, 1.0, 8, 2.0)
    with pytest.raises(GridError):
        Grid(1.0, 0.0, 8, 2.0)
    with pytest.raises(GridError):
        Grid(0.0, 1.0, 0, 2.0)
    with pytest.raises(GridError):
        Grid(0.0, 1.0, 8, 0.0)
    with pytest.raises(GridError):
        Grid(0.0, 1.0, 8, -1.0)


def test_grid_equality_and_hash():
    g1 = Grid(0.0, 1.0, 8, 2.0)
    g2 = Grid(0.0, 1.0, 8, 2.0)
    g3 = Grid(0.0, 1.0, 16, 2.0)
    assert g1 == g2
    assert hash(g1) == hash(g2)
    assert g1 != g3


def test_weighted_values_round_trip():
    g = Grid(0.0, 1.0, 16, 2.0)
    sigma = 1.0 / 3.0
    w = np.linspace(1.0, 2.0, 17)
    fn = WeightedGridFunction(g, sigma, w)
    assert np.allclose(fn.values, w)
    z = fn.unweighted()
    assert z.shape == (16,)
    tau = g.nodes[1:] - g.nodes[0]
    assert np.allclose(z, w[1:] / tau**sigma)


def test_from_weighted_samples_callable():
    g = Grid(0.0, 1.0, 16, 2.0)
    fn = WeightedGridFunction.from_weighted(g, 0.25, lambda tau: 1.0 + tau)
    assert np.allclose(fn.values, 1.0 + g.offsets())
    assert fn.values[0] == 1.0


def test_from_unweighted_samples_callable():
    g = Grid(0.0, 1.0, 16, 2.0)
    sigma = 0.25
    fn = WeightedGridFunction.from_unweighted(g, sigma, np.cos, limit0=0.5)
    assert fn.values[0] == 0.5
    tau = g.offsets()[1:]
    assert np.allclose(fn.values[1:], tau**sigma * np.cos(g.nodes[1:]))


def test_sigma_zero_identity_weight():
    g = Grid(0.0, 1.0, 8, 1.0)
    vals = np.sin(g.nodes)
    fn = WeightedGridFunction(g, 0.0, vals)
    assert np.allclose(fn.unweighted(), vals[1:])
    assert unweighted_value(fn, 0) == pytest.approx(vals[0])


def test_unweighted_value_singular_node():
    g = Grid(0.0, 1.0, 8, 2.0)
    fn = WeightedGridFunction(g, 0.5, np.ones(9))
    with pytest.raises(SingularNode):
        unweighted_value(fn, 0)
    assert unweighted_value(fn, 4) == pytest.approx(
        1.0 / (g.nodes[4] - g.nodes[0]) ** 0.5
    )


def test_unweighted_value_negative_index():
    g = Grid(0.0, 1.0, 8, 2.0)
    fn = WeightedGridFunction(g, 0.5, np.ones(9))
    assert unweighted_value(fn, -1) == pytest.approx(unweighted_value(fn, 8))
    with pytest.raises(IndexError):
        unweighted_value(fn, 9)
    with pytest.raises(IndexError):
        unweighted_value(fn, -10)


def test_weighted_norm_properties():
    g = Grid(0.0, 1.0, 32, 2.0)
    rng = np.random.default_rng(5)
    u = WeightedGridFunction(g, 0.3, rng.normal(size=33))
    v = WeightedGridFunction(g, 0.3, rng.normal(size=33))
    nu = weighted_norm(u)
    nv = weighted_norm(v)
    assert nu == pytest.approx(np.max(np.abs(u.values)))
    # homogeneity
    u3 = WeightedGridFunction(g, 0.3, 3.0 * u.values)
    assert weighted_norm(u3) == pytest.approx(3.0 * nu, rel=1e-15)
    # triangle inequality
    s = WeightedGridFunction(g, 0.3, u.values + v.values)
    assert weighted_norm(s) <= nu + nv + 1e-15


def test_values_read_only():
    g = Grid(0.0, 1.0, 8, 2.0)
    fn = WeightedGridFunction(g, 0.5, np.ones(9))
    with pytest.raises(ValueError):
        fn.values[3] = 7.0


def test_constructor_does_not_alias_input():
    g = Grid(0.0, 1.0, 8, 2.0)
    src = np.ones(9)
    fn = WeightedGridFunction(g, 0.5, src)
    src[2] = 99.0
    assert fn.values[2] == 1.0


def test_constructor_validation():
    g = Grid(0.0, 1.0, 8, 2.0)
    with pytest.raises(GridError):
        WeightedGridFunction(g, -0.1, np.ones(9))
    with pytest.raises(GridError):
        WeightedGridFunction(g, 1.0, np.ones(9))
    with pytest.raises(GridError):
        WeightedGridFunction(g, 0.5, np.ones(8))


def test_csv_header_and_shape():
    g = Grid(0.0, 1.0, 4, 2.0)
    fn = WeightedGridFunction(g, 0.5, np.arange(5.0))
    lines = csv_text(fn).strip().split("\n")
    assert lines[0] == "t,w,z"
    assert len(lines) == 6
    # node 0 has no finite unweighted value when sigma > 0
    first = lines[1].split(",")
    assert first[2] == ""
    assert float(first[0]) == 0.0
    assert float(first[1]) == 0.0


def test_csv_round_trips_floats():
    g = Grid(0.0, 1.0, 8, 2.0)
    rng = np.random.default_rng(17)
    fn = WeightedGridFunction(g, 1.0 / 3.0, rng.normal(size=9))
    lines = csv_text(fn).strip().split("\n")[1:]
    for i, line in enumerate(lines):
        t_s, w_s, z_s = line.split(",")
        assert float(t_s) == fn.grid.nodes[i]
        assert float(w_s) == fn.values[i]
        if i > 0:
            assert float(z_s) == unweighted_value(fn, i)


def test_csv_sigma_zero_has_all_z():
    g = Grid(0.0, 1.0, 4, 1.0)
    fn = WeightedGridFunction(g, 0.0, np.ones(5))
    lines = csv_text(fn).strip().split("\n")[1:]
    assert all(line.split(",")[2] != "" for line in lines)


def test_write_csv_path_and_stream(tmp_path):
    g = Grid(0.0, 1.0, 4, 2.0)
    fn = WeightedGridFunction(g, 0.5, np.ones(5))
    path = tmp_path / "out.csv"
    write_csv(fn, str(path))
    assert path.read_text() == csv_text(fn)
