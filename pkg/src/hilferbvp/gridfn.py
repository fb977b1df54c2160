"""Graded meshes and weighted grid functions.

A solution of a weakly singular problem behaves like (t - a)^(-sigma) near
the left endpoint, so plain samples are useless there.  A
WeightedGridFunction stores w_i = (t_i - a)^sigma z(t_i) instead, with w_0
holding the (finite) limit value.  Norms, boundary data, and the fixed-point
iteration all live in this weighted representation; unweighted samples are
recovered on demand away from the endpoint.

The mesh is graded toward a: t_i = a + (b - a) (i/N)^q, q >= 1, which
buys algebraic singularities back their convergence order.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Callable, TextIO

import numpy as np

__all__ = [
    "Grid", "WeightedGridFunction", "GridError", "SingularNode",
    "weighted_norm", "unweighted_value", "write_csv",
]


class GridError(ValueError):
    """Invalid mesh parameters (or a mesh that collapses in float arithmetic)."""


class SingularNode(ValueError):
    """Unweighted value requested at t = a where z is unbounded."""


@dataclass(frozen=True, eq=False)
class Grid:
    """Graded mesh on [a, b] with N panels: t_i = a + (b-a) (i/N)^q."""

    a: float
    b: float
    n_panels: int
    grading: float = 1.0
    nodes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not (self.b > self.a):
            raise GridError(f"need b > a, got [{self.a}, {self.b}]")
        if self.n_panels < 1:
            raise GridError(f"need at least one panel, got {self.n_panels}")
        if self.grading < 1.0:
            raise GridError(f"grading must be >= 1, got {self.grading}")
        i = np.arange(self.n_panels + 1, dtype=float)
        nodes = self.a + (self.b - self.a) * (i / self.n_panels) ** self.grading
        nodes[-1] = self.b
        if not np.all(np.diff(nodes) > 0.0):
            raise GridError(
                "mesh collapsed: adjacent nodes equal at this (N, grading) "
                "in float arithmetic")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    # identity is the defining scalars; nodes are derived from them
    def __eq__(self, other):
        return (isinstance(other, Grid)
                and (self.a, self.b, self.n_panels, self.grading)
                == (other.a, other.b, other.n_panels, other.grading))

    def __hash__(self):
        return hash((self.a, self.b, self.n_panels, self.grading))

    @property
    def n_nodes(self) -> int:
        return self.n_panels + 1

    def offsets(self) -> np.ndarray:
        """t_i - a for every node."""
        return self.nodes - self.a


@dataclass(frozen=True)
class WeightedGridFunction:
    """Samples w_i = (t_i - a)^sigma z(t_i); w_0 stores lim_{t->a+}."""

    grid: Grid
    sigma: float
    values: np.ndarray

    def __post_init__(self):
        if not (0.0 <= self.sigma < 1.0):
            raise GridError(f"sigma must be in [0, 1), got {self.sigma}")
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n_nodes,):
            raise GridError(
                f"need {self.grid.n_nodes} values, got shape {v.shape}")
        if not v.flags.writeable:
            object.__setattr__(self, "values", v)
        else:
            v = v.copy()
            v.setflags(write=False)
            object.__setattr__(self, "values", v)

    @classmethod
    def from_weighted(cls, grid: Grid, sigma: float,
                      w: Callable[[float], float]) -> "WeightedGridFunction":
        """Sample a function of tau = t - a already in weighted form
        (w(0) must be the finite limit)."""
        tau = grid.offsets()
        return cls(grid, sigma, np.array([w(x) for x in tau]))

    @classmethod
    def from_unweighted(cls, grid: Grid, sigma: float,
                        z: Callable[[float], float],
                        limit0: float = 0.0) -> "WeightedGridFunction":
        """Sample z(t) at nodes i >= 1 and attach the weighted limit at a."""
        tau = grid.offsets()
        vals = np.empty(grid.n_nodes)
        vals[0] = limit0
        for i in range(1, grid.n_nodes):
            vals[i] = tau[i] ** sigma * z(grid.nodes[i]) if sigma else z(grid.nodes[i])
        return cls(grid, sigma, vals)

    def unweighted(self) -> np.ndarray:
        """z(t_i) for i >= 1 (index 0 of the result is node 1)."""
        tau = self.grid.offsets()[1:]
        if self.sigma == 0.0:
            return self.values[1:].copy()
        return self.values[1:] * tau ** (-self.sigma)


def weighted_norm(g: WeightedGridFunction) -> float:
    """Discrete weighted sup norm: max_i |w_i|."""
    return float(np.abs(g.values).max())


def unweighted_value(g: WeightedGridFunction, i: int) -> float:
    """z(t_i).  Raises SingularNode at i = 0 when sigma > 0."""
    n = g.grid.n_nodes
    if not -n <= i < n:
        raise IndexError(f"node index {i} out of range for {n} nodes")
    i %= n
    if g.sigma == 0.0:
        return float(g.values[i])
    if i == 0:
        raise SingularNode("z is unbounded at t = a (sigma > 0)")
    tau = g.grid.nodes[i] - g.grid.a
    return float(g.values[i] * tau ** (-g.sigma))


def write_csv(g: WeightedGridFunction, out: TextIO | str) -> None:
    """Write nodes as CSV rows t,w,z.

    The z column is empty at t_0 when sigma > 0 (the sample is unbounded
    there); floats are rendered with repr so rereading loses nothing.
    """
    if isinstance(out, str):
        with open(out, "w", encoding="utf-8") as fh:
            write_csv(g, fh)
        return
    out.write("t,w,z\n")
    tau = g.grid.offsets()
    for i, t in enumerate(g.grid.nodes):
        w = float(g.values[i])
        if g.sigma > 0.0:
            z = "" if i == 0 else repr(w * float(tau[i]) ** (-g.sigma))
        else:
            z = repr(w)
        out.write(f"{float(t)!r},{w!r},{z}\n")


def csv_text(g: WeightedGridFunction) -> str:
    buf = io.StringIO()
    write_csv(g, buf)
    return buf.getvalue()
