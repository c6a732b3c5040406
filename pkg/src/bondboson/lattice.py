"""Lattice geometries and the momentum grids fixed by periodic boundaries.

Conventions used throughout the package:

* Chain sites are indexed ``0 .. n_sites-1``.  Sublattice A is the odd
  sites, sublattice B the even sites, so the B cell index ``n // 2`` is
  an integer.
* Momenta are stored in ``[0, 2*pi)``: the grid for ``n`` cells is
  ``{2*pi*j/n : j = 0..n-1}``.
* Square-lattice momenta are the Cartesian product of the two axis
  grids, x-major.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ChainSpec:
    """Dimerized periodic chain with alternating bond amplitudes.

    The bond (n, n+1) carries hopping ``-t0 + (-1)**n * 2*alpha_u``;
    ``alpha_u`` is the product of the fermion-lattice coupling and the
    staggered displacement.  ``spinful`` adds an identical second spin
    species (the hopping is spin independent).
    """

    n_sites: int
    t0: float = 1.0
    alpha_u: float = 0.0
    spinful: bool = False

    def __post_init__(self):
        if self.n_sites <= 0 or self.n_sites % 2 != 0:
            raise ValueError(f"n_sites must be a positive even integer, got {self.n_sites}")
        if self.t0 <= 0:
            raise ValueError(f"t0 must be positive, got {self.t0}")

    @property
    def n_cells(self) -> int:
        return self.n_sites // 2

    def bond_amplitude(self, n: int) -> float:
        """Hopping amplitude on the bond (n, n+1), periodic in n."""
        return -self.t0 + (-1) ** (n % self.n_sites) * 2.0 * self.alpha_u


@dataclass(frozen=True)
class SquareSpec:
    """Periodic square lattice carrying the two-component (c, b) model.

    ``delta`` is the on-site mass splitting (+delta on c modes, -delta
    on b modes); ``m = delta / 2`` is the mass parameter in which the
    band energy reads ``2*sqrt(m^2 + sin^2 kx + sin^2 ky)``.

    A 1x1 lattice is accepted (the hopping terms cancel identically
    there, which makes it a useful mass-only sanity case).
    """

    lx: int
    ly: int
    delta: float = 0.0

    def __post_init__(self):
        if self.lx < 1 or self.ly < 1:
            raise ValueError(f"lattice dims must be >= 1, got {self.lx}x{self.ly}")

    @property
    def m(self) -> float:
        return self.delta / 2.0

    @property
    def n_sites(self) -> int:
        return self.lx * self.ly


def chain_momenta(n_cells: int, antiperiodic: bool = False) -> np.ndarray:
    """Momenta allowed by the boundary condition on an n-cell ring.

    Periodic boundaries give ``{2*pi*j/n_cells}``; the antiperiodic
    variant shifts every value by half a grid step.  All production
    sweeps use the periodic grid.
    """
    if n_cells < 1:
        raise ValueError(f"n_cells must be >= 1, got {n_cells}")
    j = np.arange(n_cells, dtype=float)
    if antiperiodic:
        j = j + 0.5
    return TWO_PI * j / n_cells


def square_momenta(lx: int, ly: int) -> np.ndarray:
    """Cartesian-product momentum grid, shape (lx*ly, 2), x-major."""
    if lx < 1 or ly < 1:
        raise ValueError(f"lattice dims must be >= 1, got {lx}x{ly}")
    kx = chain_momenta(lx)
    ky = chain_momenta(ly)
    grid = [(x, y) for x in kx for y in ky]
    return np.array(grid, dtype=float).reshape(lx * ly, 2)


def on_grid(k: float, n: int, tol: float = 1e-9) -> bool:
    """True if exp(i*k*n) == 1 within tol, i.e. k sits on the n-point grid."""
    return abs(np.exp(1j * k * n) - 1.0) < tol
