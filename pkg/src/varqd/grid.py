"""Uniform periodic grids and discretized wavefunctions.

States live on a centered box [-L/2, L/2)^d sampled at M points per axis.
All integrals use the uniform-weight (trapezoidal) quadrature rule, which is
spectrally accurate for smooth, rapidly decaying functions.  The complex
inner product is antilinear in its first argument; its real part is the
metric g, its imaginary part the symplectic form omega.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on a centered box.

    Parameters
    ----------
    d : int
        Spatial dimension, 1 or 2.
    L : float
        Box length per axis.
    M : int
        Points per axis; must be a power of two, at least 8.
    """

    d: int
    L: float
    M: int

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ValueError(f"grid dimension must be 1 or 2, got {self.d}")
        if self.L <= 0:
            raise ValueError(f"box length must be positive, got {self.L}")
        if self.M < 8 or (self.M & (self.M - 1)) != 0:
            raise ValueError(f"M must be a power of two >= 8, got {self.M}")

    @property
    def h(self) -> float:
        """Grid spacing L / M."""
        return self.L / self.M

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.M,) * self.d

    @property
    def npoints(self) -> int:
        return self.M**self.d

    @property
    def weight(self) -> float:
        """Quadrature weight h^d of a single grid point."""
        return self.h**self.d

    def axis(self) -> np.ndarray:
        """The 1D sample points -L/2 + j*h, j = 0..M-1."""
        return -self.L / 2 + self.h * np.arange(self.M)

    def meshgrid(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays, each of shape ``self.shape``."""
        ax = self.axis()
        if self.d == 1:
            return (ax,)
        return tuple(np.meshgrid(ax, ax, indexing="ij"))

    def wavenumbers(self) -> tuple[np.ndarray, ...]:
        """Angular wavenumber arrays (FFT order), broadcastable to ``shape``."""
        k = 2 * np.pi * np.fft.fftfreq(self.M, d=self.h)
        if self.d == 1:
            return (k,)
        return (k[:, None], k[None, :])

    def k_max(self) -> float:
        """Largest resolved angular wavenumber per axis (Nyquist)."""
        return np.pi / self.h


class GridWavefunction:
    """Complex-valued samples of a state on a :class:`Grid`.

    Supports addition, subtraction and scalar multiplication; operations
    between wavefunctions require identical grids.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values: np.ndarray):
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != grid.shape:
            raise GridMismatchError(
                f"values shape {values.shape} does not match grid shape {grid.shape}"
            )
        self.grid = grid
        self.values = values

    def copy(self) -> "GridWavefunction":
        return GridWavefunction(self.grid, self.values.copy())

    def norm(self) -> float:
        """Quadrature norm (h^d sum |u_j|^2)^(1/2)."""
        return float(np.sqrt(self.grid.weight * np.sum(np.abs(self.values) ** 2)))

    def __add__(self, other: "GridWavefunction") -> "GridWavefunction":
        _check_same_grid(self, other)
        return GridWavefunction(self.grid, self.values + other.values)

    def __sub__(self, other: "GridWavefunction") -> "GridWavefunction":
        _check_same_grid(self, other)
        return GridWavefunction(self.grid, self.values - other.values)

    def __mul__(self, scalar) -> "GridWavefunction":
        return GridWavefunction(self.grid, self.values * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "GridWavefunction":
        return GridWavefunction(self.grid, -self.values)

    def __repr__(self) -> str:
        return f"GridWavefunction(d={self.grid.d}, M={self.grid.M}, norm={self.norm():.6g})"


def _check_same_grid(u: GridWavefunction, v: GridWavefunction) -> None:
    if u.grid != v.grid:
        raise GridMismatchError(f"grids differ: {u.grid} vs {v.grid}")


def inner(u: GridWavefunction, v: GridWavefunction) -> complex:
    """Complex inner product h^d sum conj(u_j) v_j, antilinear in ``u``."""
    _check_same_grid(u, v)
    return complex(u.grid.weight * np.vdot(u.values, v.values))


def metric(u: GridWavefunction, v: GridWavefunction) -> float:
    """Real part of the inner product (the metric g)."""
    return inner(u, v).real


def symplectic(u: GridWavefunction, v: GridWavefunction) -> float:
    """Imaginary part of the inner product (the symplectic form omega)."""
    return inner(u, v).imag


def _warn_if_unnormalized(u: GridWavefunction, where: str) -> None:
    n = u.norm()
    if abs(n - 1.0) > 1e-6:
        warnings.warn(f"{where}: state norm {n:.8g} deviates from 1", stacklevel=3)


def position_mean(u: GridWavefunction) -> np.ndarray:
    """Position expectation <u| x_m u> per axis, by quadrature."""
    _warn_if_unnormalized(u, "position_mean")
    density = np.abs(u.values) ** 2
    xs = u.grid.meshgrid()
    w = u.grid.weight
    return np.array([w * np.sum(x * density) for x in xs])


def position_second_moment(u: GridWavefunction, m: int, n: int) -> float:
    """Second moment <x_m u | x_n u> by quadrature."""
    _warn_if_unnormalized(u, "position_second_moment")
    xs = u.grid.meshgrid()
    density = np.abs(u.values) ** 2
    return float(u.grid.weight * np.sum(xs[m] * xs[n] * density))


def position_square_norm(u: GridWavefunction) -> float:
    """||x u||^2 = sum_m <x_m u | x_m u>."""
    return sum(position_second_moment(u, m, m) for m in range(u.grid.d))


def momentum_mean(u: GridWavefunction, hbar: float) -> np.ndarray:
    """Momentum expectation -i*hbar <u| grad u> per axis, spectrally."""
    _warn_if_unnormalized(u, "momentum_mean")
    uhat = np.fft.fftn(u.values)
    w = u.grid.weight
    out = []
    for k in u.grid.wavenumbers():
        du = np.fft.ifftn(1j * k * uhat)
        out.append((-1j * hbar * w * np.vdot(u.values, du)).real)
    return np.array(out)
