"""Potential models and application of grid Hamiltonians.

The Hamiltonian is H = -(hbar^2/2) Laplacian + V with unit mass; the
Laplacian is applied spectrally.  Potential models evaluate pointwise and
provide analytic gradients; polynomial models (degree <= 4) additionally
expose closed-form expectations against isotropic Gaussian densities, which
keeps the classical-limit parameter equations free of grid error.

For multi-particle (Hartree) use, a potential is decomposed into a sum of
product terms, each touching at most two particle coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError
from .grid import Grid, GridWavefunction, inner


# ---------------------------------------------------------------------------
# spectral derivatives


def spectral_gradient(u: GridWavefunction) -> tuple[GridWavefunction, ...]:
    """Partial derivatives of ``u`` along each axis via the FFT."""
    uhat = np.fft.fftn(u.values)
    return tuple(
        GridWavefunction(u.grid, np.fft.ifftn(1j * k * uhat))
        for k in u.grid.wavenumbers()
    )


def spectral_laplacian(u: GridWavefunction, scales=None) -> GridWavefunction:
    """Laplacian (optionally with per-axis scale factors) via the FFT."""
    ks = u.grid.wavenumbers()
    if scales is None:
        scales = (1.0,) * u.grid.d
    sym = sum(-s * k**2 for s, k in zip(scales, ks))
    return GridWavefunction(u.grid, np.fft.ifftn(sym * np.fft.fftn(u.values)))


# ---------------------------------------------------------------------------
# potential models


class PotentialModel:
    """Base class for symbolic potentials."""

    #: True when the potential is a sum of single-coordinate terms.
    separable: bool = False

    def values_on(self, grid: Grid) -> np.ndarray:
        raise NotImplementedError

    def gradient_on(self, grid: Grid) -> tuple[np.ndarray, ...]:
        raise NotImplementedError

    def gaussian_mean(self, mean: np.ndarray, var: float):
        """<V> against a Gaussian N(mean, var*Id), or None if no closed form."""
        return None

    def gaussian_gradient_mean(self, mean: np.ndarray, var: float):
        """<grad V> against a Gaussian N(mean, var*Id), or None."""
        return None

    def hessian_sup(self):
        """An upper bound on |second derivatives|, or None if unbounded/unknown."""
        return None

    def __add__(self, other: "PotentialModel") -> "SumPotential":
        terms = []
        for v in (self, other):
            terms.extend(v.terms if isinstance(v, SumPotential) else (v,))
        return SumPotential(tuple(terms))


@dataclass(frozen=True)
class Harmonic(PotentialModel):
    """V(x) = (k/2) |x|^2."""

    k: float

    separable = True

    def values_on(self, grid):
        xs = grid.meshgrid()
        return 0.5 * self.k * sum(x**2 for x in xs)

    def gradient_on(self, grid):
        return tuple(self.k * x for x in grid.meshgrid())

    def gaussian_mean(self, mean, var):
        d = len(mean)
        return 0.5 * self.k * (float(mean @ mean) + d * var)

    def gaussian_gradient_mean(self, mean, var):
        return self.k * np.asarray(mean, dtype=float)

    def hessian_sup(self):
        return abs(self.k)


@dataclass(frozen=True)
class Quartic(PotentialModel):
    """V(x) = (k2/2) |x|^2 + (k4/4) |x|^4."""

    k2: float
    k4: float

    @property
    def separable(self):  # |x|^4 couples coordinates
        return self.k4 == 0.0

    def values_on(self, grid):
        r2 = sum(x**2 for x in grid.meshgrid())
        return 0.5 * self.k2 * r2 + 0.25 * self.k4 * r2**2

    def gradient_on(self, grid):
        xs = grid.meshgrid()
        r2 = sum(x**2 for x in xs)
        return tuple(self.k2 * x + self.k4 * r2 * x for x in xs)

    def gaussian_mean(self, mean, var):
        d = len(mean)
        mu2 = float(mean @ mean)
        m2 = mu2 + d * var
        m4 = m2**2 + 4 * var * mu2 + 2 * d * var**2
        return 0.5 * self.k2 * m2 + 0.25 * self.k4 * m4

    def gaussian_gradient_mean(self, mean, var):
        mean = np.asarray(mean, dtype=float)
        d = len(mean)
        mu2 = float(mean @ mean)
        return self.k2 * mean + self.k4 * mean * (mu2 + (d + 2) * var)


@dataclass(frozen=True)
class Morse(PotentialModel):
    """V(x) = D (1 - exp(-a (x - x0)))^2, one-dimensional."""

    D: float
    a: float
    x0: float = 0.0

    separable = True

    def _check(self, grid):
        if grid.d != 1:
            raise ValueError("Morse potential is one-dimensional")

    def values_on(self, grid):
        self._check(grid)
        e = np.exp(-self.a * (grid.axis() - self.x0))
        return self.D * (1.0 - e) ** 2

    def gradient_on(self, grid):
        self._check(grid)
        e = np.exp(-self.a * (grid.axis() - self.x0))
        return (2.0 * self.D * self.a * e * (1.0 - e),)


@dataclass(frozen=True)
class DoubleWell(PotentialModel):
    """V(x) = a x^4 - b x^2, one-dimensional symmetric wells at +-sqrt(b/2a)."""

    a: float
    b: float

    separable = True

    def _check(self, grid):
        if grid.d != 1:
            raise ValueError("DoubleWell potential is one-dimensional")

    def values_on(self, grid):
        self._check(grid)
        x = grid.axis()
        return self.a * x**4 - self.b * x**2

    def gradient_on(self, grid):
        self._check(grid)
        x = grid.axis()
        return (4 * self.a * x**3 - 2 * self.b * x,)

    def gaussian_mean(self, mean, var):
        (mu,) = mean
        return self.a * (mu**4 + 6 * mu**2 * var + 3 * var**2) - self.b * (mu**2 + var)

    def gaussian_gradient_mean(self, mean, var):
        (mu,) = mean
        return np.array([4 * self.a * (mu**3 + 3 * mu * var) - 2 * self.b * mu])


@dataclass(frozen=True)
class SeparableSum(PotentialModel):
    """V(x) = sum_m V_m(x_m) with one 1D model per coordinate."""

    models: tuple[PotentialModel, ...]

    separable = True

    def __post_init__(self):
        object.__setattr__(self, "models", tuple(self.models))

    def _axis_grid(self, grid: Grid) -> Grid:
        return Grid(1, grid.L, grid.M)

    def _check(self, grid):
        if grid.d != len(self.models):
            raise ValueError(
                f"SeparableSum has {len(self.models)} terms but grid has d={grid.d}"
            )

    def values_on(self, grid):
        self._check(grid)
        g1 = self._axis_grid(grid)
        vals = [m.values_on(g1) for m in self.models]
        if grid.d == 1:
            return vals[0]
        return vals[0][:, None] + vals[1][None, :]

    def gradient_on(self, grid):
        self._check(grid)
        g1 = self._axis_grid(grid)
        grads = [m.gradient_on(g1)[0] for m in self.models]
        if grid.d == 1:
            return (grads[0],)
        zero = np.zeros(grid.shape)
        return (grads[0][:, None] + zero, grads[1][None, :] + zero)

    def gaussian_mean(self, mean, var):
        total = 0.0
        for m, mu in zip(self.models, mean):
            g = m.gaussian_mean(np.array([mu]), var)
            if g is None:
                return None
            total += g
        return total

    def gaussian_gradient_mean(self, mean, var):
        out = []
        for m, mu in zip(self.models, mean):
            g = m.gaussian_gradient_mean(np.array([mu]), var)
            if g is None:
                return None
            out.append(g[0])
        return np.array(out)

    def hessian_sup(self):
        sups = [m.hessian_sup() for m in self.models]
        if any(s is None for s in sups):
            return None
        return max(sups)


@dataclass(frozen=True)
class PairProduct(PotentialModel):
    """Bilinear coupling V = lam * x_i * x_j between two coordinates."""

    lam: float
    pair: tuple[int, int] = (0, 1)

    separable = False

    def _check(self, grid):
        if grid.d != 2 or tuple(self.pair) != (0, 1):
            raise ValueError("PairProduct evaluates on a 2D grid with pair (0, 1)")

    def values_on(self, grid):
        self._check(grid)
        x1, x2 = grid.meshgrid()
        return self.lam * x1 * x2

    def gradient_on(self, grid):
        self._check(grid)
        x1, x2 = grid.meshgrid()
        return (self.lam * x2, self.lam * x1)

    def gaussian_mean(self, mean, var):
        i, j = self.pair
        return self.lam * mean[i] * mean[j]

    def gaussian_gradient_mean(self, mean, var):
        out = np.zeros(len(mean))
        i, j = self.pair
        out[i] = self.lam * mean[j]
        out[j] = self.lam * mean[i]
        return out

    def hessian_sup(self):
        return abs(self.lam)


@dataclass(frozen=True)
class Custom(PotentialModel):
    """Tabulated potential on a fixed grid; gradient by spectral differentiation."""

    table: np.ndarray
    grid: Grid

    separable = False

    def __post_init__(self):
        table = np.asarray(self.table, dtype=float)
        if table.shape != self.grid.shape:
            raise GridMismatchError("Custom table shape does not match its grid")
        object.__setattr__(self, "table", table)

    def _check(self, grid):
        if grid != self.grid:
            raise GridMismatchError("Custom potential evaluated on a different grid")

    def values_on(self, grid):
        self._check(grid)
        return self.table

    def gradient_on(self, grid):
        self._check(grid)
        vhat = np.fft.fftn(self.table)
        return tuple(
            np.real(np.fft.ifftn(1j * k * vhat)) for k in grid.wavenumbers()
        )


@dataclass(frozen=True)
class SumPotential(PotentialModel):
    """Sum of potential models (e.g. one-particle wells plus pair couplings)."""

    terms: tuple[PotentialModel, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def separable(self):
        return all(t.separable for t in self.terms)

    def values_on(self, grid):
        return sum(t.values_on(grid) for t in self.terms)

    def gradient_on(self, grid):
        grads = [t.gradient_on(grid) for t in self.terms]
        return tuple(sum(g[m] for g in grads) for m in range(grid.d))

    def gaussian_mean(self, mean, var):
        total = 0.0
        for t in self.terms:
            g = t.gaussian_mean(mean, var)
            if g is None:
                return None
            total += g
        return total

    def gaussian_gradient_mean(self, mean, var):
        total = np.zeros(len(mean))
        for t in self.terms:
            g = t.gaussian_gradient_mean(mean, var)
            if g is None:
                return None
            total += g
        return total

    def hessian_sup(self):
        sups = [t.hessian_sup() for t in self.terms]
        if any(s is None for s in sups):
            return None
        return sum(sups)


class Zero(PotentialModel):
    """The free particle, V = 0."""

    separable = True

    def values_on(self, grid):
        return np.zeros(grid.shape)

    def gradient_on(self, grid):
        return tuple(np.zeros(grid.shape) for _ in range(grid.d))

    def gaussian_mean(self, mean, var):
        return 0.0

    def gaussian_gradient_mean(self, mean, var):
        return np.zeros(len(mean))

    def hessian_sup(self):
        return 0.0

    def __eq__(self, other):
        return isinstance(other, Zero)

    def __hash__(self):
        return hash("Zero")


# ---------------------------------------------------------------------------
# Hamiltonian


@dataclass(frozen=True)
class HamiltonianSpec:
    """H = -(hbar^2/2) sum_n s_n d^2/dx_n^2 + V, with unit mass convention.

    ``kinetic_scales`` holds optional per-axis factors s_n (defaults to 1),
    covering single-particle Hamiltonians with unequal masses.
    """

    hbar: float
    potential: PotentialModel
    kinetic_scales: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.hbar <= 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if self.kinetic_scales is not None:
            object.__setattr__(self, "kinetic_scales", tuple(self.kinetic_scales))

    def scales_for(self, d: int) -> tuple[float, ...]:
        if self.kinetic_scales is None:
            return (1.0,) * d
        if len(self.kinetic_scales) != d:
            raise ValueError("kinetic_scales length does not match dimension")
        return self.kinetic_scales


def apply_h(ham: HamiltonianSpec, u: GridWavefunction) -> GridWavefunction:
    """Apply H = -(hbar^2/2) Laplacian + V to ``u`` spectrally."""
    lap = spectral_laplacian(u, ham.scales_for(u.grid.d))
    v = ham.potential.values_on(u.grid)
    return GridWavefunction(u.grid, -0.5 * ham.hbar**2 * lap.values + v * u.values)


def kinetic_energy(ham: HamiltonianSpec, u: GridWavefunction) -> float:
    """<u| -(hbar^2/2) Laplacian u> = (hbar^2/2) sum_n s_n ||d_n u||^2."""
    scales = ham.scales_for(u.grid.d)
    total = 0.0
    for s, du in zip(scales, spectral_gradient(u)):
        total += s * du.norm() ** 2
    return 0.5 * ham.hbar**2 * total


def energy_expectation(ham: HamiltonianSpec, u: GridWavefunction) -> float:
    """Total energy <u|Hu> by quadrature (real up to rounding)."""
    return inner(u, apply_h(ham, u)).real


def grad_v_expectation(V: PotentialModel, u: GridWavefunction) -> np.ndarray:
    """<u| (grad V) u> per axis, by quadrature with the analytic gradient."""
    density = np.abs(u.values) ** 2
    w = u.grid.weight
    return np.array([w * np.sum(g * density) for g in V.gradient_on(u.grid)])


def exact_class_parameters(ham: HamiltonianSpec, delta: float, d: int):
    """Parameters (lam, mu, omega) when H matches the ladder form for width delta.

    The class consists of Hamiltonians lam * (-delta^2 Lap + |x|^2/(4 delta^2)
    - d/2) + mu.x + omega.  Returns None when the potential does not match,
    i.e. for anything but a harmonic potential at the matched width.
    """
    V = ham.potential
    if not isinstance(V, Harmonic):
        return None
    lam = 0.5 * ham.hbar**2 / delta**2
    if abs(lam / (4 * delta**2) - 0.5 * V.k) > 1e-12 * max(1.0, abs(V.k)):
        return None
    return lam, np.zeros(d), lam * d / 2


# ---------------------------------------------------------------------------
# decomposition into particle-wise product terms (Hartree support)


@dataclass
class ProductTerm:
    """coefficient * prod_n f_n(x_n) with factors on at most two coordinates."""

    coefficient: float
    factors: dict[int, np.ndarray]


def decompose_pairwise(V: PotentialModel, grids: list[Grid]) -> list[ProductTerm] | None:
    """Write ``V`` as a sum of one-particle and pair product terms.

    ``grids`` holds one 1D grid per particle; factor tables are evaluated on
    them.  Returns None when the potential has no such decomposition.
    """
    N = len(grids)
    for g in grids:
        if g.d != 1:
            raise ValueError("per-particle grids must be one-dimensional")
    axes = [g.axis() for g in grids]

    if isinstance(V, Zero):
        return []
    if isinstance(V, Harmonic):
        return [ProductTerm(0.5 * V.k, {n: axes[n] ** 2}) for n in range(N)]
    if isinstance(V, Quartic):
        terms = [
            ProductTerm(1.0, {n: 0.5 * V.k2 * axes[n] ** 2 + 0.25 * V.k4 * axes[n] ** 4})
            for n in range(N)
        ]
        for n in range(N):
            for m in range(n + 1, N):
                terms.append(
                    ProductTerm(0.5 * V.k4, {n: axes[n] ** 2, m: axes[m] ** 2})
                )
        return terms
    if isinstance(V, SeparableSum):
        if len(V.models) != N:
            raise ValueError("SeparableSum length does not match particle count")
        return [
            ProductTerm(1.0, {n: V.models[n].values_on(grids[n])}) for n in range(N)
        ]
    if isinstance(V, PairProduct):
        i, j = V.pair
        if not (0 <= i < N and 0 <= j < N and i != j):
            raise ValueError(f"PairProduct pair {V.pair} invalid for N={N}")
        return [ProductTerm(V.lam, {i: axes[i], j: axes[j]})]
    if isinstance(V, SumPotential):
        out: list[ProductTerm] = []
        for t in V.terms:
            sub = decompose_pairwise(t, grids)
            if sub is None:
                return None
            out.extend(sub)
        return out
    return None


def _factor_expectation(phi: GridWavefunction, table: np.ndarray) -> float:
    return float(phi.grid.weight * np.sum(table * np.abs(phi.values) ** 2))


def mean_field_reduce(
    V: PotentialModel, phis: list[GridWavefunction], n: int
) -> np.ndarray:
    """The n-th mean-field potential table V_n(x_n).

    ``phis`` are the normalized single-particle functions; all coordinates
    but ``n`` are averaged against their densities.  Requires a potential
    decomposable into one-particle and pair terms, or a ``Custom`` 2D table
    for exactly two particles.
    """
    N = len(phis)
    grids = [p.grid for p in phis]
    terms = decompose_pairwise(V, grids)
    if terms is None:
        if isinstance(V, Custom) and N == 2 and V.grid.d == 2:
            return _mean_field_custom_2d(V, phis, n)
        raise ValueError(
            f"potential {type(V).__name__} unsupported for N={N} mean-field reduction"
        )
    out = np.zeros(grids[n].M)
    for t in terms:
        scalar = t.coefficient
        for m, table in t.factors.items():
            if m != n:
                scalar *= _factor_expectation(phis[m], table)
        out = out + scalar * (t.factors[n] if n in t.factors else np.ones(grids[n].M))
    return out


def _mean_field_custom_2d(V: Custom, phis, n: int) -> np.ndarray:
    other = 1 - n
    dens = np.abs(phis[other].values) ** 2 * phis[other].grid.weight
    if phis[other].grid.M != V.grid.M:
        raise GridMismatchError("Custom 2D table does not match particle grids")
    if n == 0:
        return V.table @ dens
    return dens @ V.table
