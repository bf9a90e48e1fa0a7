"""Periodic grids, spectral transforms and dealiased products.

The plane is truncated to the periodic box ``[-L/2, L/2)^2``.  Array axis 0
carries ``x_1`` and axis 1 carries ``x_2``; node ``(i, j)`` sits at
``(-L/2 + i*h, -L/2 + j*h)`` with ``h = L/n`` so the origin is node
``(n/2, n/2)``.

Transforms use the real-to-complex layout of :func:`scipy.fft.rfft2` with the
default normalisation: the forward transform is an unnormalised sum and the
inverse carries the ``1/n^2`` factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.fft as sfft

__all__ = [
    "GridSpec",
    "ScalarField",
    "VectorField",
    "GridMismatch",
    "forward",
    "inverse",
    "derivative",
    "gradient",
    "laplacian",
    "helmholtz_inverse",
    "dealias_product",
    "pad_spectrum",
    "truncate_spectrum",
    "padded_size",
]


class GridMismatch(ValueError):
    """Fields that must share a grid do not."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid with ``n`` points per axis on a box of side ``length``."""

    n: int
    length: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 16 or self.n % 2:
            raise ValueError(f"n must be an even integer >= 16, got {self.n}")
        if not (self.length > 0 and np.isfinite(self.length)):
            raise ValueError(f"length must be positive, got {self.length}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "length", float(self.length))

    @property
    def spacing(self) -> float:
        return self.length / self.n

    @property
    def cell_area(self) -> float:
        return self.spacing**2

    @cached_property
    def x(self) -> np.ndarray:
        """1D node coordinates."""
        return -0.5 * self.length + self.spacing * np.arange(self.n)

    @cached_property
    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Broadcastable ``(X1, X2)`` with shapes ``(n, 1)`` and ``(1, n)``."""
        return self.x[:, None], self.x[None, :]

    @cached_property
    def r2(self) -> np.ndarray:
        x1, x2 = self.coords
        return x1**2 + x2**2

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / self.length

    @property
    def k_nyquist(self) -> float:
        return np.pi / self.spacing

    @cached_property
    def wavenumbers(self) -> tuple[np.ndarray, np.ndarray]:
        """``(k1, k2)`` in rfft layout, shapes ``(n, 1)`` and ``(1, n//2 + 1)``."""
        k1 = self.dk * np.fft.fftfreq(self.n, 1.0 / self.n)
        k2 = self.dk * np.arange(self.n // 2 + 1)
        return k1[:, None], k2[None, :]

    @cached_property
    def k2(self) -> np.ndarray:
        """``|k|^2`` in rfft layout."""
        k1, k2 = self.wavenumbers
        return k1**2 + k2**2

    @cached_property
    def odd_wavenumbers(self) -> tuple[np.ndarray, np.ndarray]:
        """Wavenumbers with the Nyquist entry zeroed, for odd-order derivatives."""
        k1, k2 = (k.copy() for k in self.wavenumbers)
        k1[self.n // 2, 0] = 0.0
        k2[0, self.n // 2] = 0.0
        return k1, k2

    @property
    def spectral_shape(self) -> tuple[int, int]:
        return (self.n, self.n // 2 + 1)

    def zeros(self) -> "ScalarField":
        return ScalarField(self, np.zeros((self.n, self.n)))

    def sample(self, fn) -> "ScalarField":
        """Evaluate ``fn(x1, x2)`` on the nodes."""
        x1, x2 = self.coords
        return ScalarField(self, np.broadcast_to(fn(x1, x2), (self.n, self.n)))


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Real samples of a scalar function on a :class:`GridSpec`."""

    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True)
        if v.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"values shape {v.shape} does not match grid n={self.grid.n}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def _check(self, other: "ScalarField"):
        if other.grid != self.grid:
            raise GridMismatch(f"{self.grid} vs {other.grid}")

    def __add__(self, other):
        if isinstance(other, ScalarField):
            self._check(other)
            return ScalarField(self.grid, self.values + other.values)
        return ScalarField(self.grid, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ScalarField):
            self._check(other)
            return ScalarField(self.grid, self.values - other.values)
        return ScalarField(self.grid, self.values - other)

    def __neg__(self):
        return ScalarField(self.grid, -self.values)

    def __mul__(self, other):
        if isinstance(other, ScalarField):
            self._check(other)
            return ScalarField(self.grid, self.values * other.values)
        return ScalarField(self.grid, self.values * other)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return ScalarField(self.grid, self.values / c)

    def spectrum(self) -> np.ndarray:
        return forward(self.values)

    @classmethod
    def from_spectrum(cls, grid: GridSpec, coeffs: np.ndarray) -> "ScalarField":
        return cls(grid, inverse(coeffs, grid.n))


@dataclass(frozen=True, eq=False)
class VectorField:
    """Two scalar components on a shared grid."""

    c1: ScalarField
    c2: ScalarField

    def __post_init__(self):
        if self.c1.grid != self.c2.grid:
            raise GridMismatch("vector components must share one grid")

    @property
    def grid(self) -> GridSpec:
        return self.c1.grid

    def __iter__(self):
        return iter((self.c1, self.c2))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.c1 - other.c1, self.c2 - other.c2)

    def __mul__(self, c) -> "VectorField":
        return VectorField(self.c1 * c, self.c2 * c)

    __rmul__ = __mul__

    def magnitude(self) -> np.ndarray:
        return np.hypot(self.c1.values, self.c2.values)


def forward(values: np.ndarray) -> np.ndarray:
    return sfft.rfft2(values)


def inverse(coeffs: np.ndarray, n: int) -> np.ndarray:
    return sfft.irfft2(coeffs, s=(n, n))


def _multiplier(grid: GridSpec, axis: int, order: int) -> np.ndarray:
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    if order < 1:
        raise ValueError("order must be a positive integer")
    ks = grid.odd_wavenumbers if order % 2 else grid.wavenumbers
    return (1j * ks[axis - 1]) ** order


def derivative(f: ScalarField, axis: int, order: int = 1) -> ScalarField:
    """Spectral derivative ``d^order f / dx_axis^order``."""
    coeffs = f.spectrum() * _multiplier(f.grid, axis, order)
    return ScalarField.from_spectrum(f.grid, coeffs)


def gradient(f: ScalarField) -> VectorField:
    return VectorField(derivative(f, 1), derivative(f, 2))


def laplacian(f: ScalarField) -> ScalarField:
    return ScalarField.from_spectrum(f.grid, -f.grid.k2 * f.spectrum())


def helmholtz_inverse(f: ScalarField, a: float) -> ScalarField:
    """Solve ``(1 - a Δ) g = f``."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    if a == 0:
        return f
    return ScalarField.from_spectrum(f.grid, f.spectrum() / (1.0 + a * f.grid.k2))


def padded_size(n: int, arity: int) -> int:
    """Grid size that removes aliasing from a product of ``arity`` band-limited factors."""
    if arity not in (2, 3):
        raise ValueError("arity must be 2 or 3")
    m = (arity + 1) * n / 2
    return int(np.ceil(m / 2.0) * 2)


def pad_spectrum(coeffs: np.ndarray, n: int, m: int) -> np.ndarray:
    """Embed an ``n``-grid rfft spectrum into an ``m``-grid one (``m >= n``).

    Nyquist modes are dropped and the result is rescaled so that
    ``inverse(pad_spectrum(c, n, m), m)`` samples the same function.
    """
    h = n // 2
    out = np.zeros((m, m // 2 + 1), dtype=np.complex128)
    scale = (m / n) ** 2
    out[:h, :h] = coeffs[:h, :h] * scale
    out[m - h + 1 :, :h] = coeffs[h + 1 :, :h] * scale
    return out


def truncate_spectrum(coeffs: np.ndarray, m: int, n: int) -> np.ndarray:
    """Keep the modes of an ``m``-grid spectrum representable on an ``n`` grid.

    The Nyquist row and column of the result are zero.
    """
    h = n // 2
    out = np.zeros((n, h + 1), dtype=np.complex128)
    scale = (n / m) ** 2
    out[:h, :h] = coeffs[:h, :h] * scale
    out[h + 1 :, :h] = coeffs[m - h + 1 :, :h] * scale
    return out


def dealias_product(fields: list[ScalarField], arity: int | None = None) -> ScalarField:
    """Pointwise product of 2 or 3 fields without aliasing onto the retained modes."""
    if arity is None:
        arity = len(fields)
    if len(fields) != arity:
        raise ValueError(f"arity {arity} does not match {len(fields)} fields")
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise GridMismatch("all factors must share one grid")
    n = grid.n
    m = padded_size(n, arity)
    prod = np.ones((m, m))
    for f in fields:
        prod = prod * inverse(pad_spectrum(f.spectrum(), n, m), m)
    return ScalarField.from_spectrum(grid, truncate_spectrum(forward(prod), m, n))
