"""1D complex canonical transform core.

A transform axis is parameterized by a real unimodular matrix
A = [[a, b], [c, d]]. For b != 0 the kernel evaluated here is

    K(x, w) = exp(sign*1j*((a/(2b))x^2 - x*w/b + (d/(2b))w^2 - (pi/4)*sgn(b)))
              / sqrt(2*pi*|b|)

with sign = +1 for the defining kernel and sign = -1 for its conjugate
(the inversion kernel). The amplitude 1/sqrt(2*pi*|b|) together with the
constant phase -(pi/4)*sgn(b) is the principal branch of 1/sqrt(2*pi*1j*b),
which keeps the transform unitary for either sign of b.

For b = 0 the transform degenerates to a chirp-weighted rescaling

    (T f)(u) = sqrt(|d|) * exp(sign*1j*(c*d/2)*u^2) * f(d*u),

implemented by exact index remapping only (no interpolation).

The quadrature transform F(w_m) = sum_n K(x_n, w_m) f(x_n) dx is computed
two ways: `lct_direct` builds the kernel matrix (the O(N^2) oracle) and
`lct_fast` factors the cross term into chirp * FFT * chirp, which is exact
(not approximate) when the grids obey the matched-sampling contract
dx * dw = 2*pi*|b| / N.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.fft

DET_TOL = 1e-9
MATCH_TOL = 1e-9


class ZeroBError(ValueError):
    """b = 0 requested on a path that requires b != 0."""


class MatchedSamplingError(ValueError):
    """Output grid violates dx * dw = 2*pi*|b| / N."""


def _fft_workers() -> int | None:
    try:
        w = int(os.environ.get("QLCT_THREADS", "0"))
    except ValueError:
        return None
    return w if w > 1 else None


@dataclass(frozen=True)
class LCTParams:
    """One axis matrix A = [[a, b], [c, d]] with a*d - b*c = 1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > DET_TOL:
            raise ValueError(f"det(A) = {det!r} != 1 for A = {self.astuple()}")

    def astuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def swapped(self) -> "LCTParams":
        """a and d exchanged; used to run a transform in the reverse
        direction (the conjugate kernel read with input and output slots
        interchanged)."""
        return LCTParams(self.d, self.b, self.c, self.a)

    def inverse(self) -> "LCTParams":
        return LCTParams(self.d, -self.b, -self.c, self.a)


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1D sampling grid: sample k sits at x0 + k*dx."""

    n: int
    dx: float
    x0: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"grid needs at least 2 samples, got {self.n}")
        if not self.dx > 0:
            raise ValueError(f"grid spacing must be positive, got {self.dx}")

    @staticmethod
    def centered(n: int, dx: float) -> "Grid1D":
        return Grid1D(n, dx, -(n / 2 - 0.5) * dx)

    def coords(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    def approx_eq(self, other: "Grid1D", tol: float = 1e-9) -> bool:
        return (self.n == other.n
                and abs(self.dx - other.dx) <= tol * self.dx
                and abs(self.x0 - other.x0) <= tol * self.dx * self.n)


def conjugate_grid(grid: Grid1D, b: float) -> Grid1D:
    """Centered output grid satisfying the matched-sampling contract."""
    if b == 0:
        raise ZeroBError("no conjugate grid for b = 0; use lct_scale_chirp")
    dw = 2 * np.pi * abs(b) / (grid.n * grid.dx)
    return Grid1D.centered(grid.n, dw)


def _check_sign(sign: int) -> int:
    if sign not in (1, -1):
        raise ValueError(f"kernel sign must be +1 or -1, got {sign}")
    return sign


def kernel_value(p: LCTParams, sign: int, x, w) -> np.ndarray:
    """Kernel value(s) at (x, w); broadcasts over array arguments."""
    _check_sign(sign)
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    if p.b == 0:
        phase = (p.c * p.d / 2) * w**2
        return np.sqrt(abs(p.d)) * np.exp(1j * sign * phase) * np.ones_like(x)
    phase = ((p.a / (2 * p.b)) * x**2 - x * w / p.b + (p.d / (2 * p.b)) * w**2
             - (np.pi / 4) * np.sign(p.b))
    return np.exp(1j * sign * phase) / np.sqrt(2 * np.pi * abs(p.b))


def _resolve_out_grid(p: LCTParams, grid_in: Grid1D, grid_out: Grid1D | None) -> Grid1D:
    if grid_out is None:
        return conjugate_grid(grid_in, p.b)
    required = 2 * np.pi * abs(p.b) / (grid_in.n * grid_in.dx)
    if grid_out.n != grid_in.n or abs(grid_out.dx - required) > MATCH_TOL * required:
        raise MatchedSamplingError(
            f"matched sampling requires n = {grid_in.n}, dw = {required!r}; "
            f"got n = {grid_out.n}, dw = {grid_out.dx!r}")
    return grid_out


def lct_direct(p: LCTParams, sign: int, f: np.ndarray, grid_in: Grid1D,
               grid_out: Grid1D | None = None) -> tuple[np.ndarray, Grid1D]:
    """Quadrature transform by explicit kernel matrix along the last axis.

    O(N^2); the reference implementation the fast path is tested against.
    """
    _check_sign(sign)
    if p.b == 0:
        raise ZeroBError("lct_direct requires b != 0; use lct_scale_chirp")
    grid_out = _resolve_out_grid(p, grid_in, grid_out)
    f = np.asarray(f, dtype=complex)
    if f.shape[-1] != grid_in.n:
        raise ValueError(f"last axis has {f.shape[-1]} samples, grid has {grid_in.n}")
    kernel = kernel_value(p, sign, grid_in.coords()[None, :], grid_out.coords()[:, None])
    out = np.einsum("mn,...n->...m", kernel, f) * grid_in.dx
    return out, grid_out


def lct_fast(p: LCTParams, sign: int, f: np.ndarray, grid_in: Grid1D,
             grid_out: Grid1D | None = None) -> tuple[np.ndarray, Grid1D]:
    """Chirp-FFT-chirp transform along the last axis.

    Exactly re-factors the lct_direct sum on matched grids:
    the cross term exp(-sign*1j*x*w/b) splits into grid-offset chirps and
    the pure DFT kernel exp(-sign*sgn(b)*2j*pi*n*m/N). Cost O(N log N).
    """
    _check_sign(sign)
    if p.b == 0:
        raise ZeroBError("lct_fast requires b != 0; use lct_scale_chirp")
    grid_out = _resolve_out_grid(p, grid_in, grid_out)
    f = np.asarray(f, dtype=complex)
    n = grid_in.n
    if f.shape[-1] != n:
        raise ValueError(f"last axis has {f.shape[-1]} samples, grid has {n}")
    x = grid_in.coords()
    w = grid_out.coords()
    idx = np.arange(n)
    pre = np.exp(1j * sign * ((p.a / (2 * p.b)) * x**2
                              - (idx * grid_in.dx) * grid_out.x0 / p.b))
    post = np.exp(1j * sign * ((p.d / (2 * p.b)) * w**2 - grid_in.x0 * w / p.b
                               - (np.pi / 4) * np.sign(p.b)))
    post = post * (grid_in.dx / np.sqrt(2 * np.pi * abs(p.b)))
    g = f * pre
    workers = _fft_workers()
    if sign * np.sign(p.b) > 0:
        spec = scipy.fft.fft(g, axis=-1, workers=workers)
    else:
        spec = scipy.fft.ifft(g, axis=-1, workers=workers) * n
    return post * spec, grid_out


def scale_chirp_grid(p: LCTParams, grid_in: Grid1D) -> Grid1D:
    """Admissible output grid of the b = 0 branch: the input grid scaled
    by a (the set {a * x_k}, reordered to ascend when a < 0)."""
    if p.b != 0:
        raise ValueError("scale_chirp_grid applies only to b = 0")
    dx_out = abs(p.a) * grid_in.dx
    if p.a > 0:
        x0_out = p.a * grid_in.x0
    else:
        x0_out = p.a * (grid_in.x0 + (grid_in.n - 1) * grid_in.dx)
    return Grid1D(grid_in.n, dx_out, x0_out)


def lct_scale_chirp(p: LCTParams, sign: int, f: np.ndarray, grid_in: Grid1D,
                    grid_out: Grid1D | None = None) -> tuple[np.ndarray, Grid1D]:
    """b = 0 branch along the last axis: chirp times exact index rescaling.

    Output sample u satisfies d*u = x on the input grid; d = 1/a, so the
    admissible output grid is the input grid scaled by a. A mismatching
    requested grid is rejected rather than interpolated.
    """
    _check_sign(sign)
    if p.b != 0:
        raise ValueError(f"lct_scale_chirp requires b = 0, got b = {p.b!r}")
    admissible = scale_chirp_grid(p, grid_in)
    if grid_out is None:
        grid_out = admissible
    elif not grid_out.approx_eq(admissible):
        raise ValueError(
            f"d*u falls off the input grid; admissible output grid has "
            f"n = {admissible.n}, dx = {admissible.dx!r}, x0 = {admissible.x0!r}")
    f = np.asarray(f, dtype=complex)
    if f.shape[-1] != grid_in.n:
        raise ValueError(f"last axis has {f.shape[-1]} samples, grid has {grid_in.n}")
    u = grid_out.coords()
    chirp = np.sqrt(abs(p.d)) * np.exp(1j * sign * (p.c * p.d / 2) * u**2)
    vals = f if p.a > 0 else f[..., ::-1]
    return chirp * vals, grid_out
