"""Vilenkin characters, the discrete transform, convolution, and L_p norms.

The character indexed by n is psi_n(x) = prod_k exp(2*pi*i * n_k * x_k / m_k),
a product of generalized Rademacher functions.  At resolution N the characters
psi_0 .. psi_{M_N - 1} form an orthonormal basis of the M_N-cell grid under the
normalized counting measure, and the Fourier coefficient of a grid function is
fhat(n) = (1/M_N) * sum_x f(x) * conj(psi_n(x)).

Every character value is a root of unity of order dividing L = lcm(m_k).  All
character evaluations here go through one shared table of the L-th roots, so
identities between differently-assembled expressions cancel to machine noise
instead of accumulating independent rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .group import Element, GroupSpec, digit_table

__all__ = [
    "GridFunction",
    "Spectrum",
    "rademacher",
    "psi",
    "character_row",
    "forward",
    "inverse",
    "partial_sum",
    "convolve",
    "norm",
    "weak_norm",
]


@lru_cache(maxsize=32)
def _roots(spec: GroupSpec) -> np.ndarray:
    """The L-th roots of unity, L = lcm of the radices."""
    L = math.lcm(*spec.m)
    table = np.exp(2j * np.pi * np.arange(L) / L)
    table.setflags(write=False)
    return table


def _phase_rows(spec: GroupSpec, ns: np.ndarray) -> np.ndarray:
    """Integer phase matrix P[i, x] with psi_{ns[i]}(x) = roots[P[i, x]].

    The phase of psi_n at x is sum_k n_k * x_k / m_k (mod 1), an integer
    multiple of 1/L; the matrix holds that integer mod L.
    """
    table = digit_table(spec)
    L = len(_roots(spec))
    scale = np.array([L // r for r in spec.m], dtype=np.int64)
    phases = (table[ns] * scale) @ table.T
    return phases % L


def character_row(spec: GroupSpec, n: int) -> np.ndarray:
    """psi_n sampled on the whole grid, as a read-only complex vector."""
    if not 0 <= n < spec.size:
        raise ValueError(f"character index {n} outside [0, {spec.size})")
    row = _roots(spec)[_phase_rows(spec, np.array([n]))[0]]
    row.setflags(write=False)
    return row


def rademacher(k: int, x: Element) -> complex:
    """Generalized Rademacher function r_k(x) = exp(2*pi*i * x_k / m_k)."""
    spec = x.spec
    if not 0 <= k < spec.levels:
        raise ValueError(f"coordinate {k} outside [0, {spec.levels})")
    L = len(_roots(spec))
    return complex(_roots(spec)[(x.digits[k] * (L // spec.m[k])) % L])


def psi(n: int, x: Element) -> complex:
    """Character value psi_n(x), a product of Rademacher powers."""
    spec = x.spec
    if not 0 <= n < spec.size:
        raise ValueError(f"character index {n} outside [0, {spec.size})")
    L = len(_roots(spec))
    phase = 0
    for k, (nk, xk) in enumerate(zip(spec.digits(n), x.digits)):
        phase += nk * xk * (L // spec.m[k])
    return complex(_roots(spec)[phase % L])


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A complex-valued function sampled on the grid, immutable once built."""

    spec: GroupSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.complex128)
        if v.shape != (self.spec.size,):
            raise ValueError(
                f"values must have shape ({self.spec.size},), got {v.shape}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def integral(self) -> complex:
        """Haar integral: the grid mean (1/M_N) * sum_x f(x)."""
        return complex(self.values.mean())

    @classmethod
    def constant(cls, spec: GroupSpec, value: complex = 1.0) -> "GridFunction":
        return cls(spec, np.full(spec.size, value, dtype=np.complex128))

    @classmethod
    def character(cls, spec: GroupSpec, n: int) -> "GridFunction":
        return cls(spec, character_row(spec, n))

    @classmethod
    def indicator(cls, spec: GroupSpec, rank: int, cell: int) -> "GridFunction":
        """Indicator of the rank-n interval containing grid index ``cell``.

        A rank-n interval is a residue class mod M_n, so ``cell`` may be given
        either as a class representative below M_n or as any member index.
        """
        if not 0 <= rank <= spec.levels:
            raise ValueError(f"rank {rank} outside [0, {spec.levels}]")
        stride = spec.M[rank]
        if not 0 <= cell < spec.size:
            raise ValueError(f"cell {cell} outside [0, {spec.size})")
        idx = np.arange(spec.size, dtype=np.int64)
        return cls(spec, (idx % stride == cell % stride).astype(np.complex128))

    @classmethod
    def random(
        cls, spec: GroupSpec, seed: int, rank: int | None = None
    ) -> "GridFunction":
        """Seeded complex Gaussian noise, constant on rank-n intervals."""
        if rank is None:
            rank = spec.levels
        if not 0 <= rank <= spec.levels:
            raise ValueError(f"rank {rank} outside [0, {spec.levels}]")
        rng = np.random.default_rng(seed)
        stride = spec.M[rank]
        base = rng.standard_normal(stride) + 1j * rng.standard_normal(stride)
        idx = np.arange(spec.size, dtype=np.int64)
        return cls(spec, base[idx % stride])

    def at(self, x: Element) -> complex:
        return complex(self.values[x.index])

    def __add__(self, other: "GridFunction") -> "GridFunction":
        if self.spec != other.spec:
            raise ValueError("grid functions belong to different groups")
        return GridFunction(self.spec, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        if self.spec != other.spec:
            raise ValueError("grid functions belong to different groups")
        return GridFunction(self.spec, self.values - other.values)

    def __mul__(self, scalar: complex) -> "GridFunction":
        return GridFunction(self.spec, self.values * scalar)

    __rmul__ = __mul__

    def to_csv(self, path) -> None:
        _write_complex_csv(path, self.values)

    @classmethod
    def from_csv(cls, spec: GroupSpec, path) -> "GridFunction":
        return cls(spec, _read_complex_csv(path, spec.size))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients in Paley order, immutable once built."""

    spec: GroupSpec
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.coeffs, dtype=np.complex128)
        if c.shape != (self.spec.size,):
            raise ValueError(
                f"coeffs must have shape ({self.spec.size},), got {c.shape}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def to_csv(self, path) -> None:
        _write_complex_csv(path, self.coeffs)

    @classmethod
    def from_csv(cls, spec: GroupSpec, path) -> "Spectrum":
        return cls(spec, _read_complex_csv(path, spec.size))


def _write_complex_csv(path, data: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("index,re,im\n")
        for i, z in enumerate(data):
            fh.write(f"{i},{z.real:.17g},{z.imag:.17g}\n")


def _read_complex_csv(path, expected: int) -> np.ndarray:
    out = np.zeros(expected, dtype=np.complex128)
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "index,re,im":
            raise ValueError(f"unexpected CSV header {header!r}")
        count = 0
        for line in fh:
            if not line.strip():
                continue
            i_s, re_s, im_s = line.strip().split(",")
            out[int(i_s)] = float(re_s) + 1j * float(im_s)
            count += 1
    if count != expected:
        raise ValueError(f"expected {expected} rows, got {count}")
    return out


@lru_cache(maxsize=128)
def _dft_matrix(spec: GroupSpec, k: int, inverse: bool) -> np.ndarray:
    """The m_k x m_k character matrix for coordinate k, from the shared roots."""
    r = spec.m[k]
    roots = _roots(spec)
    L = len(roots)
    idx = (np.outer(np.arange(r), np.arange(r)) * (L // r)) % L
    mat = roots[idx]
    return mat if inverse else mat.conj()


def _apply_stages(spec: GroupSpec, data: np.ndarray, inverse: bool) -> np.ndarray:
    """Run the mixed-radix butterfly over every coordinate.

    The length-M_N vector reshapes in C order to (m_{N-1}, ..., m_0), which
    puts coordinate k on axis N-1-k; each stage contracts one axis with its
    radix-m_k character matrix, for a total cost of O(M_N * sum_k m_k).
    """
    arr = data.reshape(spec.m[::-1])
    for k in range(spec.levels):
        axis = spec.levels - 1 - k
        mat = _dft_matrix(spec, k, inverse)
        arr = np.moveaxis(np.tensordot(mat, arr, axes=(1, axis)), 0, axis)
    return arr.reshape(-1)


def _forward_naive(f: GridFunction) -> np.ndarray:
    """Direct quadratic-cost analysis: one conjugated character row per n."""
    spec = f.spec
    out = np.empty(spec.size, dtype=np.complex128)
    roots = _roots(spec)
    chunk = 512
    for start in range(0, spec.size, chunk):
        ns = np.arange(start, min(start + chunk, spec.size), dtype=np.int64)
        rows = roots[_phase_rows(spec, ns)]
        out[ns] = rows.conj() @ f.values
    return out / spec.size


def forward(f: GridFunction, method: str = "fast") -> Spectrum:
    """Analysis transform: Fourier coefficients of f in Paley order.

    ``method="fast"`` runs the separable mixed-radix butterfly;
    ``method="naive"`` evaluates the defining sums directly.  Both compute
    fhat(n) = (1/M_N) * sum_x f(x) * conj(psi_n(x)).
    """
    if method == "fast":
        return Spectrum(f.spec, _apply_stages(f.spec, f.values, inverse=False) / f.spec.size)
    if method == "naive":
        return Spectrum(f.spec, _forward_naive(f))
    raise ValueError(f"unknown method {method!r}; expected 'fast' or 'naive'")


def inverse(s: Spectrum) -> GridFunction:
    """Synthesis transform: f(x) = sum_n coeffs[n] * psi_n(x)."""
    return GridFunction(s.spec, _apply_stages(s.spec, s.coeffs, inverse=True))


def partial_sum(f: GridFunction, n: int) -> GridFunction:
    """Fourier partial sum S_n f = sum_{k<n} fhat(k) psi_k; S_0 f = 0."""
    spec = f.spec
    if not 0 <= n <= spec.size:
        raise ValueError(f"partial sum order {n} outside [0, {spec.size}]")
    coeffs = forward(f).coeffs.copy()
    coeffs[n:] = 0.0
    return inverse(Spectrum(spec, coeffs))


def convolve(f: GridFunction, g: GridFunction) -> GridFunction:
    """Normalized convolution (f*g)(x) = (1/M_N) sum_t f(x-t) g(t).

    Computed spectrally: under the 1/M_N-normalized transform the
    coefficients of f*g are exactly fhat * ghat.
    """
    if f.spec != g.spec:
        raise ValueError("grid functions belong to different groups")
    prod = forward(f).coeffs * forward(g).coeffs
    return inverse(Spectrum(f.spec, prod))


def norm(f: GridFunction, p: float) -> float:
    """Strong L_p norm under normalized Haar measure; p may be math.inf."""
    if p == math.inf:
        return float(np.abs(f.values).max())
    if p < 1:
        raise ValueError(f"strong norm needs p >= 1, got {p}")
    return float(np.mean(np.abs(f.values) ** p) ** (1.0 / p))


def weak_norm(f: GridFunction, p: float) -> float:
    """Weak L_p statistic sup_v v * mu(|f| >= v)^(1/p) over levels v of |f|.

    Evaluating mu(|f| > lambda) just below each distinct value v of |f|
    turns the strict-inequality sup into v * mu(|f| >= v)^(1/p); scanning
    the sorted magnitudes covers every candidate v.
    """
    if p <= 0:
        raise ValueError(f"weak norm needs p > 0, got {p}")
    mags = np.sort(np.abs(f.values))[::-1]
    fractions = np.arange(1, len(mags) + 1) / len(mags)
    return float(np.max(mags * fractions ** (1.0 / p)))


def lift_step(spec: GroupSpec, rank: int, base: Sequence[complex]) -> GridFunction:
    """Extend values on the M_rank rank-n cells to a step function on the grid."""
    stride = spec.M[rank]
    base_arr = np.asarray(base, dtype=np.complex128)
    if base_arr.shape != (stride,):
        raise ValueError(f"expected {stride} cell values, got {base_arr.shape}")
    idx = np.arange(spec.size, dtype=np.int64)
    return GridFunction(spec, base_arr[idx % stride])
