"""Summability kernels and the identities that control their L1 size.

All kernels are finite character sums, synthesized from their coefficient
vectors:

    dirichlet  D_n = sum_{k<n} psi_k                      (D_0 = 0)
    fejer      K_n = (1/n) sum_{k=1}^{n} D_k              (K_0 = 0)
    t_kernel   (1/Q_n) sum_{k=0}^{n-1} q_k D_k            forward frame
    norlund    (1/Q_n) sum_{k=1}^{n} q_{n-k} D_k          reversed frame

Collecting the coefficient of psi_j gives closed forms (e.g. (n-j)/n for the
Fejer kernel), so each kernel is one synthesis pass.  The identity checks in
identity_residual() deliberately rebuild their right-hand sides from other
kernels so that the two sides travel different numerical paths.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .group import GroupSpec
from .transform import GridFunction, Spectrum, character_row, inverse

if TYPE_CHECKING:  # circular at runtime: means imports the kernels for convolution
    from .means import WeightSequence

__all__ = [
    "KernelProfileRow",
    "dirichlet",
    "fejer",
    "t_kernel",
    "norlund_kernel",
    "identity_residual",
    "l1_profile",
    "domination_constant",
]


def _synthesize(spec: GroupSpec, coeffs: np.ndarray) -> GridFunction:
    full = np.zeros(spec.size, dtype=np.complex128)
    full[: len(coeffs)] = coeffs
    return inverse(Spectrum(spec, full))


def _check_order(n: int, spec: GroupSpec, lowest: int = 0) -> None:
    if not lowest <= n <= spec.size:
        raise ValueError(f"kernel order {n} outside [{lowest}, {spec.size}]")


def dirichlet(n: int, spec: GroupSpec) -> GridFunction:
    """Dirichlet kernel D_n; D_0 is the zero function."""
    _check_order(n, spec)
    return _synthesize(spec, np.ones(n, dtype=np.complex128))


def fejer(n: int, spec: GroupSpec) -> GridFunction:
    """Fejer kernel K_n = (1/n) sum_{k=1}^n D_k; K_0 is the zero function."""
    _check_order(n, spec)
    if n == 0:
        return GridFunction.constant(spec, 0.0)
    j = np.arange(n)
    return _synthesize(spec, (n - j) / n)


def t_kernel(w: "WeightSequence", n: int, spec: GroupSpec) -> GridFunction:
    """Forward-frame kernel (1/Q_n) sum_{k<n} q_k D_k.

    The psi_j coefficient is (Q_n - Q_{j+1})/Q_n, so the kernel integrates
    to (Q_n - q_0)/Q_n rather than 1 whenever q_0 > 0: the k = 0 term D_0
    vanishes and takes the weight q_0 with it.
    """
    _check_order(n, spec, lowest=1)
    if w.Q(n) <= 0:
        raise ValueError(f"Q({n}) not positive for {w.label()}")
    q = w.q_array(n)
    suffix = np.zeros(n + 1)
    suffix[:n] = np.cumsum(q[::-1])[::-1]
    return _synthesize(spec, suffix[1:] / w.Q(n))


def norlund_kernel(w: "WeightSequence", n: int, spec: GroupSpec) -> GridFunction:
    """Reversed-frame kernel (1/Q_n) sum_{k=1}^n q_{n-k} D_k.

    The psi_j coefficient is Q_{n-j}/Q_n; the kernel always integrates to 1.
    """
    _check_order(n, spec, lowest=1)
    if w.Q(n) <= 0:
        raise ValueError(f"Q({n}) not positive for {w.label()}")
    Q = w.Q_array(n)
    return _synthesize(spec, Q[n:0:-1] / Q[n])


def identity_residual(
    kind: str,
    spec: GroupSpec,
    *,
    rank: int | None = None,
    j: int | None = None,
    n: int | None = None,
    weights: "WeightSequence | None" = None,
) -> float:
    """Max-abs residual of one algebraic kernel identity over the grid.

    kind='reflection' (takes rank and j < M_rank):
        D_{M_r - j} = D_{M_r} - psi_{M_r - 1} * conj(D_j)
    kind='abel-kernel' (takes weights and n):
        Q_n * t_kernel_n = sum_{j=1}^{n-2} (q_j - q_{j+1}) j K_j
                           + q_{n-1} (n-1) K_{n-1}
    kind='block' (takes weights and rank, with Q(M_rank) > 0):
        t_kernel_{M_r} = D_{M_r} - psi_{M_r - 1} * conj(norlund_kernel_{M_r})
    """
    if kind == "reflection":
        if rank is None or j is None:
            raise ValueError("reflection residual needs rank and j")
        if not 0 <= rank <= spec.levels:
            raise ValueError(f"rank {rank} outside [0, {spec.levels}]")
        block = spec.M[rank]
        if not 0 <= j < block:
            raise ValueError(f"offset {j} outside [0, {block})")
        lhs = dirichlet(block - j, spec).values
        rhs = dirichlet(block, spec).values
        if j:
            rhs = rhs - character_row(spec, block - 1) * dirichlet(j, spec).values.conj()
        return float(np.max(np.abs(lhs - rhs)))
    if kind == "abel-kernel":
        if weights is None or n is None:
            raise ValueError("abel-kernel residual needs weights and n")
        lhs = t_kernel(weights, n, spec).values
        q = weights.q_array(n)
        rhs = np.zeros(spec.size, dtype=np.complex128)
        for i in range(1, n - 1):
            rhs += (q[i] - q[i + 1]) * i * fejer(i, spec).values
        if n >= 2:
            rhs += q[n - 1] * (n - 1) * fejer(n - 1, spec).values
        return float(np.max(np.abs(lhs - rhs / weights.Q(n))))
    if kind == "block":
        if weights is None or rank is None:
            raise ValueError("block residual needs weights and rank")
        if not 0 <= rank <= spec.levels:
            raise ValueError(f"rank {rank} outside [0, {spec.levels}]")
        block = spec.M[rank]
        lhs = t_kernel(weights, block, spec).values
        rhs = dirichlet(block, spec).values - character_row(
            spec, block - 1
        ) * norlund_kernel(weights, block, spec).values.conj()
        return float(np.max(np.abs(lhs - rhs)))
    raise ValueError(f"unknown identity kind {kind!r}")


@dataclass(frozen=True)
class KernelProfileRow:
    """L1 size, Haar integral and off-interval tail of one kernel order."""

    n: int
    l1: float
    integral: complex
    tail: float


_FAMILIES = ("dirichlet", "fejer", "t", "norlund")


def l1_profile(
    family: str,
    ns: Sequence[int],
    spec: GroupSpec,
    *,
    weights: "WeightSequence | None" = None,
    tail_rank: int = 1,
) -> list[KernelProfileRow]:
    """Profile ||k_n||_1, integral and the mass outside I_tail_rank(0).

    The tail is (1/M_N) * sum over x outside the rank-tail_rank interval at 0
    of |k_n(x)|, the quantity the localization estimates bound.
    """
    if family not in _FAMILIES:
        raise ValueError(f"unknown kernel family {family!r}; expected {_FAMILIES}")
    if family in ("t", "norlund") and weights is None:
        raise ValueError(f"kernel family {family!r} needs weights")
    if not 0 <= tail_rank <= spec.levels:
        raise ValueError(f"tail rank {tail_rank} outside [0, {spec.levels}]")
    outside = np.arange(spec.size) % spec.M[tail_rank] != 0
    rows = []
    for n in sorted(ns):
        if family == "dirichlet":
            g = dirichlet(n, spec)
        elif family == "fejer":
            g = fejer(n, spec)
        elif family == "t":
            g = t_kernel(weights, n, spec)
        else:
            g = norlund_kernel(weights, n, spec)
        mags = np.abs(g.values)
        rows.append(
            KernelProfileRow(
                n=n,
                l1=float(mags.mean()),
                integral=g.integral,
                tail=float(mags[outside].sum() / spec.size),
            )
        )
    return rows


def _leading_position(n: int, spec: GroupSpec) -> int:
    """Position of the leading nonzero digit of n (|n| in digit terms)."""
    if not 1 <= n <= spec.size:
        raise ValueError(f"index {n} outside [1, {spec.size}]")
    return bisect_right(spec.M, n) - 1


def domination_constant(ns: Sequence[int], spec: GroupSpec) -> float:
    """Smallest c with n|K_n| <= c * sum_{l<=|n|} M_l |K_{M_l}| over given n.

    Returns the max over the grid and over n of the pointwise ratio; the
    denominator never vanishes because K_{M_0} = K_1 = 1 everywhere, but a
    0/0 guard is kept for safety.
    """
    if len(ns) == 0:
        raise ValueError("need at least one n")
    top = max(_leading_position(n, spec) for n in ns)
    block_mags = [np.abs(fejer(spec.M[el], spec).values) for el in range(top + 1)]
    denoms = np.cumsum(
        [spec.M[el] * block_mags[el] for el in range(top + 1)], axis=0
    )
    best = 0.0
    for n in sorted(ns):
        num = n * np.abs(fejer(n, spec).values)
        den = denoms[_leading_position(n, spec)]
        ratio = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
        best = max(best, float(ratio.max()))
    return best
