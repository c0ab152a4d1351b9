"""Pointwise convergence diagnostics: oscillation moduli and error profiles.

The rank-n Lebesgue modulus of f at x averages |f - f(x)| over the interval
I_n(x); a point where it tends to 0 is a Lebesgue point at desk resolution.
The windowed modulus W_n additionally looks at the intervals reached by
shifting one digit below rank n, weighted by their place values, which is the
quantity controlling a.e. convergence of the reversed-frame means.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .group import Element, generator, interval_members, subtract
from .means import WeightSequence, norlund_mean, t_mean
from .transform import GridFunction, norm, partial_sum

__all__ = [
    "ConvergenceRow",
    "lebesgue_modulus",
    "w_modulus",
    "convergence_profile",
    "maximal_profile",
]


def lebesgue_modulus(f: GridFunction, x: Element, rank: int) -> float:
    """Average of |f(t) - f(x)| over the rank-n interval around x."""
    spec = f.spec
    if x.spec != spec:
        raise ValueError("point belongs to a different group")
    members = interval_members(x, rank)
    return float(np.abs(f.values[members] - f.values[x.index]).mean())


def w_modulus(f: GridFunction, x: Element, rank: int) -> float:
    """Windowed modulus W_n f(x), summing digit-shifted interval oscillations.

    W_n f(x) = sum_{s<n} M_s sum_{r=1}^{m_s-1}
               (1/M_N) sum_{t in I_n(x - r e_s)} |f(t) - f(x)|
    where e_s is the unit digit vector in coordinate s.
    """
    spec = f.spec
    if x.spec != spec:
        raise ValueError("point belongs to a different group")
    if not 0 <= rank <= spec.levels:
        raise ValueError(f"rank {rank} outside [0, {spec.levels}]")
    fx = f.values[x.index]
    total = 0.0
    for s in range(rank):
        e_s = generator(s, spec)
        shifted = x
        for _ in range(1, spec.m[s]):
            shifted = subtract(shifted, e_s)
            members = interval_members(shifted, rank)
            total += spec.M[s] * float(np.abs(f.values[members] - fx).sum()) / spec.size
    return total


@dataclass(frozen=True)
class ConvergenceRow:
    """Error of one mean order, either at a point or in an L_p norm."""

    n: int
    err: float
    mean_id: str
    mode: str


def _evaluate_mean(
    f: GridFunction, w: WeightSequence | None, n: int, form: str
) -> GridFunction:
    if form == "t":
        return t_mean(f, w, n)
    if form == "norlund":
        return norlund_mean(f, w, n)
    if form == "partial":
        return partial_sum(f, n)
    raise ValueError(f"unknown mean form {form!r}; expected t, norlund or partial")


def convergence_profile(
    f: GridFunction,
    w: WeightSequence | None,
    ns: Sequence[int],
    *,
    form: str = "t",
    point: Element | None = None,
    p: float | None = None,
    mode: str = "all",
) -> list[ConvergenceRow]:
    """Errors of the chosen mean against f over a list of orders.

    Exactly one of ``point`` (pointwise error) and ``p`` (L_p error) must be
    given.  ``mode='block'`` restricts the orders to the subsequence M_0,
    M_1, ...; the orders are validated against that.  ``form='partial'``
    profiles the raw partial sums and ignores the weights.
    """
    if (point is None) == (p is None):
        raise ValueError("give exactly one of point= and p=")
    if mode not in ("all", "block"):
        raise ValueError(f"unknown mode {mode!r}")
    if form != "partial" and w is None:
        raise ValueError(f"form {form!r} needs a weight sequence")
    spec = f.spec
    if mode == "block":
        for n in ns:
            if n not in spec.M:
                raise ValueError(f"order {n} is not a block size M_r")
    mean_id = "partial" if form == "partial" else f"{w.label()}|{form}"
    rows = []
    for n in sorted(ns):
        g = _evaluate_mean(f, w, n, form)
        if point is not None:
            err = abs(g.values[point.index] - f.values[point.index])
        else:
            err = norm(g - f, p)
        rows.append(ConvergenceRow(n=n, err=float(err), mean_id=mean_id, mode=mode))
    return rows


def maximal_profile(
    f: GridFunction,
    w: WeightSequence | None,
    n_max: int,
    form: str = "norlund",
) -> GridFunction:
    """Pointwise maximal function max over valid n <= n_max of |mean_n f|."""
    spec = f.spec
    if not 1 <= n_max <= spec.size:
        raise ValueError(f"n_max {n_max} outside [1, {spec.size}]")
    if form != "partial" and w is None:
        raise ValueError(f"form {form!r} needs a weight sequence")
    start = 1 if form == "partial" else w.n0
    best = np.zeros(spec.size)
    for n in range(start, n_max + 1):
        g = _evaluate_mean(f, w, n, form)
        best = np.maximum(best, np.abs(g.values))
    return GridFunction(spec, best)
