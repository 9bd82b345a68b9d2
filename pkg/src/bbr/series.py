"""Truncated complex power series with certified tail bounds.

Every analytic object in this package is a Taylor polynomial about 0,
optionally carrying a geometric tail rate: a constant B such that every
coefficient beyond the truncation degree is bounded by B in modulus.
With such a rate, evaluation at |z| < 1 comes with the rigorous error
bound B*|z|^(N+1)/(1-|z|), which is what turns circle sampling into a
certificate instead of a heuristic.

Arithmetic never fabricates unknown coefficients: binary operations
truncate to the shorter operand.  Logarithms, exponentials and real
powers act on unit-normalized series (constant term 1 resp. 0) via the
standard coefficient recurrences, so principal branches are built in and
no fractional power of z itself is ever represented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_ORDER",
    "TruncatedSeries",
    "log_unit",
    "exp_unit",
    "pow_real",
    "min_re_on_circle",
    "order_for_budget",
]

#: Default truncation degree used by generators across the package.
DEFAULT_ORDER = 64

# Constant terms count as "normalized" within this slack.  It absorbs
# roundoff from convex combinations while still rejecting genuinely
# un-normalized input such as a constant term of 2.
_UNIT_TOL = 1e-9

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _as_coeff_array(coeffs) -> np.ndarray:
    arr = np.asarray(coeffs, dtype=np.complex128)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("coefficients must be a non-empty 1-d sequence")
    return arr


def _horner(coeffs: np.ndarray, z):
    """Evaluate sum(coeffs[l] * z**l) by Horner; z scalar or ndarray."""
    acc = np.full_like(np.asarray(z, dtype=np.complex128), coeffs[-1])
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


def _horner_scalar(coeffs: list[complex], z: complex) -> complex:
    """Horner on native complex scalars (far cheaper than 0-d numpy ops)."""
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Degree-N polynomial c_0 + c_1 z + ... + c_N z^N with optional tail rate.

    Parameters
    ----------
    coeffs : sequence of complex
        Coefficient l is the coefficient of z^l; the length fixes the
        truncation degree N = len(coeffs) - 1.
    tail_bound_rate : float, optional
        A finite B >= 0 with |c_l| <= B for every dropped index l > N.
        ``None`` means nothing is known about the tail.

    Instances are immutable; all operations return new series.
    """

    coeffs: np.ndarray
    tail_bound_rate: float | None = None

    def __post_init__(self):
        arr = _as_coeff_array(self.coeffs)
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)
        rate = self.tail_bound_rate
        if rate is not None:
            rate = float(rate)
            if not math.isfinite(rate) or rate < 0:
                raise ValueError("tail_bound_rate must be finite and >= 0")
            object.__setattr__(self, "tail_bound_rate", rate)

    # -- construction helpers ------------------------------------------------

    @classmethod
    def constant(cls, value: complex, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        """Constant series of the given degree; its tail is exactly zero."""
        if order < 0:
            raise ValueError("order must be >= 0")
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = value
        return cls(c, tail_bound_rate=0.0)

    # -- basic queries ---------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __repr__(self) -> str:
        head = np.array2string(self.coeffs[: min(4, len(self.coeffs))], precision=6)
        return (
            f"TruncatedSeries(order={self.order}, coeffs={head}..., "
            f"tail_bound_rate={self.tail_bound_rate})"
        )

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            m = min(self.order, other.order)
            coeffs = self.coeffs[: m + 1] + other.coeffs[: m + 1]
            rate = None
            if self.tail_bound_rate is not None and other.tail_bound_rate is not None:
                rate = self.tail_bound_rate + other.tail_bound_rate
            return TruncatedSeries(coeffs, rate)
        # Scalars shift the constant term only, so the tail is untouched.
        coeffs = self.coeffs.copy()
        coeffs[0] += other
        return TruncatedSeries(coeffs, self.tail_bound_rate)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs, self.tail_bound_rate)

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            m = min(self.order, other.order)
            full = np.convolve(self.coeffs, other.coeffs)
            # The Cauchy product of two truncations knows nothing about the
            # tail, so no rate is carried over.
            return TruncatedSeries(full[: m + 1], None)
        s = complex(other)
        rate = None if self.tail_bound_rate is None else self.tail_bound_rate * abs(s)
        return TruncatedSeries(self.coeffs * s, rate)

    __rmul__ = __mul__

    def scale(self, factor: complex) -> "TruncatedSeries":
        return self * factor

    def truncated(self, order: int) -> "TruncatedSeries":
        """Drop coefficients beyond ``order``.

        The tail rate is widened to cover the explicitly dropped
        coefficients so the bound stays valid.
        """
        if order < 0:
            raise ValueError("order must be >= 0")
        if order >= self.order:
            return self
        dropped = float(np.max(np.abs(self.coeffs[order + 1 :])))
        rate = self.tail_bound_rate
        rate = dropped if rate is None else max(rate, dropped)
        return TruncatedSeries(self.coeffs[: order + 1], rate)

    def z_derivative(self) -> "TruncatedSeries":
        """Return z * d/dz of the series: coefficient l becomes l*c_l."""
        ls = np.arange(len(self.coeffs))
        return TruncatedSeries(ls * self.coeffs, None)

    # -- evaluation ------------------------------------------------------------

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        """Plain Horner evaluation at an array of points (no error report)."""
        return _horner(self.coeffs, np.asarray(points, dtype=np.complex128))

    def eval_with_bound(self, z: complex) -> tuple[complex, float]:
        """Evaluate at |z| < 1, returning (value, certified truncation error).

        The error term is B*|z|^(N+1)/(1-|z|) for tail rate B, the exact
        geometric majorant of the dropped tail.  Without a rate the error
        is reported as infinite.
        """
        z = complex(z)
        r = abs(z)
        if r >= 1.0:
            raise ValueError(f"evaluation requires |z| < 1, got |z| = {r}")
        value = complex(_horner(self.coeffs, z))
        if self.tail_bound_rate is None:
            return value, math.inf
        err = self.tail_bound_rate * r ** (self.order + 1) / (1.0 - r)
        return value, err

    def tail_error(self, r: float) -> float:
        """Certified tail bound at radius r (inf when no rate is known)."""
        if not 0.0 <= r < 1.0:
            raise ValueError("radius must lie in [0, 1)")
        if self.tail_bound_rate is None:
            return math.inf
        return self.tail_bound_rate * r ** (self.order + 1) / (1.0 - r)


def order_for_budget(rate: float, r: float, budget: float) -> int:
    """Smallest degree N with rate * r**(N+1) / (1-r) <= budget.

    Used to pick truncation degrees automatically when a computation
    needs a certified evaluation error at radius r.
    """
    if rate < 0:
        raise ValueError("rate must be >= 0")
    if not 0.0 <= r < 1.0:
        raise ValueError("radius must lie in [0, 1)")
    if budget <= 0:
        raise ValueError("budget must be positive")
    if rate == 0.0 or r == 0.0:
        return 0
    target = budget * (1.0 - r) / rate
    if target >= r:
        return 0
    n = max(0, math.ceil(math.log(target) / math.log(r)) - 1)
    # Guard against log roundoff on the boundary.
    while rate * r ** (n + 1) / (1.0 - r) > budget:
        n += 1
    return n


def log_unit(a: TruncatedSeries) -> TruncatedSeries:
    """Series logarithm of a series with constant term 1.

    Uses the recurrence obtained from a' = L' * a, so L(0) = 0 and
    exp_unit(L) reproduces the input to truncation order.
    """
    c = a.coeffs
    if abs(c[0] - 1.0) > _UNIT_TOL:
        raise ValueError("log_unit requires constant term 1 (normalize first)")
    n = a.order
    out = np.zeros(n + 1, dtype=np.complex128)
    weights = np.arange(n + 1, dtype=np.float64)
    for l in range(1, n + 1):
        s = np.dot(weights[1:l] * out[1:l], c[l - 1 : 0 : -1])
        out[l] = c[l] - s / l
    return TruncatedSeries(out, None)


def exp_unit(a: TruncatedSeries) -> TruncatedSeries:
    """Series exponential of a series with constant term 0."""
    c = a.coeffs
    if abs(c[0]) > _UNIT_TOL:
        raise ValueError("exp_unit requires constant term 0")
    n = a.order
    out = np.zeros(n + 1, dtype=np.complex128)
    out[0] = 1.0
    mc = np.arange(n + 1, dtype=np.float64) * c
    for l in range(1, n + 1):
        out[l] = np.dot(mc[1 : l + 1], out[l - 1 :: -1]) / l
    return TruncatedSeries(out, None)


def pow_real(a: TruncatedSeries, alpha: float) -> TruncatedSeries:
    """Principal power a**alpha of a series with constant term 1.

    Realized as exp_unit(alpha * log_unit(a)); the principal branch is
    automatic because the logarithm is pinned at 0.
    """
    if alpha == 1.0:
        return a
    if alpha == 0.0:
        return TruncatedSeries.constant(1.0, a.order)
    return exp_unit(log_unit(a) * alpha)


def _effective_degree(a: TruncatedSeries, r: float, cutoff_tol: float) -> int:
    """Degree beyond which coefficients cannot move a value by cutoff_tol."""
    if cutoff_tol <= 0 or a.tail_bound_rate is None or r == 0.0:
        return a.order
    coeff_cap = float(np.max(np.abs(a.coeffs))) if len(a.coeffs) else 0.0
    rate = max(a.tail_bound_rate, coeff_cap)
    if rate == 0.0:
        return 0
    return min(a.order, order_for_budget(rate, r, cutoff_tol))


def _golden_min(fn, lo: float, hi: float, tol: float = 1e-8) -> float:
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = fn(c), fn(d)
    while (hi - lo) > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = fn(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = fn(d)
    return min(fc, fd)


def min_re_on_circle(
    a: TruncatedSeries,
    r: float,
    grid: int = 4096,
    cutoff_tol: float = 1e-14,
) -> float:
    """Minimum of Re a(z) over the circle |z| = r.

    A uniform angular grid locates the basin and one golden-section pass
    refines the angle to 1e-8.  Deterministic for fixed inputs.  For
    speed, coefficients whose certified contribution at radius r is below
    ``cutoff_tol`` are skipped; pass ``cutoff_tol=0`` to force the full sum.
    """
    if not 0.0 <= r < 1.0:
        raise ValueError("radius must lie in [0, 1)")
    if grid < 8:
        raise ValueError("grid must be >= 8")
    deg = _effective_degree(a, r, cutoff_tol)
    coeffs = a.coeffs[: deg + 1]
    if r == 0.0:
        return float(coeffs[0].real)
    theta = 2.0 * np.pi * np.arange(grid) / grid
    values = _horner(coeffs, r * np.exp(1j * theta))
    re = values.real
    i = int(np.argmin(re))
    grid_min = float(re[i])
    step = 2.0 * np.pi / grid
    coeff_list = coeffs.tolist()

    def re_at(t: float) -> float:
        return _horner_scalar(coeff_list, r * complex(math.cos(t), math.sin(t))).real

    refined = _golden_min(re_at, theta[i] - step, theta[i] + step)
    return min(grid_min, refined)
