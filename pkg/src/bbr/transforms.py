"""Iterated integral transforms as coefficient multipliers, with oracles.

The two transform families act diagonally on Taylor coefficients:

    j = 1:  coefficient l is scaled by (sigma / (sigma + l))**n,
    j = 2:  by  sigma*(sigma-1)*...*(sigma-n+1)
            / ((sigma+l)*(sigma+l-1)*...*(sigma+l-n+1)),

both computed by running products (never Gamma ratios, which lose
precision as sigma - (n-1) approaches 0).  The same transforms are
defined by an n-fold iterated radial integral; ``transform_by_quadrature``
evaluates that definition directly with nested Gauss-Jacobi rules and
serves as the independent oracle for the multiplier route.

The module also houses the sharp positivity radius of the classes, the
closed-form lower bound for the real part on circles, its transformed
series analogue, and the averaging integral operator that the classes
are closed under.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .caratheodory import ClassParams
from .series import TruncatedSeries, min_re_on_circle, order_for_budget

__all__ = [
    "TransformSpec",
    "RadiusReport",
    "QuadratureError",
    "TruncationBudgetError",
    "coeff_multiplier",
    "apply_transform",
    "transform_by_quadrature",
    "recurrence_residual",
    "commutation_residual",
    "radius_closed_form",
    "radius_numeric",
    "radius_check_order",
    "pk_lower_bound",
    "transformed_lower_bound",
    "transformed_positivity_radius",
    "bernardi_transform",
]

_UNIT_TOL = 1e-9


class QuadratureError(RuntimeError):
    """Nested quadrature failed to reach its tolerance."""

    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (achieved error estimate {estimate:.3e})")
        self.estimate = estimate


class TruncationBudgetError(RuntimeError):
    """A truncated series is too short to certify a sign at the needed radius."""


@dataclass(frozen=True)
class TransformSpec:
    """Identifies one transform: family j in {1, 2}, index sigma > 0, depth n >= 0.

    For j = 2 the kernels require sigma - (n - 1) > 0.
    """

    j: int
    sigma: float
    n: int

    def __post_init__(self):
        if self.j not in (1, 2):
            raise ValueError(f"j must be 1 or 2, got {self.j}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.n < 0 or self.n != int(self.n):
            raise ValueError(f"n must be a nonnegative integer, got {self.n}")
        if self.j == 2 and not self.sigma - (self.n - 1) > 0:
            raise ValueError(
                f"family 2 requires sigma - (n - 1) > 0, got sigma={self.sigma}, n={self.n}"
            )

    def with_depth(self, n: int) -> "TransformSpec":
        return TransformSpec(self.j, self.sigma, n)

    def to_json_dict(self) -> dict:
        return {"j": self.j, "sigma": self.sigma, "n": self.n}


def coeff_multiplier(spec: TransformSpec, l: int) -> float:
    """Multiplier applied to coefficient l >= 1; equals 1 at depth 0."""
    if l < 1:
        raise ValueError("coefficient index must be >= 1")
    sigma = spec.sigma
    value = 1.0
    if spec.j == 1:
        for _ in range(spec.n):
            value *= sigma / (sigma + l)
    else:
        for i in range(spec.n):
            value *= (sigma - i) / (sigma + l - i)
    return value


@lru_cache(maxsize=512)
def _multiplier_block(spec: TransformSpec, size: int) -> np.ndarray:
    """Multipliers for l = 1..size, elementwise identical to the scalar loop."""
    ls = np.arange(1, size + 1, dtype=np.float64)
    value = np.ones(size, dtype=np.float64)
    if spec.j == 1:
        factor = spec.sigma / (spec.sigma + ls)
        for _ in range(spec.n):
            value = value * factor
    else:
        for i in range(spec.n):
            value = value * ((spec.sigma - i) / (spec.sigma + ls - i))
    value.flags.writeable = False
    return value


def multiplier_array(spec: TransformSpec, lmax: int) -> np.ndarray:
    """Multipliers for l = 1..lmax; cached in power-of-two blocks."""
    if lmax < 1:
        raise ValueError("lmax must be >= 1")
    block = 1 << max(6, (lmax - 1).bit_length())
    return _multiplier_block(spec, block)[:lmax]


def apply_transform(spec: TransformSpec, h: TruncatedSeries) -> TruncatedSeries:
    """Apply the transform coefficientwise; the constant term is fixed.

    The tail rate survives because every multiplier lies in (0, 1].
    """
    c0 = h.coeffs[0]
    if abs(c0 - 1.0) > _UNIT_TOL:
        raise ValueError("transform input must have constant term 1")
    coeffs = h.coeffs.copy()
    if h.order >= 1:
        coeffs[1:] = h.coeffs[1:] * multiplier_array(spec, h.order)
    return TruncatedSeries(coeffs, h.tail_bound_rate)


# -- quadrature oracle ---------------------------------------------------------


@lru_cache(maxsize=256)
def _jacobi_rule(m: int, exponent: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for integral_0^1 xi**exponent * g(xi) d xi, g smooth."""
    x, w = roots_jacobi(m, 0.0, exponent)
    nodes = (x + 1.0) / 2.0
    weights = w * 0.5 ** (exponent + 1.0)
    return nodes, weights


def _kernel_exponents(spec: TransformSpec) -> list[float]:
    """Per-level xi exponents, outermost first; each kernel integrates to 1."""
    if spec.j == 1:
        return [spec.sigma - 1.0] * spec.n
    return [spec.sigma - i for i in range(spec.n, 0, -1)]


def _nested_value(spec: TransformSpec, h: TruncatedSeries, z: complex, m: int) -> complex:
    exponents = _kernel_exponents(spec)
    rules = []
    points = np.array([z], dtype=np.complex128)
    for e in exponents:
        nodes, weights = _jacobi_rule(m, e)
        # d = e + 1 normalizes the kernel; fold it into the weights.
        rules.append((len(nodes), weights * (e + 1.0)))
        points = np.multiply.outer(nodes, points).ravel()
    values = h.eval_many(points)
    for size, weights in reversed(rules):
        values = weights @ values.reshape(size, -1)
    return complex(values[0])


def transform_by_quadrature(
    spec: TransformSpec,
    h: TruncatedSeries,
    z: complex,
    tol: float = 1e-10,
    max_nodes: int = 384,
) -> complex:
    """Evaluate the transform at z straight from its iterated-integral form.

    The n-fold integral over the radial segment [0, z] reduces to nested
    weighted averages d * integral_0^1 xi**e * (inner level)(xi * w) d xi,
    evaluated by Gauss-Jacobi rules whose weight absorbs the (possibly
    singular) xi power exactly.  Node counts are doubled until two
    successive values agree within ``tol``.  This path never touches the
    coefficient multipliers, so it is an independent oracle for
    :func:`apply_transform`.
    """
    if spec.n < 1:
        raise ValueError("quadrature oracle requires depth n >= 1")
    if abs(z) >= 1.0:
        raise ValueError("evaluation requires |z| < 1")
    m = 24
    previous = _nested_value(spec, h, z, m)
    while 2 * m <= max_nodes:
        m *= 2
        current = _nested_value(spec, h, z, m)
        estimate = abs(current - previous)
        if estimate <= tol:
            return current
        previous = current
    raise QuadratureError(
        f"nested quadrature did not converge below {tol:.1e} with {m} nodes per level",
        estimate,
    )


# -- identities ------------------------------------------------------------------


def recurrence_residual(spec: TransformSpec, h: TruncatedSeries) -> float:
    """Residual of the one-step inversion identity.

    Depth n output plus its scaled z-derivative must reproduce depth n-1:
    the divisor is sigma for family 1 and sigma - (n - 1) for family 2.
    """
    if spec.n < 1:
        raise ValueError("recurrence requires depth n >= 1")
    d = spec.sigma if spec.j == 1 else spec.sigma - (spec.n - 1)
    deep = apply_transform(spec, h)
    shallow = apply_transform(spec.with_depth(spec.n - 1), h)
    combined = deep + deep.z_derivative() * (1.0 / d)
    return float(np.max(np.abs(combined.coeffs - shallow.coeffs)))


def commutation_residual(
    s1: TransformSpec, s2: TransformSpec, h: TruncatedSeries
) -> float:
    """Max coefficient difference between the two composition orders."""
    if s1.j != s2.j:
        raise ValueError("transforms commute within one family; j must match")
    a = apply_transform(s1, apply_transform(s2, h))
    b = apply_transform(s2, apply_transform(s1, h))
    return float(np.max(np.abs(a.coeffs - b.coeffs)))


# -- radii and bounds --------------------------------------------------------------

#: beta is treated as the balanced case 1/2 within this slack; both branches
#: of the radius formula agree to first order there.
_HALF_TOL = 1e-12


def radius_closed_form(params: ClassParams) -> float:
    """Sharp positivity radius r(k, beta) of P_k(beta), clamped to (0, 1]."""
    k, beta = params.k, params.beta
    if abs(1.0 - 2.0 * beta) < _HALF_TOL:
        r = 2.0 / k
    else:
        a = 1.0 - 2.0 * beta
        b = (1.0 - beta) * k
        r = (b - math.sqrt(b * b - 4.0 * a)) / (2.0 * a)
    return min(r, 1.0)


def pk_lower_bound(rho: float, params: ClassParams) -> float:
    """Sharp lower bound for Re h on |z| = rho over all h in P_k(beta).

    The bound ((1-2b)rho^2 - (1-b)k rho + 1) / (1 - rho^2) vanishes
    exactly at the positivity radius and is attained by the two-atom
    extremal member on the positive real axis.
    """
    if not 0.0 <= rho < 1.0:
        raise ValueError("rho must lie in [0, 1)")
    k, beta = params.k, params.beta
    num = (1.0 - 2.0 * beta) * rho * rho - (1.0 - beta) * k * rho + 1.0
    return num / (1.0 - rho * rho)


def _bound_terms(params: ClassParams, r_max: float, tail_target: float = 1e-10) -> int:
    """Term count making the geometric tail of the bound series <= tail_target."""
    if r_max <= 0.0:
        return 1
    budget = tail_target * (1.0 - r_max) / (params.k + 2.0)
    return max(8, math.ceil(math.log(budget) / math.log(r_max)))


def transformed_bound_curve(
    spec: TransformSpec,
    params: ClassParams,
    rs: np.ndarray,
    terms: int | None = None,
) -> np.ndarray:
    """Vectorized certified lower ends of the transformed bound at radii rs."""
    rs = np.asarray(rs, dtype=np.float64)
    if rs.size and (rs.min() < 0.0 or rs.max() >= 1.0):
        raise ValueError("radii must lie in [0, 1)")
    r_max = float(rs.max()) if rs.size else 0.0
    if terms is None:
        terms = _bound_terms(params, r_max)
    k, beta = params.k, params.beta
    ls = np.arange(1, terms + 1)
    mults = multiplier_array(spec, 2 * terms)
    even = mults[1::2]
    odd = mults[0::2]
    # Row per radius: sum_l (2*c_{2l} r - k*c_{2l-1}) r^(2l-1).
    powers = rs[:, None] ** (2 * ls - 1)[None, :]
    partial = 1.0 + (1.0 - beta) * np.sum(
        (2.0 * even[None, :] * rs[:, None] - k * odd[None, :]) * powers, axis=1
    )
    with np.errstate(divide="ignore"):
        tail = np.where(
            rs > 0,
            (1.0 - beta) * (2.0 + k) * rs ** (2 * terms + 1) / (1.0 - rs * rs),
            0.0,
        )
    return partial - tail


def transformed_lower_bound(
    spec: TransformSpec,
    params: ClassParams,
    r: float,
    terms: int | None = None,
) -> float:
    """Certified lower bound for Re of any transformed class member at |z| = r.

    Partial sum of 1 + (1-beta) * sum_l (2 c_{2l} r - k c_{2l-1}) r^(2l-1)
    minus a geometric majorant of the dropped tail, so the returned value
    is still a valid lower bound after truncation.  At depth 0 this
    collapses to :func:`pk_lower_bound`.  The bound is attained by the
    transformed extremal member at z = r.
    """
    if r == 0.0:
        return 1.0
    return float(transformed_bound_curve(spec, params, np.array([r]), terms)[0])


def transformed_positivity_radius(
    spec: TransformSpec,
    params: ClassParams,
    tol: float = 1e-6,
    r_max: float = 0.999,
) -> float:
    """First zero of the transformed lower bound (1.0 if none up to r_max).

    This is the exact positivity radius of the transformed extremal
    member: at depth 0 it coincides with :func:`radius_closed_form`, and
    it is nondecreasing in the depth n because the kernels average.
    """
    if transformed_lower_bound(spec, params, r_max) > 0.0:
        return 1.0
    lo, hi = 0.0, r_max
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if transformed_lower_bound(spec, params, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class RadiusReport:
    """Closed-form radius vs. a numerically bracketed one.

    ``closed_form`` and ``discrepancy`` are None when no class parameters
    were supplied to compare against.
    """

    closed_form: float | None
    lo: float
    hi: float
    discrepancy: float | None

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("bracket must satisfy lo <= hi")
        if self.closed_form is not None and not (0.0 < self.closed_form <= 1.0):
            raise ValueError("closed-form radius must lie in (0, 1]")

    def to_json_dict(self) -> dict:
        return {
            "closed_form": self.closed_form,
            "lo": self.lo,
            "hi": self.hi,
            "discrepancy": self.discrepancy,
        }

    @staticmethod
    def from_json_dict(data: dict) -> "RadiusReport":
        return RadiusReport(
            data["closed_form"], data["lo"], data["hi"], data["discrepancy"]
        )


def _certified_min_re(
    h: TruncatedSeries, r: float, grid: int, tol: float
) -> float:
    """Circle minimum whose sign is trusted only when it clears the tail bound."""
    g = min_re_on_circle(h, r, grid)
    if h.tail_bound_rate is not None:
        t = h.tail_error(r)
        if abs(g) <= t and t > tol:
            raise TruncationBudgetError(
                f"cannot certify the sign of the circle minimum at r = {r}: "
                f"|min Re| = {abs(g):.3e} but the truncation budget is {t:.3e}"
            )
    return g


def radius_numeric(
    h: TruncatedSeries,
    tol: float,
    params: ClassParams | None = None,
    r_max: float = 0.999,
    grid: int = 4096,
) -> RadiusReport:
    """Bracket the positivity radius of h by bisection on circle minima.

    The real part of an analytic function attains its disk minimum on the
    boundary circle, so the circle minimum is nonincreasing in r and
    bisection on its sign is sound.  If the minimum is still positive at
    ``r_max`` the radius is reported as 1.  When ``params`` is given the
    report carries the closed-form radius and the discrepancy.

    Raises :class:`TruncationBudgetError` when the series is too short to
    certify a sign decision within ``tol`` at some probed radius.
    """
    if abs(h.coeffs[0] - 1.0) > _UNIT_TOL:
        raise ValueError("radius search expects constant term 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if _certified_min_re(h, r_max, grid, tol) > 0.0:
        lo = hi = 1.0
    else:
        lo, hi = 0.0, r_max
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if _certified_min_re(h, mid, grid, tol) > 0.0:
                lo = mid
            else:
                hi = mid
    closed = disc = None
    if params is not None:
        closed = radius_closed_form(params)
        disc = max(abs(closed - lo), abs(closed - hi))
    return RadiusReport(closed, lo, hi, disc)


def radius_check_order(
    params: ClassParams,
    r_max: float = 0.999,
    spec: TransformSpec | None = None,
) -> int:
    """Truncation degree adequate for a radius search on the extremal member.

    The search probes ``r_max`` first, where the circle minimum of the
    (possibly transformed) extremal equals the closed-form bound; the
    truncation budget must clear roughly half that magnitude.  When the
    crossing lies below ``r_max``, bisection probes reach at most halfway
    between the crossing and ``r_max``, so a 1e-7 budget there suffices.
    """
    if spec is None:
        spec = TransformSpec(1, 1.0, 0)
    rate = params.coeff_bound
    bound_top = transformed_lower_bound(spec, params, r_max)
    eps_top = max(1e-4, 0.45 * abs(bound_top))
    orders = [64, order_for_budget(rate, r_max, eps_top)]
    r_star = transformed_positivity_radius(spec, params, tol=1e-6, r_max=r_max)
    if r_star < r_max:
        r_cert = min(r_max, 0.5 * (r_star + r_max) + 0.01)
        orders.append(order_for_budget(rate, r_cert, 1e-7))
    return max(orders)


def bernardi_transform(c: float, kappa: float, g: TruncatedSeries) -> TruncatedSeries:
    """Normalized Bernardi-type averaging integral as a multiplier.

    For gamma = c + kappa > 0 the operator scales coefficient l by
    gamma / (gamma + l), i.e. it is the depth-1 member of family 1 with
    index gamma, which is why it commutes with every transform here.
    ``g`` plays the role of f(z)**kappa / z**kappa and must be unit.
    """
    gamma = c + kappa
    if not gamma > 0:
        raise ValueError(f"requires c + kappa > 0, got {gamma}")
    return apply_transform(TransformSpec(1, gamma, 1), g)
