"""Normalized function classes built over the bounded-rotation calculus.

A normalized function f(z) = z + a_2 z^2 + ... is represented by the unit
series of f(z)/z.  Two operator routes pin down the classes:

* the Salagean route: D^n f^sigma / (sigma^n z^sigma), where D = z d/dz
  acts on formal monomials z^(sigma+l) with weight (sigma+l);
* the convolution route: the Ruscheweyh-type operator obtained by
  Hadamard division against the binomial kernel z/(1-z)^(sigma-n+1).

Both are diagonal on coefficients, are exact inverses of the
corresponding transform families, and never materialize z^sigma itself:
real powers go through the unit-normalized series only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import TruncatedSeries, pow_real
from .transforms import TransformSpec, apply_transform

__all__ = [
    "NormalizedFunction",
    "salagean_normalized",
    "binomial_kernel_coefficient",
    "ruscheweyh_normalized",
    "make_t_member",
    "make_b_member",
    "t_derivative_quantity",
    "b_derivative_quantity",
]

_UNIT_TOL = 1e-9


@dataclass(frozen=True)
class NormalizedFunction:
    """A function z + a_2 z^2 + ... stored as the unit series of f(z)/z.

    ``sigma`` records the exponent context the function was built in,
    which matters for the power-type class constructions.
    """

    unit_series: TruncatedSeries
    sigma: float

    def __post_init__(self):
        if abs(self.unit_series.coeffs[0] - 1.0) > _UNIT_TOL:
            raise ValueError("f(z)/z must have constant term 1")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    def to_json_dict(self) -> dict:
        c = self.unit_series.coeffs
        return {
            "sigma": self.sigma,
            "coeffs_re": c.real.tolist(),
            "coeffs_im": c.imag.tolist(),
            "order": self.unit_series.order,
        }

    @staticmethod
    def from_json_dict(data: dict) -> "NormalizedFunction":
        coeffs = np.asarray(data["coeffs_re"], dtype=np.float64) + 1j * np.asarray(
            data["coeffs_im"], dtype=np.float64
        )
        if len(coeffs) != data["order"] + 1:
            raise ValueError("coefficient count does not match the declared order")
        return NormalizedFunction(TruncatedSeries(coeffs), data["sigma"])


def salagean_normalized(f: NormalizedFunction, sigma: float, n: int) -> TruncatedSeries:
    """Series of D^n f^sigma / (sigma^n z^sigma).

    With g the unit series of f^sigma / z^sigma, the iterated operator
    z d/dz weights the formal monomial z^(sigma+l) by (sigma+l), so the
    normalized action scales g_l by ((sigma+l)/sigma)**n.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    if n < 0:
        raise ValueError("n must be >= 0")
    g = pow_real(f.unit_series, sigma)
    coeffs = g.coeffs.copy()
    for l in range(1, g.order + 1):
        coeffs[l] = g.coeffs[l] * ((sigma + l) / sigma) ** n
    return TruncatedSeries(coeffs, None)


def binomial_kernel_coefficient(sigma: float, n: int, l: int) -> float:
    """Coefficient of z^l in z / (1-z)**(sigma - n + 1), for l >= 1.

    Equals the rising factorial (a)_(l-1) / (l-1)! with a = sigma - n + 1,
    computed as a running product of ratios so it stays stable for large l.
    """
    a = sigma - (n - 1)
    if not a > 0:
        raise ValueError(f"requires sigma - (n - 1) > 0, got {a}")
    if l < 1:
        raise ValueError("l must be >= 1")
    value = 1.0
    for i in range(l - 1):
        value *= (a + i) / (1 + i)
    return value


def ruscheweyh_normalized(f: NormalizedFunction, sigma: float, n: int) -> TruncatedSeries:
    """Series of the Ruscheweyh-type convolution operator applied to f, over z.

    Hadamard convolution acts coefficientwise, and inverting a kernel
    relative to z/(1-z) inverts its coefficients, so coefficient l of
    f(z)/z is scaled by the kernel-coefficient ratio at index l + 1:
    depth 0 kernel over depth n kernel.
    """
    u = f.unit_series
    coeffs = u.coeffs.copy()
    for l in range(1, u.order + 1):
        ratio = binomial_kernel_coefficient(sigma, 0, l + 1) / binomial_kernel_coefficient(
            sigma, n, l + 1
        )
        coeffs[l] = u.coeffs[l] * ratio
    return TruncatedSeries(coeffs, None)


def make_t_member(h: TruncatedSeries, spec: TransformSpec) -> NormalizedFunction:
    """Build the power-type class member with f^sigma/z^sigma = transform of h.

    When h lies in P_k(beta) the result lies in the corresponding
    power-type class by construction; :func:`salagean_normalized` at the
    same (sigma, n) recovers h.
    """
    if spec.j != 1:
        raise ValueError("power-type members are built from family 1")
    unit = pow_real(apply_transform(spec, h), 1.0 / spec.sigma)
    return NormalizedFunction(unit, spec.sigma)


def make_b_member(h: TruncatedSeries, spec: TransformSpec) -> NormalizedFunction:
    """Build the convolution-type class member with f/z = transform of h."""
    if spec.j != 2:
        raise ValueError("convolution-type members are built from family 2")
    return NormalizedFunction(apply_transform(spec, h), spec.sigma)


def t_derivative_quantity(f: NormalizedFunction, sigma: float) -> TruncatedSeries:
    """Series of f^(sigma-1) f'(z) / z^(sigma-1).

    Computed as g + (z g')/sigma with g the unit series of f^sigma/z^sigma,
    using sigma * f^(sigma-1) f' = (f^sigma)'.  For a member built from h
    at depth n this equals the depth n-1 transform of h.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    g = pow_real(f.unit_series, sigma)
    return g + g.z_derivative() * (1.0 / sigma)


def b_derivative_quantity(f: NormalizedFunction, sigma: float, n: int) -> TruncatedSeries:
    """Series of ((sigma - n) f(z)/z + f'(z)) / (sigma - (n - 1)).

    With u = f/z this is u + (z u')/(sigma - n + 1); for a member built
    from h at depth n it equals the depth n-1 transform of h.  Requires
    n >= 1 (the quantity references one depth down).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a = sigma - (n - 1)
    if not a > 0:
        raise ValueError(f"requires sigma - (n - 1) > 0, got {a}")
    u = f.unit_series
    return u + u.z_derivative() * (1.0 / a)
