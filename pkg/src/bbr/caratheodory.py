"""Generators for Caratheodory-type classes from discrete Herglotz data.

Members of the positive-real-part family P(beta) and its bounded
boundary-rotation extension P_k(beta) are built constructively: a finite
signed atom set (total mass 2, total variation at most k) is pushed
through the Moebius kernel

    1 + 2*(1-beta) * sum_l exp(-i*l*s) z^l,

which is the series of (1 + (1-2*beta)*z*e^{-is}) / (1 - z*e^{-is}).
Finite atom sets are dense for every property verified here, so no
continuous measures are represented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import DEFAULT_ORDER, TruncatedSeries

__all__ = [
    "ClassParams",
    "AtomicMeasure",
    "mobius_kernel",
    "herglotz_series",
    "extremal_pk",
    "pk_combination",
    "random_pk_member",
]

_TWO_PI = 2.0 * math.pi

# Atom weights must sum to 2 (the normalization of the representing
# measure) within this slack.
_MASS_TOL = 1e-12


def _folded_phases(ls: np.ndarray, s) -> np.ndarray:
    """Phases l*s folded into [0, 2*pi) so their roundoff stays O(1) ulp.

    Without folding, exp(-i*l*s) at index l carries an angle error that
    grows linearly in l, which is what would dominate coefficient
    comparisons at high truncation orders.
    """
    return np.mod(np.multiply.outer(ls, s), _TWO_PI)


@dataclass(frozen=True)
class ClassParams:
    """Parameters (k, beta) of the class P_k(beta).

    k >= 2 bounds the boundary rotation by k*pi; beta in [0, 1) is the
    real-part floor of the underlying half-plane class.
    """

    k: float
    beta: float

    def __post_init__(self):
        if not (self.k >= 2.0 and math.isfinite(self.k)):
            raise ValueError(f"k must satisfy k >= 2, got {self.k}")
        if not (0.0 <= self.beta < 1.0):
            raise ValueError(f"beta must lie in [0, 1), got {self.beta}")

    @property
    def coeff_bound(self) -> float:
        """Sharp modulus bound k*(1-beta) for all non-constant coefficients."""
        return self.k * (1.0 - self.beta)


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite signed atom set (angle, weight) with total mass 2.

    The positive and negative parts play the roles of the increasing
    components of a bounded-variation representing function; the total
    variation sum(|w|) must not exceed the k of the class the measure is
    used with (checked via :meth:`validate_for`).
    """

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        canon = tuple(
            (float(s) % _TWO_PI, float(w)) for s, w in self.atoms
        )
        object.__setattr__(self, "atoms", canon)
        mass = self.total_mass
        if abs(mass - 2.0) > _MASS_TOL:
            raise ValueError(f"atom weights must sum to 2, got {mass!r}")

    @property
    def total_mass(self) -> float:
        return float(sum(w for _, w in self.atoms))

    @property
    def total_variation(self) -> float:
        return float(sum(abs(w) for _, w in self.atoms))

    def validate_for(self, params: ClassParams) -> None:
        if self.total_variation > params.k + _MASS_TOL:
            raise ValueError(
                f"total variation {self.total_variation} exceeds k = {params.k}"
            )

    def angles(self) -> np.ndarray:
        return np.array([s for s, _ in self.atoms], dtype=np.float64)

    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms], dtype=np.float64)

    # -- serialization -------------------------------------------------------

    def to_json_dict(self, params: ClassParams) -> dict:
        return {
            "atoms": [{"s": s, "w": w} for s, w in self.atoms],
            "k": params.k,
            "beta": params.beta,
        }

    @staticmethod
    def from_json_dict(data: dict) -> tuple["AtomicMeasure", ClassParams]:
        atoms = tuple((a["s"], a["w"]) for a in data["atoms"])
        return AtomicMeasure(atoms), ClassParams(data["k"], data["beta"])


def mobius_kernel(beta: float, s: float, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Kernel series 1 + 2*(1-beta) * sum_{l>=1} e^{-ils} z^l.

    This is the half-plane map rotated by the boundary angle s and
    shifted to real-part floor beta; every class member is a signed
    average of these.
    """
    if not (0.0 <= beta < 1.0):
        raise ValueError(f"beta must lie in [0, 1), got {beta}")
    if order < 0:
        raise ValueError("order must be >= 0")
    ls = np.arange(1, order + 1)
    coeffs = np.empty(order + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    coeffs[1:] = 2.0 * (1.0 - beta) * np.exp(-1j * _folded_phases(ls, s))
    return TruncatedSeries(coeffs, tail_bound_rate=2.0 * (1.0 - beta))


def herglotz_series(
    m: AtomicMeasure, beta: float, order: int = DEFAULT_ORDER
) -> TruncatedSeries:
    """Series of the class member represented by the atom set ``m``.

    Coefficient l (l >= 1) is (1-beta) * sum_i w_i e^{-i l s_i}; the
    constant term is pinned to exactly 1.  The tail rate is the sharp
    (1-beta) * sum|w_i|, which never exceeds k*(1-beta) for a measure
    admissible at rotation bound k.
    """
    if not (0.0 <= beta < 1.0):
        raise ValueError(f"beta must lie in [0, 1), got {beta}")
    if abs(m.total_mass - 2.0) > _MASS_TOL:
        raise ValueError("measure must have total mass 2")
    ls = np.arange(1, order + 1)
    phases = np.exp(-1j * _folded_phases(ls, m.angles()))
    coeffs = np.empty(order + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    coeffs[1:] = (1.0 - beta) * phases @ m.weights()
    return TruncatedSeries(coeffs, tail_bound_rate=(1.0 - beta) * m.total_variation)


def extremal_pk(params: ClassParams, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """The two-atom extremal member of P_k(beta).

    Its coefficients alternate between -k*(1-beta) (odd index) and
    2*(1-beta) (even index), which attains the class coefficient bound
    and realizes the sharp positivity radius.  Identical to
    ``herglotz_series`` of atoms (pi, (k+2)/2) and (0, -(k-2)/2).
    """
    k, beta = params.k, params.beta
    coeffs = np.empty(order + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    coeffs[1::2] = -k * (1.0 - beta)
    coeffs[2::2] = 2.0 * (1.0 - beta)
    return TruncatedSeries(coeffs, tail_bound_rate=params.coeff_bound)


def extremal_measure(params: ClassParams) -> AtomicMeasure:
    """Atom set representing :func:`extremal_pk`."""
    k = params.k
    return AtomicMeasure(((math.pi, (k + 2.0) / 2.0), (0.0, -(k - 2.0) / 2.0)))


def pk_combination(
    p: TruncatedSeries, q: TruncatedSeries, params: ClassParams
) -> TruncatedSeries:
    """Combine two positive-real-part members into a P_k(beta) member.

    Returns ((k+2)/4) * p - ((k-2)/4) * q, the canonical decomposition of
    a bounded-rotation member into its nondecreasing parts.
    """
    k = params.k
    return p * ((k + 2.0) / 4.0) - q * ((k - 2.0) / 4.0)


def random_pk_member(
    params: ClassParams,
    n_atoms: int,
    seed: int,
    order: int = DEFAULT_ORDER,
) -> tuple[TruncatedSeries, AtomicMeasure]:
    """Seeded random member of P_k(beta) with its representing atoms.

    Angles are uniform on [0, 2*pi).  A random fraction u of the allowed
    negative mass (k-2)/2 is used: the negative atoms carry total
    -(k-2)/2 * u and the positive atoms total 2 + (k-2)/2 * u, so the
    mass is exactly 2 and the total variation 2 + (k-2)*u stays within k.
    At k = 2 the measure is nonnegative and the member lies in P(beta).
    """
    if n_atoms < 1:
        raise ValueError("n_atoms must be >= 1")
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.0, _TWO_PI, n_atoms)
    u = rng.random()
    n_neg = n_atoms // 2 if (params.k > 2.0 and n_atoms >= 2) else 0
    n_pos = n_atoms - n_neg
    neg_total = (params.k - 2.0) / 2.0 * u if n_neg else 0.0
    pos_total = 2.0 + neg_total
    pos_w = rng.random(n_pos)
    pos_w *= pos_total / pos_w.sum()
    atoms = [(angles[i], pos_w[i]) for i in range(n_pos)]
    if n_neg:
        neg_w = rng.random(n_neg)
        neg_w *= neg_total / neg_w.sum()
        atoms += [(angles[n_pos + i], -neg_w[i]) for i in range(n_neg)]
    measure = AtomicMeasure(tuple(atoms))
    measure.validate_for(params)
    return herglotz_series(measure, params.beta, order), measure
