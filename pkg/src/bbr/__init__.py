"""Certified power-series calculus for bounded boundary-rotation classes."""

from .series import (
    DEFAULT_ORDER,
    TruncatedSeries,
    exp_unit,
    log_unit,
    min_re_on_circle,
    order_for_budget,
    pow_real,
)
from .caratheodory import (
    AtomicMeasure,
    ClassParams,
    extremal_measure,
    extremal_pk,
    herglotz_series,
    mobius_kernel,
    pk_combination,
    random_pk_member,
)

__all__ = [
    "DEFAULT_ORDER",
    "TruncatedSeries",
    "exp_unit",
    "log_unit",
    "min_re_on_circle",
    "order_for_budget",
    "pow_real",
    "AtomicMeasure",
    "ClassParams",
    "extremal_measure",
    "extremal_pk",
    "herglotz_series",
    "mobius_kernel",
    "pk_combination",
    "random_pk_member",
]
