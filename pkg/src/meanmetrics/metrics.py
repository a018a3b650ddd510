"""The generic mean-value metric constructor in its three forms.

For a mean ``M`` and a constant ``c > 0``::

    raw(x, y) = |x - y| / (c M(d(x), d(y)))
    log(x, y) = log(1 + raw(x, y))
    th(x, y)  = |x - y| / (|x - y| + 2 c M(d(x), d(y)))  ==  th(log(x, y) / 2)

where ``d`` is the distance to the boundary of the domain.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .geometry import Domain, DomainKind, as_points, dist_to_boundary
from .means import ARITHMETIC, GEOMETRIC, LOGARITHMIC, MAX, MIN, MeanKind, power

__all__ = [
    "MetricForm",
    "MetricSpec",
    "evaluate",
    "named_spec",
    "NAMED_METRICS",
    "phi",
    "phi_power",
    "phi_log",
]


class MetricForm(str, enum.Enum):
    RAW = "raw"
    LOG = "log"
    TH = "th"

    @classmethod
    def parse(cls, text: str) -> "MetricForm":
        return cls(text.strip().lower())


_DOMAIN_CODE = {DomainKind.HALF_SPACE: 0, DomainKind.UNIT_BALL: 1, DomainKind.PUNCTURED: 2}
_MEAN_CODE = {"arithmetic": 0, "power": 1, "logarithmic": 2, "min": 3, "max": 4, "geometric": 5}
_FORM_CODE = {MetricForm.RAW: 0, MetricForm.LOG: 1, MetricForm.TH: 2}


@dataclass(frozen=True)
class MetricSpec:
    mean: MeanKind
    c: float = 1.0
    form: MetricForm = MetricForm.TH

    def __post_init__(self):
        object.__setattr__(self, "form", MetricForm(self.form))
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError(f"c must be positive and finite, got {self.c!r}")
        object.__setattr__(self, "c", float(self.c))

    def with_form(self, form) -> "MetricSpec":
        return replace(self, form=MetricForm(form))

    def with_c(self, c: float) -> "MetricSpec":
        return replace(self, c=c)

    @property
    def kernel_args(self) -> tuple:
        d = self.mean.d if self.mean.d is not None else 0.0
        return _MEAN_CODE[self.mean.name], float(d), self.c, _FORM_CODE[self.form]

    def as_dict(self) -> dict:
        return {"mean": self.mean.name, "d": self.mean.d, "c": self.c, "form": self.form.value}

    @classmethod
    def from_dict(cls, data: dict) -> "MetricSpec":
        return cls(MeanKind(data["mean"], data.get("d")), data["c"], MetricForm(data["form"]))

    def __str__(self) -> str:
        return f"{self.form.value}[{self.mean}, c={self.c:g}]"


def phi(c: float = 1.0, form=MetricForm.TH) -> MetricSpec:
    """Arithmetic-mean family."""
    return MetricSpec(ARITHMETIC, c, MetricForm(form))


def phi_power(c: float, d: float, form=MetricForm.TH) -> MetricSpec:
    """Power-mean family with exponent ``d``."""
    return MetricSpec(power(d), c, MetricForm(form))


def phi_log(c: float = 1.0, form=MetricForm.TH) -> MetricSpec:
    """Logarithmic-mean family."""
    return MetricSpec(LOGARITHMIC, c, MetricForm(form))


_NAMED = {
    "j": lambda: MetricSpec(MIN, 1.0, MetricForm.LOG),
    "j*": lambda: MetricSpec(MIN, 1.0, MetricForm.TH),
    "t": lambda: MetricSpec(ARITHMETIC, 1.0, MetricForm.TH),
    "c-tilde": lambda: MetricSpec(MAX, 1.0, MetricForm.RAW),
}
NAMED_METRICS = ("j", "j*", "h", "t", "c-tilde")


def named_spec(name: str, c: float | None = None) -> MetricSpec:
    """Spec reproducing a metric from the literature.

    ``"j"`` distance ratio metric, ``"j*"``, ``"t"`` (the t-metric),
    ``"c-tilde"``, and ``"h"``, the metric ``h_{G,c}`` which needs its own
    parameter ``c`` and maps to the geometric mean with constant ``1/c``.
    """
    key = name.strip().lower()
    if key == "h":
        if c is None:
            raise ValueError("the h metric needs its parameter c")
        return MetricSpec(GEOMETRIC, 1.0 / c, MetricForm.LOG)
    try:
        return _NAMED[key]()
    except KeyError:
        raise ValueError(f"unknown named metric {name!r}; known: {NAMED_METRICS}") from None


def _batch(domain: Domain, x):
    arr = as_points(x, domain)
    dist_to_boundary(domain, arr)
    return np.ascontiguousarray(np.reshape(arr, (-1, domain.dim)))


def evaluate(spec: MetricSpec, domain: Domain, x, y):
    """Value of the metric ``spec`` at ``(x, y)``; batches broadcast row-wise.

    Returns exactly 0 where ``x == y``.
    """
    xa = as_points(x, domain)
    ya = as_points(y, domain)
    xa, ya = np.broadcast_arrays(xa, ya)
    shape = xa.shape[:-1]
    out = _kernels.pair_metric(_DOMAIN_CODE[domain.kind], *spec.kernel_args,
                               _batch(domain, xa), _batch(domain, ya))
    return out.item() if shape == () else out.reshape(shape)


def triangle_defect_batch(spec: MetricSpec, domain: Domain, x, y, z) -> np.ndarray:
    """``m(x, z) + m(z, y) - m(x, y)`` row-wise over batches of shape ``(N, n)``."""
    return _kernels.triangle_defect(_DOMAIN_CODE[domain.kind], *spec.kernel_args,
                                    _batch(domain, x), _batch(domain, y), _batch(domain, z))


def domain_code(domain: Domain) -> int:
    return _DOMAIN_CODE[domain.kind]
