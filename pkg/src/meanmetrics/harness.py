"""Randomized metric-axiom checks, counterexample reproduction and search.

A *defect* is ``m(x, z) + m(z, y) - m(x, y)``; a metric never has a negative
one. Defects below ``-VIOLATION_TOL`` count as violations, defects in
``[-VIOLATION_TOL, 0)`` as rounding noise.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import sampling
from ._kernels import boundary_distance
from .geometry import Domain, hyperbolic_dist, triangular_ratio
from .means import ARITHMETIC, LOGARITHMIC, power
from .metrics import MetricForm, MetricSpec, domain_code, evaluate, triangle_defect_batch

log = logging.getLogger(__name__)

VIOLATION_TOL = 1e-9
SEARCH_THRESHOLD = -1e-8
SYMMETRY_RTOL = 1e-12

DEFAULT_K = 0.99
DEFAULT_H = 0.01

LEMMAS = ("L3.3", "L3.4", "L4.2", "L4.3")
CONJECTURES = ("C3.7", "C4.4")
TRANSFORM_BASES = ("s", "rho")


@dataclass
class DefectReport:
    spec: MetricSpec | None
    domain: Domain
    samples: int
    min_defect: float
    witness: tuple | None
    violations: int
    seed: int
    noise: int = 0
    symmetry_failures: int = 0
    identity_failures: int = 0
    tolerance: float = VIOLATION_TOL
    label: str = ""

    @property
    def passed_as_metric(self) -> bool:
        return self.violations == 0 and self.symmetry_failures == 0 and self.identity_failures == 0

    def as_dict(self) -> dict:
        return {
            "metric": self.label or str(self.spec),
            "spec": self.spec.as_dict() if self.spec is not None else None,
            "domain": {"kind": self.domain.kind.value, "dim": self.domain.dim},
            "samples": self.samples,
            "seed": self.seed,
            "min_defect": self.min_defect,
            "violations": self.violations,
            "noise": self.noise,
            "symmetry_failures": self.symmetry_failures,
            "identity_failures": self.identity_failures,
            "tolerance": self.tolerance,
            "witness": None if self.witness is None else [list(map(float, p)) for p in self.witness],
        }


def triangle_defect(spec: MetricSpec, domain: Domain, x, y, z):
    """``m(x, z) + m(z, y) - m(x, y)`` for the metric ``spec``."""
    return evaluate(spec, domain, x, z) + evaluate(spec, domain, z, y) - evaluate(spec, domain, x, y)


@dataclass
class _BlockStats:
    start: int
    min_defect: float
    argmin: int
    violations: int
    noise: int
    symmetry: int
    identity: int
    witness: tuple | None


def _merge(parts: list[_BlockStats]):
    best = min(parts, key=lambda p: (p.min_defect, p.start + p.argmin))
    return dict(
        min_defect=best.min_defect,
        witness=best.witness,
        violations=sum(p.violations for p in parts),
        noise=sum(p.noise for p in parts),
        symmetry_failures=sum(p.symmetry for p in parts),
        identity_failures=sum(p.identity for p in parts),
    )


def _block_stats(start, defects, triple, tol, symmetry=0, identity=0):
    i = int(np.argmin(defects))
    lo = float(defects[i])
    return _BlockStats(
        start=start,
        min_defect=lo,
        argmin=i,
        violations=int(np.count_nonzero(defects < -tol)),
        noise=int(np.count_nonzero((defects >= -tol) & (defects < 0))),
        symmetry=symmetry,
        identity=identity,
        witness=tuple(p[i].copy() for p in triple) if lo < -tol else None,
    )


def sample_axiom_check(spec: MetricSpec, domain: Domain, n: int, seed: int,
                       threads: int | None = None, tol: float = VIOLATION_TOL) -> DefectReport:
    """Check the triangle inequality, symmetry and identity on ``n`` random triples.

    The result depends only on ``(spec, domain, n, seed)``.
    """
    if n < 1:
        raise ValueError("need at least one sample")

    def run(block, size):
        x, y, z = sampling.sample_tuple_block(domain, seed, block, size, 3)
        defects = triangle_defect_batch(spec, domain, x, y, z)
        fwd = evaluate(spec, domain, x, y)
        bwd = evaluate(spec, domain, y, x)
        sym = np.abs(fwd - bwd) > SYMMETRY_RTOL * np.maximum(1.0, np.abs(fwd))
        distinct = np.any(x != y, axis=1)
        self_dist = evaluate(spec, domain, x, x)
        ident = (self_dist != 0) | (distinct & ~(fwd > 0))
        return _block_stats(block * sampling.BLOCK, defects, (x, y, z), tol,
                            int(sym.sum()), int(ident.sum()))

    merged = _merge(sampling.map_blocks(run, n, threads))
    report = DefectReport(spec=spec, domain=domain, samples=n, seed=seed, tolerance=tol, **merged)
    if report.noise:
        log.info("%s on %s: %d defects in [-%g, 0) treated as rounding noise",
                 spec, domain, report.noise, tol)
    return report


# ---------------------------------------------------------------- counterexamples


@dataclass
class CounterexampleRecord:
    lemma: str
    c: float
    param: float
    domain: Domain
    spec: MetricSpec
    points: tuple
    defect_direct: float
    defect_closed_form: float
    defect_as_defined: float

    @property
    def relative_error(self) -> float:
        return abs(self.defect_direct - self.defect_closed_form) / abs(self.defect_closed_form)

    @property
    def passed(self) -> bool:
        return self.defect_direct < 0 and self.relative_error <= 1e-9

    def as_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "c": self.c,
            "param": self.param,
            "domain": {"kind": self.domain.kind.value, "dim": self.domain.dim},
            "spec": self.spec.as_dict(),
            "points": {k: list(map(float, p)) for k, p in zip("xyz", self.points)},
            "defect_direct": self.defect_direct,
            "defect_closed_form": self.defect_closed_form,
            "defect_as_defined": self.defect_as_defined,
            "relative_error": self.relative_error,
        }


def _lemma_setup(lemma: str, c: float, p: float):
    # The L3.3 and L3.4 closed forms are written for log(1 + |x-y| / (c (d(x) + d(y)))),
    # i.e. the arithmetic log form at constant 2c; the others use c as is.
    if lemma == "L3.3":
        if not 0 < p < 0.25:
            raise ValueError("L3.3 needs 0 < h < 1/4")
        dom = Domain.half_space(2)
        pts = (np.array([0.25, p / 4]), np.array([-0.25, p / 4]), np.array([0.0, 0.25]))
        closed = (2 * math.log1p(math.sqrt(2 - 2 * p + p * p) / (c * (p + 1)))
                  - math.log1p(1 / (c * p)))
        return dom, MetricSpec(ARITHMETIC, 2 * c, MetricForm.LOG), MetricSpec(ARITHMETIC, c, MetricForm.LOG), pts, closed
    if not 0 < p < 1:
        raise ValueError(f"{lemma} needs 0 < k < 1")
    if lemma == "L3.4":
        dom = Domain.ball(2)
        pts = (np.array([p, 0.0]), np.array([-p, 0.0]), np.zeros(2))
        closed = 2 * math.log1p(p / (c * (2 - p))) - math.log1p(p / (c * (1 - p)))
        return dom, MetricSpec(ARITHMETIC, 2 * c, MetricForm.LOG), MetricSpec(ARITHMETIC, c, MetricForm.LOG), pts, closed
    spec = MetricSpec(LOGARITHMIC, c, MetricForm.LOG)
    if lemma == "L4.2":
        dom = Domain.half_space(2)
        pts = (np.array([p, 1 - p]), np.array([-p, 1 - p]), np.array([0.0, 1.0]))
        closed = (2 * math.log1p(-math.sqrt(2) * math.log1p(-p) / c)
                  - math.log1p(2 * p / (c * (1 - p))))
        return dom, spec, spec, pts, closed
    if lemma == "L4.3":
        dom = Domain.ball(2)
        pts = (np.array([p, 0.0]), np.array([-p, 0.0]), np.zeros(2))
        closed = 2 * math.log1p(-math.log1p(-p) / c) - math.log1p(2 * p / (c * (1 - p)))
        return dom, spec, spec, pts, closed
    raise ValueError(f"unknown lemma {lemma!r}; expected one of {LEMMAS}")


def reproduce_counterexample(lemma: str, c: float = 1.0, param: float | None = None) -> CounterexampleRecord:
    """Build the points of a non-metricity lemma and evaluate its defect two ways."""
    if param is None:
        param = DEFAULT_H if lemma == "L3.3" else DEFAULT_K
    if not c > 0:
        raise ValueError("c must be positive")
    dom, spec, as_defined, pts, closed = _lemma_setup(lemma, c, param)
    x, y, z = pts
    return CounterexampleRecord(
        lemma=lemma, c=c, param=param, domain=dom, spec=spec, points=pts,
        defect_direct=float(triangle_defect(spec, dom, x, y, z)),
        defect_closed_form=closed,
        defect_as_defined=float(triangle_defect(as_defined, dom, x, y, z)),
    )


# ---------------------------------------------------------------- search


@dataclass
class SearchResult:
    spec: MetricSpec
    domain: Domain
    witness: tuple | None
    defect: float
    evaluations: int
    seed: int
    budget: int

    @property
    def found(self) -> bool:
        return self.witness is not None

    def as_dict(self) -> dict:
        return {
            "spec": self.spec.as_dict(),
            "domain": {"kind": self.domain.kind.value, "dim": self.domain.dim},
            "found": self.found,
            "defect": self.defect,
            "evaluations": self.evaluations,
            "budget": self.budget,
            "seed": self.seed,
            "witness": None if self.witness is None else [list(map(float, p)) for p in self.witness],
        }


def _verified(spec, domain, triple, threshold):
    try:
        value = float(triangle_defect(spec, domain, *triple))
    except ValueError:
        return None
    return value if value < threshold else None


def search_counterexample(spec: MetricSpec, domain: Domain, budget: int, seed: int,
                          threshold: float = SEARCH_THRESHOLD, starts: int = 32) -> SearchResult:
    """Random restarts plus derivative-free compass descent on the triangle defect.

    Every trial triple counts against ``budget``. Steps are taken relative to
    each point's boundary distance, so trial points never leave the domain.
    Returns as soon as a triple with defect below ``threshold`` is verified.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = sampling.block_rng(seed, 0, stream=7)
    n = domain.dim
    used = 0

    def result(triple, value):
        return SearchResult(spec, domain, triple, value, used, seed, budget)

    pool_size = max(1, min(budget // 4, 65536))
    pool = [sampling.sample_points(domain, rng, pool_size) for _ in range(3)]
    values = triangle_defect_batch(spec, domain, *pool)
    used += pool_size
    order = np.argsort(values, kind="stable")
    best_value = float(values[order[0]])
    for i in order[:8]:
        if values[i] < threshold:
            triple = tuple(p[i].copy() for p in pool)
            checked = _verified(spec, domain, triple, threshold)
            if checked is not None:
                return result(triple, checked)

    k = min(starts, pool_size)
    cand = np.stack([np.stack([p[i] for p in pool]) for i in order[:k]])  # (k, 3, n)
    cand_val = values[order[:k]].copy()
    step = np.full(k, 0.25)
    next_start = k

    # Signed unit moves of one coordinate of one of the three points.
    moves = np.zeros((6 * n, 3, n))
    for j in range(3 * n):
        moves[2 * j, j // n, j % n] = 1.0
        moves[2 * j + 1, j // n, j % n] = -1.0
    n_moves = moves.shape[0]

    while used + k * n_moves <= budget:
        bd = np.stack([_boundary(domain, cand[:, i]) for i in range(3)], axis=1)  # (k, 3)
        scale = (step[:, None] * bd)[:, None, :, None]
        trials = cand[:, None] + moves[None] * scale  # (k, m, 3, n)
        flat = trials.reshape(-1, 3, n)
        tv = triangle_defect_batch(spec, domain, flat[:, 0], flat[:, 1], flat[:, 2]).reshape(k, n_moves)
        used += k * n_moves
        j = np.argmin(tv, axis=1)
        tbest = tv[np.arange(k), j]
        better = tbest < cand_val
        cand[better] = trials[better, j[better]]
        cand_val[better] = tbest[better]
        step[~better] *= 0.5
        lo = int(np.argmin(cand_val))
        best_value = min(best_value, float(cand_val[lo]))
        if cand_val[lo] < threshold:
            triple = tuple(cand[lo, i].copy() for i in range(3))
            checked = _verified(spec, domain, triple, threshold)
            if checked is not None:
                return result(triple, checked)
        stale = np.flatnonzero(step < 1e-9)
        for s in stale:
            if next_start < pool_size:
                i = order[next_start]
            else:
                i = int(rng.integers(pool_size))
            next_start += 1
            cand[s] = np.stack([p[i] for p in pool])
            cand_val[s] = values[i]
            step[s] = 0.25
    return result(None, best_value)


def _boundary(domain: Domain, pts: np.ndarray) -> np.ndarray:
    return boundary_distance(domain_code(domain), np.ascontiguousarray(pts))


# ---------------------------------------------------------------- conjectures


@dataclass
class ConjectureCell:
    conjecture: str
    domain: Domain
    c: float
    d: float | None
    form: MetricForm
    expected_metric: bool
    report: DefectReport

    @property
    def consistent(self) -> bool:
        """Sampling outcome agrees with the conjectured behaviour."""
        return self.report.violations == 0 if self.expected_metric else self.report.violations > 0

    def row(self) -> dict:
        return {
            "conjecture": self.conjecture,
            "domain": str(self.domain),
            "c": self.c,
            "d": self.d,
            "form": self.form.value,
            "expected": "metric" if self.expected_metric else "non-metric",
            "violations": self.report.violations,
            "worst_defect": self.report.min_defect,
            "samples": self.report.samples,
        }


def explore_conjecture(conjecture: str, c_grid, d_grid, n: int, seed: int,
                       domains=None, threads: int | None = None) -> list[ConjectureCell]:
    """Sweep a conjecture's parameter grid with :func:`sample_axiom_check`.

    ``C3.7`` checks the power-mean raw, log and th forms per ``(c, d)`` cell;
    ``C4.4`` checks the logarithmic-mean th form per ``c`` (``d_grid`` unused).
    Zero violations are evidence only.
    """
    if conjecture not in CONJECTURES:
        raise ValueError(f"unknown conjecture {conjecture!r}; expected one of {CONJECTURES}")
    c_grid = list(c_grid)
    if not c_grid or (conjecture == "C3.7" and not list(d_grid)):
        raise ValueError("parameter grids must be nonempty")
    if domains is None:
        domains = (Domain.half_space(2), Domain.ball(2))
    cells = []
    for dom in domains:
        for c in c_grid:
            if conjecture == "C4.4":
                spec = MetricSpec(LOGARITHMIC, c, MetricForm.TH)
                cells.append(ConjectureCell(conjecture, dom, c, None, MetricForm.TH, True,
                                            sample_axiom_check(spec, dom, n, seed, threads)))
                continue
            for d in d_grid:
                for form in MetricForm:
                    spec = MetricSpec(power(d), c, form)
                    cells.append(ConjectureCell(conjecture, dom, c, d, form, form is MetricForm.TH,
                                                sample_axiom_check(spec, dom, n, seed, threads)))
    return cells


# ---------------------------------------------------------------- transforms


def _log_transform(v):
    return np.log1p(v)


def _th_transform(v):
    return np.tanh(v / 2.0)


def _base_metric(base: str, domain: Domain):
    if base == "s":
        return lambda x, y: np.asarray(triangular_ratio(domain, x, y))
    if base == "rho":
        if not domain.is_hyperbolic:
            raise ValueError("rho is defined only on H^n and B^n")
        return lambda x, y: np.asarray(hyperbolic_dist(domain, x, y))
    raise ValueError(f"unknown base metric {base!r}; expected one of {TRANSFORM_BASES}")


def transform_check(base: str, domain: Domain, n: int, seed: int,
                    tol: float = VIOLATION_TOL) -> tuple[DefectReport, DefectReport]:
    """Triangle-inequality sweep of ``log(1 + b)`` and ``th(b / 2)`` for a base metric ``b``."""
    metric = _base_metric(base, domain)
    out = []
    for name, f in (("log(1+%s)", _log_transform), ("th(%s/2)", _th_transform)):
        def run(block, size, f=f):
            x, y, z = sampling.sample_tuple_block(domain, seed, block, size, 3)
            defects = f(metric(x, z)) + f(metric(z, y)) - f(metric(x, y))
            return _block_stats(block * sampling.BLOCK, defects, (x, y, z), tol)

        merged = _merge(sampling.map_blocks(run, n, threads=1))
        out.append(DefectReport(spec=None, domain=domain, samples=n, seed=seed, tolerance=tol,
                                label=name % base, **merged))
    return out[0], out[1]
