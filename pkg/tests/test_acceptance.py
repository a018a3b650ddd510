"""Acceptance suite: one test and one PASS/FAIL summary line per criterion."""
import time

import numpy as np
import pytest

from conftest import record
from meanmetrics import sampling
from meanmetrics.bounds import comparison_check, envelope_check, verify_theorem_bounds
from meanmetrics.distortion import (
    FAMILIES, MobiusBall, RadialStretchBall, VerticalStretchHalf, alpha, corollary_check, schwarz_check,
)
from meanmetrics.geometry import Domain, hyperbolic_th_half, hyperbolic_th_half_planar, reduce_to_plane
from meanmetrics.harness import (
    LEMMAS, explore_conjecture, reproduce_counterexample, sample_axiom_check, search_counterexample,
)
from meanmetrics.means import ARITHMETIC, GEOMETRIC, LOGARITHMIC, MAX, MIN, power
from meanmetrics.metrics import MetricForm, MetricSpec, evaluate

SEED = 42
H2, B2 = Domain.half_space(2), Domain.ball(2)
R2, R3 = Domain.punctured(2), Domain.punctured(3)
C_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)


def test_criterion_1_metric_axioms():
    start = time.perf_counter()
    cases = [(MetricSpec(ARITHMETIC, c, MetricForm.TH), dom)
             for c in (0.1, 0.5, 1.0) for dom in (H2, B2, R2, R3)]
    cases += [(MetricSpec(mean, c, form), R2)
              for mean in (ARITHMETIC, LOGARITHMIC) for c in (0.5, 1.0, 2.0) for form in MetricForm]
    bad = []
    for spec, dom in cases:
        rep = sample_axiom_check(spec, dom, 100_000, SEED)
        if not rep.passed_as_metric:
            bad.append(f"{spec} on {dom}: {rep.violations} violations")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    record("1", ok, f"{len(cases)} sweeps x 1e5 triples, {len(bad)} failing, {elapsed:.1f} s (< 30 s)")
    assert not bad, bad
    assert elapsed < 30


def test_criterion_2_counterexamples():
    worst = 0.0
    bad = []
    for lemma in LEMMAS:
        for c in (0.5, 1.0, 2.0):
            rec = reproduce_counterexample(lemma, c, 0.01 if lemma == "L3.3" else 0.99)
            worst = max(worst, rec.relative_error)
            if not (rec.defect_direct < 0 and rec.relative_error <= 1e-9):
                bad.append((lemma, c))
    spot = reproduce_counterexample("L3.4", 1.0, 0.99).defect_direct
    ok = not bad and abs(spot - -3.2389) <= 1e-3
    record("2", ok, f"12 lemma cases negative, max relative gap {worst:.1e}; L3.4 spot {spot:.6f}")
    assert not bad
    assert spot == pytest.approx(-3.2389, abs=1e-3)


def _theorem_rows(theorem):
    rows = []
    for c in C_GRID:
        start = time.perf_counter()
        rep = verify_theorem_bounds(theorem, c, tol=5e-3)
        env = envelope_check(theorem, c, 1_000_000, SEED, tol=1e-9)
        rows.append((c, rep, env, time.perf_counter() - start))
    return rows


@pytest.mark.parametrize("theorem", ["T5.2", "T5.3"])
def test_criterion_3_sharp_constants(theorem):
    rows = _theorem_rows(theorem)
    elapsed = sum(r[3] for r in rows)
    extrema_ok = all(abs(rep.inf_found - rep.inf_expected) <= 5e-3
                     and abs(rep.sup_found - rep.sup_expected) <= 5e-3 for _, rep, _, _ in rows)
    envelope_ok = all(env["lower_violations"] == 0 and env["upper_violations"] == 0 for _, _, env, _ in rows)
    gap = max(max(abs(rep.inf_found - rep.inf_expected), abs(rep.sup_found - rep.sup_expected))
              for _, rep, _, _ in rows)
    ok = extrema_ok and envelope_ok and elapsed < 120
    record(f"3 ({theorem})", ok, f"max constant gap {gap:.1e} (<= 5e-3), envelope on 1e6 pairs x "
           f"{len(C_GRID)} c, {elapsed:.1f} s (< 120 s)")
    assert extrema_ok and envelope_ok
    assert elapsed < 120


@pytest.mark.parametrize("theorem", ["T5.5", "T5.6"])
def test_criterion_4_upper_constants(theorem):
    rows = _theorem_rows(theorem)
    sup_ok = all(abs(rep.sup_found - rep.sup_expected) <= 5e-3 for _, rep, _, _ in rows)
    lower_ok = all(env["lower_violations"] == 0 for _, _, env, _ in rows)
    upper_ok = all(env["upper_violations"] == 0 for _, _, env, _ in rows)
    gap = max(abs(rep.sup_found - rep.sup_expected) for _, rep, _, _ in rows)
    ok = sup_ok and lower_ok and upper_ok
    record(f"4 ({theorem})", ok, f"max sup gap {gap:.1e} (<= 5e-3), lower/upper envelope violations "
           f"{sum(env['lower_violations'] for _, _, env, _ in rows)}/"
           f"{sum(env['upper_violations'] for _, _, env, _ in rows)} on 1e6 pairs x {len(C_GRID)} c")
    assert sup_ok and lower_ok and upper_ok


def test_criterion_5_comparison():
    counts = {(str(dom), c): comparison_check(dom, c, 1_000_000, SEED)
              for dom in (H2, B2, R2) for c in (0.5, 1.0, 2.0)}
    total = sum(counts.values())
    record("5", total == 0, f"{total} violations over 9 cells x 1e6 pairs")
    assert total == 0, counts


def test_criterion_6_power_threshold():
    third = sample_axiom_check(MetricSpec(power(1 / 3), 1.0, MetricForm.RAW), R2, 1_000_000, SEED)
    one = sample_axiom_check(MetricSpec(power(1.0), 1.0, MetricForm.RAW), R2, 1_000_000, SEED)
    found = search_counterexample(MetricSpec(power(0.2), 1.0, MetricForm.RAW), R2, 1_000_000, SEED)
    ok = (third.violations == 0 and one.violations == 0 and found.found and found.defect < -1e-8
          and found.evaluations <= 1_000_000)
    record("6", ok, f"d=1/3: {third.violations}, d=1: {one.violations} violations on 1e6 triples; "
           f"d=0.2 witness defect {found.defect:.3g} after {found.evaluations} evaluations")
    assert ok


def _explore_cells():
    c37 = explore_conjecture("C3.7", [0.25, 1.0, 4.0], [0.5, 1.0, 3.0], 100_000, SEED)
    c44 = explore_conjecture("C4.4", [0.25, 1.0, 4.0], [], 100_000, SEED)
    return c37, c44


@pytest.fixture(scope="module")
def explore_cells():
    return _explore_cells()


def test_criterion_7_supported_part(explore_cells):
    # The parts that hold: every Raw/LogForm grid cell on H^2 violates, and the
    # ThForm cells inside c <= 2**(1/d - 1) (power family) or c <= 1 (log family) do not.
    c37, c44 = explore_cells
    non_metric_h = [cell for cell in c37 if cell.form is not MetricForm.TH and cell.domain == H2]
    inside = [cell for cell in c37 if cell.form is MetricForm.TH and cell.c <= 2 ** (1 / cell.d - 1)]
    inside += [cell for cell in c44 if cell.c <= 1]
    ok = (all(cell.report.violations > 0 for cell in non_metric_h)
          and all(cell.report.violations == 0 for cell in inside))
    record("7 (restricted)", ok, f"{len(non_metric_h)} Raw/LogForm H^2 cells all violating; "
           f"{len(inside)} ThForm cells with c <= 2**(1/d - 1) resp. c <= 1 violation-free")
    assert ok


@pytest.mark.xfail(strict=True, reason="ThForm cells with c = 4 (and c = 1, d = 3) violate the triangle "
                                        "inequality; see test_harness limit-configuration tests")
def test_criterion_7_conjecture_exploration(explore_cells):
    c37, c44 = explore_cells
    th_cells = [cell for cell in c37 if cell.form is MetricForm.TH] + list(c44)
    failing = [f"{cell.conjecture} {cell.domain} c={cell.c:g}" + (f" d={cell.d:g}" if cell.d else "")
               for cell in th_cells if cell.report.violations > 0]
    raw_log_h = any(cell.report.violations > 0 for cell in c37
                    if cell.form is not MetricForm.TH and cell.domain == H2)
    ok = not failing and raw_log_h
    record("7", ok, f"{len(th_cells) - len(failing)}/{len(th_cells)} ThForm cells violation-free; "
           f"violating: {', '.join(failing) or 'none'}; Raw/LogForm H^2 violation seen: {raw_log_h}")
    assert ok


def test_criterion_8_distortion():
    mobius = [schwarz_check(MobiusBall(a), 10_000, SEED) for a in (0j, 0.5, -0.3 + 0.6j, 0.9j)]
    mob_dev = max(max(abs(r.max_ratio_1 - 1), abs(r.min_ratio_1 - 1)) for r in mobius)
    maps = [VerticalStretchHalf(2.0), RadialStretchBall(2.0)]
    schwarz_ok = all(alpha(qr) == 0.5 and schwarz_check(qr, 10_000, SEED).holds_1 for qr in maps)
    corollaries = [corollary_check(qr, c, fam, 10_000, SEED) for qr in maps for c in (0.5, 1.0, 2.0)
                   for fam in FAMILIES]
    cor_ok = all(row["holds"] for row in corollaries)
    numbers = sorted({row["inequality"] for row in corollaries})
    ok = mob_dev <= 1e-9 and schwarz_ok and cor_ok and numbers == [1, 2, 3, 4]
    record("8", ok, f"Mobius ratio deviation {mob_dev:.1e}; inequality (1) holds for both stretches: "
           f"{schwarz_ok}; corollary inequalities {numbers} hold at c in (0.5, 1, 2): {cor_ok}")
    assert ok


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def test_criterion_9_structural_identities():
    n = 100_000
    worst_chain = 0.0
    for dom in (H2, B2, R2):
        x, y = sampling.sample_pairs(dom, n, SEED)
        for mean in (ARITHMETIC, LOGARITHMIC, power(0.5), power(3.0)):
            raw = evaluate(MetricSpec(mean, 1.0, MetricForm.RAW), dom, x, y)
            log = evaluate(MetricSpec(mean, 1.0, MetricForm.LOG), dom, x, y)
            th = evaluate(MetricSpec(mean, 1.0, MetricForm.TH), dom, x, y)
            worst_chain = max(worst_chain, _rel(log, np.log1p(raw)), _rel(th, np.tanh(log / 2)))
    x, y = sampling.sample_pairs(H2, n, SEED)
    dual = _rel(hyperbolic_th_half(H2, x, y), hyperbolic_th_half_planar(H2, x, y))
    worst_reduce = 0.0
    specs = [MetricSpec(m, 0.8, f) for m in (ARITHMETIC, LOGARITHMIC, MIN, MAX, GEOMETRIC, power(2.0))
             for f in MetricForm]
    for dom3 in (Domain.half_space(3), Domain.ball(3)):
        dom2 = Domain(dom3.kind, 2)
        x, y = sampling.sample_pairs(dom3, n, SEED)
        xp, yp = reduce_to_plane(dom3, x, y)
        worst_reduce = max(worst_reduce, _rel(hyperbolic_th_half(dom2, xp, yp), hyperbolic_th_half(dom3, x, y)))
        for spec in specs:
            worst_reduce = max(worst_reduce, _rel(evaluate(spec, dom2, xp, yp), evaluate(spec, dom3, x, y)))
    ok = worst_chain <= 1e-12 and dual <= 1e-12 and worst_reduce <= 1e-12
    record("9", ok, f"form chain {worst_chain:.1e}, H^2 dual formula {dual:.1e}, "
           f"n=3 vs planar {worst_reduce:.1e} (all <= 1e-12 relative, 1e5 samples)")
    assert ok
