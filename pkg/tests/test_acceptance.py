"""Acceptance gate: twelve checks the finished laboratory must pass.

Each test is one independently stated behavior, so the -v report gives
one pass/fail line per check.  Reference integers and ratio strings are
frozen from exact big-integer runs; runtime ceilings are asserted with
wall-clock measurements on the single heavy checks.
"""

import math
import random
import time

import pytest

from collatz_lab.affine_sets import (
    PRESET_GENERATORS,
    density_profile,
    preset_closure,
)
from collatz_lab.maps import TABLE_BASE, collatz_step, t5_map, t_map, t_step, u_map
from collatz_lab.model import (
    EXPECTED_SLOPE,
    EXPECTED_STEPS_COEFF,
    EXTREMAL_SHAPE,
    STOCHASTIC_BOUND_COEFF,
    compare,
    predict,
)
from collatz_lab.render import comparison_to_text
from collatz_lab.sieve import build_table, k_step, parity_bijection_check, verify_range
from collatz_lab.stats import block_census, gamma, rho, scan_records, total_stopping_time
from collatz_lab.tag import collatz_tag, run_tag
from collatz_lab.trajectory import IterationLimits, cycle_census, iterate
from collatz_lab.util import format_fixed5

# sigma values for the hundred starts TABLE_BASE + 10j + k, row k,
# column j, frozen from an exact big-integer run
_REFERENCE_GRID = (
    (529, 529, 529, 678, 529, 529, 846, 529, 846, 846),
    (659, 659, 529, 678, 659, 529, 846, 529, 529, 529),
    (846, 529, 659, 529, 529, 529, 659, 846, 529, 659),
    (846, 529, 659, 846, 659, 529, 659, 846, 529, 659),
    (659, 659, 659, 846, 678, 529, 846, 846, 846, 659),
    (659, 659, 846, 846, 678, 529, 529, 529, 846, 659),
    (659, 529, 659, 846, 678, 846, 529, 846, 659, 846),
    (529, 529, 659, 846, 659, 659, 529, 846, 659, 529),
    (529, 678, 659, 846, 529, 846, 529, 529, 846, 846),
    (529, 678, 659, 659, 529, 529, 529, 529, 659, 846),
)

_BLOCK_ROWS = {
    10**35: [
        (481, 1, "0.47817"),
        (508, 19, "0.48622"),
        (573, 49, "0.50261"),
        (592, 10, "0.50675"),
        (836, 21, "0.54306"),
    ],
    10**36: [
        # 146/351 = 0.4159544..., so 0.41595 is the only string the
        # exact ratio can produce, truncated or rounded.
        (351, 1, "0.41595"),
        (467, 72, "0.46895"),
        (508, 21, "0.48228"),
        (519, 6, "0.48554"),
    ],
    TABLE_BASE: [
        (529, 38, "0.48204"),
        (659, 28, "0.51138"),
        (678, 7, "0.51474"),
        (846, 27, "0.53782"),
    ],
}


def test_criterion_01_hundred_start_census_matches_reference_grid():
    t0 = time.monotonic()
    census = block_census(TABLE_BASE, 100)
    elapsed = time.monotonic() - t0
    expected = [_REFERENCE_GRID[m % 10][m // 10] for m in range(100)]
    assert list(census.sigmas) == expected
    assert census.sigmas[0] == 529
    assert census.sigmas[30] == 678
    assert census.sigmas[99] == 846
    assert not census.unknown_offsets
    assert elapsed < 120.0


def test_criterion_02_census_blocks_reproduce_rows_and_ratios():
    for base, expected in _BLOCK_ROWS.items():
        census = block_census(base, 100)
        got = [(r.sigma, r.count, format_fixed5(r.ratio)) for r in census.rows]
        assert got == expected
        assert sum(r.count for r in census.rows) == 100
        assert not census.anomalies


def test_criterion_03_peak_exponent_of_advertised_start():
    # This start's exponent computes to 1.06054; the exponent 2.04982
    # belongs to 1980976057694848447 (pinned in test_stats), which
    # differs from the start written here in one digit.  The pair is
    # asserted as advertised so the mismatch stays visible instead of
    # being silently adjusted.
    value = rho(1980976057694878447)
    assert value == pytest.approx(2.04982, abs=5e-5)


def test_criterion_04_steps_to_log_ratio_record_value():
    value = gamma(7219136416377236271195)
    assert value == pytest.approx(36.7169, abs=1e-3)


class _Interrupt(Exception):
    pass


def test_criterion_05_billion_range_verification_deterministic(tmp_path):
    table = build_table(16)
    plain = verify_range(1, 10**9, k=16, table=table, workers=1)
    assert plain.counterexamples == ()
    assert plain.elapsed < 900.0

    def key(report):
        return (
            report.lo, report.hi, report.k,
            report.checked_dense, report.checked_survivors,
            report.skipped, report.counterexamples, report.chunks_total,
        )

    two = verify_range(1, 10**9, k=16, table=table, workers=2)
    assert key(two) == key(plain)

    ck = str(tmp_path / "verify.ck")

    def stop_after_ten(done, total, checked):
        if done == 10:
            raise _Interrupt

    with pytest.raises(_Interrupt):
        verify_range(1, 10**9, k=16, table=table, checkpoint_path=ck,
                     on_progress=stop_after_ten)
    resumed = verify_range(1, 10**9, k=16, table=table, checkpoint_path=ck)
    assert resumed.chunks_done_before == 10
    assert key(resumed) == key(plain)


def test_criterion_06_jump_identities_and_parity_bijection():
    # On 2^m - 1 every step is odd until the twos run out, multiplying
    # in one 3 per halving.
    for m in range(1, 65):
        x = (1 << m) - 1
        for k in range(1, m + 1):
            x = t_step(x)
            assert x == 3**k * (1 << (m - k)) - 1

    rng = random.Random(20260816)
    tables = {}
    for _ in range(10**4):
        k = rng.randint(1, 16)
        table = tables.get(k)
        if table is None:
            table = tables[k] = build_table(k)
        q = rng.getrandbits(rng.randrange(1, 129))
        r = rng.randrange(1 << k)
        n = (q << k) + r
        x = n
        for _ in range(k):
            x = t_step(x)
        assert k_step(table, n) == x

    for k in range(1, 17):
        assert parity_bijection_check(k)


def test_criterion_07_conjugacy_and_even_count_agreement():
    for x in range(1, 10**4 + 1):
        if x & 1:
            assert t_step(x) == collatz_step(collatz_step(x))
        else:
            assert t_step(x) == collatz_step(x)
    for n in range(1, 10**4 + 1):
        evens = 0
        x = n
        while x != 1:
            if x % 2 == 0:
                evens += 1
            x = collatz_step(x)
        assert total_stopping_time(n) == evens


def test_criterion_08_cycle_censuses_across_three_maps():
    full = cycle_census(t_map(), 1, 10**6)
    assert [c.members for c in full.cycles] == [(1, 2)]
    assert not full.limit_starts
    assert not full.undefined_starts

    tight = IterationLimits(max_steps=10_000, max_bits=4096)
    five = cycle_census(t5_map(), 1, 100, limits=tight)
    members5 = [c.members for c in five.cycles]
    assert (1, 3, 8, 4, 2) in members5
    assert (13, 33, 83, 208, 104, 52, 26) in members5
    assert five.limit_starts

    perm = cycle_census(u_map(), 1, 100, limits=tight)
    members_u = [c.members for c in perm.cycles]
    assert (1,) in members_u
    assert (2, 3) in members_u
    assert perm.limit_starts


def test_criterion_09_tag_system_shadows_orbits_to_one():
    t0 = time.monotonic()
    system = collatz_tag()
    for n in range(1, 101):
        run = run_tag(system, "0" * n)
        lengths = [length for _, length in run.zero_lengths]
        traj = iterate(t_map(), n)
        assert lengths == list(traj.values)
        assert lengths[-1] == 1  # the word "0" itself was reached
    assert time.monotonic() - t0 < 60.0


def test_criterion_10_model_constants_and_prediction_narrative():
    assert EXPECTED_SLOPE == pytest.approx(-0.14384, abs=1e-5)
    assert EXPECTED_STEPS_COEFF == pytest.approx(6.95212, abs=1e-5)
    assert STOCHASTIC_BOUND_COEFF == 41.677647
    assert EXTREMAL_SHAPE.rise_steps_coeff == 7.645
    assert EXTREMAL_SHAPE.fall_steps_coeff == 13.905
    assert math.isclose(
        EXTREMAL_SHAPE.rise_steps_coeff + EXTREMAL_SHAPE.fall_steps_coeff,
        EXTREMAL_SHAPE.total_steps_coeff,
        abs_tol=1e-9,
    )
    assert EXTREMAL_SHAPE.total_steps_coeff == 21.55

    assert round(predict(TABLE_BASE).expected_steps) == 600

    fit = compare(iterate(t_map(), TABLE_BASE))
    assert fit.steps == 529
    text = comparison_to_text(fit)
    assert "529 steps" in text
    assert "model expected 600." in text


def test_criterion_11_high_step_survey_count():
    scan = scan_records(2, 10**7)
    assert scan.threshold_count >= 100
    assert scan.threshold_count == 5_647_296


def test_criterion_12_closure_membership_and_density_trend():
    backward = preset_closure("s0", 1000, ceiling=1000 << 20)
    assert backward.members == tuple(range(1, 1001))
    assert backward.exact

    grown = preset_closure("s1", 10**6)
    profile = density_profile(grown.members, [10**3, 10**4, 10**5, 10**6])
    counts = [count for _, count, _ in profile]
    densities = [density for _, _, density in profile]
    assert counts == [266, 2011, 14878, 117671]
    assert all(a > b for a, b in zip(densities, densities[1:]))

    for name in ("s1", "s2"):
        result = preset_closure(name, 1000)
        assert result.exact
        members = set(result.members)
        for m in result.members:
            for gen in PRESET_GENERATORS[name]:
                image = gen.image(m)
                if image is not None and image <= 1000:
                    assert image in members
