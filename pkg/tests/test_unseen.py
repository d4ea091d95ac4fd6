"""Corrected total-mass series and the smoothed unseen-symbol count."""

import math
import random
from fractions import Fraction

import pytest

from entrokit.core import CountTable, Profile, build_profile, log_poisson_tail
from entrokit.unseen import (
    DEFAULT_AMPLIFICATION_TABLE,
    estimate_total_mass,
    estimate_unseen_count,
    lookup_amplification,
    smoothing_parameter,
)

# h1=10, a=2 worked through at 50 digits: r = ln(90)/4, u = 20 (1 - 90^(-1/4))
UNSEEN_TEN_SINGLETONS_A2 = 13.506641690498022
SMOOTHING_N100_A3 = 1.114101954611321  # ln(800)/6


def _profile(counts):
    return build_profile(CountTable(counts))


def _random_profile(rng, max_total=200):
    """Random nonempty profile with sample size capped at max_total."""
    counts = {}
    total = 0
    for j in range(rng.randint(1, 25)):
        c = rng.randint(1, 12)
        if total + c > max_total:
            break
        counts[j] = c
        total += c
    if not counts:
        counts = {0: 1}
    return _profile(counts)


def _mass_oracle(profile, k):
    """Big-rational evaluation of the alternating mass series, bit-exact until
    the final rounding to float."""
    n = profile.n
    acc = Fraction(0)
    for i in range(1, n - k + 1):
        hj = profile.h.get(k + i, 0)
        if hj:
            acc += Fraction((-1) ** i * hj, math.comb(n, k + i))
    return float(-math.comb(n, k) * acc)


def test_total_mass_two_triples():
    # h = {3: 2}, N = 6: m0 = 2 / C(6,3) = 0.1 exactly
    est = estimate_total_mass(_profile({"a": 3, "b": 3}), 0)
    assert est.raw == 0.1
    assert est.clamped == 0.1
    assert not est.forced_zero


def test_total_mass_single_repeated_symbol():
    p = _profile({"a": 10})
    m0 = estimate_total_mass(p, 0)
    assert m0.raw == -1.0
    assert m0.clamped == 0.0
    # no symbol was seen once, so the count-1 mass is pinned at zero
    m1 = estimate_total_mass(p, 1)
    assert m1.forced_zero
    assert m1.clamped == 0.0
    m10 = estimate_total_mass(p, 10)
    assert m10.raw == 0.0
    # count classes outside the sample are a caller error, not a zero
    with pytest.raises(ValueError):
        estimate_total_mass(p, 11)
    with pytest.raises(ValueError):
        estimate_total_mass(p, -1)


def test_total_mass_all_singletons_is_exactly_one():
    for m in (1, 5, 40):
        p = _profile({j: 1 for j in range(m)})
        est = estimate_total_mass(p, 0)
        assert est.raw == 1.0
        assert est.clamped == 1.0


def test_total_mass_matches_big_rational_oracle():
    rng = random.Random(2024)
    for _ in range(200):
        p = _random_profile(rng)
        for k in range(min(4, p.n + 1)):
            got = estimate_total_mass(p, k)
            if got.forced_zero:
                assert p.h.get(k, 0) == 0 or k > p.n
                continue
            assert abs(got.raw - _mass_oracle(p, k)) <= 1e-8


def test_total_mass_clamped_to_unit_interval():
    rng = random.Random(55)
    for _ in range(300):
        p = _random_profile(rng)
        for k in range(min(5, p.n + 1)):
            est = estimate_total_mass(p, k)
            assert 0.0 <= est.clamped <= 1.0
            assert est.k == k


def test_smoothing_parameter_closed_forms():
    assert smoothing_parameter(10, 2.0) == pytest.approx(math.log(90) / 4, abs=1e-15)
    assert smoothing_parameter(100, 3.0) == pytest.approx(SMOOTHING_N100_A3, abs=1e-12)


def test_smoothing_parameter_domain():
    with pytest.raises(ValueError):
        smoothing_parameter(0, 2.0)
    with pytest.raises(ValueError):
        smoothing_parameter(10, 1.0)
    with pytest.raises(ValueError):
        smoothing_parameter(10, 0.5)
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(1, 10_000)
        a = math.exp(rng.uniform(math.log(1.0001), math.log(1e6)))
        assert smoothing_parameter(n, a) >= 0.0


def test_unseen_count_ten_singletons_amplification_two():
    p = _profile({j: 1 for j in range(10)})
    est = estimate_unseen_count(p, 2.0)
    assert est.r == pytest.approx(math.log(90) / 4, abs=1e-15)
    assert est.raw == pytest.approx(UNSEEN_TEN_SINGLETONS_A2, abs=1e-12)
    assert est.clamped == est.raw
    assert est.amplification == 2.0
    assert est.multiplicity == 1


def test_unseen_count_at_amplification_one_is_alternating_sum():
    # a = 1 collapses every Poisson tail to 1: u = h1 - h2 + h3 - ...
    p = _profile({"a": 1, "b": 1, "c": 2, "d": 3})  # h = {1: 2, 2: 1, 3: 1}
    est = estimate_unseen_count(p, 1.0)
    assert est.raw == 2.0 - 1.0 + 1.0
    for m in (1, 7, 30):
        singles = _profile({j: 1 for j in range(m)})
        assert estimate_unseen_count(singles, 1.0).raw == float(m)


def test_unseen_count_below_one_amplification_exact():
    # a <= 1 keeps the plain arithmetic path: s_i = -(-a)^i
    p = _profile({"a": 1, "b": 2, "c": 2, "d": 5})
    a = 0.5
    expect = sum(-((-a) ** i) * hi for i, hi in p.h.items())
    assert estimate_unseen_count(p, a).raw == expect


def test_unseen_count_multiplicity_two_closed_form():
    # at a = 1, mu = 2 the tail weights collapse to s_i = (-1)^i (i - 1)
    for counts in ({"a": 1, "b": 1, "c": 2}, {j: j % 3 + 1 for j in range(9)}):
        p = _profile(counts)
        expect = sum((-1) ** i * (i - 1) * hi for i, hi in p.h.items())
        est = estimate_unseen_count(p, 1.0, multiplicity=2)
        assert est.raw == float(expect)
        assert est.clamped == max(float(expect), 0.0)
        assert est.multiplicity == 2


def test_unseen_count_general_path_matches_specialized_form():
    """For mu = 1 the generic weights must reduce to -(-a)^i Pr(Poi(r) >= i)."""
    rng = random.Random(909)
    pool = [1.5, 2.0, 5.0, 8.0, 100.0, 4e5]
    for trial in range(200):
        p = _random_profile(rng)
        a = pool[trial % len(pool)] if trial % 2 else math.exp(rng.uniform(0.01, math.log(50)))
        est = estimate_unseen_count(p, a)
        r = smoothing_parameter(p.n, a)
        log_a = math.log(a)
        terms = [
            (1.0 if i % 2 else -1.0) * math.exp(i * log_a + log_poisson_tail(r, i)) * hi
            for i, hi in p.h.items()
        ]
        assert abs(est.raw - math.fsum(terms)) <= 1e-12


def test_unseen_count_negative_raw_clamps_to_zero():
    # h = {2: 1}: at a = 1 the alternating sum is -1
    est = estimate_unseen_count(_profile({"a": 2}), 1.0)
    assert est.raw == -1.0
    assert est.clamped == 0.0


def test_unseen_count_empty_profile():
    empty = Profile({}, 0)
    est = estimate_unseen_count(empty, 2.0)
    assert est.raw == 0.0
    assert est.clamped == 0.0
    assert est.r == smoothing_parameter(1, 2.0)
    assert math.isinf(estimate_unseen_count(empty, 1.0).r)


def test_lookup_amplification_branches():
    interiors = {
        0.9: 4e5,
        0.75: 100.0,
        0.6: 8.0,
        0.45: 5.0,
        0.35: 2.0,
        0.2: 1.5,
        0.05: 1.0,
    }
    for m0, expect in interiors.items():
        assert lookup_amplification(m0) == expect
    # boundaries belong to the branch on their left-closed side
    boundaries = {0.8: 4e5, 0.7: 100.0, 0.55: 8.0, 0.4: 5.0, 0.3: 2.0, 0.15: 1.5}
    for m0, expect in boundaries.items():
        assert lookup_amplification(m0) == expect
    assert lookup_amplification(0.0) == 1.0
    assert lookup_amplification(1.0) == 4e5


def test_lookup_amplification_validation():
    with pytest.raises(ValueError):
        lookup_amplification(-0.01)
    with pytest.raises(ValueError):
        lookup_amplification(1.01)
    with pytest.raises(ValueError):
        # misordered rows are detected as soon as the scan walks past them
        lookup_amplification(0.3, table=((0.6, 5.0), (0.7, 2.0)))
    with pytest.raises(ValueError):
        lookup_amplification(0.3, table=((0.5, 2.0),))  # table does not reach 0
    with pytest.raises(ValueError):
        lookup_amplification(0.5, table=())


def test_default_amplification_table_shape():
    bounds = [b for b, _ in DEFAULT_AMPLIFICATION_TABLE]
    assert bounds == sorted(bounds, reverse=True)
    assert len(DEFAULT_AMPLIFICATION_TABLE) >= 6
