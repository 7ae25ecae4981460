import math

import numpy as np
import pytest

from coherence_forge.clockdist import (
    barbour_bound,
    barbour_terms,
    convolve_n,
    extract_distribution,
    integer_distribution,
    overlap_copy_count,
    period,
    poisson_distance_bound,
    shift,
    tp_distance,
    translated_poisson,
    tv_distance,
)
from coherence_forge.errors import (
    GcdNotOneError,
    IncommensurateSpectrumError,
    ValidationError,
    ZeroNuError,
    ZeroVarianceError,
)

TAU = 2 * math.pi
PLUS = np.array([1.0, 1.0]) / math.sqrt(2)


def test_extract_cbit():
    H = np.diag([0.0, 1.0])
    clock = extract_distribution(PLUS, H, TAU)
    assert clock.levels == (0, 1)
    assert np.allclose(clock.distribution.probs, [0.5, 0.5])
    assert abs(clock.period - TAU) < 1e-12


def test_extract_gap_two_halves_period():
    psi = np.array([1.0, 0.0, 1.0]) / math.sqrt(2)
    H = np.diag([0.0, 1.0, 2.0])
    clock = extract_distribution(psi, H, TAU)
    assert clock.levels == (0, 2)
    assert abs(clock.period - TAU / 2) < 1e-12
    assert abs(period(psi, H, TAU) - TAU / 2) < 1e-12


def test_extract_uniform_023():
    psi = np.array([1.0, 0.0, 1.0, 1.0]) / math.sqrt(3)
    H = np.diag([0.0, 1.0, 2.0, 3.0])
    clock = extract_distribution(psi, H, TAU)
    assert clock.levels == (0, 2, 3)
    assert abs(clock.period - TAU) < 1e-12
    assert abs(clock.distribution.variance() - 14.0 / 9.0) < 1e-12


def test_extract_eigenstate_has_no_period():
    H = np.diag([0.0, 1.0])
    clock = extract_distribution(np.array([1.0, 0.0]), H, TAU)
    assert clock.period == 0.0
    assert clock.levels == (0,)


def test_extract_offset_spectrum_still_integer():
    # a constant shift of H must not break the integer grid
    H = np.diag([0.7, 1.7])
    clock = extract_distribution(PLUS, H, TAU)
    assert clock.levels == (0, 1)


def test_extract_incommensurate_raises():
    H = np.diag([0.0, math.sqrt(2.0)])
    with pytest.raises(IncommensurateSpectrumError):
        extract_distribution(PLUS, H, TAU)


def test_integer_distribution_validation():
    with pytest.raises(ValidationError):
        integer_distribution(0, [0.5, 0.4])
    with pytest.raises(ValidationError):
        integer_distribution(0, [1.2, -0.2])


def test_convolution_moments():
    p = integer_distribution(1, [0.2, 0.5, 0.3])
    for m in (1, 2, 7, 16):
        c = convolve_n(p, m)
        assert abs(c.mean() - m * p.mean()) < 1e-9
        assert abs(c.variance() - m * p.variance()) < 1e-8
        assert abs(sum(c.probs) - 1.0) < 1e-12
    # squared-doubling agrees with naive repeated convolution
    naive = np.array([1.0])
    for _ in range(5):
        naive = np.convolve(naive, p.probs)
    c5 = convolve_n(p, 5)
    assert np.max(np.abs(c5.probs - naive)) < 1e-12
    assert c5.offset == 5


def test_tv_distance_alignment():
    p = integer_distribution(0, [0.5, 0.5])
    q = integer_distribution(1, [0.5, 0.5])
    assert abs(tv_distance(p, q) - 0.5) < 1e-12
    assert abs(tv_distance(p, integer_distribution(2, [0.5, 0.5])) - 1.0) < 1e-12
    assert tv_distance(p, p) < 1e-15
    assert abs(tv_distance(p, shift(p, 10)) - 1.0) < 1e-15


def test_overlap_copy_count_cases():
    assert overlap_copy_count(integer_distribution(0, [0.5, 0.5])) == 1
    u = integer_distribution(0, [1 / 3, 0, 1 / 3, 1 / 3])
    assert overlap_copy_count(u) == 2
    with pytest.raises(GcdNotOneError):
        overlap_copy_count(integer_distribution(0, [0.5, 0.0, 0.5]))
    p25 = integer_distribution(0, [0.4, 0.0, 0.3, 0.0, 0.0, 0.3])
    assert overlap_copy_count(p25) == 3
    with pytest.raises(GcdNotOneError):
        overlap_copy_count(integer_distribution(3, [1.0]))


def test_translated_poisson_moments():
    for mu, s2 in ((4.0, 1.0), (10.3, 2.7), (0.9, 0.4), (300.0, 250.0)):
        tp = translated_poisson(mu, s2)
        assert abs(tp.dist.mean() - mu) < 1e-9
        assert s2 - 1e-9 <= tp.dist.variance() < s2 + 1.0
        assert abs(sum(tp.dist.probs) - 1.0) < 1e-9
    tp = translated_poisson(4.0, 1.0)
    assert tp.shift == 3 and abs(tp.gamma) < 1e-12


def test_barbour_bound_frozen_value():
    bern = integer_distribution(0, [0.5, 0.5])
    assert abs(barbour_bound(bern, 100) - 0.6085352436149613) < 1e-12


def test_barbour_bound_dominates_tp_distance():
    bern = integer_distribution(0, [0.5, 0.5])
    u = integer_distribution(0, [1 / 3, 0, 1 / 3, 1 / 3])
    for p in (bern, u):
        prev = None
        for m in (16, 64):
            d = tp_distance(p, m)
            assert d <= barbour_bound(p, m)
            if prev is not None:
                assert d < prev
            prev = d


def test_barbour_nu_zero_raises():
    # support {0, 2} is disjoint from its unit shift
    with pytest.raises(ZeroNuError):
        barbour_terms(integer_distribution(0, [0.5, 0.0, 0.5]))
    with pytest.raises(ZeroVarianceError):
        barbour_terms(integer_distribution(5, [1.0]))


def test_poisson_distance_bound():
    assert abs(poisson_distance_bound(4.0, 1.0) - 0.20249058549503643) < 1e-12
    assert poisson_distance_bound(4.0, 0.0) == 0.0
    # small-x regime takes the x branch
    assert abs(poisson_distance_bound(0.0, 0.01) - 0.01) < 1e-12
