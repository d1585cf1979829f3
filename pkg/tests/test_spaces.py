import math

import numpy as np
import pytest

from multspec.errors import SpecError
from multspec.series import MultiPoly, PowerSeries
from multspec.spaces import (
    bergman_sobolev,
    bloch,
    classify_regime,
    equivalent_norm_D,
    equivalent_norm_R,
    growth,
    hardy,
    hardy_sobolev,
    norm,
    norm_report,
    parse_space,
    shift_parameters,
    weighted_sup,
    y_space_N,
)

ONE = PowerSeries([1.0])
Z = PowerSeries.monomial(1)


@pytest.mark.parametrize(
    "space",
    [bloch(0.5), bloch(2.0), growth(1.0), bergman_sobolev(2, 0, 1.5), bergman_sobolev(3, 1, 0.5), hardy_sobolev(0.7), hardy(2), hardy(3)],
    ids=lambda s: s.label,
)
def test_constant_one_has_norm_one(space):
    assert norm(space, ONE) == pytest.approx(1.0, rel=1e-9)


def test_norm_examples():
    assert norm(hardy_sobolev(1.5), Z) == pytest.approx(2.0**1.5)
    assert norm(bergman_sobolev(2, 0, 0), Z) == pytest.approx(math.sqrt(0.5))
    assert norm(bergman_sobolev(4, 0, 0), Z) == pytest.approx((1.0 / 3.0) ** 0.25, rel=1e-10)
    assert norm(hardy(4), PowerSeries([1.0, 1.0])) == pytest.approx(6.0**0.25, rel=1e-10)


def test_sup_type_norms():
    assert norm(bloch(0.5), Z) == pytest.approx(1.0, rel=1e-9)
    # sup (1 - r^2) 2r is attained at r = 1/sqrt(3)
    assert norm(bloch(1.0), PowerSeries.monomial(2)) == pytest.approx(4.0 / (3.0 * math.sqrt(3.0)), rel=1e-7)
    assert norm(growth(1.0), Z) == pytest.approx(2.0 / (3.0 * math.sqrt(3.0)), rel=1e-7)


def test_sup_type_report_brackets_value():
    report = norm_report(growth(1.0), Z)
    assert report.method == "grid"
    assert report.low <= report.value <= report.high


def test_weighted_sup_finds_interior_maximum():
    estimate = weighted_sup(lambda z: np.abs(z) * (1.0 - np.abs(z) ** 2))
    assert estimate.value == pytest.approx(2.0 / (3.0 * math.sqrt(3.0)), rel=1e-7)
    assert abs(estimate.argmax) == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-4)


def test_norm_in_two_variables():
    z1 = MultiPoly.coordinate(1, 2)
    assert norm(bergman_sobolev(2, 0, 0, n=2), z1) == pytest.approx(math.sqrt(1.0 / 3.0))
    assert norm(hardy(2, n=2), z1) == pytest.approx(math.sqrt(0.5))
    with pytest.raises(SpecError):
        norm(bergman_sobolev(2, 0, 0), z1)


def test_equivalent_norm_R_examples():
    assert equivalent_norm_R(bergman_sobolev(2, 0, 1), ONE) == pytest.approx(1.0)
    assert equivalent_norm_R(bergman_sobolev(2, 0, 1), Z) == pytest.approx(math.sqrt(0.5))
    with pytest.raises(SpecError):
        equivalent_norm_R(bloch(0.5), Z)


def test_equivalent_norm_D_examples():
    assert equivalent_norm_D(bergman_sobolev(2, 0, 1), ONE) == pytest.approx(1.0)
    assert equivalent_norm_D(bergman_sobolev(2, 0, 1), PowerSeries.monomial(2)) == pytest.approx(math.sqrt(2.0))
    with pytest.raises(SpecError):
        equivalent_norm_D(bergman_sobolev(2, 0, 1.5), Z)


def test_equivalent_norms_stay_comparable_on_peaks():
    space = bergman_sobolev(2, 1, 2)
    ratios = []
    for k in (4, 16, 64, 256):
        f = PowerSeries([0.5, 0.5]) ** k
        ratios.append(norm(space, f) / equivalent_norm_R(space, f))
    assert max(ratios) / min(ratios) < 4.0


def test_shift_parameters_examples():
    shifted = shift_parameters(bergman_sobolev(2, 2, 1), 0)
    assert (shifted.p, shifted.alpha, shifted.beta) == (2, 0, 0)
    same = shift_parameters(bergman_sobolev(2, 0, 0.75), 0.75)
    assert (same.alpha, same.beta) == (0, 0.75)
    assert shift_parameters(bergman_sobolev(2, 1, 1), 0).variant == "hardy_sobolev"
    with pytest.raises(SpecError):
        shift_parameters(bergman_sobolev(2, 0, 1), 0)


@pytest.mark.parametrize(
    "space, regime",
    [
        (bloch(0.5), "bloch_small"),
        (bloch(1.0), "bloch_log"),
        (bloch(2.0), "bounded"),
        (growth(0.5), "bounded"),
        (hardy(), "bounded"),
        (bergman_sobolev(2, 0, 0.5), "bounded"),
        (bergman_sobolev(3, 0, 0.2), "bounded"),
        (bergman_sobolev(2, 0, 0.75), "uncovered"),
        (bergman_sobolev(2, 0, 2), "algebra"),
        (hardy_sobolev(0.0), "bounded"),
        (hardy_sobolev(0.25), "uncovered"),
        (hardy_sobolev(1.0), "algebra"),
    ],
    ids=lambda v: v.label if hasattr(v, "label") else v,
)
def test_classify_regime(space, regime):
    assert classify_regime(space) == regime


def test_y_space_N():
    assert y_space_N(bergman_sobolev(2, 0, 2)) == 2
    assert y_space_N(hardy_sobolev(1.0)) == 2
    assert y_space_N(bergman_sobolev(2, 0, 0)) == 1
    assert y_space_N(bloch(0.5)) is None
    assert norm_report(bergman_sobolev(2, 0, 2), Z).y_space_N == 2


@pytest.mark.parametrize(
    "data",
    [
        {"variant": "bloch", "alpha": 0},
        {"variant": "growth"},
        {"variant": "bergman_sobolev", "p": 0.5, "alpha": 0},
        {"variant": "bergman_sobolev", "p": 2, "alpha": -1},
        {"variant": "hardy_sobolev", "beta": 1, "p": 3},
        {"variant": "bloch", "alpha": 0.5, "beta": 1},
        {"variant": "bloch", "alpha": 0.5, "colour": "red"},
        {"variant": "besov", "alpha": 0.5},
    ],
)
def test_parse_space_rejects_bad_parameters(data):
    with pytest.raises(SpecError):
        parse_space(data)


def test_parse_space_accepts_json_text():
    space = parse_space('{"variant":"bloch","alpha":0.5}')
    assert space == bloch(0.5)
    assert space.to_json() == {"variant": "bloch", "alpha": 0.5, "n": 1, "schema_version": 1}
    assert parse_space({"variant": "hardy_sobolev", "beta": 2}).label == "H^2_2"


def test_growth_norm_decreases_with_alpha():
    f = PowerSeries([0.5, -1.0, 0.25, 2.0])
    values = [norm(growth(alpha), f) for alpha in (0.25, 0.5, 1.0, 2.0, 4.0)]
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def test_bergman_lp_off_two_uses_ring_transforms(monkeypatch):
    from multspec import spaces
    from multspec.peaks import peak_function, peak_norm, peak_power_integral

    def no_horner(*args, **kwargs):
        raise AssertionError("pointwise evaluation on the quadrature grid")

    monkeypatch.setattr(spaces, "evaluate", no_horner)
    for k in (256, 512):
        value = norm(bergman_sobolev(3, 0, 0), peak_function(1.0, k))
        assert value == pytest.approx(peak_power_integral(3.0 * k, 0.0) ** (1.0 / 3.0), rel=1e-6)
    hardy_value = norm(hardy(3), peak_function(1.0, 512))
    assert hardy_value == pytest.approx(peak_norm(hardy(3), 512), rel=1e-9)
