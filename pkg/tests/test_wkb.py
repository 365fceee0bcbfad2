import math

import numpy as np
import pytest

from qeswkb import wkb
from qeswkb.errors import (
    UnsupportedParameterError,
    AboveAsymptoteError,
    AccuracyError,
    DomainError,
    MultiWellError,
    NoClassicalRegionError,
    SpectrumExhaustedError,
)
from qeswkb.potentials import EvenPolynomial, Morse, SexticGeneral, SexticReduced
from qeswkb.wkb import (
    action,
    bohr_sommerfeld_invert,
    gamma,
    morse_action_closed,
    turning_points,
)

SQRT2 = math.sqrt(2.0)
HARMONIC = EvenPolynomial((0.0, 0.5))
MORSE_REF = Morse(1.0, 8.0, SQRT2, 0.0)


def morse_exact_level(n, b=8.0, alpha=SQRT2):
    return 0.5 * alpha * n * (2.0 * b - alpha * n)


def test_harmonic_phase_integral_is_exact():
    # S(E) = pi E for the harmonic well, so gamma vanishes at E_n = n + 1/2
    for n in range(11):
        record = gamma(HARMONIC, n, n + 0.5)
        assert abs(record.gamma) < 1e-9
        assert record.x_right == pytest.approx(math.sqrt(2 * n + 1), rel=1e-12)
        assert record.x_left == pytest.approx(-record.x_right, rel=1e-12)


def test_harmonic_action_linear_in_energy():
    for energy in (0.5, 1.7, 9.25):
        assert action(HARMONIC, energy) == pytest.approx(math.pi * energy, rel=1e-12)
        _, x_hi = turning_points(HARMONIC, energy)
        assert x_hi == pytest.approx(math.sqrt(2 * energy), rel=1e-12)


def test_morse_closed_action_quantization():
    # closed form hits the Bohr-Sommerfeld half-integers exactly
    for n in range(6):
        s = morse_action_closed(1.0, 8.0, SQRT2, morse_exact_level(n))
        assert s / math.pi == pytest.approx(n + 0.5, abs=1e-12)


def test_morse_quadrature_matches_closed_form():
    for energy in (3.0, 14.5, 27.0, 31.0):
        s_quad = action(MORSE_REF, energy, tol=1e-12)
        s_closed = morse_action_closed(1.0, 8.0, SQRT2, energy)
        assert s_quad == pytest.approx(s_closed, rel=1e-11)


def test_morse_quadrature_matches_closed_form_general_index():
    # raising the well index shifts the effective depth: closed form uses
    # b -> N alpha + b
    spec = Morse(1.0, 8.0, SQRT2, 2.0)
    for energy in (5.0, 20.0):
        s_quad = action(spec, energy, tol=1e-12)
        s_closed = morse_action_closed(1.0, 2.0 * SQRT2 + 8.0, SQRT2, energy)
        assert s_quad == pytest.approx(s_closed, rel=1e-11)


def test_morse_gamma_vanishes_on_exact_levels():
    for n in range(1, 6):
        record = gamma(MORSE_REF, n, morse_exact_level(n), tol=1e-13)
        assert abs(record.gamma) < 1e-8


def test_morse_first_level_turning_points():
    record = gamma(MORSE_REF, 1, morse_exact_level(1), tol=1e-13)
    assert record.x_left == pytest.approx(-1.886153511767041, abs=5e-4)
    assert record.x_right == pytest.approx(-0.7795170868746562, abs=5e-4)


def test_action_strictly_increasing_in_energy():
    for spec, grid in (
        (SexticReduced(0.0), np.linspace(0.4, 40.0, 12)),
        (MORSE_REF, np.linspace(1.0, 31.0, 10)),
    ):
        values = [action(spec, float(e)) for e in grid]
        assert np.all(np.diff(values) > 0)


def test_gamma_positive_and_non_increasing_for_sextic():
    spec = SexticReduced(0.0)
    records = [gamma(spec, n, bohr_sommerfeld_invert(spec, n)) for n in range(3)]
    # on exact BS inversion gamma returns the residual gamma0=0 by construction
    for record in records:
        assert abs(record.gamma) < 1e-9


def test_rearrangement_identity():
    # gamma = S/pi - n - 1/2 must be algebraically consistent with the record
    record = gamma(SexticReduced(0.25), 4, 9.0)
    assert record.gamma == pytest.approx(record.action / math.pi - 4 - 0.5, abs=1e-14)
    assert record.n == 4
    assert record.energy == 9.0


def test_turning_point_errors():
    with pytest.raises(NoClassicalRegionError):
        turning_points(SexticReduced(0.0), -2.0)
    with pytest.raises(MultiWellError):
        turning_points(SexticReduced(0.0), -0.1)
    with pytest.raises(NoClassicalRegionError):
        turning_points(HARMONIC, -1.0)
    with pytest.raises(AboveAsymptoteError):
        turning_points(MORSE_REF, 33.0)
    with pytest.raises(NoClassicalRegionError):
        turning_points(MORSE_REF, -40.0)
    # x^2 - 3x^4 + x^6 dips below zero away from the origin, so a small
    # positive energy crosses the potential three times on x > 0
    bumpy = EvenPolynomial((0.0, 1.0, -3.0, 1.0))
    with pytest.raises(MultiWellError):
        turning_points(bumpy, 0.05)


def test_negative_qes_ground_level_is_double_well():
    # the lowest exactly known level of the N=1 well sits below the barrier
    energy = 1.5 - math.sqrt(3.0)
    with pytest.raises(MultiWellError):
        gamma(SexticReduced(1.0), 0, energy)


def test_closed_action_domain_errors():
    with pytest.raises(DomainError):
        morse_action_closed(1.0, 8.0, SQRT2, -1.0)
    with pytest.raises(AboveAsymptoteError):
        morse_action_closed(1.0, 8.0, SQRT2, 32.0)
    with pytest.raises(DomainError):
        morse_action_closed(-1.0, 8.0, SQRT2, 3.0)


def test_accuracy_error_reports_achieved(monkeypatch):
    monkeypatch.setattr(wkb, "_NODE_CAP", 100)
    with pytest.raises(AccuracyError) as excinfo:
        action(SexticReduced(0.0), 5.0, tol=1e-16)
    assert excinfo.value.achieved is not None
    assert excinfo.value.achieved > 0


def test_bohr_sommerfeld_round_trip_sextic():
    spec = SexticReduced(0.0)
    for n in (0, 1, 5, 20):
        energy = bohr_sommerfeld_invert(spec, n)
        record = gamma(spec, n, energy)
        assert abs(record.gamma) < 1e-10
        assert energy > 0


def test_bohr_sommerfeld_with_offset():
    spec = SexticReduced(0.0)
    offset = 0.0123
    energy = bohr_sommerfeld_invert(spec, 4, gamma0=offset)
    record = gamma(spec, 4, energy)
    assert record.gamma == pytest.approx(offset, abs=1e-10)


def test_bohr_sommerfeld_target_validation():
    with pytest.raises(DomainError):
        bohr_sommerfeld_invert(SexticReduced(0.0), 0, gamma0=-0.5)
    with pytest.raises(UnsupportedParameterError):
        bohr_sommerfeld_invert(SexticReduced(0.0), -1)


def test_morse_bohr_sommerfeld_reproduces_exact_levels():
    # the quantization rule is exact for this well: inversion returns the
    # closed-form energies to full precision
    for n in range(1, 6):
        energy = bohr_sommerfeld_invert(MORSE_REF, n)
        exact = morse_exact_level(n)
        assert abs(energy - exact) / exact < 1e-9
    with pytest.raises(SpectrumExhaustedError):
        bohr_sommerfeld_invert(MORSE_REF, 6)


def test_semiclassical_growth_exponent():
    # E_n ~ C n^{3/2} for the sextic tail: the local log-log slope
    # approaches 3/2, and the deviation from the limit coefficient decays
    spec = SexticReduced(0.0)
    coeff = 0.5 * math.pi**0.75 * (math.gamma(5.0 / 3.0) / math.gamma(7.0 / 6.0)) ** 1.5

    def level(n):
        return bohr_sommerfeld_invert(spec, n)

    dev200 = abs(level(200) / (coeff * 200**1.5) - 1.0)
    dev2000 = abs(level(2000) / (coeff * 2000**1.5) - 1.0)
    assert 0.02 < dev200 < 0.05
    assert dev2000 < dev200

    n0 = 10_000
    slope = (math.log(level(n0 + 50)) - math.log(level(n0 - 50))) / (
        math.log(n0 + 50) - math.log(n0 - 50)
    )
    assert abs(slope - 1.5) < 0.01

    n1 = 1_000_000
    ratio = math.log(level(n1)) / math.log(n1)
    assert abs(ratio - 1.5) < 0.01
