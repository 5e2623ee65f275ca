"""Exact scalar layer: rational parsing, Gaussian rationals, polar pairs."""

import cmath
from fractions import Fraction

import pytest

from hkquot import PhasedComplex, QC, parse_rational
from hkquot.scalars import format_qc, format_rational, parse_qc


def test_parse_rational_accepts_wire_forms():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-7/3") == Fraction(-7, 3)
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational(5) == Fraction(5)
    assert parse_rational(Fraction(2, 6)) == Fraction(1, 3)
    # floats convert through their exact binary value
    assert parse_rational(0.5) == Fraction(1, 2)


@pytest.mark.parametrize("bad", ["1/0", "x", None, True, [1]])
def test_parse_rational_rejects_garbage(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_rational_round_trip():
    for q in [Fraction(0), Fraction(-5), Fraction(22, 7), Fraction(-1, 2)]:
        assert parse_rational(format_rational(q)) == q


def test_qc_ring_operations():
    a = QC.of("1/2", "1/3")
    b = QC.of(-2, "1/5")
    assert (a + b) - b == a
    assert a * b == b * a
    assert (a * b).conj() == a.conj() * b.conj()
    assert a.times_i() == a * QC.of(0, 1)
    assert a.abs2() == Fraction(1, 4) + Fraction(1, 9)


def test_qc_inverse_and_powers():
    a = QC.of("3/7", -2)
    assert a * a.inverse() == QC.of(1)
    assert a**3 == a * a * a
    assert a**-2 == (a * a).inverse()
    assert a**0 == QC.of(1)
    with pytest.raises(ZeroDivisionError):
        QC.of(0).inverse()


def test_qc_to_complex_and_json():
    a = QC.of("1/4", "-3/2")
    assert a.to_complex() == 0.25 - 1.5j
    assert parse_qc(format_qc(a)) == a
    assert parse_qc("7") == QC.of(7)


def test_phased_complex_is_canonical():
    # phase is reduced mod 1, zero modulus forces phase 0
    assert PhasedComplex.of(2, "9/7") == PhasedComplex.of(2, "2/7")
    assert PhasedComplex.of(0, "1/3") == PhasedComplex.of(0, 0)
    with pytest.raises(ValueError):
        PhasedComplex.of(-1, 0)


def test_phased_complex_roots_of_unity():
    w = PhasedComplex.root_of_unity(1, 5)
    assert w**5 == PhasedComplex.of(1)
    assert w**4 == w.inverse()
    assert w * w.conj() == PhasedComplex.of(1)
    got = (w**2).to_complex()
    want = cmath.exp(2j * cmath.pi * 2 / 5)
    assert abs(got - want) < 1e-14


def test_phased_complex_multiplication_tracks_polar_data():
    a = PhasedComplex.of("3/2", "1/7")
    b = PhasedComplex.of("5/4", "2/5")
    ab = a * b
    assert ab.modulus == Fraction(15, 8)
    assert ab.phase == (Fraction(1, 7) + Fraction(2, 5)) % 1
    assert abs(ab.to_complex() - a.to_complex() * b.to_complex()) < 1e-14


def test_phased_complex_zero_handling():
    z = PhasedComplex.of(0)
    assert z.is_zero()
    assert z**3 == z
    with pytest.raises(ZeroDivisionError):
        z.inverse()
    with pytest.raises(ZeroDivisionError):
        z**0
