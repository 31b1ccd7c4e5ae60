import cmath
from math import factorial

import pytest

from sheffer import (
    FAMILY_LABELS,
    GuardExceeded,
    Polynomial,
    TruncatedSeries,
    UnknownFamily,
    arctan_series,
    egf_eval,
    exp_series,
    family,
    log_series,
    oracle_polys,
    sequence_via_egf,
    sqrt_series,
)


def test_unknown_family():
    with pytest.raises(UnknownFamily):
        family("legendre")
    with pytest.raises(UnknownFamily):
        oracle_polys("legendre", 3)


def test_validity_constraints_hold_for_every_entry():
    for label in FAMILY_LABELS:
        pair = family(label, 10).pair
        assert pair.f.constant_term == 0
        assert pair.f.coefficient(1) != 0
        assert pair.g.constant_term == 1


def test_bessel_g_is_one():
    g = family("bessel", 8).pair.g
    assert g == TruncatedSeries.one(8)


# -- the derived g's reproduce the printed generating functions exactly ------


def _prefactor(label, order):
    pair = family(label, order).pair
    return pair.g.compose(pair.f.comp_inverse()).reciprocal()


def test_prefactor_series_match_closed_forms():
    order = 10
    one = TruncatedSeries.one(order)
    t = TruncatedSeries.x(order)
    assert _prefactor("hermite", order) == exp_series(
        TruncatedSeries.from_coeffs([0, 0, -1], order)
    )
    assert _prefactor("laguerre", order) == (one - t).reciprocal()
    assert _prefactor("hahn", order) == sqrt_series(
        TruncatedSeries.from_coeffs([1, 0, 1], order)
    ).reciprocal()
    for label in ("bessel", "bell", "lower_factorial", "idempotent"):
        assert _prefactor(label, order) == one


def test_inverse_series_match_closed_forms():
    order = 10
    t = TruncatedSeries.x(order)
    one = TruncatedSeries.one(order)
    finv = {label: family(label, order).pair.f.comp_inverse() for label in FAMILY_LABELS}
    assert finv["hermite"] == t.scale(2)
    assert finv["laguerre"] == family("laguerre", order).pair.f  # involution
    assert finv["bessel"] == one - sqrt_series(one - t.scale(2))
    assert finv["bell"] == exp_series(t) - 1
    assert finv["lower_factorial"] == log_series(one + t)
    assert finv["hahn"] == arctan_series(t)
    assert finv["idempotent"] == t * exp_series(t)


# -- oracles -------------------------------------------------------------------


def test_oracle_seed_values():
    assert oracle_polys("hermite", 1)[1] == Polynomial.from_coeffs([0, 2])
    assert oracle_polys("lower_factorial", 3)[3] == Polynomial.from_coeffs([0, 2, -3, 1])
    bell = oracle_polys("bell", 2)
    assert bell[0] == Polynomial.one()
    assert bell[1] == Polynomial.x()
    assert bell[2] == Polynomial.from_coeffs([0, 1, 1])


def test_generated_sequences_match_oracles():
    for label in FAMILY_LABELS:
        seq = sequence_via_egf(family(label, 14).pair, 12)
        oracle = oracle_polys(label, 12)
        for n in range(13):
            assert seq.poly(n) == oracle[n], (label, n)


def test_hermite_s3_and_idempotent_s2():
    assert sequence_via_egf(family("hermite", 8).pair, 3).poly(3) == Polynomial.from_coeffs(
        [0, -12, 0, 8]
    )
    assert sequence_via_egf(family("idempotent", 8).pair, 2).poly(2) == Polynomial.from_coeffs(
        [0, 2, 1]
    )


# -- closed generating-function evaluation -------------------------------------


def test_egf_eval_at_zero_is_one():
    for label in FAMILY_LABELS:
        assert egf_eval(label, 0, 0.7 + 0.2j) == 1


def test_egf_eval_bell_closed_form():
    value = egf_eval("bell", 0.1, 0.3)
    assert abs(value - cmath.exp(0.3 * (cmath.exp(0.1) - 1))) < 1e-15


def test_egf_eval_guards_branch_points():
    with pytest.raises(GuardExceeded):
        egf_eval("bessel", 0.6, 1.0)


@pytest.mark.parametrize("label", FAMILY_LABELS)
def test_truncated_sum_matches_closed_egf(label):
    # sum_{n<=24} s_n(x) t^n / n! against the closed form, inside guards
    depth = 24
    seq = sequence_via_egf(family(label, depth + 1).pair, depth)
    for lam in (0.2, -0.15 + 0.1j, 0.1j):
        for x in (1.0, -0.4 + 0.8j):
            total = 0j
            for n in range(depth + 1):
                total += complex(seq.poly(n)(x)) * lam**n / factorial(n)
            closed = egf_eval(label, lam, x)
            assert abs(total - closed) <= 1e-9 * abs(closed), (label, lam, x)


def test_closed_maps_are_consistent():
    for label in FAMILY_LABELS:
        entry = family(label, 20)
        for w in (0.05, 0.04 - 0.03j):
            assert abs(entry.maps.finv(entry.maps.f(w)) - w) < 1e-12, label
            series_val = entry.pair.f.eval_complex(w, 0.5).value
            assert abs(entry.maps.f(w) - series_val) < 1e-12, label


def test_adjudication_notes_are_recorded():
    assert any("n!*L_n" in note for note in family("laguerre").notes)
    assert any("arctan(lambda + tan z')" in note for note in family("hahn").notes)
