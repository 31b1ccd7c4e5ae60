from fractions import Fraction

import hypothesis.strategies as st

from sheffer import ShefferPair, TruncatedSeries

# small-height rationals keep coefficient blowup manageable while still
# exercising generic positions
rationals = st.fractions(min_value=-10, max_value=10, max_denominator=10)
nonzero_rationals = rationals.filter(bool)


def series(order: int = 10, first_coeffs=None):
    """Strategy for a TruncatedSeries with optional pinned leading coefficients."""
    pinned = list(first_coeffs or [])
    tail = st.lists(
        rationals, min_size=order + 1 - len(pinned), max_size=order + 1 - len(pinned)
    )
    return tail.map(lambda cs: TruncatedSeries.from_coeffs(pinned + cs, order))


def invertible_series(order: int = 10):
    """Series with nonzero constant term (valid reciprocal argument)."""
    return st.tuples(nonzero_rationals, st.lists(rationals, min_size=order, max_size=order)).map(
        lambda t: TruncatedSeries.from_coeffs([t[0]] + t[1], order)
    )


def composable_series(order: int = 10):
    """Series with zero constant term (valid composition inner argument)."""
    return series(order, first_coeffs=[Fraction(0)])


def unit_lead_series(order: int = 10):
    """Series with constant term zero and x-coefficient nonzero."""
    return st.tuples(nonzero_rationals, st.lists(rationals, min_size=order - 1, max_size=order - 1)).map(
        lambda t: TruncatedSeries.from_coeffs([0, t[0]] + t[1], order)
    )


def sheffer_pairs(order: int = 10):
    return st.tuples(
        unit_lead_series(order),
        st.tuples(nonzero_rationals, st.lists(rationals, min_size=order, max_size=order)).map(
            lambda t: TruncatedSeries.from_coeffs([t[0]] + t[1], order)
        ),
    ).map(lambda t: ShefferPair(t[0], t[1]))
