from fractions import Fraction

from hypothesis import strategies as st

small_q = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 12))


def coeff_lists(n, lo=None):
    return st.lists(small_q, min_size=n, max_size=n)
