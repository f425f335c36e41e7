"""Shared hypothesis strategies."""

import gmpy2
from hypothesis import strategies as st

from hvw22 import I, L, W, make_charges

rationals = st.builds(
    lambda a, b: gmpy2.mpq(a, b),
    st.integers(-12, 12),
    st.integers(1, 9),
)
nonzero_rationals = rationals.filter(lambda q: q != 0)
charge_sets = st.builds(make_charges, rationals, nonzero_rationals)
indices = st.integers(-4, 4)
hv_modes = st.builds(lambda f, n: f(n), st.sampled_from([L, I]), indices)
w22_modes = st.builds(lambda f, n: f(n), st.sampled_from([L, W]), indices)


def words(modes, max_size=5):
    return st.lists(modes, max_size=max_size)
