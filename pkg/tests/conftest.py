import itertools

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cosetsum.dyadic import Dyadic
from cosetsum.mask import Mask

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def dyadics(max_num=64, max_exp=8):
    return st.builds(
        Dyadic, st.integers(-max_num, max_num), st.integers(0, max_exp)
    )


@st.composite
def small_masks(draw, dim=None, max_terms=6, radius=3):
    """Random exact masks with a handful of dyadic taps near the origin."""
    n = dim if dim is not None else draw(st.integers(1, 3))
    coord = st.integers(-radius, radius)
    keys = draw(st.lists(st.tuples(*[coord] * n), max_size=max_terms, unique=True))
    vals = draw(st.lists(dyadics(), min_size=len(keys), max_size=len(keys)))
    return Mask(n, dict(zip(keys, vals)))


def naive_product(a: Mask, b: Mask) -> Mask:
    """Direct double loop over filter entries, scaled by 2**-n."""
    out = {}
    for (k1, v1), (k2, v2) in itertools.product(a.filter.items(), b.filter.items()):
        k = tuple(x + y for x, y in zip(k1, k2))
        out[k] = out.get(k, 0) + v1 * v2
    scale = Dyadic(1, a.dim)
    return Mask(a.dim, {k: v * scale for k, v in out.items()})


@pytest.fixture(scope="session")
def s4_u4():
    from cosetsum.catalog import dd_dual, deslauriers_dubuc

    return dd_dual(2), deslauriers_dubuc(2)
