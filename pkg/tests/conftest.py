import random
from fractions import Fraction

import pytest

from multitile.lattice import Coset, Lattice, QuasiPeriodicSet
from multitile.polytope import HalfOpenPolytope, contains_half_open, from_vertices
from multitile.scalar import scalar_sqrt, to_scalar


@pytest.fixture
def z2():
    return Lattice.standard(2)


@pytest.fixture
def unit_square():
    return from_vertices([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def rect51():
    """The wide half-height rectangle: [0,1] x [0,1/2]."""
    h = Fraction(1, 2)
    return from_vertices([(0, 0), (1, 0), (1, h), (0, h)])


@pytest.fixture
def q51(z2):
    """Z^2 union (sqrt2/2, 1/2) + Z^2."""
    r2 = scalar_sqrt(2)
    return QuasiPeriodicSet((
        Coset(z2, (0, 0)),
        Coset(z2, (r2 / 2, Fraction(1, 2))),
    ))


def random_fraction(rng: random.Random, lo=-4, hi=4, max_den=8) -> Fraction:
    den = rng.randint(1, max_den)
    num = rng.randint(lo * den, hi * den)
    return Fraction(num, den)


def naive_points_in(polytope, coset, probe=None, margin=2):
    """Independent enumeration oracle: scan an enlarged integer box and test
    membership point by point."""
    lat, t = coset.lattice, coset.translation
    lo, hi = polytope.bounding_box()
    corners = []
    d = polytope.dim
    for bits in range(1 << d):
        corners.append(tuple(hi[i] if bits >> i & 1 else lo[i] for i in range(d)))
    coords = [lat.coords(tuple(c[i] - t[i] for i in range(d))) for c in corners]
    ranges = []
    for i in range(d):
        vals = [c[i] for c in coords]
        ranges.append(range(min(v.floor() for v in vals) - margin,
                            max(-((-v).floor()) for v in vals) + margin + 1))
    hop = HalfOpenPolytope(polytope, probe) if probe is not None else None
    out = []
    import itertools
    for n in itertools.product(*ranges):
        x = tuple(ti + bi for ti, bi in zip(t, lat.point(n)))
        if probe is None:
            inside = polytope.contains_closed(x)
        else:
            inside = contains_half_open(hop, x)
        if inside:
            out.append(x)
    return out
