import os
import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from spunnorm.examples import load_bundled
from spunnorm.triangulation import PERMS, from_gluings, validate

SEED = int(os.environ.get("SPUNNORM_SEED", "20260814"))

settings.register_profile(
    "spunnorm", derandomize=True, deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("spunnorm")


def random_gluings(rng, t):
    """Random closed face pairing on t tets (may be invalid)."""
    faces = [(i, f) for i in range(t) for f in range(4)]
    rng.shuffle(faces)
    rows = [[None] * 4 for _ in range(t)]
    for (a, f), (b, g) in zip(faces[::2], faces[1::2]):
        p = rng.choice([p for p in PERMS if p[f] == g])
        inv = [0] * 4
        for x, y in enumerate(p):
            inv[y] = x
        rows[a][f] = (b, p)
        rows[b][g] = (a, tuple(inv))
    return rows


def random_triangulation(rng, t, tries=200):
    """Random valid closed triangulation with t tets (invalid draws discarded)."""
    for _ in range(tries):
        tri = from_gluings(random_gluings(rng, t), f"random-{t}")
        if validate(tri).valid:
            return tri
    raise RuntimeError("no valid triangulation drawn")


def random_corpus(n, max_t=4, seed=SEED):
    rng = random.Random(seed)
    return [random_triangulation(rng, rng.randint(1, max_t)) for _ in range(n)]


seeds = st.integers(0, 2**32 - 1).map(lambda s: s ^ SEED)


@st.composite
def triangulations(draw, max_t=4, min_t=1):
    t = draw(st.integers(min_t, max_t))
    return random_triangulation(random.Random(draw(seeds)), t)


@pytest.fixture(scope="session")
def fig8():
    return load_bundled("fig8")


@pytest.fixture(scope="session")
def gieseking():
    return load_bundled("gieseking")


# three tets, one torus vertex; a maximal component whose span meets ker d
# in a plane that touches the component only at one vertex
KERNEL_GAP = [
    [(2, (1, 2, 3, 0)), (2, (2, 0, 3, 1)), (0, (1, 2, 3, 0)), (0, (3, 0, 1, 2))],
    [(2, (3, 0, 1, 2)), (1, (0, 3, 2, 1)), (2, (3, 1, 2, 0)), (1, (0, 3, 2, 1))],
    [(0, (1, 3, 0, 2)), (0, (3, 0, 1, 2)), (1, (3, 1, 2, 0)), (1, (1, 2, 3, 0))],
]


@pytest.fixture(scope="session")
def kernel_gap():
    return from_gluings(KERNEL_GAP, "kernel-gap")
