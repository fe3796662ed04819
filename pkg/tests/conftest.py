import random
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from convspec.characters import RealCharacter
from convspec.groups import (
    ConjugationBy, Cyclic, DirectProduct, FreeGroup, GeneratorImages, IntLattice, Semidirect,
    Symmetric, WreathLite,
)
from convspec.measures import ComplexRational, Measure

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def s3_semidirect_z():
    return Semidirect(Symmetric(3), IntLattice(1), ConjugationBy("a"))


def f2_swap_z():
    return Semidirect(FreeGroup(2), IntLattice(1), GeneratorImages((("b", "a"),)))


# one group per constructor, plus mixed products
ZOO = {
    "Z": IntLattice(1),
    "Z2": IntLattice(2),
    "C5": Cyclic(5),
    "S3": Symmetric(3),
    "S4": Symmetric(4),
    "F2": FreeGroup(2),
    "C2xZ": DirectProduct(Cyclic(2), IntLattice(1)),
    "S3xZ": DirectProduct(Symmetric(3), IntLattice(1)),
    "S3:Z": s3_semidirect_z(),
    "C7:C3": Semidirect(Cyclic(7), Cyclic(3), GeneratorImages((("2",),))),
    "F2:Z": f2_swap_z(),
    "C2wrZ": WreathLite(Cyclic(2), 3, IntLattice(1), [[2, 3, 1]]),
    "Z2:Z": Semidirect(IntLattice(2), IntLattice(1), GeneratorImages((("(1,1)", "(0,1)"),))),
}


def random_element(group, rng: random.Random, length: int = 4):
    x = group.identity_raw()
    gens = list(group.generators_raw())
    for _ in range(rng.randint(0, length)):
        g = rng.choice(gens)
        x = group.mul(x, g if rng.random() < 0.5 else group.inv(g))
    return x


def random_coeff(rng: random.Random, complex_ok: bool = True):
    re = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    im = Fraction(rng.randint(-3, 3), rng.randint(1, 2)) if complex_ok and rng.random() < 0.3 else 0
    return ComplexRational(re, im)


def random_measure(group, rng: random.Random, size: int = 3, complex_ok: bool = True, length: int = 3):
    coeffs = {}
    for _ in range(rng.randint(1, size)):
        x = random_element(group, rng, length)
        coeffs[x] = coeffs.get(x, ComplexRational(0)) + random_coeff(rng, complex_ok)
    return Measure(group, coeffs)


def random_selfadjoint(group, rng: random.Random, size: int = 3):
    mu = random_measure(group, rng, size)
    return mu + mu.star()


def random_character(group, rng: random.Random):
    return RealCharacter(group, tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(group.char_dim)))


zoo_names = st.sampled_from(sorted(ZOO))


@pytest.fixture(params=sorted(ZOO))
def zoo_group(request):
    return ZOO[request.param]


def pytest_terminal_summary(terminalreporter):
    # acceptance lines are printed inside captured tests; repeat them here
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(mod.RESULTS):
            terminalreporter.write_line(mod.RESULTS[n])
