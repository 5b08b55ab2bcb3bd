import numpy as np
import pytest

from nashdescent.generator import (
    dfm_family,
    dfm_tight,
    generate_tight,
    half_sp,
    sample_inputs,
    solve_b,
    tight_3x3,
)


@pytest.fixture(scope="session")
def cons():
    return solve_b()


@pytest.fixture(scope="session")
def eq1():
    return tight_3x3()


@pytest.fixture(scope="session")
def remark():
    return half_sp()


@pytest.fixture(scope="session")
def eq3():
    return dfm_tight()


@pytest.fixture(scope="session")
def eq4_family():
    return dfm_family


@pytest.fixture(scope="session")
def generated_3x3():
    """A reusable batch of generated worst-case 3x3 instances."""
    rng = np.random.default_rng(20240817)
    out = []
    while len(out) < 8:
        inp = sample_inputs(3, 3, "disjoint", rng)
        out.extend(generate_tight(inp, count=2, rng=rng))
    return out[:8]


@pytest.fixture(scope="session")
def generated_4x4():
    rng = np.random.default_rng(1234)
    out = []
    while len(out) < 5:
        inp = sample_inputs(4, 4, "disjoint", rng)
        out.extend(generate_tight(inp, count=1, rng=rng))
    return out[:5]
