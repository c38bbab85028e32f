import math

import pytest

from oracles import FROZEN, generate


def test_frozen_values_match_high_precision_generator():
    fresh = generate()
    assert fresh.keys() == FROZEN.keys()
    for key, value in FROZEN.items():
        assert fresh[key] == pytest.approx(value, rel=1e-15, abs=0), key


def test_canonical_a_value_digits():
    # the two exponentials at kappa = 1, m = 1
    phi = (1 + math.sqrt(5)) / 2
    assert math.exp(-phi) == pytest.approx(0.19828815, abs=1e-8)
    assert math.exp(1 / phi) == pytest.approx(1.85527696, abs=1e-8)
