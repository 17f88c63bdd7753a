import random

import pytest

from pqcli import algs


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


# Session-scoped keys: generation dominates suite runtime, reuse is safe
# because records are immutable.

@pytest.fixture(scope="session")
def ec_key():
    return algs.generate_keypair(algs.parse_alg_spec("ecdsa"), random.Random(101))


@pytest.fixture(scope="session")
def ec384_key():
    return algs.generate_keypair(algs.parse_alg_spec("ecdsa:P-384"), random.Random(104))


@pytest.fixture(scope="session")
def ml2_key():
    return algs.generate_keypair(algs.parse_alg_spec("ml-dsa:2"), random.Random(102))


@pytest.fixture(scope="session")
def ml3_key():
    return algs.generate_keypair(algs.parse_alg_spec("ml-dsa:3"), random.Random(105))


@pytest.fixture(scope="session")
def rsa_key():
    return algs.generate_keypair(algs.parse_alg_spec("rsa:2048"))


@pytest.fixture(scope="session")
def slh_key():
    return algs.generate_keypair(algs.parse_alg_spec("slh-dsa:128f"), random.Random(103))
