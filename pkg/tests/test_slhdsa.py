import hashlib
import random

import pytest

from pqcli import slhdsa

# (n, h, d, a, k, sig_size) per FIPS 205 Table 2, SHAKE column
_EXPECTED_SHAPES = {
    "128s": (16, 63, 7, 12, 14, 7856),
    "128f": (16, 66, 22, 6, 33, 17088),
    "192s": (24, 63, 7, 14, 17, 16224),
    "192f": (24, 66, 22, 8, 33, 35664),
    "256s": (32, 64, 8, 14, 22, 29792),
    "256f": (32, 68, 17, 9, 35, 49856),
}

# sha256 of the deterministic signature over b"parameter set shakedown" with
# the key grown from shake_256(name); regression pin for all six sets
_REGRESSION_SIG_DIGESTS = {
    "128s": "1aeca902bdf259cdb3fbf13cb14a189e00c367d2b1757abc1714abd06ce08f1a",
    "128f": "6ddabfcc364651da3cf561d9ac618d239abc6ddf5cce16b7d2b5e5493234594b",
    "192s": "1bb43d2231bfcf2bbbf8f9e20bdf7e993e8e85996f80d268304f35f0e656c97e",
    "192f": "88b4e94321f51212c3d5db609c3ba58265a9405d53549c124f7ed6c6010b2cd3",
    "256s": "c75a04bca79579aa462f93a599b285fb052c82f6ebd681a0bdc2ca633355fbfc",
    "256f": "e8abb650053174d6516062fc09457ab4beeb0e0a9fc20a286a8eb11170dc9630",
}


def test_parameter_table_matches_standard_shapes():
    assert set(slhdsa.PARAMETER_SETS) == set(_EXPECTED_SHAPES)
    for name, (n, h, d, a, k, sig_size) in _EXPECTED_SHAPES.items():
        ps = slhdsa.PARAMETER_SETS[name]
        assert (ps.n, ps.h, ps.d, ps.a, ps.k) == (n, h, d, a, k)
        assert ps.sig_size == sig_size
        assert ps.pk_size == 2 * n
        assert ps.sk_size == 4 * n
        assert ps.seed_size == 3 * n
        assert ps.hp * ps.d == ps.h
        assert ps.len1 == 2 * n and ps.len2 == 3


def test_keygen_kat_128s():
    """Key agreed byte-for-byte with an independent implementation."""
    ps = slhdsa.PARAMETER_SETS["128s"]
    seed = bytes(range(48))
    sk, pk = slhdsa.keygen(ps, seed)
    assert sk[:48] == seed          # SK.seed || SK.prf || PK.seed
    assert pk == sk[32:]            # PK.seed || PK.root
    assert pk.hex() == ("202122232425262728292a2b2c2d2e2f"
                        "89fd81fdbb5b94129b14761bdc6bf682")


def test_deterministic_sign_kat_128s():
    """Signature agreed byte-for-byte with an independent implementation."""
    ps = slhdsa.PARAMETER_SETS["128s"]
    sk, pk = slhdsa.keygen(ps, bytes(range(48)))
    message = b"cross-implementation agreement check"
    sig = slhdsa.sign(ps, message, sk, deterministic=True)
    assert hashlib.sha256(sig).hexdigest() == (
        "60d4c48fded96b072298afdc557dc60cceb82ded6a74ef74dadc6e1b2dcd7f0a")
    assert slhdsa.verify(ps, message, sig, pk)


def test_regression_digests_all_parameter_sets():
    message = b"parameter set shakedown"
    for name, ps in slhdsa.PARAMETER_SETS.items():
        seed = hashlib.shake_256(name.encode()).digest(ps.seed_size)
        sk, pk = slhdsa.keygen(ps, seed)
        sig = slhdsa.sign(ps, message, sk, deterministic=True)
        assert len(sig) == ps.sig_size
        assert hashlib.sha256(sig).hexdigest() == _REGRESSION_SIG_DIGESTS[name], name
        assert slhdsa.verify(ps, message, sig, pk), name


def test_hedged_signatures_differ_but_both_verify():
    ps = slhdsa.PARAMETER_SETS["128f"]
    sk, pk = slhdsa.keygen(ps, bytes(48))
    message = b"hedged randomness"
    one = slhdsa.sign(ps, message, sk)
    two = slhdsa.sign(ps, message, sk)
    assert one != two
    assert slhdsa.verify(ps, message, one, pk)
    assert slhdsa.verify(ps, message, two, pk)
    # explicit addrnd pins the hedge
    rnd = bytes(ps.n)
    assert slhdsa.sign(ps, message, sk, addrnd=rnd) == slhdsa.sign(ps, message, sk, addrnd=rnd)


def test_tampering_rejected():
    ps = slhdsa.PARAMETER_SETS["128f"]
    rng = random.Random(5)
    sk, pk = slhdsa.keygen(ps, rng.randbytes(ps.seed_size))
    message = b"bytes under test"
    sig = slhdsa.sign(ps, message, sk, deterministic=True)
    assert slhdsa.verify(ps, message, sig, pk)
    for _ in range(4):
        flipped = bytearray(sig)
        flipped[rng.randrange(len(sig))] ^= 1 << rng.randrange(8)
        assert not slhdsa.verify(ps, message, bytes(flipped), pk)
    assert not slhdsa.verify(ps, message + b"!", sig, pk)
    wrong_pk = bytearray(pk)
    wrong_pk[-1] ^= 1
    assert not slhdsa.verify(ps, message, sig, bytes(wrong_pk))


def test_context_string_separates_domains():
    ps = slhdsa.PARAMETER_SETS["128f"]
    sk, pk = slhdsa.keygen(ps, bytes(48))
    message = b"ctx"
    sig = slhdsa.sign(ps, message, sk, ctx=b"alpha", deterministic=True)
    assert slhdsa.verify(ps, message, sig, pk, ctx=b"alpha")
    assert not slhdsa.verify(ps, message, sig, pk, ctx=b"beta")
    assert not slhdsa.verify(ps, message, sig, pk)
    with pytest.raises(ValueError):
        slhdsa.sign(ps, message, sk, ctx=bytes(256))


def test_malformed_inputs():
    ps = slhdsa.PARAMETER_SETS["128f"]
    sk, pk = slhdsa.keygen(ps, bytes(48))
    sig = slhdsa.sign(ps, b"m", sk, deterministic=True)
    assert not slhdsa.verify(ps, b"m", sig[:-1], pk)
    assert not slhdsa.verify(ps, b"m", b"", pk)
    assert not slhdsa.verify(ps, b"m", sig, pk[:-1])
    with pytest.raises(ValueError):
        slhdsa.keygen(ps, bytes(47))
    with pytest.raises(ValueError):
        slhdsa.sign(ps, b"m", sk[:-1])


def test_empty_message_signs_and_verifies():
    ps = slhdsa.PARAMETER_SETS["128f"]
    sk, pk = slhdsa.keygen(ps, bytes(48))
    sig = slhdsa.sign(ps, b"", sk, deterministic=True)
    assert slhdsa.verify(ps, b"", sig, pk)
