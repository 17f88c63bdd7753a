"""SLH-DSA (FIPS 205), SHAKE family, all six parameter sets.

Pure-Python implementation of the stateless hash-based signature scheme:
WOTS+ one-time signatures, XMSS Merkle trees, a hypertree of XMSS trees,
and FORS few-time signatures, all driven by SHAKE-256.

Keys and signatures are raw byte strings in the standard layouts:
secret key SK.seed || SK.prf || PK.seed || PK.root (4n bytes), public key
PK.seed || PK.root (2n bytes). Key generation is deterministic from a
3n-byte seed, which is also what gets serialized as the private key.

Not constant-time; fine for certificate tooling, not for production
signing on shared hardware.
"""

from __future__ import annotations

import hashlib
import os
import struct
from dataclasses import dataclass

# All SHAKE parameter sets use w=16, so base-w digits are nibbles and the
# WOTS+ checksum always occupies len2=3 digits packed into 2 bytes.
_LG_W = 4
_W = 16


@dataclass(frozen=True)
class ParameterSet:
    name: str
    n: int          # hash output bytes
    h: int          # total hypertree height
    d: int          # hypertree layers
    hp: int         # per-layer XMSS tree height (h / d)
    a: int          # FORS tree height
    k: int          # FORS tree count
    len1: int       # WOTS+ message digits
    len2: int       # WOTS+ checksum digits
    wots_len: int   # len1 + len2
    md_bytes: int   # digest bytes feeding FORS index extraction
    tree_bytes: int
    leaf_bytes: int
    m: int          # H_msg output length
    sig_size: int
    pk_size: int
    sk_size: int
    seed_size: int


def _make(name: str, n: int, h: int, d: int, a: int, k: int) -> ParameterSet:
    hp = h // d
    len1 = (8 * n + _LG_W - 1) // _LG_W
    len2 = 3
    wots_len = len1 + len2
    md_bytes = (k * a + 7) // 8
    tree_bytes = (h - hp + 7) // 8
    leaf_bytes = (hp + 7) // 8
    return ParameterSet(
        name=name, n=n, h=h, d=d, hp=hp, a=a, k=k,
        len1=len1, len2=len2, wots_len=wots_len,
        md_bytes=md_bytes, tree_bytes=tree_bytes, leaf_bytes=leaf_bytes,
        m=md_bytes + tree_bytes + leaf_bytes,
        sig_size=n + k * (1 + a) * n + d * (hp + wots_len) * n,
        pk_size=2 * n,
        sk_size=4 * n,
        seed_size=3 * n,
    )


PARAMETER_SETS: dict[str, ParameterSet] = {
    "128s": _make("128s", 16, 63, 7, 12, 14),
    "128f": _make("128f", 16, 66, 22, 6, 33),
    "192s": _make("192s", 24, 63, 7, 14, 17),
    "192f": _make("192f", 24, 66, 22, 8, 33),
    "256s": _make("256s", 32, 64, 8, 14, 22),
    "256f": _make("256f", 32, 68, 17, 9, 35),
}


# -- 32-byte ADRS helpers ----------------------------------------------

_TYPE_WOTS_HASH = 0
_TYPE_WOTS_PK = 1
_TYPE_TREE = 2
_TYPE_FORS_TREE = 3
_TYPE_FORS_ROOTS = 4
_TYPE_WOTS_PRF = 5
_TYPE_FORS_PRF = 6


def _adrs_new(layer: int, tree: int) -> bytearray:
    adrs = bytearray(32)
    struct.pack_into(">I", adrs, 0, layer)
    adrs[4:16] = tree.to_bytes(12, "big")
    return adrs


def _set_type(adrs: bytearray, type_val: int) -> None:
    struct.pack_into(">I", adrs, 16, type_val)
    adrs[20:32] = bytes(12)


def _set_keypair(adrs: bytearray, kp: int) -> None:
    struct.pack_into(">I", adrs, 20, kp)


def _keypair(adrs: bytearray) -> int:
    return struct.unpack_from(">I", adrs, 20)[0]


def _set_chain(adrs: bytearray, chain: int) -> None:
    struct.pack_into(">I", adrs, 24, chain)


def _set_hash(adrs: bytearray, idx: int) -> None:
    struct.pack_into(">I", adrs, 28, idx)


def _set_tree_height(adrs: bytearray, height: int) -> None:
    struct.pack_into(">I", adrs, 24, height)


def _set_tree_index(adrs: bytearray, index: int) -> None:
    struct.pack_into(">I", adrs, 28, index)


# -- tweakable hashes (SHAKE-256 with PK.seed || ADRS prefix) ----------

def _F(ps: ParameterSet, pk_seed: bytes, adrs: bytearray, msg: bytes) -> bytes:
    return hashlib.shake_256(pk_seed + bytes(adrs) + msg).digest(ps.n)


def _PRF(ps: ParameterSet, pk_seed: bytes, sk_seed: bytes, adrs: bytearray) -> bytes:
    return hashlib.shake_256(pk_seed + bytes(adrs) + sk_seed).digest(ps.n)


def _PRF_msg(ps: ParameterSet, sk_prf: bytes, opt_rand: bytes, msg: bytes) -> bytes:
    return hashlib.shake_256(sk_prf + opt_rand + msg).digest(ps.n)


def _H_msg(ps: ParameterSet, r: bytes, pk_seed: bytes, pk_root: bytes, msg: bytes) -> bytes:
    return hashlib.shake_256(r + pk_seed + pk_root + msg).digest(ps.m)


# -- WOTS+ --------------------------------------------------------------

def _chain(ps: ParameterSet, x: bytes, start: int, steps: int,
           pk_seed: bytes, adrs: bytearray) -> bytes:
    tmp = x
    for i in range(start, start + steps):
        _set_hash(adrs, i)
        tmp = _F(ps, pk_seed, adrs, tmp)
    return tmp


def _wots_digits(ps: ParameterSet, msg: bytes) -> list[int]:
    """Message nibbles plus the WOTS+ checksum digits."""
    digits = []
    for byte in msg:
        digits.append(byte >> 4)
        digits.append(byte & 0x0F)
    digits = digits[:ps.len1]
    csum = sum(_W - 1 - v for v in digits)
    csum <<= (8 - ((ps.len2 * _LG_W) % 8)) % 8
    csum_bytes = csum.to_bytes((ps.len2 * _LG_W + 7) // 8, "big")
    for i in range(ps.len2):
        digits.append((csum_bytes[i // 2] >> (4 if i % 2 == 0 else 0)) & 0x0F)
    return digits


def _wots_pk(ps: ParameterSet, sk_seed: bytes, pk_seed: bytes, adrs: bytearray) -> bytes:
    sk_adrs = bytearray(adrs)
    _set_type(sk_adrs, _TYPE_WOTS_PRF)
    _set_keypair(sk_adrs, _keypair(adrs))
    chains = []
    for i in range(ps.wots_len):
        _set_chain(sk_adrs, i)
        sk = _PRF(ps, pk_seed, sk_seed, sk_adrs)
        chain_adrs = bytearray(adrs)
        _set_chain(chain_adrs, i)
        chains.append(_chain(ps, sk, 0, _W - 1, pk_seed, chain_adrs))
    pk_adrs = bytearray(adrs)
    _set_type(pk_adrs, _TYPE_WOTS_PK)
    _set_keypair(pk_adrs, _keypair(adrs))
    return _F(ps, pk_seed, pk_adrs, b"".join(chains))


def _wots_sign(ps: ParameterSet, msg: bytes, sk_seed: bytes, pk_seed: bytes,
               adrs: bytearray) -> bytes:
    digits = _wots_digits(ps, msg)
    sk_adrs = bytearray(adrs)
    _set_type(sk_adrs, _TYPE_WOTS_PRF)
    _set_keypair(sk_adrs, _keypair(adrs))
    parts = []
    for i in range(ps.wots_len):
        _set_chain(sk_adrs, i)
        sk = _PRF(ps, pk_seed, sk_seed, sk_adrs)
        chain_adrs = bytearray(adrs)
        _set_chain(chain_adrs, i)
        parts.append(_chain(ps, sk, 0, digits[i], pk_seed, chain_adrs))
    return b"".join(parts)


def _wots_pk_from_sig(ps: ParameterSet, sig: bytes, msg: bytes, pk_seed: bytes,
                      adrs: bytearray) -> bytes:
    digits = _wots_digits(ps, msg)
    chains = []
    for i in range(ps.wots_len):
        chain_adrs = bytearray(adrs)
        _set_chain(chain_adrs, i)
        part = sig[i * ps.n:(i + 1) * ps.n]
        chains.append(_chain(ps, part, digits[i], _W - 1 - digits[i], pk_seed, chain_adrs))
    pk_adrs = bytearray(adrs)
    _set_type(pk_adrs, _TYPE_WOTS_PK)
    _set_keypair(pk_adrs, _keypair(adrs))
    return _F(ps, pk_seed, pk_adrs, b"".join(chains))


# -- XMSS ---------------------------------------------------------------

def _xmss_node(ps: ParameterSet, sk_seed: bytes, pk_seed: bytes, i: int, z: int,
               adrs: bytearray) -> bytes:
    if z == 0:
        wots_adrs = bytearray(adrs)
        _set_type(wots_adrs, _TYPE_WOTS_HASH)
        _set_keypair(wots_adrs, i)
        return _wots_pk(ps, sk_seed, pk_seed, wots_adrs)
    left = _xmss_node(ps, sk_seed, pk_seed, 2 * i, z - 1, adrs)
    right = _xmss_node(ps, sk_seed, pk_seed, 2 * i + 1, z - 1, adrs)
    node_adrs = bytearray(adrs)
    _set_type(node_adrs, _TYPE_TREE)
    _set_tree_height(node_adrs, z)
    _set_tree_index(node_adrs, i)
    return _F(ps, pk_seed, node_adrs, left + right)


def _xmss_sign(ps: ParameterSet, msg: bytes, sk_seed: bytes, idx: int,
               pk_seed: bytes, adrs: bytearray) -> tuple[bytes, bytes]:
    wots_adrs = bytearray(adrs)
    _set_type(wots_adrs, _TYPE_WOTS_HASH)
    _set_keypair(wots_adrs, idx)
    sig = _wots_sign(ps, msg, sk_seed, pk_seed, wots_adrs)
    auth = []
    node = idx
    for j in range(ps.hp):
        auth.append(_xmss_node(ps, sk_seed, pk_seed, node ^ 1, j, adrs))
        node >>= 1
    return sig, b"".join(auth)


def _xmss_root_from_sig(ps: ParameterSet, idx: int, sig: bytes, auth: bytes,
                        msg: bytes, pk_seed: bytes, adrs: bytearray) -> bytes:
    wots_adrs = bytearray(adrs)
    _set_type(wots_adrs, _TYPE_WOTS_HASH)
    _set_keypair(wots_adrs, idx)
    node = _wots_pk_from_sig(ps, sig, msg, pk_seed, wots_adrs)
    tree_adrs = bytearray(adrs)
    _set_type(tree_adrs, _TYPE_TREE)
    for j in range(ps.hp):
        _set_tree_height(tree_adrs, j + 1)
        _set_tree_index(tree_adrs, idx >> (j + 1))
        sibling = auth[j * ps.n:(j + 1) * ps.n]
        if (idx >> j) & 1 == 0:
            node = _F(ps, pk_seed, tree_adrs, node + sibling)
        else:
            node = _F(ps, pk_seed, tree_adrs, sibling + node)
    return node


# -- hypertree ----------------------------------------------------------

def _ht_sign(ps: ParameterSet, msg: bytes, sk_seed: bytes, pk_seed: bytes,
             idx_tree: int, idx_leaf: int) -> bytes:
    adrs = _adrs_new(0, idx_tree)
    sig, auth = _xmss_sign(ps, msg, sk_seed, idx_leaf, pk_seed, adrs)
    parts = [sig, auth]
    root = _xmss_root_from_sig(ps, idx_leaf, sig, auth, msg, pk_seed, adrs)
    for j in range(1, ps.d):
        idx_leaf = idx_tree % (1 << ps.hp)
        idx_tree >>= ps.hp
        adrs = _adrs_new(j, idx_tree)
        sig, auth = _xmss_sign(ps, root, sk_seed, idx_leaf, pk_seed, adrs)
        parts.append(sig)
        parts.append(auth)
        if j < ps.d - 1:
            root = _xmss_root_from_sig(ps, idx_leaf, sig, auth, root, pk_seed, adrs)
    return b"".join(parts)


def _ht_verify(ps: ParameterSet, msg: bytes, sig_ht: bytes, pk_seed: bytes,
               idx_tree: int, idx_leaf: int, pk_root: bytes) -> bool:
    layer = (ps.wots_len + ps.hp) * ps.n
    node = msg
    offset = 0
    for j in range(ps.d):
        if j > 0:
            idx_leaf = idx_tree % (1 << ps.hp)
            idx_tree >>= ps.hp
        adrs = _adrs_new(j, idx_tree)
        sig = sig_ht[offset:offset + ps.wots_len * ps.n]
        auth = sig_ht[offset + ps.wots_len * ps.n:offset + layer]
        offset += layer
        node = _xmss_root_from_sig(ps, idx_leaf, sig, auth, node, pk_seed, adrs)
    return node == pk_root


# -- FORS ---------------------------------------------------------------

def _fors_sk(ps: ParameterSet, sk_seed: bytes, pk_seed: bytes, adrs: bytearray,
             idx: int) -> bytes:
    sk_adrs = bytearray(adrs)
    _set_type(sk_adrs, _TYPE_FORS_PRF)
    _set_keypair(sk_adrs, _keypair(adrs))
    _set_tree_index(sk_adrs, idx)
    return _PRF(ps, pk_seed, sk_seed, sk_adrs)


def _fors_node(ps: ParameterSet, sk_seed: bytes, pk_seed: bytes, adrs: bytearray,
               i: int, z: int) -> bytes:
    node_adrs = bytearray(adrs)
    _set_tree_height(node_adrs, z)
    _set_tree_index(node_adrs, i)
    if z == 0:
        sk = _fors_sk(ps, sk_seed, pk_seed, adrs, i)
        return _F(ps, pk_seed, node_adrs, sk)
    left = _fors_node(ps, sk_seed, pk_seed, adrs, 2 * i, z - 1)
    right = _fors_node(ps, sk_seed, pk_seed, adrs, 2 * i + 1, z - 1)
    return _F(ps, pk_seed, node_adrs, left + right)


def _fors_indices(ps: ParameterSet, md: bytes) -> list[int]:
    """Split the digest into k indices of a bits each, left to right."""
    bits = int.from_bytes(md[:ps.md_bytes], "big")
    total = ps.md_bytes * 8
    out = []
    for i in range(ps.k):
        shift = total - (i + 1) * ps.a
        out.append((bits >> shift) & ((1 << ps.a) - 1))
    return out


def _fors_sign(ps: ParameterSet, md: bytes, sk_seed: bytes, pk_seed: bytes,
               adrs: bytearray) -> bytes:
    out = bytearray()
    for i, idx in enumerate(_fors_indices(ps, md)):
        out += _fors_sk(ps, sk_seed, pk_seed, adrs, (i << ps.a) + idx)
        for j in range(ps.a):
            sibling = (idx >> j) ^ 1
            out += _fors_node(ps, sk_seed, pk_seed, adrs, (i << (ps.a - j)) + sibling, j)
    return bytes(out)


def _fors_pk_from_sig(ps: ParameterSet, sig: bytes, md: bytes, pk_seed: bytes,
                      adrs: bytearray) -> bytes:
    roots = bytearray()
    offset = 0
    for i, idx in enumerate(_fors_indices(ps, md)):
        sk = sig[offset:offset + ps.n]
        offset += ps.n
        tree_index = (i << ps.a) + idx
        node_adrs = bytearray(adrs)
        _set_tree_height(node_adrs, 0)
        _set_tree_index(node_adrs, tree_index)
        node = _F(ps, pk_seed, node_adrs, sk)
        for j in range(ps.a):
            sibling = sig[offset:offset + ps.n]
            offset += ps.n
            parent_adrs = bytearray(adrs)
            _set_tree_height(parent_adrs, j + 1)
            if (idx >> j) & 1 == 0:
                tree_index >>= 1
                _set_tree_index(parent_adrs, tree_index)
                node = _F(ps, pk_seed, parent_adrs, node + sibling)
            else:
                tree_index = (tree_index - 1) >> 1
                _set_tree_index(parent_adrs, tree_index)
                node = _F(ps, pk_seed, parent_adrs, sibling + node)
        roots += node
    pk_adrs = bytearray(adrs)
    _set_type(pk_adrs, _TYPE_FORS_ROOTS)
    _set_keypair(pk_adrs, _keypair(adrs))
    return _F(ps, pk_seed, pk_adrs, bytes(roots))


# -- top level ----------------------------------------------------------

def keygen(ps: ParameterSet, seed: bytes) -> tuple[bytes, bytes]:
    """Derive (secret key, public key) from a 3n-byte seed."""
    if len(seed) != ps.seed_size:
        raise ValueError(f"seed must be {ps.seed_size} bytes, got {len(seed)}")
    sk_seed, sk_prf, pk_seed = seed[:ps.n], seed[ps.n:2 * ps.n], seed[2 * ps.n:]
    adrs = _adrs_new(ps.d - 1, 0)
    pk_root = _xmss_node(ps, sk_seed, pk_seed, 0, ps.hp, adrs)
    return sk_seed + sk_prf + pk_seed + pk_root, pk_seed + pk_root


def _digest_split(ps: ParameterSet, digest: bytes) -> tuple[bytes, int, int]:
    md = digest[:ps.md_bytes]
    idx_tree = int.from_bytes(digest[ps.md_bytes:ps.md_bytes + ps.tree_bytes], "big")
    idx_tree &= (1 << (ps.h - ps.hp)) - 1
    idx_leaf = int.from_bytes(digest[ps.md_bytes + ps.tree_bytes:ps.m], "big")
    idx_leaf &= (1 << ps.hp) - 1
    return md, idx_tree, idx_leaf


def sign(ps: ParameterSet, message: bytes, sk: bytes, ctx: bytes = b"", *,
         deterministic: bool = False, addrnd: bytes | None = None) -> bytes:
    """Pure-mode signature over message with an optional context string.

    Hedged by default; deterministic=True substitutes PK.seed for the
    fresh randomness, giving repeatable output.
    """
    if len(sk) != ps.sk_size:
        raise ValueError(f"secret key must be {ps.sk_size} bytes, got {len(sk)}")
    if len(ctx) > 255:
        raise ValueError("context string longer than 255 bytes")
    sk_seed = sk[:ps.n]
    sk_prf = sk[ps.n:2 * ps.n]
    pk_seed = sk[2 * ps.n:3 * ps.n]
    pk_root = sk[3 * ps.n:]

    if addrnd is not None:
        if len(addrnd) != ps.n:
            raise ValueError(f"addrnd must be {ps.n} bytes")
        opt_rand = bytes(addrnd)
    elif deterministic:
        opt_rand = pk_seed
    else:
        opt_rand = os.urandom(ps.n)

    m_prime = b"\x00" + bytes([len(ctx)]) + ctx + message
    r = _PRF_msg(ps, sk_prf, opt_rand, m_prime)
    md, idx_tree, idx_leaf = _digest_split(ps, _H_msg(ps, r, pk_seed, pk_root, m_prime))

    fors_adrs = _adrs_new(0, idx_tree)
    _set_type(fors_adrs, _TYPE_FORS_TREE)
    _set_keypair(fors_adrs, idx_leaf)
    sig_fors = _fors_sign(ps, md, sk_seed, pk_seed, fors_adrs)
    pk_fors = _fors_pk_from_sig(ps, sig_fors, md, pk_seed, fors_adrs)
    sig_ht = _ht_sign(ps, pk_fors, sk_seed, pk_seed, idx_tree, idx_leaf)
    return r + sig_fors + sig_ht


def verify(ps: ParameterSet, message: bytes, signature: bytes, pk: bytes,
           ctx: bytes = b"") -> bool:
    if len(pk) != ps.pk_size or len(signature) != ps.sig_size or len(ctx) > 255:
        return False
    pk_seed, pk_root = pk[:ps.n], pk[ps.n:]
    m_prime = b"\x00" + bytes([len(ctx)]) + ctx + message

    r = signature[:ps.n]
    fors_size = ps.k * (1 + ps.a) * ps.n
    sig_fors = signature[ps.n:ps.n + fors_size]
    sig_ht = signature[ps.n + fors_size:]

    md, idx_tree, idx_leaf = _digest_split(ps, _H_msg(ps, r, pk_seed, pk_root, m_prime))
    fors_adrs = _adrs_new(0, idx_tree)
    _set_type(fors_adrs, _TYPE_FORS_TREE)
    _set_keypair(fors_adrs, idx_leaf)
    pk_fors = _fors_pk_from_sig(ps, sig_fors, md, pk_seed, fors_adrs)
    return _ht_verify(ps, pk_fors, sig_ht, pk_seed, idx_tree, idx_leaf, pk_root)
