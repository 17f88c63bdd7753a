import pytest

from pqcli import algs, der, oids, x509
from pqcli.errors import NotACsr
from pqcli.names import parse_name


def test_build_and_verify(ec_key, ml2_key, slh_key):
    for key in (ec_key, ml2_key, slh_key):
        doc = x509.build_csr(parse_name("CN=dev1,O=Plant"), key)
        assert doc.subject == parse_name("CN=dev1,O=Plant")
        assert x509.verify_csr(doc)


def test_emit_parse_identity(ml2_key):
    doc = x509.build_csr(parse_name("CN=dev1"), ml2_key)
    blob = doc.emit()
    back = x509.parse_csr(blob)
    assert back.emit() == blob
    assert back.cri_der == doc.cri_der
    assert x509.verify_csr(back)


def test_pem_round_trip(ec_key):
    doc = x509.build_csr(parse_name("CN=pemmed"), ec_key)
    text = doc.emit_pem()
    assert "BEGIN CERTIFICATE REQUEST" in text
    back = x509.parse_csr(text.encode())
    assert back.emit() == doc.emit()


def test_requested_extensions_round_trip(ec_key):
    ext = x509.ExtensionBlock(oids.EXT_KEY_USAGE, True, b"\x03\x02\x05\xa0")
    doc = x509.build_csr(parse_name("CN=ext"), ec_key, extensions=(ext,))
    back = x509.parse_csr(doc.emit())
    assert back.extensions == (ext,)
    assert x509.verify_csr(back)


def test_tampered_subject_fails(ec_key):
    doc = x509.build_csr(parse_name("CN=orig"), ec_key)
    forged_cri = doc.cri_der.replace(b"orig", b"org2")
    forged = x509.CsrDocument(doc.subject, doc.spki, doc.extensions,
                              forged_cri, doc.signature_alg, doc.signature)
    assert not x509.verify_csr(forged)


def test_composite_csr_self_signature(rng):
    spec = algs.parse_alg_spec("ml-dsa:2_ecdsa")
    key = algs.generate_keypair(spec, rng)
    doc = x509.build_csr(parse_name("CN=fused"), key)
    assert doc.spki.algorithm.oid == oids.COMPOSITE_INTERIM
    assert x509.verify_csr(doc)
    back = x509.parse_csr(doc.emit())
    assert back.emit() == doc.emit()
    assert x509.verify_csr(back)
    # the signature is a sequence of per-component bit strings
    parts = der.decode(back.signature)
    assert len(parts.children) == 2


def test_parse_rejects_non_csr():
    with pytest.raises(NotACsr):
        x509.parse_csr(b"nonsense")
    with pytest.raises(NotACsr):
        x509.parse_csr(der.encode(der.seq(der.integer(9))))


def test_render_csr_text(slh_key):
    doc = x509.build_csr(parse_name("CN=dump"), slh_key)
    text = x509.render_csr_text(doc)
    assert "CN=dump" in text
    assert "SLH-DSA-SHAKE-128f" in text
