import datetime

import pytest

from pqcli import algs, der, oids, pem, x509
from pqcli.errors import (
    AlgorithmMismatch,
    DuplicateExtension,
    InvalidParameter,
    InvalidValidity,
    NotACertificate,
)
from pqcli.names import parse_name

UTC = datetime.timezone.utc


def _self_signed(key, subject="CN=unit", days=30, rng=None, **kwargs):
    name = parse_name(subject)
    tbs = x509.build_tbs(name, name, algs.spki_for_key(key),
                         x509.default_validity(days),
                         algs.signature_algorithm_for(key.spec),
                         rng=rng, **kwargs)
    return x509.sign_certificate(tbs, key)


def test_build_defaults(ec_key, rng):
    cert = _self_signed(ec_key, rng=rng)
    assert cert.tbs.version == 2
    assert 0 < cert.tbs.serial < 1 << 120
    ext_oids = [e.oid for e in cert.tbs.extensions]
    assert ext_oids == [oids.EXT_BASIC_CONSTRAINTS, oids.EXT_SUBJECT_KEY_ID]
    assert all(not e.critical for e in cert.tbs.extensions)
    # subjectKeyIdentifier is the SHA-1 of the public key bits
    import hashlib
    ski = der.decode(cert.tbs.extensions[1].value).as_octets()
    assert ski == hashlib.sha1(ec_key.public).digest()


def test_suppress_default_extensions(ec_key):
    cert = _self_signed(ec_key, add_default_extensions=False)
    assert cert.tbs.extensions == ()


def test_supplied_extension_overrides_default(ec_key):
    custom_bc = x509.ExtensionBlock(oids.EXT_BASIC_CONSTRAINTS, True,
                                    der.encode(der.seq()))
    cert = _self_signed(ec_key, extensions=(custom_bc,))
    blocks = [e for e in cert.tbs.extensions if e.oid == oids.EXT_BASIC_CONSTRAINTS]
    assert blocks == [custom_bc]


def test_duplicate_extension_rejected(ec_key):
    ext = x509.ExtensionBlock(oids.EXT_KEY_USAGE, False, b"\x03\x02\x05\xa0")
    name = parse_name("CN=dup")
    with pytest.raises(DuplicateExtension):
        x509.build_tbs(name, name, algs.spki_for_key(ec_key),
                       x509.default_validity(1),
                       algs.signature_algorithm_for(ec_key.spec),
                       extensions=(ext, ext))


def test_invalid_validity(ec_key):
    name = parse_name("CN=v")
    start = datetime.datetime(2026, 1, 1, tzinfo=UTC)
    with pytest.raises(InvalidValidity):
        x509.build_tbs(name, name, algs.spki_for_key(ec_key), (start, start),
                       algs.signature_algorithm_for(ec_key.spec))


def test_serial_bounds(ec_key):
    name = parse_name("CN=s")
    spki = algs.spki_for_key(ec_key)
    alg = algs.signature_algorithm_for(ec_key.spec)
    with pytest.raises(InvalidParameter):
        x509.build_tbs(name, name, spki, x509.default_validity(1), alg, serial=0)
    with pytest.raises(InvalidParameter):
        x509.build_tbs(name, name, spki, x509.default_validity(1), alg, serial=-5)
    with pytest.raises(InvalidParameter):
        x509.build_tbs(name, name, spki, x509.default_validity(1), alg,
                       serial=1 << 170)
    tbs = x509.build_tbs(name, name, spki, x509.default_validity(1), alg, serial=7)
    assert tbs.serial == 7


def test_sign_requires_matching_algorithm(ec_key, ml2_key):
    name = parse_name("CN=alg")
    tbs = x509.build_tbs(name, name, algs.spki_for_key(ec_key),
                         x509.default_validity(1),
                         algs.signature_algorithm_for(ml2_key.spec))
    with pytest.raises(AlgorithmMismatch):
        x509.sign_certificate(tbs, ec_key)


def test_emit_parse_identity(ec_key, ml2_key, rsa_key, slh_key, rng):
    for key in (ec_key, ml2_key, rsa_key, slh_key):
        cert = _self_signed(key, rng=rng)
        blob = cert.emit()
        back = x509.parse_certificate(blob)
        assert back.emit() == blob
        assert back.tbs_der == cert.tbs_der
        assert back.tbs == cert.tbs


def test_pem_round_trip(ec_key):
    cert = _self_signed(ec_key)
    text = cert.emit_pem()
    assert text.startswith("-----BEGIN CERTIFICATE-----")
    back = x509.parse_certificate(text.encode())
    assert back.emit() == cert.emit()


def test_verify_valid_and_tampered(ec_key, ml2_key, slh_key):
    for key in (ec_key, ml2_key, slh_key):
        cert = _self_signed(key)
        report = x509.verify_certificate(cert, cert.tbs.spki)
        assert report.native_sig == x509.VALID
        assert report.all_valid
        assert "self-signed (subject equals issuer)" in report.chain_notes

        bad_sig = bytearray(cert.signature)
        bad_sig[0] ^= 1
        tampered = x509.CertificateDocument(cert.tbs, cert.tbs_der,
                                            cert.signature_alg, bytes(bad_sig))
        assert x509.verify_certificate(tampered, cert.tbs.spki).native_sig == x509.INVALID

        bad_tbs = bytearray(cert.tbs_der)
        bad_tbs[-1] ^= 1
        tampered = x509.CertificateDocument(cert.tbs, bytes(bad_tbs),
                                            cert.signature_alg, cert.signature)
        assert x509.verify_certificate(tampered, cert.tbs.spki).native_sig == x509.INVALID


def test_verify_against_wrong_issuer_key(ec_key, ec384_key):
    cert = _self_signed(ec_key)
    report = x509.verify_certificate(cert, algs.spki_for_key(ec384_key))
    assert report.native_sig == x509.INVALID


def test_verification_uses_captured_tbs_bytes(ec_key):
    """Only tbs_der participates in verification, not a re-encoding."""
    cert = _self_signed(ec_key)
    wrong_tbs = x509.CertificateDocument(
        cert.tbs, cert.tbs_der[:-1] + bytes([cert.tbs_der[-1] ^ 1]),
        cert.signature_alg, cert.signature)
    assert x509.verify_certificate(wrong_tbs, cert.tbs.spki).native_sig == x509.INVALID


def test_validity_window_notes(ec_key):
    cert = _self_signed(ec_key, days=10)
    before = cert.tbs.not_before - datetime.timedelta(days=1)
    after = cert.tbs.not_after + datetime.timedelta(days=1)
    report = x509.verify_certificate(cert, cert.tbs.spki, at_time=before)
    assert "not yet valid" in report.chain_notes
    assert report.native_sig == x509.VALID  # window does not gate the verdict
    report = x509.verify_certificate(cert, cert.tbs.spki, at_time=after)
    assert "expired" in report.chain_notes
    assert report.all_valid


def test_unknown_issuer_key_is_unsupported(ec_key):
    cert = _self_signed(ec_key)
    odd = algs.SubjectPublicKeyInfo(
        algs.AlgorithmIdentifier(oids.ObjectIdentifier("1.2.3.4")), b"\x01")
    report = x509.verify_certificate(cert, odd)
    assert report.native_sig == x509.UNSUPPORTED
    assert not report.all_valid


def test_outer_algorithm_mismatch_noted(ec_key, ml2_key):
    cert = _self_signed(ec_key)
    other_alg = algs.signature_algorithm_for(ml2_key.spec)
    doc = x509.CertificateDocument(cert.tbs, cert.tbs_der, other_alg, cert.signature)
    report = x509.verify_certificate(doc, cert.tbs.spki)
    assert any("algorithm differs" in note for note in report.chain_notes)


def test_parse_rejects_non_certificates():
    with pytest.raises(NotACertificate):
        x509.parse_certificate(b"\x00\x01\x02")
    with pytest.raises(NotACertificate):
        x509.parse_certificate(der.encode(der.seq(der.integer(1))))
    with pytest.raises(NotACertificate):
        x509.parse_certificate(b"-----BEGIN PUBLIC KEY-----\nAAAA\n-----END PUBLIC KEY-----\n")


def test_parse_rejects_unique_ids(ec_key):
    cert = _self_signed(ec_key, add_default_extensions=False)
    tbs_value = der.decode(cert.tbs_der)
    extra = der.DerValue(1, cls=der.CONTEXT, constructed=True,
                         children=(der.octet_string(b"x"),))
    bad_tbs = der.seq(*tbs_value.children, extra)
    blob = der.encode(der.seq(bad_tbs,
                              cert.signature_alg.to_der_value(),
                              der.bit_string(cert.signature)))
    with pytest.raises(NotACertificate):
        x509.parse_certificate(blob)


def test_parse_v1_without_version_tag(ec_key):
    """A v1-style TBS with no [0] tag still parses (view tolerance)."""
    cert = _self_signed(ec_key, add_default_extensions=False)
    tbs_value = der.decode(cert.tbs_der)
    v1_tbs = der.seq(*tbs_value.children[1:])  # drop the version wrapper
    blob = der.encode(der.seq(v1_tbs, cert.signature_alg.to_der_value(),
                              der.bit_string(cert.signature)))
    doc = x509.parse_certificate(blob)
    assert doc.tbs.version == 0
    assert doc.tbs.serial == cert.tbs.serial


def test_parse_unknown_algorithm_cert_for_view():
    """Certificates full of unregistered OIDs still parse and render."""
    name = parse_name("CN=alien")
    spki = algs.SubjectPublicKeyInfo(
        algs.AlgorithmIdentifier(oids.ObjectIdentifier("1.3.6.1.4.1.99999.1")),
        b"\xaa" * 16)
    alien_alg = algs.AlgorithmIdentifier(oids.ObjectIdentifier("1.3.6.1.4.1.99999.2"))
    tbs = x509.TbsCertificate(2, 5, alien_alg, name,
                              datetime.datetime(2026, 1, 1, tzinfo=UTC),
                              datetime.datetime(2027, 1, 1, tzinfo=UTC),
                              name, spki)
    doc = x509.CertificateDocument(tbs, tbs.der, alien_alg, b"\x00\x11")
    back = x509.parse_certificate(doc.emit())
    text = x509.render_text(back)
    assert "1.3.6.1.4.1.99999.1" in text
    assert "view only" in text
    report = x509.verify_certificate(back, back.tbs.spki)
    assert report.native_sig == x509.UNSUPPORTED


def test_render_text_basics(ec_key):
    cert = _self_signed(ec_key, subject="CN=render,O=Acme")
    text = x509.render_text(cert)
    assert "CN=render,O=Acme" in text
    assert "ecdsa-with-SHA256" in text
    assert "basicConstraints" in text
    assert "subjectKeyIdentifier" in text
    assert f"{cert.tbs.serial:x}" in text
    assert "Alt Public Key Info" not in text  # classical certificate


def test_generalized_time_beyond_2049(ec_key):
    name = parse_name("CN=longlived")
    start = datetime.datetime(2049, 6, 1, tzinfo=UTC)
    end = datetime.datetime(2051, 6, 1, tzinfo=UTC)
    tbs = x509.build_tbs(name, name, algs.spki_for_key(ec_key), (start, end),
                         algs.signature_algorithm_for(ec_key.spec))
    cert = x509.sign_certificate(tbs, ec_key)
    back = x509.parse_certificate(cert.emit())
    assert back.tbs.not_before == start
    assert back.tbs.not_after == end
    assert back.emit() == cert.emit()


def test_write_and_reload_from_disk(tmp_path, ec_key):
    cert = _self_signed(ec_key)
    path = tmp_path / "cert.pem"
    pem.write_pem(path, pem.LABEL_CERTIFICATE, cert.emit())
    blocks = pem.read_pem(path)
    assert blocks == [(pem.LABEL_CERTIFICATE, cert.emit())]
