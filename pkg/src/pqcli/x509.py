"""X.509 v3 certificates and PKCS#10 requests: build, sign, parse, verify.

The signed TBS bytes are authoritative: parse_certificate captures them
exactly as found and every verification runs over that captured slice,
never over a re-encoding. Documents the tool emits round-trip byte-exactly
through parse and emit.
"""

from __future__ import annotations

import datetime
import hashlib
import secrets
from dataclasses import dataclass

from . import algs, der, pem
from .errors import (
    AlgorithmMismatch,
    DerError,
    DuplicateExtension,
    InvalidParameter,
    InvalidValidity,
    MalformedAltExtension,
    NotACertificate,
    NotACsr,
)
from .names import DistinguishedName
from .oids import (
    ATTR_EXTENSION_REQUEST,
    EXT_ALT_SIGNATURE_ALGORITHM,
    EXT_ALT_SIGNATURE_VALUE,
    EXT_BASIC_CONSTRAINTS,
    EXT_DELTA_CERTIFICATE_DESCRIPTOR,
    EXT_SUBJECT_ALT_PUBLIC_KEY_INFO,
    EXT_SUBJECT_KEY_ID,
    ObjectIdentifier,
    algorithm_name,
    extension_name,
)

VALID = "valid"
INVALID = "invalid"
UNSUPPORTED = "unsupported"

DEFAULT_SUBJECT = "CN=pqcli self-signed"
DEFAULT_DAYS = 365

_ALT_EXTENSION_OIDS = (
    EXT_SUBJECT_ALT_PUBLIC_KEY_INFO,
    EXT_ALT_SIGNATURE_ALGORITHM,
    EXT_ALT_SIGNATURE_VALUE,
)


@dataclass(frozen=True)
class ExtensionBlock:
    oid: ObjectIdentifier
    critical: bool
    value: bytes  # the DER structure inside extnValue

    def to_der_value(self) -> der.DerValue:
        children = [der.oid_value(self.oid)]
        if self.critical:
            children.append(der.boolean(True))
        children.append(der.octet_string(self.value))
        return der.seq(*children)

    @classmethod
    def from_der_value(cls, value: der.DerValue) -> "ExtensionBlock":
        value.expect(der.SEQUENCE)
        children = list(value.children)
        if not 2 <= len(children) <= 3:
            raise NotACertificate("extension needs 2 or 3 fields")
        ext_oid = children[0].as_oid()
        critical = False
        if len(children) == 3:
            critical = children[1].as_bool()
        return cls(ext_oid, critical, children[-1].as_octets())


@dataclass(frozen=True)
class TbsCertificate:
    version: int
    serial: int
    signature_alg: algs.AlgorithmIdentifier
    issuer: DistinguishedName
    not_before: datetime.datetime
    not_after: datetime.datetime
    subject: DistinguishedName
    spki: algs.SubjectPublicKeyInfo
    extensions: tuple[ExtensionBlock, ...] = ()

    def to_der_value(self) -> der.DerValue:
        children = [
            der.explicit(0, der.integer(self.version)),
            der.integer(self.serial),
            self.signature_alg.to_der_value(),
            self.issuer.to_der_value(),
            der.seq(der.encode_time(self.not_before), der.encode_time(self.not_after)),
            self.subject.to_der_value(),
            self.spki.to_der_value(),
        ]
        if self.extensions:
            children.append(der.explicit(
                3, der.seq(*(e.to_der_value() for e in self.extensions))))
        return der.seq(*children)

    @property
    def der(self) -> bytes:
        return der.encode(self.to_der_value())

    def find_extension(self, ext_oid: ObjectIdentifier) -> ExtensionBlock | None:
        for ext in self.extensions:
            if ext.oid == ext_oid:
                return ext
        return None

    @classmethod
    def from_der_value(cls, value: der.DerValue) -> "TbsCertificate":
        value.expect(der.SEQUENCE)
        children = list(value.children)
        if not children:
            raise NotACertificate("empty TBS")
        idx = 0
        version = 0  # v1 when the [0] tag is absent
        first = children[0]
        if first.cls == der.CONTEXT and first.tag == 0:
            if not first.constructed or len(first.children) != 1:
                raise NotACertificate("malformed version field")
            version = first.children[0].as_int()
            if version not in (0, 1, 2):
                raise NotACertificate(f"unsupported certificate version {version}")
            idx = 1
        try:
            serial = children[idx].as_int()
            signature_alg = algs.AlgorithmIdentifier.from_der_value(children[idx + 1])
            issuer = DistinguishedName.from_der_value(children[idx + 2])
            validity = children[idx + 3]
            validity.expect(der.SEQUENCE)
            if len(validity.children) != 2:
                raise NotACertificate("validity needs two times")
            not_before = der.decode_time(validity.children[0])
            not_after = der.decode_time(validity.children[1])
            subject = DistinguishedName.from_der_value(children[idx + 4])
            spki = algs.SubjectPublicKeyInfo.from_der_value(children[idx + 5])
        except IndexError:
            raise NotACertificate("TBS is missing required fields") from None
        extensions: tuple[ExtensionBlock, ...] = ()
        for extra in children[idx + 6:]:
            if extra.cls != der.CONTEXT:
                raise NotACertificate("unexpected field after subjectPublicKeyInfo")
            if extra.tag in (1, 2):
                raise NotACertificate("issuerUniqueID/subjectUniqueID are not supported")
            if extra.tag != 3 or not extra.constructed or len(extra.children) != 1:
                raise NotACertificate("malformed extensions field")
            ext_seq = extra.children[0]
            ext_seq.expect(der.SEQUENCE)
            extensions = tuple(ExtensionBlock.from_der_value(e) for e in ext_seq.children)
        return cls(version, serial, signature_alg, issuer, not_before, not_after,
                   subject, spki, extensions)


@dataclass(frozen=True)
class CertificateDocument:
    tbs: TbsCertificate
    tbs_der: bytes
    signature_alg: algs.AlgorithmIdentifier
    signature: bytes

    def emit(self) -> bytes:
        """Full certificate DER, reusing the signed TBS bytes verbatim."""
        return der.wrap_sequence(
            self.tbs_der
            + der.encode(self.signature_alg.to_der_value())
            + der.encode(der.bit_string(self.signature)))

    def emit_pem(self) -> str:
        return pem.encode_pem("CERTIFICATE", self.emit())

    def has_alt_extensions(self) -> bool:
        return any(self.tbs.find_extension(o) is not None for o in _ALT_EXTENSION_OIDS)


@dataclass(frozen=True)
class VerificationReport:
    native_sig: str
    alt_sig: str | None = None
    composite_components: tuple[str, ...] | None = None
    chain_notes: tuple[str, ...] = ()

    @property
    def all_valid(self) -> bool:
        """Every signature path that is present verified."""
        if self.native_sig != VALID:
            return False
        if self.alt_sig is not None and self.alt_sig != VALID:
            return False
        if self.composite_components is not None:
            if not self.composite_components:
                return False
            if any(v != VALID for v in self.composite_components):
                return False
        return True


def random_serial(rng=None) -> int:
    """Positive 120-bit serial."""
    while True:
        value = int.from_bytes(rng.randbytes(15), "big") if rng else secrets.randbits(120)
        if value > 0:
            return value


def default_validity(days: int = DEFAULT_DAYS,
                     start: datetime.datetime | None = None):
    start = der.normalize_time(start or datetime.datetime.now(datetime.timezone.utc))
    return start, start + datetime.timedelta(days=days)


def basic_constraints_extension(ca: bool = True, critical: bool = False) -> ExtensionBlock:
    inner = der.seq(der.boolean(True)) if ca else der.seq()
    return ExtensionBlock(EXT_BASIC_CONSTRAINTS, critical, der.encode(inner))


def subject_key_id_extension(spki: algs.SubjectPublicKeyInfo) -> ExtensionBlock:
    digest = hashlib.sha1(spki.key_bits).digest()
    return ExtensionBlock(EXT_SUBJECT_KEY_ID, False,
                          der.encode(der.octet_string(digest)))


def build_tbs(subject: DistinguishedName,
              issuer: DistinguishedName,
              spki: algs.SubjectPublicKeyInfo,
              validity: tuple[datetime.datetime, datetime.datetime],
              signature_alg: algs.AlgorithmIdentifier,
              serial: int | None = None,
              extensions=(),
              add_default_extensions: bool = True,
              rng=None) -> TbsCertificate:
    """Assemble a v3 TBS. basicConstraints and subjectKeyIdentifier are
    added (non-critical) unless suppressed or already supplied."""
    not_before = der.normalize_time(validity[0])
    not_after = der.normalize_time(validity[1])
    if not_before >= not_after:
        raise InvalidValidity(f"not_before {not_before} must precede not_after {not_after}")
    if serial is None:
        serial = random_serial(rng)
    if serial <= 0 or serial.bit_length() > 160:
        raise InvalidParameter("serial must be positive and fit in 20 octets")

    supplied = tuple(extensions)
    supplied_oids = {e.oid for e in supplied}
    final: list[ExtensionBlock] = []
    if add_default_extensions:
        if EXT_BASIC_CONSTRAINTS not in supplied_oids:
            final.append(basic_constraints_extension())
        if EXT_SUBJECT_KEY_ID not in supplied_oids:
            final.append(subject_key_id_extension(spki))
    final.extend(supplied)

    seen: set[ObjectIdentifier] = set()
    for ext in final:
        if ext.oid in seen:
            raise DuplicateExtension(f"duplicate extension {ext.oid}")
        seen.add(ext.oid)

    return TbsCertificate(
        version=2, serial=serial, signature_alg=signature_alg,
        issuer=issuer, not_before=not_before, not_after=not_after,
        subject=subject, spki=spki, extensions=tuple(final))


def sign_certificate(tbs: TbsCertificate, issuer_key: algs.KeyPairRecord,
                     registry: algs.Registry | None = None) -> CertificateDocument:
    expected = algs.signature_algorithm_for(issuer_key.spec, registry)
    if tbs.signature_alg != expected:
        raise AlgorithmMismatch(
            f"TBS says {tbs.signature_alg.oid}, key signs as {expected.oid}")
    tbs_der = tbs.der
    signature = algs.sign(issuer_key.spec, issuer_key.private, tbs_der)
    return CertificateDocument(tbs, tbs_der, tbs.signature_alg, signature)


def _der_from_input(data: bytes, label: str, error_cls):
    if b"-----BEGIN" in data:
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError:
            raise error_cls("input is neither DER nor readable PEM") from None
        for block_label, block_der in pem.decode_pem(text):
            if block_label == label:
                return block_der
        raise error_cls(f"no {label} block in PEM input")
    return bytes(data)


def parse_certificate(data: bytes) -> CertificateDocument:
    """Parse DER or PEM certificate bytes, keeping the TBS slice exact."""
    blob = _der_from_input(data, "CERTIFICATE", NotACertificate)
    try:
        outer = der.decode(blob)
    except DerError as exc:
        raise NotACertificate(f"not valid DER: {exc}") from exc
    if outer.tag != der.SEQUENCE or outer.cls != der.UNIVERSAL:
        raise NotACertificate("certificate must be a SEQUENCE")
    if len(outer.children) != 3:
        raise NotACertificate("certificate needs TBS, algorithm, and signature")

    content_start, _ = der.content_span(blob, 0)
    _, tbs_end = der.split_tlv(blob, content_start)
    tbs_der = blob[content_start:tbs_end]

    tbs = TbsCertificate.from_der_value(outer.children[0])
    signature_alg = algs.AlgorithmIdentifier.from_der_value(outer.children[1])
    signature = outer.children[2].as_bits()
    return CertificateDocument(tbs, tbs_der, signature_alg, signature)


def verify_certificate(cert: CertificateDocument,
                       issuer_spki: algs.SubjectPublicKeyInfo,
                       at_time: datetime.datetime | None = None,
                       registry: algs.Registry | None = None,
                       alt_issuer_spki: algs.SubjectPublicKeyInfo | None = None,
                       ) -> VerificationReport:
    """Check every signature path present and report each verdict.

    Never raises: structural problems become report entries. For Catalyst
    certificates with no alt_issuer_spki given, the certificate's own alt
    key is used (the self-signed reading).
    """
    registry = registry or algs.default_registry()
    notes: list[str] = []
    now = der.normalize_time(at_time or datetime.datetime.now(datetime.timezone.utc))
    if now < cert.tbs.not_before:
        notes.append("not yet valid")
    if now > cert.tbs.not_after:
        notes.append("expired")
    if cert.tbs.subject == cert.tbs.issuer:
        notes.append("self-signed (subject equals issuer)")
    if cert.tbs.signature_alg != cert.signature_alg:
        notes.append("signature algorithm differs between TBS and certificate")

    issuer_spec = algs.spec_from_spki(issuer_spki, registry)
    composite_verdicts = None
    if issuer_spec is None:
        native = UNSUPPORTED
        notes.append("issuer key algorithm not recognized")
    elif issuer_spec.family == algs.FAMILY_COMPOSITE:
        from . import composite
        outcome = composite.verify_certificate_signature(cert, issuer_spki, registry)
        composite_verdicts = outcome.components
        native = VALID if outcome.overall else INVALID
        if outcome.note:
            notes.append(outcome.note)
    else:
        ok = algs.verify(issuer_spec, issuer_spki.key_bits, cert.tbs_der, cert.signature)
        native = VALID if ok else INVALID

    alt = None
    if cert.has_alt_extensions():
        from . import catalyst
        try:
            alt = catalyst.alt_verdict(cert, alt_issuer_spki, registry)
        except MalformedAltExtension as exc:
            alt = INVALID
            notes.append(str(exc))
    return VerificationReport(native, alt, composite_verdicts, tuple(notes))


# -- certificate signing requests ---------------------------------------

@dataclass(frozen=True)
class CsrDocument:
    subject: DistinguishedName
    spki: algs.SubjectPublicKeyInfo
    extensions: tuple[ExtensionBlock, ...]
    cri_der: bytes
    signature_alg: algs.AlgorithmIdentifier
    signature: bytes

    def emit(self) -> bytes:
        return der.wrap_sequence(
            self.cri_der
            + der.encode(self.signature_alg.to_der_value())
            + der.encode(der.bit_string(self.signature)))

    def emit_pem(self) -> str:
        return pem.encode_pem("CERTIFICATE REQUEST", self.emit())


def _encode_cri(subject: DistinguishedName, spki: algs.SubjectPublicKeyInfo,
                extensions: tuple[ExtensionBlock, ...]) -> bytes:
    attrs = []
    if extensions:
        ext_seq = der.seq(*(e.to_der_value() for e in extensions))
        attrs.append(der.seq(der.oid_value(ATTR_EXTENSION_REQUEST),
                             der.set_of(ext_seq)))
    # attributes ride in an IMPLICIT [0] wrapper, present even when empty
    attributes = der.DerValue(0, cls=der.CONTEXT, constructed=True,
                              children=tuple(attrs))
    return der.encode(der.seq(
        der.integer(0),
        subject.to_der_value(),
        spki.to_der_value(),
        attributes,
    ))


def build_csr(subject: DistinguishedName, keypair: algs.KeyPairRecord,
              extensions=(), registry: algs.Registry | None = None) -> CsrDocument:
    """PKCS#10 request self-signed with the subject key; verified on build."""
    spki = algs.spki_for_key(keypair, registry=registry)
    extensions = tuple(extensions)
    cri_der = _encode_cri(subject, spki, extensions)
    signature_alg = algs.signature_algorithm_for(keypair.spec, registry)
    signature = algs.sign(keypair.spec, keypair.private, cri_der)
    doc = CsrDocument(subject, spki, extensions, cri_der, signature_alg, signature)
    if not verify_csr(doc, registry):
        raise AlgorithmMismatch("freshly built CSR failed self-verification")
    return doc


def parse_csr(data: bytes) -> CsrDocument:
    blob = _der_from_input(data, "CERTIFICATE REQUEST", NotACsr)
    try:
        outer = der.decode(blob)
    except DerError as exc:
        raise NotACsr(f"not valid DER: {exc}") from exc
    if outer.tag != der.SEQUENCE or len(outer.children) != 3:
        raise NotACsr("request needs info, algorithm, and signature")
    content_start, _ = der.content_span(blob, 0)
    _, cri_end = der.split_tlv(blob, content_start)
    cri_der = blob[content_start:cri_end]

    info = outer.children[0]
    info.expect(der.SEQUENCE)
    if len(info.children) < 3:
        raise NotACsr("request info is missing required fields")
    if info.children[0].as_int() != 0:
        raise NotACsr("unsupported request version")
    subject = DistinguishedName.from_der_value(info.children[1])
    spki = algs.SubjectPublicKeyInfo.from_der_value(info.children[2])
    extensions: tuple[ExtensionBlock, ...] = ()
    if len(info.children) > 3:
        attributes = info.children[3]
        if attributes.cls != der.CONTEXT or attributes.tag != 0:
            raise NotACsr("malformed attributes field")
        for attr in attributes.children:
            attr.expect(der.SEQUENCE)
            if len(attr.children) == 2 and attr.children[0].as_oid() == ATTR_EXTENSION_REQUEST:
                values = attr.children[1]
                values.expect(der.SET)
                if len(values.children) == 1:
                    ext_seq = values.children[0]
                    ext_seq.expect(der.SEQUENCE)
                    extensions = tuple(ExtensionBlock.from_der_value(e)
                                       for e in ext_seq.children)
    signature_alg = algs.AlgorithmIdentifier.from_der_value(outer.children[1])
    signature = outer.children[2].as_bits()
    return CsrDocument(subject, spki, extensions, cri_der, signature_alg, signature)


def verify_csr(doc: CsrDocument, registry: algs.Registry | None = None) -> bool:
    """Self-signature check against the key inside the request."""
    spec = algs.spec_from_spki(doc.spki, registry)
    if spec is None:
        return False
    return algs.verify(spec, doc.spki.key_bits, doc.cri_der, doc.signature)


# -- rendering ----------------------------------------------------------

def _format_time(moment: datetime.datetime) -> str:
    return moment.strftime("%b %e %H:%M:%S %Y GMT")


def _describe_spki(spki: algs.SubjectPublicKeyInfo, registry, indent: str) -> list[str]:
    lines = [f"{indent}Algorithm: {algorithm_name(spki.algorithm.oid)}"]
    spec = algs.spec_from_spki(spki, registry)
    if spec is None:
        lines.append(f"{indent}    (unknown algorithm - view only)")
        lines.append(f"{indent}    Key: {len(spki.key_bits)} bytes")
        return lines
    if spec.family == algs.FAMILY_RSA:
        lines[0] += f" ({spec.parameter} bit)"
    elif spec.family == algs.FAMILY_ECDSA:
        lines[0] += f" (curve {spec.parameter})"
    elif spec.family == algs.FAMILY_COMPOSITE:
        try:
            inner = der.decode(spki.key_bits)
            for i, child in enumerate(inner.children, start=1):
                part = algs.SubjectPublicKeyInfo.from_der_value(child)
                lines.append(f"{indent}    Component {i}: "
                             f"{algorithm_name(part.algorithm.oid)}")
        except DerError:
            lines.append(f"{indent}    (malformed component sequence)")
    else:
        lines.append(f"{indent}    Key: {len(spki.key_bits)} bytes")
    return lines


def render_text(cert: CertificateDocument,
                registry: algs.Registry | None = None) -> str:
    registry = registry or algs.default_registry()
    t = cert.tbs
    lines = [
        "Certificate:",
        "    Data:",
        f"        Version: {t.version + 1} (0x{t.version:x})",
        f"        Serial Number: {t.serial:x}" if t.serial >= 0
        else f"        Serial Number: {t.serial}",
        f"        Signature Algorithm: {algorithm_name(t.signature_alg.oid)}",
        f"        Issuer: {t.issuer}",
        "        Validity:",
        f"            Not Before: {_format_time(t.not_before)}",
        f"            Not After : {_format_time(t.not_after)}",
        f"        Subject: {t.subject}",
        "        Subject Public Key Info:",
    ]
    lines.extend(_describe_spki(t.spki, registry, "            "))
    if t.extensions:
        lines.append("        X509v3 Extensions:")
        for ext in t.extensions:
            flag = " critical" if ext.critical else ""
            lines.append(f"            {extension_name(ext.oid)}:{flag}")
            lines.append(f"                ({len(ext.value)} bytes)")

    alt_spki_ext = t.find_extension(EXT_SUBJECT_ALT_PUBLIC_KEY_INFO)
    alt_alg_ext = t.find_extension(EXT_ALT_SIGNATURE_ALGORITHM)
    alt_val_ext = t.find_extension(EXT_ALT_SIGNATURE_VALUE)
    if alt_spki_ext or alt_alg_ext or alt_val_ext:
        lines.append("    Alt Public Key Info:")
        if alt_spki_ext:
            try:
                alt_spki = algs.SubjectPublicKeyInfo.from_der(alt_spki_ext.value)
                lines.extend(_describe_spki(alt_spki, registry, "        "))
            except DerError:
                lines.append("        (malformed)")
        else:
            lines.append("        (absent)")
        lines.append("    Alt Signature:")
        if alt_alg_ext:
            try:
                alt_alg = algs.AlgorithmIdentifier.from_der_value(der.decode(alt_alg_ext.value))
                lines.append(f"        Algorithm: {algorithm_name(alt_alg.oid)}")
            except DerError:
                lines.append("        Algorithm: (malformed)")
        if alt_val_ext:
            try:
                alt_bits = der.decode(alt_val_ext.value).as_bits()
                lines.append(f"        Value: {len(alt_bits)} bytes")
            except DerError:
                lines.append("        Value: (malformed)")
        else:
            lines.append("        Value: (absent)")

    if t.find_extension(EXT_DELTA_CERTIFICATE_DESCRIPTOR):
        lines.append("    Delta Certificate Descriptor: present")

    lines.append(f"    Signature Algorithm: {algorithm_name(cert.signature_alg.oid)}")
    lines.append(f"    Signature: {len(cert.signature)} bytes, "
                 f"{cert.signature[:16].hex()}...")
    return "\n".join(lines) + "\n"


def render_csr_text(doc: CsrDocument,
                    registry: algs.Registry | None = None) -> str:
    registry = registry or algs.default_registry()
    lines = [
        "Certificate Request:",
        f"    Subject: {doc.subject}",
        "    Subject Public Key Info:",
    ]
    lines.extend(_describe_spki(doc.spki, registry, "        "))
    if doc.extensions:
        lines.append("    Requested Extensions:")
        for ext in doc.extensions:
            flag = " critical" if ext.critical else ""
            lines.append(f"        {extension_name(ext.oid)}:{flag}")
    lines.append(f"    Signature Algorithm: {algorithm_name(doc.signature_alg.oid)}")
    lines.append(f"    Signature: {len(doc.signature)} bytes")
    return "\n".join(lines) + "\n"
