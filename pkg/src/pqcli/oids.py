"""Object identifiers: value type, content-octet codec, and well-known arcs.

ObjectIdentifier is an immutable sequence of arcs with the canonical
base-128 content encoding required by DER. The tables at the bottom give
display names for OIDs this tool knows about; everything else renders in
dotted form.
"""

from __future__ import annotations

from .errors import BadValue, Truncated


class ObjectIdentifier:
    """An OID as a tuple of non-negative integer arcs.

    Hashable and comparable; usable as a dict key. Accepts a dotted string,
    an iterable of ints, or another ObjectIdentifier.
    """

    __slots__ = ("arcs",)

    def __init__(self, value):
        if isinstance(value, ObjectIdentifier):
            arcs = value.arcs
        elif isinstance(value, str):
            try:
                arcs = tuple(int(part) for part in value.split("."))
            except ValueError:
                raise BadValue(f"not a dotted OID: {value!r}") from None
        else:
            arcs = tuple(int(a) for a in value)
        if len(arcs) < 2:
            raise BadValue("OID needs at least two arcs")
        if any(a < 0 for a in arcs):
            raise BadValue("OID arcs must be non-negative")
        if arcs[0] > 2:
            raise BadValue("first OID arc must be 0, 1, or 2")
        if arcs[0] < 2 and arcs[1] >= 40:
            raise BadValue("second OID arc must be < 40 when the first is 0 or 1")
        object.__setattr__(self, "arcs", arcs)

    def __setattr__(self, name, value):
        raise AttributeError("ObjectIdentifier is immutable")

    def dotted(self) -> str:
        return ".".join(str(a) for a in self.arcs)

    def __str__(self) -> str:
        return self.dotted()

    def __repr__(self) -> str:
        return f"ObjectIdentifier({self.dotted()!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ObjectIdentifier) and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash(self.arcs)

    def __lt__(self, other: "ObjectIdentifier") -> bool:
        return self.arcs < other.arcs

    def encode_content(self) -> bytes:
        """Content octets of the DER encoding (no tag or length)."""
        out = bytearray()
        first = self.arcs[0] * 40 + self.arcs[1]
        for arc in (first,) + self.arcs[2:]:
            chunk = [arc & 0x7F]
            arc >>= 7
            while arc:
                chunk.append((arc & 0x7F) | 0x80)
                arc >>= 7
            out.extend(reversed(chunk))
        return bytes(out)

    @classmethod
    def decode_content(cls, data: bytes) -> "ObjectIdentifier":
        """Parse content octets; rejects non-minimal base-128 subidentifiers."""
        if not data:
            raise BadValue("empty OID content")
        arcs: list[int] = []
        value = 0
        pending = False
        for i, byte in enumerate(data):
            if not pending and byte == 0x80:
                raise BadValue("non-minimal OID subidentifier")
            value = (value << 7) | (byte & 0x7F)
            pending = bool(byte & 0x80)
            if not pending:
                arcs.append(value)
                value = 0
        if pending:
            raise Truncated("OID ends inside a subidentifier")
        first = arcs[0]
        if first < 40:
            head = (0, first)
        elif first < 80:
            head = (1, first - 40)
        else:
            head = (2, first - 80)
        return cls(head + tuple(arcs[1:]))


def oid(dotted: str) -> ObjectIdentifier:
    return ObjectIdentifier(dotted)


# Signature algorithms
SHA256_WITH_RSA = oid("1.2.840.113549.1.1.11")
ECDSA_WITH_SHA256 = oid("1.2.840.10045.4.3.2")
ML_DSA_44 = oid("2.16.840.1.101.3.4.3.17")
ML_DSA_65 = oid("2.16.840.1.101.3.4.3.18")
ML_DSA_87 = oid("2.16.840.1.101.3.4.3.19")
SLH_DSA_SHAKE_128S = oid("2.16.840.1.101.3.4.3.26")
SLH_DSA_SHAKE_128F = oid("2.16.840.1.101.3.4.3.27")
SLH_DSA_SHAKE_192S = oid("2.16.840.1.101.3.4.3.28")
SLH_DSA_SHAKE_192F = oid("2.16.840.1.101.3.4.3.29")
SLH_DSA_SHAKE_256S = oid("2.16.840.1.101.3.4.3.30")
SLH_DSA_SHAKE_256F = oid("2.16.840.1.101.3.4.3.31")
# Interim composite OID used until IANA issues standardized ones
COMPOSITE_INTERIM = oid("1.3.6.1.4.1.18227.2.1")

# Key algorithms (SubjectPublicKeyInfo)
RSA_ENCRYPTION = oid("1.2.840.113549.1.1.1")
EC_PUBLIC_KEY = oid("1.2.840.10045.2.1")
CURVE_P256 = oid("1.2.840.10045.3.1.7")
CURVE_P384 = oid("1.3.132.0.34")
CURVE_P521 = oid("1.3.132.0.35")

# Name attributes
AT_COMMON_NAME = oid("2.5.4.3")
AT_SERIAL_NUMBER = oid("2.5.4.5")
AT_COUNTRY = oid("2.5.4.6")
AT_LOCALITY = oid("2.5.4.7")
AT_STATE = oid("2.5.4.8")
AT_ORGANIZATION = oid("2.5.4.10")
AT_ORG_UNIT = oid("2.5.4.11")

# Certificate extensions
EXT_SUBJECT_KEY_ID = oid("2.5.29.14")
EXT_KEY_USAGE = oid("2.5.29.15")
EXT_SUBJECT_ALT_NAME = oid("2.5.29.17")
EXT_BASIC_CONSTRAINTS = oid("2.5.29.19")
EXT_EXT_KEY_USAGE = oid("2.5.29.37")
EXT_AUTHORITY_KEY_ID = oid("2.5.29.35")
# Alternative public key / signature extensions (ITU-T X.509 arc)
EXT_SUBJECT_ALT_PUBLIC_KEY_INFO = oid("2.5.29.72")
EXT_ALT_SIGNATURE_ALGORITHM = oid("2.5.29.73")
EXT_ALT_SIGNATURE_VALUE = oid("2.5.29.74")
# Delta certificate descriptor (chameleon base certificates)
EXT_DELTA_CERTIFICATE_DESCRIPTOR = oid("2.16.840.1.114027.80.6.1")
# PKCS#9 extensionRequest attribute for CSRs
ATTR_EXTENSION_REQUEST = oid("1.2.840.113549.1.9.14")

ALGORITHM_NAMES: dict[ObjectIdentifier, str] = {
    SHA256_WITH_RSA: "sha256WithRSAEncryption",
    ECDSA_WITH_SHA256: "ecdsa-with-SHA256",
    ML_DSA_44: "ML-DSA-44",
    ML_DSA_65: "ML-DSA-65",
    ML_DSA_87: "ML-DSA-87",
    SLH_DSA_SHAKE_128S: "SLH-DSA-SHAKE-128s",
    SLH_DSA_SHAKE_128F: "SLH-DSA-SHAKE-128f",
    SLH_DSA_SHAKE_192S: "SLH-DSA-SHAKE-192s",
    SLH_DSA_SHAKE_192F: "SLH-DSA-SHAKE-192f",
    SLH_DSA_SHAKE_256S: "SLH-DSA-SHAKE-256s",
    SLH_DSA_SHAKE_256F: "SLH-DSA-SHAKE-256f",
    COMPOSITE_INTERIM: "composite-signature",
    RSA_ENCRYPTION: "rsaEncryption",
    EC_PUBLIC_KEY: "id-ecPublicKey",
    CURVE_P256: "prime256v1",
    CURVE_P384: "secp384r1",
    CURVE_P521: "secp521r1",
}

EXTENSION_NAMES: dict[ObjectIdentifier, str] = {
    EXT_SUBJECT_KEY_ID: "subjectKeyIdentifier",
    EXT_KEY_USAGE: "keyUsage",
    EXT_SUBJECT_ALT_NAME: "subjectAltName",
    EXT_BASIC_CONSTRAINTS: "basicConstraints",
    EXT_EXT_KEY_USAGE: "extendedKeyUsage",
    EXT_AUTHORITY_KEY_ID: "authorityKeyIdentifier",
    EXT_SUBJECT_ALT_PUBLIC_KEY_INFO: "subjectAltPublicKeyInfo",
    EXT_ALT_SIGNATURE_ALGORITHM: "altSignatureAlgorithm",
    EXT_ALT_SIGNATURE_VALUE: "altSignatureValue",
    EXT_DELTA_CERTIFICATE_DESCRIPTOR: "deltaCertificateDescriptor",
}

ATTRIBUTE_NAMES: dict[ObjectIdentifier, str] = {
    AT_COMMON_NAME: "CN",
    AT_SERIAL_NUMBER: "SERIALNUMBER",
    AT_COUNTRY: "C",
    AT_LOCALITY: "L",
    AT_STATE: "ST",
    AT_ORGANIZATION: "O",
    AT_ORG_UNIT: "OU",
}


def algorithm_name(value: ObjectIdentifier) -> str:
    """Display name for an algorithm OID, falling back to dotted form."""
    name = ALGORITHM_NAMES.get(value)
    return name if name is not None else value.dotted()


def extension_name(value: ObjectIdentifier) -> str:
    name = EXTENSION_NAMES.get(value)
    return name if name is not None else value.dotted()
