"""X.501 distinguished names and the "CN=...,O=..." text syntax for them."""

from __future__ import annotations

from dataclasses import dataclass

from . import der
from .errors import BadTag, EmptyValue, UnknownAttributeKey
from .oids import (
    AT_COMMON_NAME,
    AT_COUNTRY,
    AT_LOCALITY,
    AT_ORG_UNIT,
    AT_ORGANIZATION,
    AT_SERIAL_NUMBER,
    AT_STATE,
    ObjectIdentifier,
)

# key -> (attribute OID, use PrintableString instead of UTF8String)
_ATTRIBUTES: dict[str, tuple[ObjectIdentifier, bool]] = {
    "CN": (AT_COMMON_NAME, False),
    "C": (AT_COUNTRY, True),
    "ST": (AT_STATE, False),
    "L": (AT_LOCALITY, False),
    "O": (AT_ORGANIZATION, False),
    "OU": (AT_ORG_UNIT, False),
    "SERIALNUMBER": (AT_SERIAL_NUMBER, False),
}

_KEY_BY_OID = {oid: key for key, (oid, _) in _ATTRIBUTES.items()}


@dataclass(frozen=True)
class NameAttribute:
    oid: ObjectIdentifier
    value: str
    printable: bool = False

    @property
    def key(self) -> str:
        return _KEY_BY_OID.get(self.oid, self.oid.dotted())


@dataclass(frozen=True)
class DistinguishedName:
    """An ordered sequence of single-attribute RDNs."""

    attributes: tuple[NameAttribute, ...] = ()

    def __str__(self) -> str:
        return ",".join(f"{attr.key}={attr.value}" for attr in self.attributes)

    def to_der_value(self) -> der.DerValue:
        rdns = []
        for attr in self.attributes:
            string = der.printable(attr.value) if attr.printable else der.utf8(attr.value)
            rdns.append(der.set_of(der.seq(der.oid_value(attr.oid), string)))
        return der.seq(*rdns)

    @classmethod
    def from_der_value(cls, value: der.DerValue) -> "DistinguishedName":
        value.expect(der.SEQUENCE)
        attrs = []
        for rdn in value.children:
            rdn.expect(der.SET)
            for atv in rdn.children:
                atv.expect(der.SEQUENCE)
                if len(atv.children) != 2:
                    raise BadTag("AttributeTypeAndValue needs type and value")
                oid = atv.children[0].as_oid()
                text_value = atv.children[1]
                attrs.append(NameAttribute(
                    oid,
                    text_value.as_text(),
                    printable=text_value.tag == der.PRINTABLE_STRING,
                ))
        return cls(tuple(attrs))


def parse_name(text: str) -> DistinguishedName:
    """Parse "KEY=VALUE,KEY=VALUE" into a name. Keys are case-insensitive."""
    attrs = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        key = key.strip().upper()
        value = value.strip()
        if not sep or key not in _ATTRIBUTES:
            raise UnknownAttributeKey(f"unknown name attribute {key or part!r}")
        if not value:
            raise EmptyValue(f"attribute {key} has an empty value")
        oid, is_printable = _ATTRIBUTES[key]
        attrs.append(NameAttribute(oid, value, printable=is_printable))
    return DistinguishedName(tuple(attrs))
