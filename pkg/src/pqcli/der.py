"""Strict DER encoder/decoder for the ASN.1 shapes certificates need.

Values are immutable DerValue trees. The decoder accepts exactly canonical
DER: definite minimal lengths, minimal tag and OID subidentifier encodings,
primitive/constructed form as X.690 prescribes for each universal type, and
canonical BOOLEAN, INTEGER, and BIT STRING content. That strictness is what
makes decode/encode a byte-exact round trip, which the hybrid-certificate
pre-image reconstruction depends on.

BER features (indefinite lengths, constructed strings) are rejected.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field

from .errors import BadTag, BadValue, NonCanonicalLength, Truncated, TrailingBytes
from .oids import ObjectIdentifier

# Tag classes
UNIVERSAL = 0x00
APPLICATION = 0x40
CONTEXT = 0x80
PRIVATE = 0xC0

# Universal tag numbers
BOOLEAN = 0x01
INTEGER = 0x02
BIT_STRING = 0x03
OCTET_STRING = 0x04
NULL = 0x05
OID = 0x06
UTF8_STRING = 0x0C
SEQUENCE = 0x10
SET = 0x11
PRINTABLE_STRING = 0x13
IA5_STRING = 0x16
UTC_TIME = 0x17
GENERALIZED_TIME = 0x18

# Universal tags that X.690 requires to be primitive / constructed in DER.
_MUST_BE_PRIMITIVE = frozenset({
    BOOLEAN, INTEGER, BIT_STRING, OCTET_STRING, NULL, OID,
    UTF8_STRING, PRINTABLE_STRING, IA5_STRING, UTC_TIME, GENERALIZED_TIME,
    0x0A,  # ENUMERATED
})
_MUST_BE_CONSTRUCTED = frozenset({SEQUENCE, SET})


@dataclass(frozen=True)
class DerValue:
    """One ASN.1 value: primitive content bytes or constructed children."""

    tag: int
    cls: int = UNIVERSAL
    constructed: bool = False
    content: bytes = b""
    children: tuple["DerValue", ...] = field(default_factory=tuple)

    def __repr__(self) -> str:
        kind = f"tag={self.tag:#x}" if self.cls == UNIVERSAL else f"cls={self.cls:#x},tag={self.tag}"
        if self.constructed:
            return f"DerValue({kind}, children={list(self.children)!r})"
        return f"DerValue({kind}, content={self.content.hex()!r})"

    # -- typed accessors ------------------------------------------------

    def expect(self, tag: int, cls: int = UNIVERSAL) -> "DerValue":
        if self.tag != tag or self.cls != cls:
            raise BadTag(f"expected tag {tag:#x} (class {cls:#x}), got {self.tag:#x} (class {self.cls:#x})")
        return self

    def as_int(self) -> int:
        self.expect(INTEGER)
        return int.from_bytes(self.content, "big", signed=True)

    def as_bool(self) -> bool:
        self.expect(BOOLEAN)
        return self.content != b"\x00"

    def as_oid(self) -> ObjectIdentifier:
        self.expect(OID)
        return ObjectIdentifier.decode_content(self.content)

    def as_bits(self) -> bytes:
        """BIT STRING payload; only the 0-unused-bits form this tool emits."""
        self.expect(BIT_STRING)
        if not self.content or self.content[0] != 0:
            raise BadValue("expected BIT STRING with zero unused bits")
        return self.content[1:]

    def as_octets(self) -> bytes:
        self.expect(OCTET_STRING)
        return self.content

    def as_text(self) -> str:
        if self.tag == UTF8_STRING:
            return self.content.decode("utf-8")
        if self.tag in (PRINTABLE_STRING, IA5_STRING):
            return self.content.decode("ascii")
        raise BadTag(f"not a supported string tag: {self.tag:#x}")


# -- constructors -------------------------------------------------------

def seq(*children: DerValue) -> DerValue:
    return DerValue(SEQUENCE, constructed=True, children=tuple(children))


def set_of(*children: DerValue) -> DerValue:
    return DerValue(SET, constructed=True, children=tuple(children))


def integer(value: int) -> DerValue:
    length = max(1, (value.bit_length() + 8) // 8) if value >= 0 else ((value + 1).bit_length() + 8) // 8 or 1
    return DerValue(INTEGER, content=value.to_bytes(length, "big", signed=True))


def boolean(value: bool) -> DerValue:
    return DerValue(BOOLEAN, content=b"\xff" if value else b"\x00")


def null() -> DerValue:
    return DerValue(NULL)


def oid_value(value: ObjectIdentifier) -> DerValue:
    return DerValue(OID, content=value.encode_content())


def octet_string(data: bytes) -> DerValue:
    return DerValue(OCTET_STRING, content=bytes(data))


def bit_string(data: bytes, unused: int = 0) -> DerValue:
    if not 0 <= unused <= 7:
        raise BadValue("unused bit count must be in 0..7")
    if unused and not data:
        raise BadValue("empty BIT STRING cannot have unused bits")
    return DerValue(BIT_STRING, content=bytes([unused]) + bytes(data))


def utf8(text: str) -> DerValue:
    return DerValue(UTF8_STRING, content=text.encode("utf-8"))


def printable(text: str) -> DerValue:
    return DerValue(PRINTABLE_STRING, content=text.encode("ascii"))


def ia5(text: str) -> DerValue:
    return DerValue(IA5_STRING, content=text.encode("ascii"))


def explicit(tag: int, child: DerValue, cls: int = CONTEXT) -> DerValue:
    """EXPLICIT context (or other class) tag wrapping one child."""
    return DerValue(tag, cls=cls, constructed=True, children=(child,))


def encode_time(moment: datetime.datetime) -> DerValue:
    """UTCTime below 2050, GeneralizedTime from 2050 on (X.509 convention)."""
    moment = normalize_time(moment)
    if 1950 <= moment.year < 2050:
        text = moment.strftime("%y%m%d%H%M%SZ")
        return DerValue(UTC_TIME, content=text.encode("ascii"))
    text = moment.strftime("%Y%m%d%H%M%SZ")
    return DerValue(GENERALIZED_TIME, content=text.encode("ascii"))


def decode_time(value: DerValue) -> datetime.datetime:
    text = value.content.decode("ascii", errors="replace")
    try:
        if value.tag == UTC_TIME:
            if len(text) != 13 or not text.endswith("Z"):
                raise ValueError(text)
            parsed = datetime.datetime.strptime(text, "%y%m%d%H%M%SZ")
            # UTCTime two-digit years: 50..99 -> 19xx, 00..49 -> 20xx
            if parsed.year >= 2050:
                parsed = parsed.replace(year=parsed.year - 100)
        elif value.tag == GENERALIZED_TIME:
            if len(text) != 15 or not text.endswith("Z"):
                raise ValueError(text)
            parsed = datetime.datetime.strptime(text, "%Y%m%d%H%M%SZ")
        else:
            raise BadTag(f"not a time tag: {value.tag:#x}")
    except ValueError:
        raise BadValue(f"malformed time string {text!r}") from None
    return parsed.replace(tzinfo=datetime.timezone.utc)


def normalize_time(moment: datetime.datetime) -> datetime.datetime:
    """UTC, second resolution: the precision the encodings carry."""
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=datetime.timezone.utc)
    return moment.astimezone(datetime.timezone.utc).replace(microsecond=0)


# -- encoding -----------------------------------------------------------

def _encode_tag(value: DerValue) -> bytes:
    first = value.cls | (0x20 if value.constructed else 0)
    if value.tag < 0x1F:
        return bytes([first | value.tag])
    out = [first | 0x1F]
    chunk = [value.tag & 0x7F]
    rest = value.tag >> 7
    while rest:
        chunk.append((rest & 0x7F) | 0x80)
        rest >>= 7
    out.extend(reversed(chunk))
    return bytes(out)


def _encode_length(length: int) -> bytes:
    if length < 0x80:
        return bytes([length])
    payload = length.to_bytes((length.bit_length() + 7) // 8, "big")
    return bytes([0x80 | len(payload)]) + payload


def encode(value: DerValue) -> bytes:
    """Canonical DER bytes for a DerValue tree."""
    if value.constructed:
        body = b"".join(encode(child) for child in value.children)
    else:
        body = value.content
    return _encode_tag(value) + _encode_length(len(body)) + body


# -- decoding -----------------------------------------------------------

def _read_tag(data: bytes, pos: int, end: int) -> tuple[int, int, bool, int]:
    if pos >= end:
        raise Truncated("input ends before a tag")
    first = data[pos]
    pos += 1
    cls = first & 0xC0
    constructed = bool(first & 0x20)
    number = first & 0x1F
    if number == 0x1F:
        number = 0
        started = False
        while True:
            if pos >= end:
                raise Truncated("input ends inside a long-form tag")
            byte = data[pos]
            pos += 1
            if not started and byte == 0x80:
                raise BadTag("non-minimal long-form tag")
            started = True
            number = (number << 7) | (byte & 0x7F)
            if number > 0xFFFFFFFF:
                raise BadTag("tag number too large")
            if not byte & 0x80:
                break
        if number < 0x1F:
            raise BadTag("long-form tag for a small tag number")
    return number, cls, constructed, pos


def _read_length(data: bytes, pos: int, end: int) -> tuple[int, int]:
    if pos >= end:
        raise Truncated("input ends before a length")
    first = data[pos]
    pos += 1
    if first < 0x80:
        return first, pos
    count = first & 0x7F
    if count == 0:
        raise NonCanonicalLength("indefinite length is not DER")
    if count == 0x7F:
        raise NonCanonicalLength("reserved length octet 0xFF")
    if pos + count > end:
        raise Truncated("input ends inside a length")
    payload = data[pos:pos + count]
    pos += count
    if payload[0] == 0:
        raise NonCanonicalLength("length has a leading zero octet")
    length = int.from_bytes(payload, "big")
    if length < 0x80:
        raise NonCanonicalLength("long form used for a short length")
    return length, pos


def _check_primitive_content(tag: int, content: bytes) -> None:
    if tag == BOOLEAN:
        if len(content) != 1:
            raise BadValue("BOOLEAN must be one octet")
        if content[0] not in (0x00, 0xFF):
            raise BadValue("BOOLEAN must be 0x00 or 0xFF in DER")
    elif tag == INTEGER:
        if not content:
            raise BadValue("INTEGER with empty content")
        if len(content) > 1:
            if content[0] == 0x00 and content[1] < 0x80:
                raise BadValue("INTEGER has a redundant leading 0x00")
            if content[0] == 0xFF and content[1] >= 0x80:
                raise BadValue("INTEGER has a redundant leading 0xFF")
    elif tag == NULL:
        if content:
            raise BadValue("NULL with content")
    elif tag == BIT_STRING:
        if not content:
            raise BadValue("BIT STRING needs an unused-bits octet")
        unused = content[0]
        if unused > 7:
            raise BadValue("BIT STRING unused-bit count out of range")
        if len(content) == 1 and unused != 0:
            raise BadValue("empty BIT STRING with nonzero unused bits")
        if unused and content[-1] & ((1 << unused) - 1):
            raise BadValue("BIT STRING padding bits must be zero")
    elif tag == OID:
        ObjectIdentifier.decode_content(content)


def _read_value(data: bytes, pos: int, end: int) -> tuple[DerValue, int]:
    tag, cls, constructed, pos = _read_tag(data, pos, end)
    length, pos = _read_length(data, pos, end)
    if pos + length > end:
        raise Truncated("content extends past end of input")
    content_end = pos + length
    if cls == UNIVERSAL:
        if constructed and tag in _MUST_BE_PRIMITIVE:
            raise BadTag(f"tag {tag:#x} must be primitive in DER")
        if not constructed and tag in _MUST_BE_CONSTRUCTED:
            raise BadTag(f"tag {tag:#x} must be constructed")
    if constructed:
        children = []
        while pos < content_end:
            child, pos = _read_value(data, pos, content_end)
            children.append(child)
        return DerValue(tag, cls=cls, constructed=True, children=tuple(children)), content_end
    content = bytes(data[pos:content_end])
    if cls == UNIVERSAL:
        _check_primitive_content(tag, content)
    return DerValue(tag, cls=cls, content=content), content_end


def decode(data: bytes) -> DerValue:
    """Decode exactly one DER value covering the whole input."""
    value, pos = _read_value(data, 0, len(data))
    if pos != len(data):
        raise TrailingBytes(f"{len(data) - pos} unconsumed bytes after value")
    return value


def split_tlv(data: bytes, pos: int = 0) -> tuple[int, int]:
    """Bounds (start, end) of the TLV beginning at pos, without decoding it.

    Used to slice signed sub-structures (like a TBS) byte-exactly out of a
    larger encoding.
    """
    end = len(data)
    _, _, _, after_tag = _read_tag(data, pos, end)
    length, after_len = _read_length(data, after_tag, end)
    if after_len + length > end:
        raise Truncated("content extends past end of input")
    return pos, after_len + length


def content_span(data: bytes, pos: int = 0) -> tuple[int, int]:
    """(content_start, content_end) of the TLV at pos."""
    end = len(data)
    _, _, _, after_tag = _read_tag(data, pos, end)
    length, after_len = _read_length(data, after_tag, end)
    if after_len + length > end:
        raise Truncated("content extends past end of input")
    return after_len, after_len + length


def wrap_sequence(content: bytes) -> bytes:
    """SEQUENCE header around already-encoded content bytes."""
    return b"\x30" + _encode_length(len(content)) + content
