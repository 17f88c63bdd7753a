"""pqcli command line: cert, key, csr, view, verify.

Exit codes are stable: 0 success, 2 usage or algorithm-spec errors, 3 file
IO, 4 parse failures, 5 native signature invalid, 6 alternative signature
invalid, 7 composite signature invalid. All diagnostics go to stderr;
artifacts and reports go to stdout. No prompts anywhere.
"""

from __future__ import annotations

import argparse
import pathlib
import sys

from . import algs, catalyst, pem, x509
from .errors import (
    DerError,
    KeyMismatch,
    MalformedAltExtension,
    MalformedPem,
    NoDescriptor,
    NotACertificate,
    NotACsr,
    PqcliError,
    ReconstructionMismatch,
)
from .names import parse_name

_PARSE_ERRORS = (NotACertificate, NotACsr, MalformedPem, DerError, KeyMismatch,
                 MalformedAltExtension, NoDescriptor, ReconstructionMismatch)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqcli", allow_abbrev=False,
        description="Generate, inspect, and verify classical, post-quantum, "
                    "hybrid, and composite X.509 certificates.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    cert = sub.add_parser(
        "cert", allow_abbrev=False,
        help="issue a self-signed certificate with a fresh key")
    cert.add_argument("-newkey", required=True, metavar="SPEC",
                      help="algorithm spec; NATIVE,ALT adds the alternative-"
                           "extension pair, A_B fuses a composite")
    cert.add_argument("-subj", metavar="NAME",
                      help=f'subject (default "{x509.DEFAULT_SUBJECT}")')
    cert.add_argument("-days", type=int, default=x509.DEFAULT_DAYS, metavar="N",
                      help="validity in days (default %(default)s)")
    cert.add_argument("-out", metavar="PATH", help="certificate output (default certificate.pem)")
    cert.add_argument("-keyout", metavar="PATH", help="key output (default private_key.pem)")
    cert.add_argument("--der", action="store_true", help="write DER instead of PEM")
    cert.set_defaults(func=cmd_cert)

    key = sub.add_parser("key", allow_abbrev=False, help="generate a keypair")
    key.add_argument("-t", required=True, metavar="SPEC", help="algorithm spec")
    key.add_argument("-out", metavar="PATH", help="private key output (default private_key.pem)")
    key.add_argument("--der", action="store_true", help="write DER instead of PEM")
    key.set_defaults(func=cmd_key)

    csr = sub.add_parser("csr", allow_abbrev=False,
                         help="build a certificate signing request")
    source = csr.add_mutually_exclusive_group(required=True)
    source.add_argument("-newkey", metavar="SPEC", help="generate a fresh key")
    source.add_argument("-key", metavar="PATH", help="use an existing private key")
    csr.add_argument("-subj", required=True, metavar="NAME", help="subject name")
    csr.add_argument("-out", metavar="PATH", help="request output (default csr.pem)")
    csr.add_argument("-keyout", metavar="PATH",
                     help="key output with -newkey (default private_key.pem)")
    csr.add_argument("--der", action="store_true", help="write DER instead of PEM")
    csr.set_defaults(func=cmd_csr)

    view = sub.add_parser("view", allow_abbrev=False,
                          help="print a certificate or request as text")
    view.add_argument("path", metavar="PATH")
    view.set_defaults(func=cmd_view)

    verify = sub.add_parser("verify", allow_abbrev=False,
                            help="check every signature path of a certificate")
    verify.add_argument("-CAfile", metavar="PATH",
                        help="issuer certificate (default: the certificate itself)")
    verify.add_argument("path", metavar="PATH")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code in (None, 0):
            return 0
        return code if isinstance(code, int) else 2
    try:
        registry = algs.Registry.from_environment()
        return args.func(args, registry)
    except _PARSE_ERRORS as exc:
        print(f"pqcli: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"pqcli: {exc}", file=sys.stderr)
        return 3
    except PqcliError as exc:
        # spec grammar, bad parameters, name syntax, issuance conflicts
        print(f"pqcli: {exc}", file=sys.stderr)
        return 2


# -- output helpers -----------------------------------------------------

def _write_certificate(path: pathlib.Path, cert: x509.CertificateDocument,
                       as_der: bool) -> None:
    if as_der:
        path.write_bytes(cert.emit())
    else:
        pem.write_pem(path, pem.LABEL_CERTIFICATE, cert.emit())


def _write_keys(path: pathlib.Path, records, as_der: bool) -> list[pathlib.Path]:
    """One file for PEM (multiple blocks); DER splits extra keys into
    .altN side files since raw DER has no framing for several keys."""
    if not as_der:
        pem.write_private_key_blocks(
            path, [(pem.LABEL_PRIVATE_KEY, r.private) for r in records])
        return [path]
    paths = []
    for i, record in enumerate(records):
        target = path if i == 0 else path.with_name(
            f"{path.stem}.alt{i if len(records) > 2 else ''}{path.suffix}")
        fd = pem.open_private(target)
        with fd:
            fd.write(record.private)
        paths.append(target)
    return paths


def _read_first_block(path: pathlib.Path, label: str) -> bytes:
    data = path.read_bytes()
    if b"-----BEGIN" in data:
        return pem.first_block(pem.decode_pem(data.decode("utf-8", "replace")), label)
    return data


# -- commands -----------------------------------------------------------

def cmd_cert(args, registry: algs.Registry) -> int:
    subject = parse_name(args.subj if args.subj else x509.DEFAULT_SUBJECT)
    validity = x509.default_validity(args.days)
    out = pathlib.Path(args.out or "certificate.pem")
    keyout = pathlib.Path(args.keyout or "private_key.pem")

    if "," in args.newkey:
        parts = [p.strip() for p in args.newkey.split(",")]
        if len(parts) != 2 or not all(parts):
            print("pqcli: hybrid -newkey takes exactly two comma-joined specs",
                  file=sys.stderr)
            return 2
        native_spec = algs.parse_alg_spec(parts[0])
        alt_spec = algs.parse_alg_spec(parts[1])
        native_key = algs.generate_keypair(native_spec, registry=registry)
        alt_key = algs.generate_keypair(alt_spec, registry=registry)
        tbs = x509.build_tbs(
            subject, subject, algs.spki_for_key(native_key, registry=registry),
            validity, algs.signature_algorithm_for(native_spec, registry))
        cert = catalyst.issue_catalyst(tbs, native_key, alt_key, registry=registry)
        records = [native_key, alt_key]
        kind = f"hybrid {native_spec}+{alt_spec}"
    else:
        spec = algs.parse_alg_spec(args.newkey)
        keypair = algs.generate_keypair(spec, registry=registry)
        tbs = x509.build_tbs(
            subject, subject, algs.spki_for_key(keypair, registry=registry),
            validity, algs.signature_algorithm_for(spec, registry))
        cert = x509.sign_certificate(tbs, keypair, registry)
        records = [keypair]
        kind = "composite " + str(spec) if spec.family == algs.FAMILY_COMPOSITE else str(spec)

    _write_certificate(out, cert, args.der)
    key_paths = _write_keys(keyout, records, args.der)
    print(f"wrote {out} and {', '.join(str(p) for p in key_paths)} "
          f"({kind}, self-signed, {args.days} days)")
    return 0


def cmd_key(args, registry: algs.Registry) -> int:
    spec = algs.parse_alg_spec(args.t)
    keypair = algs.generate_keypair(spec, registry=registry)
    out = pathlib.Path(args.out or "private_key.pem")
    pub = out.with_suffix(".pub")
    spki_der = algs.spki_for_key(keypair, registry=registry).der
    if args.der:
        with pem.open_private(out) as handle:
            handle.write(keypair.private)
        pub.write_bytes(spki_der)
    else:
        pem.write_private_key(out, keypair.private)
        pem.write_public_key(pub, spki_der)
    print(f"wrote {out} and {pub} ({spec})")
    return 0


def cmd_csr(args, registry: algs.Registry) -> int:
    subject = parse_name(args.subj)
    out = pathlib.Path(args.out or "csr.pem")
    if args.newkey:
        spec = algs.parse_alg_spec(args.newkey)
        keypair = algs.generate_keypair(spec, registry=registry)
        keyout = pathlib.Path(args.keyout or "private_key.pem")
        key_paths = _write_keys(keyout, [keypair], args.der)
    else:
        blob = _read_first_block(pathlib.Path(args.key), pem.LABEL_PRIVATE_KEY)
        keypair = algs.load_private_key(blob, registry)
        key_paths = []
    doc = x509.build_csr(subject, keypair, registry=registry)
    if args.der:
        out.write_bytes(doc.emit())
    else:
        pem.write_pem(out, pem.LABEL_CSR, doc.emit())
    extra = f" and {key_paths[0]}" if key_paths else ""
    print(f"wrote {out}{extra} ({keypair.spec}, subject {subject})")
    return 0


def cmd_view(args, registry: algs.Registry) -> int:
    data = pathlib.Path(args.path).read_bytes()
    if b"-----BEGIN" in data:
        labels = [label for label, _ in pem.decode_pem(data.decode("utf-8", "replace"))]
        if pem.LABEL_CSR in labels and pem.LABEL_CERTIFICATE not in labels:
            print(x509.render_csr_text(x509.parse_csr(data), registry), end="")
        else:
            print(x509.render_text(x509.parse_certificate(data), registry), end="")
        return 0
    try:
        cert = x509.parse_certificate(data)
    except NotACertificate:
        # fall back to request parsing for raw DER inputs
        try:
            doc = x509.parse_csr(data)
        except NotACsr:
            raise NotACertificate(
                f"{args.path} is neither a certificate nor a request") from None
        print(x509.render_csr_text(doc, registry), end="")
        return 0
    print(x509.render_text(cert, registry), end="")
    return 0


def cmd_verify(args, registry: algs.Registry) -> int:
    cert = x509.parse_certificate(pathlib.Path(args.path).read_bytes())
    alt_issuer_spki = None
    if args.CAfile:
        ca = x509.parse_certificate(pathlib.Path(args.CAfile).read_bytes())
        issuer_spki = ca.tbs.spki
        try:
            triple = catalyst.CatalystExtensionTriple.from_certificate(ca)
        except MalformedAltExtension:
            triple = None
        if triple is not None:
            alt_issuer_spki = triple.alt_spki
    else:
        issuer_spki = cert.tbs.spki

    report = x509.verify_certificate(cert, issuer_spki, registry=registry,
                                     alt_issuer_spki=alt_issuer_spki)

    if report.composite_components is not None:
        issuer_spec = algs.spec_from_spki(issuer_spki, registry)
        names = ([str(c) for c in issuer_spec.components]
                 if issuer_spec is not None and issuer_spec.components
                 else [])
        if not report.composite_components:
            print("composite signature: invalid (structural)")
        for i, verdict in enumerate(report.composite_components):
            label = f" ({names[i]})" if i < len(names) else ""
            print(f"component {i + 1}{label}: {verdict}")
    else:
        print(f"native signature: {report.native_sig}")
    if report.alt_sig is not None:
        print(f"alt signature: {report.alt_sig}")
    for note in report.chain_notes:
        print(f"warning: {note}", file=sys.stderr)

    if report.composite_components is not None and report.native_sig != x509.VALID:
        return 7
    if report.native_sig != x509.VALID:
        return 5
    if report.alt_sig is not None and report.alt_sig != x509.VALID:
        return 6
    return 0
