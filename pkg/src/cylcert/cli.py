"""Command line: verify, verify-all, derive, pullback."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .certio import load_certificate
from .corpus import SCHEMA_VERSION, default_corpus, dumps_report, report_document, verify_directory, verify_file
from .derive import derive
from .errors import CertificateSyntaxError, NoSolution, SchemaError, Underdetermined
from .fibration import PASS
from .resolution import pullback_ample


def _die(msg: str):
    click.echo(f"error: {msg}", err=True)
    sys.exit(2)


def _load(path):
    try:
        return load_certificate(path)
    except (OSError, CertificateSyntaxError, SchemaError) as exc:
        _die(f"{path}: {exc}")


def _witness_text(w) -> str:
    if w is None:
        return "witness: none"
    return "witness: " + (", ".join(f"{k}={v}" for k, v in w.items()) or "(no parameters)")


def _print_report(rep, witness: bool):
    click.echo(f"{rep.cert_id}: {rep.overall}")
    for r in rep.stages:
        line = f"  {r.stage:15s} {r.status:12s}"
        click.echo((line + " " + r.detail).rstrip())
    if witness:
        click.echo(_witness_text(rep.witness))


@click.group()
def main():
    """Check cylinder certificates for degree-1 du Val del Pezzo surfaces."""


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Machine-readable report.")
@click.option("--witness", is_flag=True, help="Print the effectivity witness.")
def verify(file, as_json, witness):
    """Run the full pipeline on one certificate."""
    try:
        rep = verify_file(file)
    except (OSError, CertificateSyntaxError) as exc:
        _die(f"{file}: {exc}")
    if as_json:
        click.echo(dumps_report(report_document(rep)))
    else:
        _print_report(rep, witness)
    sys.exit(0 if rep.overall == PASS else 1)


@main.command("verify-all")
@click.argument("directory", required=False, type=click.Path(file_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Machine-readable reports.")
@click.option("--witness", is_flag=True, help="Print effectivity witnesses.")
def verify_all(directory, as_json, witness):
    """Verify every *.cert.json in DIRECTORY (default: $CYLCERT_CORPUS or ./corpus)."""
    directory = Path(directory) if directory else default_corpus()
    if not directory.is_dir():
        _die(f"{directory}: not a directory")
    results = verify_directory(directory)
    ok = all(rep.overall == PASS for _, rep in results)
    if as_json:
        docs = [dict(report_document(rep), file=p.name) for p, rep in results]
        click.echo(dumps_report({"schema_version": SCHEMA_VERSION, "ok": ok, "reports": docs}))
    else:
        width = max([len(p.name) for p, _ in results] + [4])
        for p, rep in results:
            line = f"{p.name:{width}s}  {rep.overall:12s} {rep.first_failure or ''}".rstrip()
            if witness:
                line += "  " + _witness_text(rep.witness)
            click.echo(line)
        passed = sum(rep.overall == PASS for _, rep in results)
        click.echo(f"{passed}/{len(results)} passed")
    sys.exit(0 if ok else 1)


@main.command("derive")
@click.argument("file", type=click.Path(dir_okay=False))
def derive_cmd(file):
    """Recompute L over its support and compare with the transcribed L."""
    cert = _load(file)
    try:
        d = derive(cert)
    except (Underdetermined, NoSolution) as exc:
        click.echo(f"{cert.id}: cannot derive: {exc}")
        sys.exit(1)
    click.echo(f"pullback:   {d.pullback}")
    click.echo(f"support:    {' '.join(d.support)}")
    click.echo(f"particular: {d.solution.particular}")
    for i, v in enumerate(d.solution.kernel):
        click.echo(f"kernel[{i}]:  {v}")
    click.echo(f"L - particular: {d.diff}")
    click.echo(f"L in particular + span(kernel): {'yes' if d.agrees else 'no'}")
    sys.exit(0 if d.agrees else 1)


@main.command("pullback")
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
def pullback_cmd(file, as_json):
    """Print the pullback of H to the minimal resolution."""
    cert = _load(file)
    try:
        h = pullback_ample(cert)
    except Exception as exc:  # singular Gram or unknown curve in a hand-written file
        click.echo(f"{cert.id}: {exc}", err=True)
        sys.exit(1)
    if as_json:
        click.echo(dumps_report({"schema_version": SCHEMA_VERSION, "id": cert.id, "pullback": str(h)}))
    else:
        click.echo(str(h))
