"""Corpus directories, file-level verification and the JSON report format."""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Tuple

from .certio import load_certificate, rational_json
from .errors import CertificateSyntaxError, SchemaError
from .fibration import FAIL, SKIPPED, STAGES, StageResult, VerificationReport, verify_certificate

# Lemma labels a certificate may name.
LEMMAS = (
    "E",
    "D",
    "A7",
    "A4",
    "A4+A3",
    "A4+A2+A1",
    "A4+A1",
    "A4+A2",
    "A4+2A1",
    "A5",
    "A5+A1",
    "A5+2A1",
    "A5+A2",
    "A6",
)

SCHEMA_VERSION = 1
SUFFIX = ".cert.json"


def default_corpus() -> Path:
    return Path(os.environ.get("CYLCERT_CORPUS", "corpus"))


def corpus_files(directory) -> List[Path]:
    return sorted(Path(directory).glob("*" + SUFFIX))


def schema_failure(name: str, msg: str) -> VerificationReport:
    rep = VerificationReport(name)
    rep.stages.append(StageResult("schema", FAIL, msg))
    rep.stages.extend(StageResult(s, SKIPPED) for s in STAGES[1:])
    return rep


def verify_file(path) -> VerificationReport:
    """Verify one file; schema violations come back as a failed schema stage.

    Unreadable files and malformed JSON raise, so callers can tell usage
    errors from bad certificates.
    """
    path = Path(path)
    try:
        cert = load_certificate(path)
    except SchemaError as exc:
        return schema_failure(path.name, str(exc))
    return verify_certificate(cert)


def _verify_lenient(path: Path) -> VerificationReport:
    try:
        return verify_file(path)
    except (OSError, CertificateSyntaxError) as exc:
        return schema_failure(path.name, str(exc))


def verify_directory(directory, workers: int = 8) -> List[Tuple[Path, VerificationReport]]:
    """Verify every certificate in ``directory``; results are sorted by file name."""
    files = corpus_files(directory)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        reports = list(pool.map(_verify_lenient, files))
    return list(zip(files, reports))


def report_document(rep: VerificationReport, witness: bool = True) -> Dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "id": rep.cert_id,
        "overall": rep.overall,
        "first_failure": rep.first_failure,
        "stages": [{"stage": r.stage, "status": r.status, "detail": r.detail} for r in rep.stages],
    }
    if witness:
        doc["witness"] = None if rep.witness is None else {k: rational_json(v) for k, v in rep.witness.items()}
    if rep.pullback is not None:
        doc["pullback"] = str(rep.pullback)
    if rep.hirzebruch is not None:
        doc["hirzebruch"] = {"n": rep.hirzebruch.n, "contracted": list(rep.hirzebruch.steps)}
    return doc


def dumps_report(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)
