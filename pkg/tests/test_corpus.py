import json
from collections import Counter

import pytest

from conftest import LINT, MUTATIONS, corpus_paths
from oracles import lin_parts, nullspace_pairs_zero, pairings, sympy_span_solvable
from cylcert.certio import load_certificate
from cylcert.corpus import LEMMAS, verify_directory, verify_file
from cylcert.derive import derive
from cylcert.fibration import STAGES, verify_certificate

EXPECTED = json.loads((MUTATIONS / "expected.json").read_text())


@pytest.mark.parametrize("path", corpus_paths(), ids=lambda p: p.name)
def test_certificate_passes(path):
    cert = load_certificate(path)
    assert path.name == cert.id + ".cert.json"
    assert cert.lemma in LEMMAS
    rep = verify_certificate(cert)
    assert rep.overall == "Pass", [(r.stage, r.detail) for r in rep.stages if r.status != "Pass"]


def test_corpus_size_per_lemma(corpus):
    count = Counter(c.lemma for c in corpus.values())
    assert len(corpus) >= 50
    assert set(count) == set(LEMMAS)


def test_ids_unique(corpus):
    assert len({c.id for c in corpus.values()}) == len(corpus)


@pytest.mark.parametrize("name, stage", sorted(EXPECTED.items()))
def test_mutation_fails_at_stage(name, stage):
    rep = verify_file(MUTATIONS / name)
    assert rep.overall == "Fail"
    assert rep.first_failure == stage


def test_mutations_cover_every_hard_stage():
    assert set(EXPECTED.values()) == set(STAGES) - {"ample-lint"}
    assert sorted(EXPECTED) == sorted(p.name for p in MUTATIONS.glob("*.cert.json"))


def test_lint_example_warns_but_passes():
    reps = verify_directory(LINT)
    assert reps
    for _, rep in reps:
        assert rep.overall == "Pass"
        assert rep.status("ample-lint") == "Warn"


def test_errata_well_formed(corpus):
    seen = 0
    for cert in corpus.values():
        for e in cert.errata:
            seen += 1
            assert e.location and e.verbatim and e.corrected
            assert e.verbatim != e.corrected
    assert seen > 0


@pytest.mark.parametrize("path", corpus_paths(), ids=lambda p: p.name)
def test_derive_agrees_with_oracle(path):
    cert = load_certificate(path)
    d = derive(cert)
    assert d.agrees
    cfg = cert.cfg
    h_parts = lin_parts(d.pullback)
    l_parts = lin_parts(d.transcribed)
    for part in set(h_parts) | set(l_parts) | {None}:
        kappa = d.pullback.kappa.constant if part is None else d.pullback.kappa.coeff(part)
        target = pairings(cfg, h_parts.get(part, {}), kappa)
        assert sympy_span_solvable(cfg, list(d.support), target)
        assert pairings(cfg, l_parts.get(part, {})) == target, part
    for v in d.solution.kernel:
        assert nullspace_pairs_zero(cfg, {n: c.constant for n, c in v.terms.items()})
