"""Certificate files: strict JSON parsing and canonical serialization."""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, StrictInt, StrictStr, ValidationError

from .certificate import Certificate, Erratum, FibrationClaim
from .errors import CertificateSyntaxError, NonCanonicalRational, SchemaError
from .lattice import Curve, CurveConfig, DivisorExpr, pair_key
from .params import AffineExpr, Constraint, ParamDomain
from .resolution import AmpleTerm, SingularityDecl
from .surgery import SurgeryStep

_NONCANON = "non-canonical rational"


def _canonical_rational(v):
    num, den = v
    if den <= 0 or gcd(num, den) != 1:
        raise ValueError(f"{_NONCANON} [{num}, {den}]")
    return v


Rational = Annotated[Tuple[StrictInt, StrictInt], AfterValidator(_canonical_rational)]
Name = Annotated[StrictStr, Field(pattern=r"^[A-Za-z][A-Za-z0-9_']*$")]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ExprModel(_Model):
    const: Rational
    terms: Dict[Name, Rational] = Field(default_factory=dict)


class CurveModel(_Model):
    name: Name
    self: StrictInt


class SingularityModel(_Model):
    kind: StrictStr
    curves: List[Name]


class ConstraintModel(_Model):
    expr: ExprModel
    rel: Literal[">", ">=", "="]


class AmpleModel(_Model):
    coeff: ExprModel
    curve: Optional[Name] = None
    alias: Optional[Name] = None


class StepModel(_Model):
    at: List[Name]
    new: Name


class FibrationModel(_Model):
    fibers: List[Dict[Name, StrictInt]]
    section: Name
    hirzebruch_n: StrictInt


class ErratumModel(_Model):
    location: StrictStr
    verbatim: StrictStr
    corrected: StrictStr


class CertificateModel(_Model):
    id: StrictStr
    lemma: StrictStr
    degree: StrictInt
    k_self: StrictInt
    rho: StrictInt
    curves: List[CurveModel]
    intersections: List[Tuple[Name, Name, StrictInt]] = Field(default_factory=list)
    singularities: List[SingularityModel] = Field(default_factory=list)
    fujita_type: Literal["B", "C"]
    parameters: List[Name] = Field(default_factory=list)
    domain: List[ConstraintModel] = Field(default_factory=list)
    ample: List[AmpleModel] = Field(default_factory=list)
    aliases: Dict[Name, Dict[Name, ExprModel]] = Field(default_factory=dict)
    L: Dict[Name, ExprModel]
    script: List[StepModel] = Field(default_factory=list)
    fibration: FibrationModel
    errata: List[ErratumModel] = Field(default_factory=list)


def _path(loc) -> str:
    out = ""
    for part in loc:
        if isinstance(part, int):
            out += f"[{part}]"
        else:
            out += ("." if out else "") + str(part)
    return out or "$"


def _reject_constant(token):
    raise ValueError(f"non-finite number {token}")


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ValueError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _load_json(data: Union[bytes, str]):
    if isinstance(data, bytes):
        if data.startswith(b"\xef\xbb\xbf"):
            raise CertificateSyntaxError("byte-order mark not allowed", 1, 1)
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CertificateSyntaxError(f"invalid UTF-8 ({exc.reason})", 1, 1) from None
    else:
        text = data
    try:
        return json.loads(text, object_pairs_hook=_no_duplicates, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise CertificateSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    except ValueError as exc:
        raise CertificateSyntaxError(str(exc), 1, 1) from None


def _rat(r) -> Fraction:
    return Fraction(r[0], r[1])


def _expr(m: ExprModel, path: str) -> AffineExpr:
    for sym, v in m.terms.items():
        if v[0] == 0:
            raise SchemaError(f"{path}.terms.{sym}", "zero coefficients must be omitted")
    return AffineExpr(_rat(m.const), {s: _rat(v) for s, v in m.terms.items()})


def from_document(doc) -> Certificate:
    """Build and validate a certificate from decoded JSON."""
    try:
        m = CertificateModel.model_validate(doc)
    except ValidationError as exc:
        err = exc.errors()[0]
        path = _path(err["loc"])
        msg = err["msg"]
        if _NONCANON in msg:
            raise NonCanonicalRational(path, msg.split(", ", 1)[-1]) from None
        raise SchemaError(path, msg) from None

    names = [c.name for c in m.curves]
    index = {n: i for i, n in enumerate(names)}
    edges: Dict = {}
    for i, (a, b, n) in enumerate(m.intersections):
        path = f"intersections[{i}]"
        for x in (a, b):
            if x not in index:
                raise SchemaError(path, f"unknown curve {x!r}")
        if a == b:
            raise SchemaError(path, "self-pairs belong in curves[].self")
        if n < 0:
            raise SchemaError(path, "intersection numbers are non-negative")
        key = pair_key(a, b)
        if key in edges:
            raise SchemaError(path, f"duplicate pair {a}, {b}")
        edges[key] = n
    cfg = CurveConfig(tuple(Curve(c.name, c.self) for c in m.curves), edges, m.k_self, m.rho)

    domain = ParamDomain(
        Constraint(_expr(c.expr, f"domain[{i}].expr"), c.rel) for i, c in enumerate(m.domain)
    )
    ample = []
    for i, t in enumerate(m.ample):
        if (t.curve is None) == (t.alias is None):
            raise SchemaError(f"ample[{i}]", "exactly one of curve, alias is required")
        ample.append(AmpleTerm(_expr(t.coeff, f"ample[{i}].coeff"), t.curve, t.alias))
    aliases = {
        name: DivisorExpr({c: _expr(e, f"aliases.{name}.{c}") for c, e in terms.items()})
        for name, terms in m.aliases.items()
    }
    L = DivisorExpr({c: _expr(e, f"L.{c}") for c, e in m.L.items()})
    for c, e in m.L.items():
        if _expr(e, f"L.{c}").is_zero():
            raise SchemaError(f"L.{c}", "zero coefficients must be omitted")
    fib = FibrationClaim(
        tuple(dict(f) for f in m.fibration.fibers), m.fibration.section, m.fibration.hirzebruch_n
    )
    cert = Certificate(
        id=m.id,
        lemma=m.lemma,
        degree=m.degree,
        cfg=cfg,
        sings=tuple(SingularityDecl(s.kind, tuple(s.curves)) for s in m.singularities),
        fujita_type=m.fujita_type,
        parameters=tuple(m.parameters),
        domain=domain,
        ample=tuple(ample),
        aliases=aliases,
        L=L,
        script=tuple(SurgeryStep(tuple(s.at), s.new) for s in m.script),
        fib=fib,
        errata=tuple(Erratum(e.location, e.verbatim, e.corrected) for e in m.errata),
    )
    problems = cert.validate()
    if problems:
        path, msg = problems[0]
        raise SchemaError(path, msg)
    return cert


def parse_certificate(data: Union[bytes, str]) -> Certificate:
    return from_document(_load_json(data))


def load_certificate(path) -> Certificate:
    return parse_certificate(Path(path).read_bytes())


# -------------------------------------------------------------- serializing


def rational_json(x: Fraction) -> List[int]:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def expr_json(e: AffineExpr) -> dict:
    return {"const": rational_json(e.constant), "terms": {s: rational_json(c) for s, c in e.coeffs.items()}}


def to_document(cert: Certificate) -> dict:
    cfg = cert.cfg
    order = {n: i for i, n in enumerate(cfg.names)}
    inter = []
    for key, n in cfg.inter.items():
        a, b = sorted(key, key=order.__getitem__)
        inter.append([a, b, n])
    inter.sort(key=lambda t: (order[t[0]], order[t[1]]))
    ample = []
    for t in cert.ample:
        item = {"coeff": expr_json(t.coeff)}
        if t.curve is not None:
            item["curve"] = t.curve
        else:
            item["alias"] = t.alias
        ample.append(item)
    return {
        "id": cert.id,
        "lemma": cert.lemma,
        "degree": cert.degree,
        "k_self": cfg.k_self,
        "rho": cfg.rho,
        "curves": [{"name": c.name, "self": c.self_int} for c in cfg.curves],
        "intersections": inter,
        "singularities": [{"kind": s.kind, "curves": list(s.curves)} for s in cert.sings],
        "fujita_type": cert.fujita_type,
        "parameters": list(cert.parameters),
        "domain": [{"expr": expr_json(c.expr), "rel": c.rel} for c in cert.domain.constraints],
        "ample": ample,
        "aliases": {n: {c: expr_json(e) for c, e in d.terms.items()} for n, d in cert.aliases.items()},
        "L": {c: expr_json(e) for c, e in cert.L.terms.items()},
        "script": [{"at": list(s.at), "new": s.new} for s in cert.script],
        "fibration": {
            "fibers": [dict(f) for f in cert.fib.fibers],
            "section": cert.fib.section,
            "hirzebruch_n": cert.fib.hirzebruch_n,
        },
        "errata": [
            {"location": e.location, "verbatim": e.verbatim, "corrected": e.corrected} for e in cert.errata
        ],
    }


def _emit(value, indent: int) -> str:
    flat = json.dumps(value, sort_keys=True, ensure_ascii=False, separators=(", ", ": "))
    if not isinstance(value, (dict, list)) or indent + len(flat) <= 100 or not value:
        return flat
    pad = " " * (indent + 2)
    if isinstance(value, dict):
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_emit(value[k], indent + 2)}" for k in sorted(value)]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"
    items = [pad + _emit(v, indent + 2) for v in value]
    return "[\n" + ",\n".join(items) + "\n" + " " * indent + "]"


def dumps_canonical(doc) -> bytes:
    """Sorted keys, short values kept on one line, one trailing newline."""
    return (_emit(doc, 0) + "\n").encode("utf-8")


def serialize_certificate(cert: Certificate) -> bytes:
    return dumps_canonical(to_document(cert))
