"""Du Val resolution data: Dynkin checks and pullbacks to the resolution."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .errors import SingularGram, UnknownCurve
from .lattice import CurveConfig, DivisorExpr, pair
from .params import AffineExpr, Constraint, counterexample

_KIND = re.compile(r"^([ADE])([1-9][0-9]*)$")


def parse_kind(kind: str) -> Tuple[str, int]:
    m = _KIND.match(kind)
    if not m:
        raise ValueError(f"bad singularity kind {kind!r}")
    letter, n = m.group(1), int(m.group(2))
    if (letter == "D" and n < 4) or (letter == "E" and n not in (6, 7, 8)):
        raise ValueError(f"no Dynkin diagram {kind}")
    return letter, n


def dynkin_edges(kind: str) -> Set[FrozenSet[int]]:
    """Edges of the diagram on nodes 1..n in Bourbaki numbering."""
    letter, n = parse_kind(kind)
    if letter == "A":
        pairs = [(i, i + 1) for i in range(1, n)]
    elif letter == "D":
        pairs = [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
    else:
        pairs = [(1, 3), (2, 4)] + [(i, i + 1) for i in range(3, n)]
    return {frozenset(p) for p in pairs}


@dataclass(frozen=True)
class SingularityDecl:
    kind: str
    curves: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))


def check_dynkin(s: SingularityDecl, cfg: CurveConfig) -> bool:
    """Declared curves are (-2)-curves forming the diagram in declared order."""
    for c in s.curves:
        if c not in cfg:
            raise UnknownCurve(c)
    try:
        _, n = parse_kind(s.kind)
    except ValueError:
        return False
    if len(s.curves) != n or len(set(s.curves)) != n:
        return False
    if any(cfg.self_int(c) != -2 for c in s.curves):
        return False
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            m = cfg.meet(s.curves[i], s.curves[j])
            if m > 1:
                return False
            if m == 1:
                edges.add(frozenset((i + 1, j + 1)))
    return edges == dynkin_edges(s.kind)


def exceptional_curves(sings: Sequence[SingularityDecl]) -> Tuple[str, ...]:
    return tuple(c for s in sings for c in s.curves)


def _solve_square(m: List[List[Fraction]], b: List[Fraction]) -> Optional[List[Fraction]]:
    n = len(m)
    a = [row[:] + [rhs] for row, rhs in zip(m, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def correction(c: str, cfg: CurveConfig, s: SingularityDecl) -> Dict[str, Fraction]:
    """Coefficients x with Gram(exc) x = -(c.D_j)_j for one singular point."""
    exc = s.curves
    gram = [[Fraction(cfg.meet(a, b)) for b in exc] for a in exc]
    rhs = [Fraction(-cfg.meet(c, d)) for d in exc]
    x = _solve_square(gram, rhs)
    if x is None:
        raise SingularGram(f"{s.kind} on {list(exc)}")
    return dict(zip(exc, x))


def pullback_curve(c: str, cfg: CurveConfig, sings: Sequence[SingularityDecl]) -> DivisorExpr:
    if c not in cfg:
        raise UnknownCurve(c)
    if c in exceptional_curves(sings):
        raise ValueError(f"{c} is exceptional")
    terms: Dict[str, Fraction] = {c: Fraction(1)}
    for s in sings:
        terms.update(correction(c, cfg, s))
    return DivisorExpr(terms)


def a_chain_endpoint(n: int) -> List[Fraction]:
    """Closed form for a curve meeting node 1 of an A_n chain once."""
    return [Fraction(n + 1 - j, n + 1) for j in range(1, n + 1)]


@dataclass(frozen=True)
class AmpleTerm:
    """``coeff`` times either a curve's pullback or a named class alias."""

    coeff: AffineExpr
    curve: Optional[str] = None
    alias: Optional[str] = None

    def __post_init__(self):
        if (self.curve is None) == (self.alias is None):
            raise ValueError("ample term needs exactly one of curve, alias")


def pullback_ample(cert) -> DivisorExpr:
    """-K plus the pulled-back ample summands of the certificate."""
    out = DivisorExpr.canonical(-1)
    for t in cert.ample:
        if t.curve is not None:
            out = out + pullback_curve(t.curve, cert.cfg, cert.sings) * t.coeff
        else:
            out = out + cert.aliases[t.alias] * t.coeff
    return out


@dataclass(frozen=True)
class LintIssue:
    curve: str
    value: AffineExpr
    counterexample: Optional[Dict[str, Fraction]]

    def __str__(self):
        where = ""
        if self.counterexample:
            where = " at " + ", ".join(f"{k}={v}" for k, v in self.counterexample.items())
        return f"{self.curve}: {self.value}{where}"


def ample_necessary_check(cert, pulled: Optional[DivisorExpr] = None) -> List[LintIssue]:
    """Curves on which the pulled-back ample class fails the expected sign.

    Exceptional curves must pair to zero identically; every other listed
    curve must pair positively on the whole domain.
    """
    h = pulled if pulled is not None else pullback_ample(cert)
    exc = set(exceptional_curves(cert.sings))
    issues = []
    for name in cert.cfg.names:
        v = pair(h, DivisorExpr.curve(name), cert.cfg)
        if name in exc:
            if not v.is_zero():
                issues.append(LintIssue(name, v, None))
            continue
        bad = counterexample(cert.domain, Constraint(v, ">"))
        if bad is not None:
            issues.append(LintIssue(name, v, bad))
    return issues
