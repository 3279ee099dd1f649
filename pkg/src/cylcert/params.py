"""Affine parameter expressions and exact Fourier-Motzkin reasoning.

An ``AffineExpr`` is ``constant + sum(coeff * symbol)`` with exact rational
coefficients.  A ``Constraint`` states ``expr rel 0`` with ``rel`` one of
``>``, ``>=``, ``=``; a ``ParamDomain`` is a conjunction of them.

Feasibility is decided by Fourier-Motzkin elimination.  Every derived row
keeps the multipliers that produced it from the input constraints, so an
``Infeasible`` verdict carries a Farkas-style refutation that can be checked
without trusting the elimination.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import MissingParameter

Number = Union[int, Fraction]

RELS = (">", ">=", "=")


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class AffineExpr:
    """Immutable affine expression; zero coefficients are never stored."""

    __slots__ = ("constant", "_coeffs", "_key")

    def __init__(self, constant: Number = 0, coeffs: Optional[Mapping[str, Number]] = None):
        self.constant = _frac(constant)
        items = {}
        for sym, c in (coeffs or {}).items():
            c = _frac(c)
            if c:
                items[sym] = c
        self._coeffs = dict(sorted(items.items()))
        self._key = (self.constant, tuple(self._coeffs.items()))

    @classmethod
    def symbol(cls, name: str) -> "AffineExpr":
        return cls(0, {name: 1})

    @classmethod
    def lift(cls, x) -> "AffineExpr":
        if isinstance(x, AffineExpr):
            return x
        return cls(x)

    @classmethod
    def parse(cls, text: str) -> "AffineExpr":
        """Parse an affine expression such as ``"1 - eps/2 + 3*lam1"``."""
        try:
            tree = ast.parse(text.strip(), mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"cannot parse expression {text!r}") from exc
        return _from_ast(tree.body, text)

    @property
    def coeffs(self) -> Dict[str, Fraction]:
        return dict(self._coeffs)

    def coeff(self, sym: str) -> Fraction:
        return self._coeffs.get(sym, Fraction(0))

    def symbols(self) -> Tuple[str, ...]:
        return tuple(self._coeffs)

    def is_constant(self) -> bool:
        return not self._coeffs

    def is_zero(self) -> bool:
        return not self._coeffs and self.constant == 0

    def linear_part(self) -> Tuple[Tuple[str, Fraction], ...]:
        return tuple(self._coeffs.items())

    def __add__(self, other) -> "AffineExpr":
        other = AffineExpr.lift(other)
        merged = dict(self._coeffs)
        for sym, c in other._coeffs.items():
            merged[sym] = merged.get(sym, 0) + c
        return AffineExpr(self.constant + other.constant, merged)

    __radd__ = __add__

    def __neg__(self) -> "AffineExpr":
        return AffineExpr(-self.constant, {s: -c for s, c in self._coeffs.items()})

    def __sub__(self, other) -> "AffineExpr":
        return self + (-AffineExpr.lift(other))

    def __rsub__(self, other) -> "AffineExpr":
        return AffineExpr.lift(other) - self

    def __mul__(self, k) -> "AffineExpr":
        if isinstance(k, AffineExpr):
            if k.is_constant():
                k = k.constant
            elif self.is_constant():
                return k * self.constant
            else:
                raise TypeError("product of two non-constant affine expressions")
        k = _frac(k)
        return AffineExpr(self.constant * k, {s: c * k for s, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, k) -> "AffineExpr":
        if isinstance(k, AffineExpr):
            if not k.is_constant():
                raise TypeError("division by a non-constant expression")
            k = k.constant
        return self * (1 / _frac(k))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = AffineExpr(other)
        if not isinstance(other, AffineExpr):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def subs(self, mapping: Mapping[str, "AffineExpr"]) -> "AffineExpr":
        out = AffineExpr(self.constant)
        for sym, c in self._coeffs.items():
            if sym in mapping:
                out = out + AffineExpr.lift(mapping[sym]) * c
            else:
                out = out + AffineExpr(0, {sym: c})
        return out

    def eval(self, assignment: Mapping[str, Number]) -> Fraction:
        return eval_expr(self, assignment)

    def __repr__(self) -> str:
        return f"AffineExpr({str(self)!r})"

    def __str__(self) -> str:
        parts: List[str] = []
        for sym, c in self._coeffs.items():
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mag == 1:
                body = sym
            elif mag.denominator == 1:
                body = f"{mag.numerator}*{sym}"
            elif mag.numerator == 1:
                body = f"{sym}/{mag.denominator}"
            else:
                body = f"{mag.numerator}*{sym}/{mag.denominator}"
            parts.append((sign, body))
        if self.constant or not parts:
            c = self.constant
            parts.insert(0, ("-" if c < 0 else "+", str(abs(c))))
        text = ""
        for i, (sign, body) in enumerate(parts):
            if i == 0:
                text = body if sign == "+" else "-" + body
            else:
                text += f" {sign} {body}"
        return text


def _from_ast(node, text) -> AffineExpr:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return AffineExpr(node.value)
    if isinstance(node, ast.Name):
        return AffineExpr.symbol(node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _from_ast(node.operand, text)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp):
        left = _from_ast(node.left, text)
        right = _from_ast(node.right, text)
        try:
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                return left / right
        except (TypeError, ZeroDivisionError) as exc:
            raise ValueError(f"not affine: {text!r}") from exc
    raise ValueError(f"unsupported syntax in expression {text!r}")


def eval_expr(e: AffineExpr, assignment: Mapping[str, Number]) -> Fraction:
    total = e.constant
    for sym, c in e.coeffs.items():
        if sym not in assignment:
            raise MissingParameter(sym)
        total += c * _frac(assignment[sym])
    return total


@dataclass(frozen=True)
class Constraint:
    """``expr rel 0``."""

    expr: AffineExpr
    rel: str

    def __post_init__(self):
        if self.rel not in RELS:
            raise ValueError(f"bad relation {self.rel!r}")

    def holds(self, assignment: Mapping[str, Number]) -> bool:
        v = eval_expr(self.expr, assignment)
        if self.rel == ">":
            return v > 0
        if self.rel == ">=":
            return v >= 0
        return v == 0

    def negations(self) -> List["Constraint"]:
        """Constraints whose disjunction is the negation of this one."""
        if self.rel == ">":
            return [Constraint(-self.expr, ">=")]
        if self.rel == ">=":
            return [Constraint(-self.expr, ">")]
        return [Constraint(self.expr, ">"), Constraint(-self.expr, ">")]

    def __str__(self) -> str:
        return f"{self.expr} {self.rel} 0"


def _side(x) -> AffineExpr:
    if isinstance(x, str):
        return AffineExpr.parse(x)
    return AffineExpr.lift(x)


def gt(lhs, rhs=0) -> Constraint:
    return Constraint(_side(lhs) - _side(rhs), ">")


def ge(lhs, rhs=0) -> Constraint:
    return Constraint(_side(lhs) - _side(rhs), ">=")


def lt(lhs, rhs=0) -> Constraint:
    return gt(rhs, lhs)


def le(lhs, rhs=0) -> Constraint:
    return ge(rhs, lhs)


def eq(lhs, rhs=0) -> Constraint:
    return Constraint(_side(lhs) - _side(rhs), "=")


@dataclass(frozen=True)
class ParamDomain:
    constraints: Tuple[Constraint, ...] = ()

    def __init__(self, constraints: Iterable[Constraint] = ()):
        object.__setattr__(self, "constraints", tuple(constraints))

    def symbols(self) -> Tuple[str, ...]:
        out = set()
        for c in self.constraints:
            out.update(c.expr.symbols())
        return tuple(sorted(out))

    def __and__(self, other) -> "ParamDomain":
        if isinstance(other, Constraint):
            return ParamDomain(self.constraints + (other,))
        return ParamDomain(self.constraints + tuple(other.constraints))

    def holds(self, assignment: Mapping[str, Number]) -> bool:
        return all(c.holds(assignment) for c in self.constraints)

    def equality_substitution(self) -> Dict[str, AffineExpr]:
        """Solve the equalities for some of their symbols (Gaussian order).

        Returns a mapping usable with ``AffineExpr.subs``; inconsistent or
        redundant equalities are skipped here and left to ``feasible``.
        """
        subs: Dict[str, AffineExpr] = {}
        for c in self.constraints:
            if c.rel != "=":
                continue
            e = c.expr.subs(subs)
            if e.is_constant():
                continue
            pivot = e.symbols()[0]
            solved = (e - AffineExpr(0, {pivot: e.coeff(pivot)})) * (-1 / e.coeff(pivot))
            subs = {s: v.subs({pivot: solved}) for s, v in subs.items()}
            subs[pivot] = solved
        return subs

    def __str__(self) -> str:
        return " and ".join(str(c) for c in self.constraints) or "true"


# ---------------------------------------------------------------- elimination


@dataclass(frozen=True)
class _Row:
    expr: AffineExpr
    rel: str
    mult: Tuple[Tuple[int, Fraction], ...]  # multipliers over the input rows

    def scaled(self, k: Fraction) -> "_Row":
        return _Row(self.expr * k, self.rel, tuple((i, m * k) for i, m in self.mult))


def _combine_mult(a, ka, b, kb):
    out: Dict[int, Fraction] = {}
    for i, m in a:
        out[i] = out.get(i, 0) + m * ka
    for i, m in b:
        out[i] = out.get(i, 0) + m * kb
    return tuple(sorted((i, m) for i, m in out.items() if m))


def _normalize(row: _Row) -> _Row:
    e = row.expr
    if e.is_constant():
        return row
    lead = e.coeff(e.symbols()[0])
    k = 1 / lead if row.rel == "=" else 1 / abs(lead)
    return row.scaled(k)


def _const_truth(row: _Row) -> bool:
    v = row.expr.constant
    return v > 0 if row.rel == ">" else v >= 0 if row.rel == ">=" else v == 0


def _tighter(a: _Row, b: _Row) -> bool:
    """Same linear part: is ``a`` at least as tight as ``b``?"""
    if a.expr.constant != b.expr.constant:
        return a.expr.constant < b.expr.constant
    return a.rel == ">" or b.rel == ">="


def _row_key(r: _Row):
    return (r.rel, r.expr.linear_part(), r.expr.constant)


def _simplify(rows: List[_Row]) -> List[_Row]:
    false_rows = []
    eqs: Dict[Tuple, _Row] = {}
    ineqs: Dict[Tuple, _Row] = {}
    for r in rows:
        r = _normalize(r)
        if r.expr.is_constant():
            if not _const_truth(r):
                false_rows.append(r)
            continue
        lin = r.expr.linear_part()
        if r.rel == "=":
            key = (lin, r.expr.constant)
            if key not in eqs:
                eqs[key] = r
            continue
        cur = ineqs.get(lin)
        if cur is None or (_tighter(r, cur) and _row_key(r) != _row_key(cur)):
            ineqs[lin] = r
    if false_rows:
        return [false_rows[0]]
    return sorted(list(eqs.values()) + list(ineqs.values()), key=_row_key)


def _substitute_rows(rows: List[_Row], pivot_row: _Row, p: str) -> List[_Row]:
    cp = pivot_row.expr.coeff(p)
    out = []
    for r in rows:
        c = r.expr.coeff(p)
        if c == 0:
            out.append(r)
            continue
        k = -c / cp
        out.append(_Row(r.expr + pivot_row.expr * k, r.rel, _combine_mult(r.mult, 1, pivot_row.mult, k)))
    return out


def _eliminate_rows(rows: List[_Row], p: str) -> Tuple[List[_Row], Tuple]:
    """Eliminate ``p``; returns the new rows and a back-substitution record."""
    for r in rows:
        if r.rel == "=" and r.expr.coeff(p):
            others = [x for x in rows if x is not r]
            cp = r.expr.coeff(p)
            solved = (r.expr - AffineExpr(0, {p: cp})) * (-1 / cp)
            return _simplify(_substitute_rows(others, r, p)), ("subst", p, solved)
    lower, upper, rest = [], [], []
    for r in rows:
        c = r.expr.coeff(p)
        if c > 0:
            lower.append(r)
        elif c < 0:
            upper.append(r)
        else:
            rest.append(r)
    combos = []
    for lo in lower:
        for up in upper:
            klo = -up.expr.coeff(p)
            kup = lo.expr.coeff(p)
            rel = ">" if ">" in (lo.rel, up.rel) else ">="
            combos.append(
                _Row(lo.expr * klo + up.expr * kup, rel, _combine_mult(lo.mult, klo, up.mult, kup))
            )
    bounds = [Constraint(r.expr, r.rel) for r in lower + upper]
    return _simplify(rest + combos), ("bounds", p, tuple(bounds))


def _pick_symbol(rows: List[_Row], order: Sequence[str] = ()) -> str:
    syms = sorted({s for r in rows for s in r.expr.symbols()})
    for s in order:
        if s in syms:
            return s
    for r in rows:
        if r.rel == "=" and not r.expr.is_constant():
            return r.expr.symbols()[0]

    def cost(s):
        lo = sum(1 for r in rows if r.expr.coeff(s) > 0)
        up = sum(1 for r in rows if r.expr.coeff(s) < 0)
        return (lo * up - lo - up, s)

    return min(syms, key=cost)


def _initial_rows(d: ParamDomain) -> List[_Row]:
    return [_Row(c.expr, c.rel, ((i, Fraction(1)),)) for i, c in enumerate(d.constraints)]


def _to_domain(rows: List[_Row]) -> ParamDomain:
    return ParamDomain(Constraint(r.expr, r.rel) for r in rows)


def fm_eliminate(d: ParamDomain, p: str) -> ParamDomain:
    """Project the solution set of ``d`` along parameter ``p``."""
    rows = _simplify(_initial_rows(d))
    if not any(r.expr.coeff(p) for r in rows):
        return _to_domain(rows)
    new_rows, _ = _eliminate_rows(rows, p)
    return _to_domain(new_rows)


@dataclass(frozen=True)
class Feasible:
    witness: Dict[str, Fraction]

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Infeasible:
    """``refutation`` maps input-constraint index to its multiplier."""

    refutation: Dict[int, Fraction] = field(default_factory=dict)

    def __bool__(self):
        return False


def _interval_point(bounds: Iterable[Constraint], p: str, assignment: Mapping[str, Fraction]) -> Fraction:
    lo = hi = None
    for b in bounds:
        c = b.expr.coeff(p)
        rest = (b.expr - AffineExpr(0, {p: c})).eval(assignment)
        v = -rest / c
        if c > 0:
            if lo is None or v > lo:
                lo = v
        else:
            if hi is None or v < hi:
                hi = v
    if lo is not None and hi is not None:
        return lo if lo == hi else (lo + hi) / 2
    if lo is not None:
        return lo + 1
    if hi is not None:
        return hi - 1
    return Fraction(0)


def feasible(d: ParamDomain, order: Sequence[str] = ()) -> Union[Feasible, Infeasible]:
    """Decide satisfiability; a witness is built by back-substitution.

    Symbols listed in ``order`` are eliminated first, in that order, so the
    last of them is the first to receive a witness value.  Remaining symbols
    follow a cheapest-product heuristic.
    """
    rows = _simplify(_initial_rows(d))
    steps = []
    while True:
        if len(rows) == 1 and rows[0].expr.is_constant():
            return Infeasible(dict(rows[0].mult))
        syms = {s for r in rows for s in r.expr.symbols()}
        if not syms:
            break
        p = _pick_symbol(rows, order)
        rows, record = _eliminate_rows(rows, p)
        steps.append(record)
    assignment: Dict[str, Fraction] = {}
    for kind, p, data in reversed(steps):
        if kind == "subst":
            for s in data.symbols():
                assignment.setdefault(s, Fraction(0))
            assignment[p] = data.eval(assignment)
        else:
            for b in data:
                for s in b.expr.symbols():
                    if s != p:
                        assignment.setdefault(s, Fraction(0))
            assignment[p] = _interval_point(data, p, assignment)
    for s in d.symbols():
        assignment.setdefault(s, Fraction(0))
    return Feasible(dict(sorted(assignment.items())))


def check_refutation(d: ParamDomain, refutation: Mapping[int, Fraction]) -> bool:
    """Independently confirm an infeasibility certificate.

    The multiplier-weighted sum of the constraints must have no parameter
    part and a constant contradicting the implied relation.
    """
    total = AffineExpr(0)
    strict = False
    for i, m in refutation.items():
        c = d.constraints[i]
        if c.rel != "=" and m < 0:
            return False
        if m and c.rel == ">":
            strict = True
        total = total + c.expr * m
    if not total.is_constant():
        return False
    if all(d.constraints[i].rel == "=" for i, m in refutation.items() if m):
        return total.constant != 0
    return total.constant < 0 or (strict and total.constant == 0)


def counterexample(d: ParamDomain, c: Constraint) -> Optional[Dict[str, Fraction]]:
    """A point of ``d`` violating ``c``, or None when ``d`` entails ``c``."""
    for neg in c.negations():
        res = feasible(d & neg)
        if res:
            return res.witness
    return None


def entails(d: ParamDomain, c: Constraint) -> bool:
    return counterexample(d, c) is None
