"""Intersection-form arithmetic on named curve configurations.

The canonical class K is a formal extra generator: K.C = -C^2 - 2 for every
(smooth rational) curve C and K.K is the declared ``k_self``.  Classes are
compared numerically, which is only conclusive when the curves together
with K span a lattice of the declared Picard rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import BothSidesParametric, NoSolution, Underdetermined, UnknownCurve
from .params import AffineExpr, ParamDomain

K = "K"


@dataclass(frozen=True)
class Curve:
    name: str
    self_int: int

    @property
    def k_degree(self) -> int:
        return -self.self_int - 2


def pair_key(a: str, b: str) -> FrozenSet[str]:
    return frozenset((a, b))


@dataclass(frozen=True)
class CurveConfig:
    curves: Tuple[Curve, ...]
    inter: Mapping[FrozenSet[str], int]
    k_self: int
    rho: int

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        # zero entries are never stored, so equal configurations compare equal
        object.__setattr__(self, "inter", {k: v for k, v in dict(self.inter).items() if v})

    @classmethod
    def build(cls, curves: Iterable[Tuple[str, int]], edges: Iterable[Tuple[str, str, int]], k_self: int, rho: int):
        inter: Dict[FrozenSet[str], int] = {}
        for a, b, n in edges:
            if a == b:
                raise ValueError(f"self-pair {a!r} in intersection table")
            inter[pair_key(a, b)] = n
        return cls(tuple(Curve(n, s) for n, s in curves), inter, k_self, rho)

    @cached_property
    def names(self) -> Tuple[str, ...]:
        return tuple(c.name for c in self.curves)

    @cached_property
    def _self(self) -> Dict[str, int]:
        return {c.name: c.self_int for c in self.curves}

    @cached_property
    def adjacency(self) -> Dict[str, Dict[str, int]]:
        adj: Dict[str, Dict[str, int]] = {c.name: {} for c in self.curves}
        for key, n in self.inter.items():
            a, b = tuple(key)
            adj[a][b] = n
            adj[b][a] = n
        return adj

    def __contains__(self, name: str) -> bool:
        return name in self._self

    def self_int(self, name: str) -> int:
        try:
            return self._self[name]
        except KeyError:
            raise UnknownCurve(name) from None

    def meet(self, a: str, b: str) -> int:
        """Intersection number of two curves (self-intersection when equal)."""
        if a == b:
            return self.self_int(a)
        if a not in self._self:
            raise UnknownCurve(a)
        if b not in self._self:
            raise UnknownCurve(b)
        return self.inter.get(pair_key(a, b), 0)

    def k_degree(self, name: str) -> int:
        return -self.self_int(name) - 2

    def validate(self) -> List[str]:
        """Invariant violations, as human-readable strings."""
        problems = []
        if len(set(self.names)) != len(self.names):
            problems.append("duplicate curve names")
        for key, n in self.inter.items():
            if len(key) != 2:
                problems.append(f"self-pair {sorted(key)} in intersection table")
                continue
            for name in key:
                if name not in self._self:
                    problems.append(f"intersection names unknown curve {name!r}")
            if n < 0:
                problems.append(f"negative intersection {sorted(key)}")
        if self.rho <= 0:
            problems.append("rho must be positive")
        if not problems:
            r = gram_rank(self, include_k=True)
            if r > self.rho:
                problems.append(f"extended Gram rank {r} exceeds rho {self.rho}")
        return problems


def _lift(x) -> AffineExpr:
    return AffineExpr.lift(x)


class DivisorExpr:
    """A formal Q-divisor class: ``kappa*K + sum(coeff*curve)``."""

    __slots__ = ("kappa", "_terms")

    def __init__(self, terms: Optional[Mapping[str, object]] = None, kappa=0):
        self.kappa = _lift(kappa)
        cleaned = {}
        for name, c in (terms or {}).items():
            c = _lift(c)
            if not c.is_zero():
                cleaned[name] = c
        self._terms = cleaned

    @classmethod
    def curve(cls, name: str, coeff=1) -> "DivisorExpr":
        return cls({name: coeff})

    @classmethod
    def canonical(cls, coeff=1) -> "DivisorExpr":
        return cls({}, kappa=coeff)

    @property
    def terms(self) -> Dict[str, AffineExpr]:
        return dict(self._terms)

    def coeff(self, name: str) -> AffineExpr:
        return self._terms.get(name, AffineExpr(0))

    def names(self) -> Tuple[str, ...]:
        return tuple(self._terms)

    def is_constant(self) -> bool:
        return self.kappa.is_constant() and all(c.is_constant() for c in self._terms.values())

    def is_zero(self) -> bool:
        return self.kappa.is_zero() and not self._terms

    def symbols(self) -> Tuple[str, ...]:
        out = set(self.kappa.symbols())
        for c in self._terms.values():
            out.update(c.symbols())
        return tuple(sorted(out))

    def __add__(self, other: "DivisorExpr") -> "DivisorExpr":
        terms = dict(self._terms)
        for name, c in other._terms.items():
            terms[name] = terms[name] + c if name in terms else c
        return DivisorExpr(terms, self.kappa + other.kappa)

    def __neg__(self) -> "DivisorExpr":
        return self * -1

    def __sub__(self, other: "DivisorExpr") -> "DivisorExpr":
        return self + (-other)

    def __mul__(self, k) -> "DivisorExpr":
        return DivisorExpr({n: c * k for n, c in self._terms.items()}, self.kappa * k)

    __rmul__ = __mul__

    def subs(self, mapping: Mapping[str, AffineExpr]) -> "DivisorExpr":
        return DivisorExpr({n: c.subs(mapping) for n, c in self._terms.items()}, self.kappa.subs(mapping))

    def eval(self, assignment) -> "DivisorExpr":
        return DivisorExpr({n: c.eval(assignment) for n, c in self._terms.items()}, self.kappa.eval(assignment))

    def renamed(self, mapping: Mapping[str, str]) -> "DivisorExpr":
        out = DivisorExpr({}, self.kappa)
        for n, c in self._terms.items():
            out = out + DivisorExpr({mapping.get(n, n): c})
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, DivisorExpr):
            return NotImplemented
        return self.kappa == other.kappa and self._terms == other._terms

    def __hash__(self):
        return hash((self.kappa, tuple(sorted(self._terms.items()))))

    def __repr__(self) -> str:
        return f"DivisorExpr({str(self)!r})"

    def __str__(self) -> str:
        parts = []
        items = list(self._terms.items())
        if not self.kappa.is_zero():
            items.insert(0, (K, self.kappa))
        for name, c in items:
            if c.is_constant():
                v = c.constant
                sign = "-" if v < 0 else "+"
                mag = abs(v)
                body = name if mag == 1 else f"{mag}*{name}"
            else:
                sign, body = "+", f"({c})*{name}"
            parts.append((sign, body))
        if not parts:
            return "0"
        text = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _check_names(d: DivisorExpr, cfg: CurveConfig):
    for n in d.names():
        if n not in cfg:
            raise UnknownCurve(n)


def _pairings_of_constant(c: DivisorExpr, cfg: CurveConfig, names: Iterable[str]) -> Tuple[Dict[str, Fraction], Fraction]:
    """Pairings of a constant class with the given curves and with K."""
    coeffs = {n: v.constant for n, v in c.terms.items()}
    kap = c.kappa.constant
    adj = cfg.adjacency
    with_curve = {}
    for x in names:
        total = kap * cfg.k_degree(x) + coeffs.get(x, 0) * cfg.self_int(x)
        for y, n in adj[x].items():
            if y in coeffs:
                total += coeffs[y] * n
        with_curve[x] = total
    with_k = kap * cfg.k_self + sum(v * cfg.k_degree(n) for n, v in coeffs.items())
    return with_curve, Fraction(with_k)


def pair(a: DivisorExpr, b: DivisorExpr, cfg: CurveConfig) -> AffineExpr:
    """Intersection number of two classes; one side must be parameter-free."""
    _check_names(a, cfg)
    _check_names(b, cfg)
    if b.is_constant():
        const, var = b, a
    elif a.is_constant():
        const, var = a, b
    else:
        raise BothSidesParametric(f"{a} . {b}")
    with_curve, with_k = _pairings_of_constant(const, cfg, var.names())
    out = var.kappa * with_k
    for n, c in var.terms.items():
        out = out + c * with_curve[n]
    return out


def gram_matrix(cfg: CurveConfig, include_k: bool) -> List[List[int]]:
    names = cfg.names
    rows = [[cfg.meet(a, b) for b in names] for a in names]
    if include_k:
        for i, a in enumerate(names):
            rows[i].append(cfg.k_degree(a))
        rows.append([cfg.k_degree(a) for a in names] + [cfg.k_self])
    return rows


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank, prev = 0, 1
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, nrows):
            f = m[r][col]
            for c in range(col, ncols):
                m[r][c] = (p * m[r][c] - f * m[rank][c]) // prev
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def gram_rank(cfg: CurveConfig, include_k: bool = True) -> int:
    return integer_rank(gram_matrix(cfg, include_k))


@dataclass(frozen=True)
class Equal:
    def __bool__(self):
        return True

    def __str__(self):
        return "Equal"


@dataclass(frozen=True)
class NotEqual:
    witness: str
    value: AffineExpr = field(default_factory=AffineExpr)

    def __bool__(self):
        return False

    def __str__(self):
        return f"NotEqual(pairing with {self.witness} is {self.value})"


@dataclass(frozen=True)
class Inconclusive:
    rank: int

    def __bool__(self):
        return False

    def __str__(self):
        return f"Inconclusive(rank {self.rank})"


Comparison = Union[Equal, NotEqual, Inconclusive]


def class_compare(a: DivisorExpr, b: DivisorExpr, cfg: CurveConfig) -> Comparison:
    diff = a - b
    _check_names(diff, cfg)
    v = pair(diff, DivisorExpr.canonical(), cfg)
    if not v.is_zero():
        return NotEqual(K, v)
    for name in cfg.names:
        v = pair(diff, DivisorExpr.curve(name), cfg)
        if not v.is_zero():
            return NotEqual(name, v)
    r = gram_rank(cfg, include_k=True)
    if r != cfg.rho:
        return Inconclusive(r)
    return Equal()


# ------------------------------------------------------------ linear solving


def solve_affine(
    matrix: Sequence[Sequence[Fraction]], rhs: Sequence[AffineExpr]
) -> Optional[Tuple[List[AffineExpr], List[List[Fraction]]]]:
    """Solve ``matrix @ x = rhs`` with constant matrix and affine right side.

    Returns ``(particular, kernel_basis)`` where free unknowns are set to 0
    in the particular solution, or None if the system is inconsistent for
    generic parameter values (some reduced row demands a non-zero expression
    to vanish identically).
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    m = [[Fraction(x) for x in row] for row in matrix]
    r_side = [AffineExpr.lift(x) for x in rhs]
    pivots: List[int] = []
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, nrows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        r_side[row], r_side[piv] = r_side[piv], r_side[row]
        p = m[row][col]
        m[row] = [x / p for x in m[row]]
        r_side[row] = r_side[row] / p
        for i in range(nrows):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[row])]
                r_side[i] = r_side[i] - r_side[row] * f
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    for i in range(row, nrows):
        if not r_side[i].is_zero():
            return None
    particular = [AffineExpr(0)] * ncols
    for i, col in enumerate(pivots):
        particular[col] = r_side[i]
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for i, col in enumerate(pivots):
            v[col] = -m[i][fcol]
        kernel.append(_primitive(v))
    return particular, kernel


def _primitive(v: List[Fraction]) -> List[Fraction]:
    """Scale to a primitive integer vector whose first non-zero entry is positive."""
    from math import gcd, lcm

    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    g = g or 1
    first = next((x for x in ints if x), 1)
    if first < 0:
        g = -g
    return [Fraction(x, g) for x in ints]


@dataclass(frozen=True)
class Solution:
    particular: DivisorExpr
    kernel: Tuple[DivisorExpr, ...]

    def contains(self, target: DivisorExpr) -> bool:
        """Is ``target`` in particular + span(kernel), identically in parameters?"""
        names = sorted(set(target.names()) | set(self.particular.names()) | {n for v in self.kernel for n in v.names()})
        diff = target - self.particular
        if not diff.kappa.is_zero():
            return False
        if not self.kernel:
            return diff.is_zero()
        matrix = [[v.coeff(n).constant for v in self.kernel] for n in names]
        return solve_affine(matrix, [diff.coeff(n) for n in names]) is not None


def express_in_span(target: DivisorExpr, support: Sequence[str], cfg: CurveConfig) -> Solution:
    """All combinations of ``support`` numerically equivalent to ``target``."""
    r = gram_rank(cfg, include_k=True)
    if r != cfg.rho:
        raise Underdetermined(f"curves and K span rank {r}, expected {cfg.rho}")
    _check_names(target, cfg)
    for s in support:
        if s not in cfg:
            raise UnknownCurve(s)
    support = list(support)
    tests: List[Optional[str]] = [None] + list(cfg.names)
    matrix, rhs = [], []
    for t in tests:
        tclass = DivisorExpr.canonical() if t is None else DivisorExpr.curve(t)
        with_curve, with_k = _pairings_of_constant(tclass, cfg, support)
        matrix.append([with_curve[s] for s in support])
        rhs.append(pair(target, tclass, cfg))
    solved = solve_affine(matrix, rhs)
    if solved is None:
        raise NoSolution("target is not numerically a combination of the support")
    particular, kernel = solved
    part = DivisorExpr({s: c for s, c in zip(support, particular)})
    kern = tuple(DivisorExpr({s: c for s, c in zip(support, v)}) for v in kernel)
    return Solution(part, kern)


def support_of(divisor: DivisorExpr, domain: ParamDomain) -> Tuple[str, ...]:
    """Curves whose coefficient survives substitution of the domain's equalities."""
    subs = domain.equality_substitution()
    return tuple(n for n, c in divisor.terms.items() if not c.subs(subs).is_zero())
