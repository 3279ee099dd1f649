"""The certificate record for one construction, and its invariants."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Tuple

from .lattice import CurveConfig, DivisorExpr
from .params import ParamDomain
from .resolution import AmpleTerm, SingularityDecl, parse_kind
from .surgery import SurgeryStep


@dataclass(frozen=True)
class FibrationClaim:
    fibers: Tuple[Mapping[str, int], ...]
    section: str
    hirzebruch_n: int

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple(dict(f) for f in self.fibers))

    def fiber_class(self, i: int) -> DivisorExpr:
        return DivisorExpr(self.fibers[i])

    def components(self) -> Tuple[str, ...]:
        return tuple(c for f in self.fibers for c in f)


@dataclass(frozen=True)
class Erratum:
    location: str
    verbatim: str
    corrected: str


@dataclass(frozen=True)
class Certificate:
    id: str
    lemma: str
    degree: int
    cfg: CurveConfig
    sings: Tuple[SingularityDecl, ...]
    fujita_type: str
    parameters: Tuple[str, ...]
    domain: ParamDomain
    ample: Tuple[AmpleTerm, ...]
    aliases: Mapping[str, DivisorExpr]
    L: DivisorExpr
    script: Tuple[SurgeryStep, ...]
    fib: FibrationClaim
    errata: Tuple[Erratum, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for name in ("sings", "parameters", "ample", "script", "errata"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "aliases", dict(self.aliases))

    def created_curves(self) -> Tuple[str, ...]:
        return tuple(s.new for s in self.script)

    def validate(self) -> List[Tuple[str, str]]:
        """Invariant violations as ``(field path, message)`` pairs."""
        out: List[Tuple[str, str]] = []
        cfg = self.cfg
        for msg in cfg.validate():
            out.append(("curves", msg))
        if self.degree < 1:
            out.append(("degree", "must be positive"))
        if self.degree == 1 and (cfg.rho != 9 or cfg.k_self != 1):
            out.append(("rho", "degree 1 requires rho 9 and K^2 1"))
        if cfg.k_self != self.degree:
            out.append(("k_self", "K^2 must equal the degree"))
        if self.fujita_type not in ("B", "C"):
            out.append(("fujita_type", "must be B or C"))

        declared = set(self.parameters)
        if len(declared) != len(self.parameters):
            out.append(("parameters", "duplicate parameter"))

        def check_symbols(path, syms):
            for s in syms:
                if s not in declared:
                    out.append((path, f"undeclared parameter {s!r}"))

        seen_exc: Dict[str, int] = {}
        for i, s in enumerate(self.sings):
            try:
                parse_kind(s.kind)
            except ValueError as exc:
                out.append((f"singularities[{i}].kind", str(exc)))
            for c in s.curves:
                if c not in cfg:
                    out.append((f"singularities[{i}].curves", f"unknown curve {c!r}"))
                if c in seen_exc:
                    out.append((f"singularities[{i}].curves", f"{c!r} already declared"))
                seen_exc[c] = i
        for i, c in enumerate(self.domain.constraints):
            check_symbols(f"domain[{i}]", c.expr.symbols())
        for name, alias in self.aliases.items():
            if not alias.is_constant():
                out.append((f"aliases.{name}", "alias must be parameter-free"))
            for n in alias.names():
                if n not in cfg:
                    out.append((f"aliases.{name}", f"unknown curve {n!r}"))
        for i, t in enumerate(self.ample):
            check_symbols(f"ample[{i}].coeff", t.coeff.symbols())
            if t.curve is not None and t.curve not in cfg:
                out.append((f"ample[{i}].curve", f"unknown curve {t.curve!r}"))
            if t.curve is not None and t.curve in seen_exc:
                out.append((f"ample[{i}].curve", f"{t.curve!r} is exceptional"))
            if t.alias is not None and t.alias not in self.aliases:
                out.append((f"ample[{i}].alias", f"unknown alias {t.alias!r}"))
        if not self.L.kappa.is_zero():
            out.append(("L", "L must not involve K"))
        for n in self.L.names():
            if n not in cfg:
                out.append((f"L.{n}", "not a curve of the initial configuration"))
        check_symbols("L", self.L.symbols())

        new_names = set()
        for i, st in enumerate(self.script):
            if st.new in cfg or st.new in new_names:
                out.append((f"script[{i}].new", f"name {st.new!r} already used"))
            new_names.add(st.new)

        fib = self.fib
        final_names = set(cfg.names) | new_names
        if fib.hirzebruch_n < 0:
            out.append(("fibration.hirzebruch_n", "must be non-negative"))
        if not fib.fibers:
            out.append(("fibration.fibers", "at least one fiber is required"))
        owner: Dict[str, int] = {}
        for i, f in enumerate(fib.fibers):
            if not f:
                out.append((f"fibration.fibers[{i}]", "empty fiber"))
            for c, m in f.items():
                if c not in final_names:
                    out.append((f"fibration.fibers[{i}].{c}", "unknown curve"))
                if not isinstance(m, int) or m < 1:
                    out.append((f"fibration.fibers[{i}].{c}", "multiplicity must be a positive integer"))
                if c in owner:
                    out.append((f"fibration.fibers[{i}].{c}", f"shared with fiber {owner[c]}"))
                owner[c] = i
        if fib.section not in final_names:
            out.append(("fibration.section", f"unknown curve {fib.section!r}"))
        return out
