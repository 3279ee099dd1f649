"""P^1-fibration checks and the end-to-end certificate pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Set, Tuple

from .certificate import Certificate, FibrationClaim
from .errors import LeftoverCurve, ScriptError, SingularGram, Stuck
from .lattice import CurveConfig, DivisorExpr, Equal, Inconclusive, NotEqual, class_compare, pair, support_of
from .params import Constraint, feasible
from .resolution import ample_necessary_check, check_dynkin, correction, exceptional_curves, pullback_ample
from .surgery import apply_script, blow_down

STAGES = (
    "schema",
    "dynkin",
    "pullback",
    "class-identity",
    "effectivity",
    "ample-lint",
    "surgery-replay",
    "fiber-classes",
    "euler",
    "section",
    "support-match",
    "hirzebruch",
)
LINT_STAGES = ("ample-lint",)

PASS, FAIL, INCONCLUSIVE, WARN, SKIPPED = "Pass", "Fail", "Inconclusive", "Warn", "Skipped"


def _connected(names: Sequence[str], cfg: CurveConfig) -> bool:
    names = list(names)
    if not names:
        return False
    inside = set(names)
    seen = {names[0]}
    todo = [names[0]]
    while todo:
        x = todo.pop()
        for y in cfg.adjacency[x]:
            if y in inside and y not in seen:
                seen.add(y)
                todo.append(y)
    return seen == inside


def check_fiber_class(f: DivisorExpr, cfg: CurveConfig) -> bool:
    return pair(f, f, cfg) == 0 and pair(f, DivisorExpr.canonical(), cfg) == -2


def check_singular_fiber(f: Mapping[str, int], f_ref: DivisorExpr, cfg: CurveConfig) -> bool:
    fd = DivisorExpr(dict(f))
    if any(m < 1 for m in f.values()):
        return False
    if not isinstance(class_compare(fd, f_ref, cfg), Equal):
        return False
    if any(not pair(DivisorExpr.curve(c), fd, cfg).is_zero() for c in f):
        return False
    return _connected(list(f), cfg)


def check_section(s: str, fib: FibrationClaim, cfg: CurveConfig) -> bool:
    if s in fib.components():
        return False
    return pair(DivisorExpr.curve(s), fib.fiber_class(0), cfg) == 1


def euler_completeness(fib: FibrationClaim, final_cfg: CurveConfig) -> bool:
    return sum(len(f) - 1 for f in fib.fibers) == final_cfg.rho - 2


def check_support_match(cert: Certificate, witness: Mapping[str, Fraction]) -> bool:
    positive = {n for n, c in cert.L.terms.items() if c.eval(witness) > 0}
    lhs = positive | set(cert.created_curves())
    rhs = {cert.fib.section} | set(cert.fib.components())
    return lhs == rhs


@dataclass(frozen=True)
class HirzebruchReport:
    n: int
    steps: Tuple[str, ...]


Chooser = Callable[[List[str]], str]


def _restrict(cfg: CurveConfig, keep: Set[str]) -> CurveConfig:
    curves = tuple(c for c in cfg.curves if c.name in keep)
    inter = {k: v for k, v in cfg.inter.items() if k <= keep}
    return CurveConfig(curves, inter, cfg.k_self, cfg.rho)


def contract_claim(
    cfg: CurveConfig,
    fib: FibrationClaim,
    choose: Optional[Chooser] = None,
    support: Optional[Set[str]] = None,
) -> HirzebruchReport:
    """Contract fiber components down to a Hirzebruch surface.

    Components meeting the section are never contracted, so the section
    keeps its self-intersection and n = -(section)^2 whatever order is used.
    ``choose`` picks among the candidates (listed in preference order);
    the default takes the first one.
    """
    claimed = {fib.section} | set(fib.components())
    if support is not None:
        extra = sorted(set(support) - claimed)
        if extra:
            raise LeftoverCurve(", ".join(extra))
    work = _restrict(cfg, claimed)
    fibers = [dict(f) for f in fib.fibers]
    s = fib.section
    steps: List[str] = []
    while any(len(f) > 1 for f in fibers):
        preferred, rest = [], []
        for f in fibers:
            if len(f) < 2:
                continue
            for c in sorted(f):
                if work.self_int(c) != -1 or work.meet(c, s) > 0:
                    continue
                others = [x for x in f if x != c]
                (preferred if _connected(others, work) else rest).append(c)
        candidates = sorted(preferred) + sorted(rest)
        if not candidates:
            raise Stuck("no contractible (-1)-component off the section")
        c = choose(candidates) if choose else candidates[0]
        work = blow_down(work, c)
        for f in fibers:
            f.pop(c, None)
        steps.append(c)
    residual = [next(iter(f)) for f in fibers]
    for f, c in zip(fibers, residual):
        if work.self_int(c) != 0 or f[c] != 1:
            raise Stuck(f"residual fiber {c} is not a reduced 0-curve")
    for i, a in enumerate(residual):
        for b in residual[i + 1 :]:
            if work.meet(a, b) != 0:
                raise Stuck(f"residual fibers {a} and {b} meet")
        if work.meet(a, s) != 1:
            raise Stuck(f"section does not meet residual fiber {a} once")
    n = -work.self_int(s)
    if n < 0:
        raise Stuck(f"section has positive self-intersection {-n}")
    return HirzebruchReport(n, tuple(steps))


def contract_fibration(cert: Certificate, choose: Optional[Chooser] = None) -> HirzebruchReport:
    final = apply_script(cert.cfg, cert.script)
    return contract_claim(final, cert.fib, choose)


# ------------------------------------------------------------------ pipeline


@dataclass(frozen=True)
class StageResult:
    stage: str
    status: str
    detail: str = ""


@dataclass
class VerificationReport:
    cert_id: str
    stages: List[StageResult] = field(default_factory=list)
    witness: Optional[Dict[str, Fraction]] = None
    pullback: Optional[DivisorExpr] = None
    hirzebruch: Optional[HirzebruchReport] = None

    @property
    def overall(self) -> str:
        statuses = {r.stage: r.status for r in self.stages}
        for st in STAGES:
            got = statuses.get(st)
            if st in LINT_STAGES:
                continue
            if got == INCONCLUSIVE:
                return INCONCLUSIVE
            if got != PASS:
                return FAIL
        return PASS

    @property
    def first_failure(self) -> Optional[str]:
        for r in self.stages:
            if r.status in (FAIL, INCONCLUSIVE):
                return r.stage
        return None

    def status(self, stage: str) -> str:
        for r in self.stages:
            if r.stage == stage:
                return r.status
        return SKIPPED


class _Halt(Exception):
    pass


def _fmt_point(w: Mapping[str, Fraction]) -> str:
    return ", ".join(f"{k}={v}" for k, v in w.items()) or "(no parameters)"


def verify_certificate(cert: Certificate) -> VerificationReport:
    report = VerificationReport(cert.id)

    def record(stage, status, detail=""):
        report.stages.append(StageResult(stage, status, detail))
        if status in (FAIL, INCONCLUSIVE):
            raise _Halt

    try:
        _run_stages(cert, report, record)
    except _Halt:
        pass
    done = {r.stage for r in report.stages}
    for st in STAGES:
        if st not in done:
            report.stages.append(StageResult(st, SKIPPED))
    return report


def _run_stages(cert: Certificate, report: VerificationReport, record) -> None:
    problems = cert.validate()
    if problems:
        record("schema", FAIL, "; ".join(f"{p}: {m}" for p, m in problems))
    record("schema", PASS)

    cfg = cert.cfg
    bad = [f"{s.kind} on {','.join(s.curves)}" for s in cert.sings if not check_dynkin(s, cfg)]
    if bad:
        record("dynkin", FAIL, "not a matching Dynkin configuration: " + "; ".join(bad))
    record("dynkin", PASS, ", ".join(s.kind for s in cert.sings))

    try:
        for t in cert.ample:
            if t.curve is None:
                continue
            for s in cert.sings:
                neg = {d: x for d, x in correction(t.curve, cfg, s).items() if x < 0}
                if neg:
                    record("pullback", FAIL, f"negative correction for {t.curve}: {neg}")
        h = pullback_ample(cert)
    except SingularGram as exc:
        record("pullback", FAIL, f"singular Gram matrix: {exc}")
    for d in exceptional_curves(cert.sings):
        v = pair(h, DivisorExpr.curve(d), cfg)
        if not v.is_zero():
            record("pullback", FAIL, f"pullback pairs {v} with exceptional {d}")
    report.pullback = h
    record("pullback", PASS, str(h))

    subs = cert.domain.equality_substitution()
    cmp = class_compare(h.subs(subs), cert.L.subs(subs), cfg)
    if isinstance(cmp, NotEqual):
        record("class-identity", FAIL, str(cmp))
    if isinstance(cmp, Inconclusive):
        record("class-identity", INCONCLUSIVE, str(cmp))
    record("class-identity", PASS)

    support = support_of(cert.L, cert.domain)
    positivity = cert.domain
    for n in support:
        positivity = positivity & Constraint(cert.L.coeff(n), ">")
    res = feasible(positivity, order=tuple(reversed(cert.parameters)))
    if not res:
        record("effectivity", FAIL, "no parameter value makes every support coefficient positive")
    witness = dict(res.witness)
    for p in cert.parameters:
        witness.setdefault(p, Fraction(0))
    witness = dict(sorted(witness.items()))
    if not positivity.holds(witness):
        record("effectivity", FAIL, f"witness check failed at {_fmt_point(witness)}")
    report.witness = witness
    record("effectivity", PASS, "witness " + _fmt_point(witness))

    issues = ample_necessary_check(cert, h)
    if issues:
        record("ample-lint", WARN, "; ".join(str(i) for i in issues))
    else:
        record("ample-lint", PASS)

    try:
        final = apply_script(cfg, cert.script)
    except ScriptError as exc:
        record("surgery-replay", FAIL, str(exc))
    if final.rho + final.k_self != cfg.rho + cfg.k_self:
        record("surgery-replay", FAIL, "rho + K^2 not preserved")
    record("surgery-replay", PASS, f"{len(cert.script)} blow-up(s), rho {final.rho}, K^2 {final.k_self}")

    fib = cert.fib
    ref = fib.fiber_class(0)
    for i, f in enumerate(fib.fibers):
        fd = fib.fiber_class(i)
        if not check_fiber_class(fd, final):
            record("fiber-classes", FAIL, f"fiber {i}: F^2 = {pair(fd, fd, final)}, F.K = {pair(fd, DivisorExpr.canonical(), final)}")
        if not check_singular_fiber(f, ref, final):
            cmp = class_compare(fd, ref, final)
            why = "not class-equal to fiber 0" if not isinstance(cmp, Equal) else ""
            for c in f:
                v = pair(DivisorExpr.curve(c), fd, final)
                if not v.is_zero():
                    why = why or f"component {c} pairs {v} with its fiber"
            why = why or "support is disconnected"
            record("fiber-classes", FAIL, f"fiber {i}: {why}")
    record("fiber-classes", PASS, f"{len(fib.fibers)} fiber(s)")

    if not euler_completeness(fib, final):
        got = sum(len(f) - 1 for f in fib.fibers)
        record("euler", FAIL, f"sum of (components - 1) is {got}, expected {final.rho - 2}")
    record("euler", PASS, f"{final.rho - 2}")

    if not check_section(fib.section, fib, final):
        if fib.section in fib.components():
            record("section", FAIL, f"{fib.section} lies in a fiber")
        v = pair(DivisorExpr.curve(fib.section), ref, final)
        record("section", FAIL, f"{fib.section} meets the fiber class {v} times")
    record("section", PASS, fib.section)

    if not check_support_match(cert, witness):
        positive = {n for n, c in cert.L.terms.items() if c.eval(witness) > 0} | set(cert.created_curves())
        claimed = {fib.section} | set(fib.components())
        detail = []
        if positive - claimed:
            detail.append("outside the fibration: " + ", ".join(sorted(positive - claimed)))
        if claimed - positive:
            detail.append("missing from the support: " + ", ".join(sorted(claimed - positive)))
        record("support-match", FAIL, "; ".join(detail))
    record("support-match", PASS)

    try:
        hz = contract_claim(final, fib)
    except (Stuck, LeftoverCurve) as exc:
        record("hirzebruch", FAIL, f"{type(exc).__name__}: {exc}")
    report.hirzebruch = hz
    if hz.n != fib.hirzebruch_n:
        record("hirzebruch", FAIL, f"contraction gives F_{hz.n}, claim says F_{fib.hirzebruch_n}")
    record("hirzebruch", PASS, f"F_{hz.n} after {len(hz.steps)} contraction(s)")
