"""Recompute L from the pulled-back ample class over the support of L."""

from __future__ import annotations

from dataclasses import dataclass

from .certificate import Certificate
from .lattice import DivisorExpr, Solution, express_in_span, support_of
from .resolution import pullback_ample


@dataclass(frozen=True)
class Derivation:
    pullback: DivisorExpr
    support: tuple
    solution: Solution
    transcribed: DivisorExpr

    @property
    def agrees(self) -> bool:
        return self.solution.contains(self.transcribed)

    @property
    def diff(self) -> DivisorExpr:
        return self.transcribed - self.solution.particular


def derive(cert: Certificate) -> Derivation:
    """Raises Underdetermined or NoSolution like ``express_in_span``."""
    subs = cert.domain.equality_substitution()
    h = pullback_ample(cert).subs(subs)
    support = support_of(cert.L, cert.domain)
    sol = express_in_span(h, support, cert.cfg)
    return Derivation(h, support, sol, cert.L.subs(subs))
