"""Blow-ups at intersection points and contractions of (-1)-curves."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence, Tuple

from .errors import NameCollision, NotMinusOne, NotThroughPoint, ScriptError, UnknownCurve
from .lattice import Curve, CurveConfig, pair_key


@dataclass(frozen=True)
class SurgeryStep:
    at: Tuple[str, ...]
    new: str

    def __post_init__(self):
        object.__setattr__(self, "at", tuple(self.at))


def blow_up(cfg: CurveConfig, at: Iterable[str], new_name: str) -> CurveConfig:
    """Blow up a point lying on every curve of ``at`` (transversally)."""
    at = tuple(at)
    for c in at:
        if c not in cfg:
            raise UnknownCurve(c)
    if len(set(at)) != len(at):
        raise ValueError(f"repeated curve in {list(at)}")
    if new_name in cfg:
        raise NameCollision(new_name)
    for a, b in combinations(at, 2):
        if cfg.meet(a, b) < 1:
            raise NotThroughPoint(f"{a} and {b} do not meet")
    hit = set(at)
    curves = [Curve(c.name, c.self_int - 1) if c.name in hit else c for c in cfg.curves]
    curves.append(Curve(new_name, -1))
    inter = dict(cfg.inter)
    for a, b in combinations(at, 2):
        inter[pair_key(a, b)] -= 1
    for a in at:
        inter[pair_key(a, new_name)] = 1
    return CurveConfig(tuple(curves), inter, cfg.k_self - 1, cfg.rho + 1)


def blow_down(cfg: CurveConfig, e: str) -> CurveConfig:
    """Contract the (-1)-curve ``e``."""
    if cfg.self_int(e) != -1:
        raise NotMinusOne(f"{e} has self-intersection {cfg.self_int(e)}")
    touch = {c: n for c, n in cfg.adjacency[e].items()}
    curves = []
    for c in cfg.curves:
        if c.name == e:
            continue
        m = touch.get(c.name, 0)
        curves.append(Curve(c.name, c.self_int + m * m))
    inter = {k: v for k, v in cfg.inter.items() if e not in k}
    for a, b in combinations(sorted(touch), 2):
        key = pair_key(a, b)
        inter[key] = inter.get(key, 0) + touch[a] * touch[b]
    return CurveConfig(tuple(curves), inter, cfg.k_self + 1, cfg.rho - 1)


def apply_script(cfg: CurveConfig, steps: Sequence[SurgeryStep]) -> CurveConfig:
    for i, step in enumerate(steps):
        try:
            cfg = blow_up(cfg, step.at, step.new)
        except (NotThroughPoint, NameCollision, UnknownCurve, ValueError) as exc:
            raise ScriptError(i, exc) from exc
    return cfg
