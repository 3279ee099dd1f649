"""Independent reference computations used by the tests (sympy based)."""

from fractions import Fraction

import sympy

from cylcert.lattice import gram_matrix


def sympy_rank(cfg, include_k=True):
    rows = gram_matrix(cfg, include_k)
    if not rows:
        return 0
    return sympy.Matrix(rows).rank()


def chain_correction(n, first_meets=1):
    """Solve the A_n system directly: (D_i . sum x_j D_j) = -(C . D_i)."""
    m = sympy.zeros(n, n)
    for i in range(n):
        m[i, i] = -2
        if i + 1 < n:
            m[i, i + 1] = m[i + 1, i] = 1
    rhs = sympy.zeros(n, 1)
    rhs[first_meets - 1] = -1
    sol = m.LUsolve(rhs)
    return [Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in sol]


def nullspace_pairs_zero(cfg, vec):
    """Pair a curve-coefficient vector with every curve and K using a plain loop."""
    names = cfg.names
    out = []
    for a in names:
        s = sum(Fraction(vec.get(b, 0)) * cfg.meet(a, b) for b in names)
        out.append(s)
    out.append(sum(Fraction(vec.get(b, 0)) * cfg.k_degree(b) for b in names))
    return all(x == 0 for x in out)


def lin_parts(divisor):
    """Split a parametric divisor into {param or None: {curve: Fraction}}."""
    out = {}
    for c, e in divisor.terms.items():
        out.setdefault(None, {})[c] = e.constant
        for p, v in e.coeffs.items():
            out.setdefault(p, {})[c] = v
    return out



def pairings(cfg, vec, kappa=0):
    """Pairings of kappa*K + sum vec[b]*b with every curve and then K (plain loop)."""
    names = cfg.names
    out = [kappa * cfg.k_degree(a) + sum(Fraction(vec.get(b, 0)) * cfg.meet(a, b) for b in names) for a in names]
    out.append(kappa * cfg.k_self + sum(Fraction(vec.get(b, 0)) * cfg.k_degree(b) for b in names))
    return out


def sympy_span_solvable(cfg, support, target):
    """Is there x with sum x_s (S . C) equal to the given pairing vector for all C and K?"""
    rows = [[cfg.meet(a, s) for s in support] for a in cfg.names]
    rows.append([cfg.k_degree(s) for s in support])
    m = sympy.Matrix(rows)
    rhs = sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in target])
    return m.rank() == m.row_join(rhs).rank()
