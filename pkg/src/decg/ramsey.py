"""Exact opposite-Ramsey numbers on tiny instances, and classical bounds.

The opposite-Ramsey number r(p, q) is the minimum over all p-colorings of
the edges of K_q of the largest monochromatic clique order.  The oracle
enumerates colorings as a mixed-radix counter over the edges in (i < j)
order, pruning any prefix that already forces a clique at least as large
as the running minimum, plus color-relabeling symmetry (a fresh color may
only be introduced as the smallest unused index, which preserves both the
minimum and the lexicographically first extremal coloring, since relabeling
colors never changes clique structure and only lowers lexicographic rank).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import cliques as _cliques
from .colorer import ColoredGraph
from .errors import CapExceeded, InconsistentCertificate
from .intlog import floor_ln

DEFAULT_ORACLE_CAP = 1 << 26


def edge_list(q: int) -> tuple[tuple[int, int], ...]:
    """Edges of K_q in (i < j) lexicographic order."""
    return tuple((i, j) for i in range(q) for j in range(i + 1, q))


@dataclass(frozen=True)
class OppositeRamseyResult:
    p: int
    q: int
    r: int
    extremal_coloring: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "extremal_coloring": list(self.extremal_coloring),
            "edge_order": [list(e) for e in edge_list(self.q)],
        }


def _check_cap(p: int, q: int, cap: int) -> None:
    edges = q * (q - 1) // 2
    nominal = p**edges
    if nominal > cap:
        raise CapExceeded(
            f"{p}^{edges} = {nominal} colorings exceeds enumeration cap {cap}"
        )


def _mask_clique(mask: int, rows) -> int:
    """Max clique order within the vertex bitmask, tiny-instance brute force."""
    best = 0

    def go(depth: int, p: int):
        nonlocal best
        if p == 0:
            if depth > best:
                best = depth
            return
        while p:
            if depth + p.bit_count() <= best:
                return
            low = p & -p
            v = low.bit_length() - 1
            go(depth + 1, p & rows[v])
            p ^= low

    go(0, mask)
    return best


def _forced_order(rows, i: int, j: int) -> int:
    """Largest monochromatic clique through edge (i, j) after adding it."""
    common = rows[i] & rows[j]
    if common == 0:
        return 2
    return 2 + _mask_clique(common, rows)


def opposite_ramsey_exact(
    p: int, q: int, cap: int = DEFAULT_ORACLE_CAP
) -> OppositeRamseyResult:
    """Exact r(p, q) with the first extremal coloring in enumeration order.

    The stored extremal coloring attains the minimum: every p-coloring of
    K_q has a monochromatic clique of order r, and this one has none of
    order r + 1.
    """
    if p < 1:
        raise ValueError("need at least one color")
    if q < 2:
        raise ValueError("need at least two vertices")
    _check_cap(p, q, cap)
    edges = edge_list(q)
    total = len(edges)
    adj = [[0] * q for _ in range(p)]
    col = [0] * total
    best = q + 1
    best_col: tuple[int, ...] | None = None

    def rec(t: int, cur: int, used: int):
        nonlocal best, best_col
        if t == total:
            if cur < best:
                best = cur
                best_col = tuple(col)
            return
        i, j = edges[t]
        bi, bj = 1 << j, 1 << i
        for c in range(min(used + 1, p)):
            rows = adj[c]
            forced = _forced_order(rows, i, j)
            new = cur if cur >= forced else forced
            if new >= best:
                continue
            rows[i] |= bi
            rows[j] |= bj
            col[t] = c
            rec(t + 1, new, used if c < used else used + 1)
            rows[i] &= ~bi
            rows[j] &= ~bj

    rec(0, 1, 0)
    assert best_col is not None
    return OppositeRamseyResult(p, q, best, best_col)


def ramsey_holds(p: int, k: int, q: int, cap: int = DEFAULT_ORACLE_CAP) -> bool:
    """True iff every p-coloring of K_q has a monochromatic K_k.

    Shares the pruned enumerator with opposite_ramsey_exact and stops at
    the first coloring with no monochromatic K_k.
    """
    if p < 1 or q < 2 or k < 1:
        raise ValueError("parameters must satisfy p >= 1, k >= 1, q >= 2")
    if k <= 1:
        return True
    if k == 2:
        return True  # any edge is a monochromatic K_2, and q >= 2 has one
    _check_cap(p, q, cap)
    edges = edge_list(q)
    total = len(edges)
    adj = [[0] * q for _ in range(p)]

    def rec(t: int, used: int) -> bool:
        # True when some completion below threshold k exists
        if t == total:
            return True
        i, j = edges[t]
        bi, bj = 1 << j, 1 << i
        for c in range(min(used + 1, p)):
            rows = adj[c]
            if _forced_order(rows, i, j) >= k:
                continue
            rows[i] |= bi
            rows[j] |= bj
            found = rec(t + 1, used if c < used else used + 1)
            rows[i] &= ~bi
            rows[j] &= ~bj
            if found:
                return True
        return False

    return not rec(0, 0)


def verify_extremal(result: OppositeRamseyResult) -> bool:
    """Re-check the stored extremal coloring through the clique engine:
    its largest monochromatic clique must be exactly r."""
    edges = edge_list(result.q)
    masks = [[0] * result.q for _ in range(result.p)]
    for (i, j), c in zip(edges, result.extremal_coloring):
        masks[c][i] |= 1 << j
        masks[c][j] |= 1 << i
    orders = [_cliques.max_clique(m)[0] for m in masks]
    return max(orders) == result.r


def gg_upper(g: int, k: int) -> int:
    """The classical product-coloring upper bound g**(g*k) for the g-color
    Ramsey number of K_k, as an exact big integer."""
    if g < 1 or k < 1:
        raise ValueError("g and k must be >= 1")
    return g ** (g * k)


def lr_lower(g: int, k: int, c: Fraction | int = 1) -> int:
    """The probabilistic lower bound 2**ceil(c*g*k), exact.

    The hidden constant is caller-supplied (default 1) and is illustrative
    only; reports must label it as such.
    """
    if g < 1 or k < 1:
        raise ValueError("g and k must be >= 1")
    c = Fraction(c)
    if c <= 0:
        raise ValueError("constant must be positive")
    return 2 ** math.ceil(c * g * k)


@dataclass(frozen=True)
class BoundsRecord:
    g: int
    k: int
    lr_constant: Fraction
    gg_upper: int
    lr_lower: int

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "k": self.k,
            "lr_constant": str(self.lr_constant),
            "lr_constant_note": "illustrative; the true constant is not pinned down",
            "gg_upper": self.gg_upper,
            "lr_lower": self.lr_lower,
        }


def bounds_record(g: int, k: int, c: Fraction | int = 1) -> BoundsRecord:
    return BoundsRecord(g, k, Fraction(c), gg_upper(g, k), lr_lower(g, k, c))


@dataclass(frozen=True)
class SandwichReport:
    """Classical statements implied by a concrete coloring certificate or an
    exact opposite-Ramsey value, compared against the known bounds."""

    p: int
    q: int
    r_upper: int
    exact: bool
    statements: tuple[str, ...]
    gg_at: int
    lr_at: int
    lr_constant: Fraction
    certificate_weaker_than_lr: bool

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "r_upper": self.r_upper,
            "exact": self.exact,
            "statements": list(self.statements),
            "gg_upper_at_k": self.gg_at,
            "lr_lower_at_k": self.lr_at,
            "lr_constant": str(self.lr_constant),
            "lr_constant_note": "illustrative; the true constant is not pinned down",
            "certificate_weaker_than_lr": self.certificate_weaker_than_lr,
        }


def sandwich_report(
    p: int,
    q: int,
    r_upper: int,
    certificate: "_cliques.BoundCertificate | None" = None,
    graph: ColoredGraph | None = None,
    exact: bool = False,
    lr_constant: Fraction | int = 1,
) -> SandwichReport:
    """Emit the classical statements implied by the parameters.

    A coloring with largest monochromatic clique r_upper shows that the
    p-color Ramsey number of K_{r_upper+1} exceeds q.  When r_upper is the
    exact opposite-Ramsey value, q also bounds the p-color Ramsey number
    of K_{r_upper} from above.  The comparison against lr_lower at the
    same parameters records honestly whether the desk-scale certificate is
    weaker than the probabilistic bound.
    """
    if certificate is not None:
        if certificate.p != p or certificate.q != q or certificate.bound != r_upper:
            raise InconsistentCertificate(
                f"certificate is for (p={certificate.p}, q={certificate.q}, "
                f"bound={certificate.bound}), not (p={p}, q={q}, bound={r_upper})"
            )
        if graph is not None and certificate.graph_checksum != graph.checksum_hex():
            raise InconsistentCertificate(
                f"certificate checksum {certificate.graph_checksum} does not match "
                f"graph checksum {graph.checksum_hex()}"
            )
    statements = [f"R_{p}({r_upper + 1}) > {q}"]
    if exact:
        statements.append(f"R_{p}({r_upper}) <= {q}")
    c = Fraction(lr_constant)
    k = r_upper + 1
    gg = gg_upper(p, k)
    lr = lr_lower(p, k, c)
    return SandwichReport(
        p=p,
        q=q,
        r_upper=r_upper,
        exact=exact,
        statements=tuple(statements),
        gg_at=gg,
        lr_at=lr,
        lr_constant=c,
        certificate_weaker_than_lr=q < lr,
    )


def floor_log_shift(n: int) -> int:
    """floor(ln n) + 1 for integer n >= 1, by exact rational bracketing of
    powers of e (no floating-point boundary errors)."""
    return floor_ln(n) + 1
