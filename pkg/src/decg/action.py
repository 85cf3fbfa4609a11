"""Concrete Z^2-actions on compact spaces, with exact shift arithmetic.

Two systems are provided.  The two-dimensional full shift acts on doubly
periodic configurations: a point is a w x w fundamental domain of symbols
tiled over Z^2, so every metric quantity is a finite, exact computation.
Shift distances are powers alpha**-m and are stored as integer exponents
(log domain), never floats, so all comparisons downstream are exact.

The torus system is an empirical stand-in: two commuting hyperbolic integer
matrices acting on the 2-torus, measured by a truncated weighted metric in
floating point.  No exactness is claimed for it.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from .errors import CapExceeded, MismatchedSystems, PrecisionLoss

DEFAULT_ENUMERATION_CAP = 1 << 25

_MASK64 = (1 << 64) - 1
_BASE36 = "0123456789abcdefghijklmnopqrstuvwxyz"
_BASE36_INDEX = {ch: i for i, ch in enumerate(_BASE36)}
_PATTERN_RE = re.compile(r"^k([0-9]+):w([0-9]+):([0-9a-z]+)$")


class LatticeVector(NamedTuple):
    """An element of Z^2 under the sup norm; both a shift and a color."""

    x: int
    y: int

    @property
    def norm(self) -> int:
        return max(abs(self.x), abs(self.y))

    def __add__(self, other):  # type: ignore[override]
        return LatticeVector(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return LatticeVector(self.x - other[0], self.y - other[1])

    def __neg__(self):
        return LatticeVector(-self.x, -self.y)


def ring_vectors(radius: int) -> Iterator[LatticeVector]:
    """Vectors of sup norm exactly `radius`, in (x, y) lexicographic order."""
    if radius == 0:
        yield LatticeVector(0, 0)
        return
    for a in range(-radius, radius + 1):
        if abs(a) == radius:
            for b in range(-radius, radius + 1):
                yield LatticeVector(a, b)
        else:
            yield LatticeVector(a, -radius)
            yield LatticeVector(a, radius)


@functools.lru_cache(maxsize=None)
def ball_vectors(radius: int) -> tuple[LatticeVector, ...]:
    """All vectors of sup norm <= radius, ring by ring, lexicographic in
    each ring.  This is the scan order used everywhere a deterministic
    choice among vectors is needed."""
    out: list[LatticeVector] = []
    for r in range(radius + 1):
        out.extend(ring_vectors(r))
    return tuple(out)


@functools.total_ordering
class ShiftDistance:
    """A value alpha**-exponent of the shift ultrametric, held exactly.

    `exponent is None` encodes distance zero (identical points).  Ordering
    is by exponent alone, reversed: a smaller exponent is a larger
    distance, and zero is below every positive value.  Instances from
    systems with different alpha must not be compared.
    """

    __slots__ = ("exponent",)

    def __init__(self, exponent: int | None):
        if exponent is not None and exponent < 0:
            raise ValueError("distance exponent must be >= 0")
        self.exponent = exponent

    @classmethod
    def zero(cls) -> "ShiftDistance":
        return cls(None)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def _key(self) -> float:
        return math.inf if self.exponent is None else self.exponent

    def __eq__(self, other):
        if not isinstance(other, ShiftDistance):
            return NotImplemented
        return self.exponent == other.exponent

    def __lt__(self, other):
        if not isinstance(other, ShiftDistance):
            return NotImplemented
        return self._key() > other._key()

    def __hash__(self):
        return hash(("ShiftDistance", self.exponent))

    def __repr__(self):
        if self.exponent is None:
            return "ShiftDistance(zero)"
        return f"ShiftDistance(alpha**-{self.exponent})"


@dataclass(frozen=True)
class PeriodicConfiguration:
    """A doubly periodic point of the full shift.

    `cells` is the w x w fundamental domain in row-major order: the symbol
    at lattice site (x, y) is cells[(x mod w) * w + (y mod w)].
    """

    width: int
    alphabet_size: int
    cells: tuple[int, ...]

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("width must be a positive integer")
        if not 2 <= self.alphabet_size <= 36:
            raise ValueError("alphabet size must be in 2..36 (base-36 text encoding)")
        if len(self.cells) != self.width * self.width:
            raise ValueError(
                f"expected {self.width * self.width} cells, got {len(self.cells)}"
            )
        for s in self.cells:
            if not 0 <= s < self.alphabet_size:
                raise ValueError(f"cell symbol {s} outside 0..{self.alphabet_size - 1}")

    def at(self, x: int, y: int) -> int:
        w = self.width
        return self.cells[(x % w) * w + (y % w)]

    def translated(self, v: LatticeVector) -> "PeriodicConfiguration":
        """The point u -> self(u + v)."""
        w = self.width
        cells = self.cells
        vx, vy = v[0] % w, v[1] % w
        new = tuple(
            cells[((a + vx) % w) * w + ((b + vy) % w)]
            for a in range(w)
            for b in range(w)
        )
        return PeriodicConfiguration(w, self.alphabet_size, new)

    def with_cell(self, x: int, y: int, symbol: int) -> "PeriodicConfiguration":
        w = self.width
        idx = (x % w) * w + (y % w)
        cells = list(self.cells)
        cells[idx] = symbol
        return PeriodicConfiguration(w, self.alphabet_size, tuple(cells))

    @classmethod
    def constant(cls, alphabet_size: int, width: int, symbol: int = 0):
        return cls(width, alphabet_size, (symbol,) * (width * width))


def encode_pattern(point: PeriodicConfiguration) -> str:
    """Text form `k<k>:w<w>:<w*w base-36 digits, row-major>`."""
    digits = "".join(_BASE36[s] for s in point.cells)
    return f"k{point.alphabet_size}:w{point.width}:{digits}"


def parse_pattern(text: str) -> PeriodicConfiguration:
    m = _PATTERN_RE.match(text)
    if m is None:
        raise ValueError(f"malformed pattern encoding: {text!r}")
    k, w, digits = int(m.group(1)), int(m.group(2)), m.group(3)
    if len(digits) != w * w:
        raise ValueError(f"pattern encoding has {len(digits)} digits, expected {w * w}")
    cells = tuple(_BASE36_INDEX[ch] for ch in digits)
    return PeriodicConfiguration(w, k, cells)


def _check_shift_pair(x: PeriodicConfiguration, y: PeriodicConfiguration) -> None:
    if x.width != y.width or x.alphabet_size != y.alphabet_size:
        raise MismatchedSystems(
            f"points live in different shifts: (w={x.width}, k={x.alphabet_size}) "
            f"vs (w={y.width}, k={y.alphabet_size})"
        )


def min_diff_vector(
    x: PeriodicConfiguration, y: PeriodicConfiguration
) -> tuple[LatticeVector | None, ShiftDistance]:
    """First lattice site where x and y differ, in ball scan order.

    Returns (None, zero) for identical points, else (v0, alpha**-|v0|)
    where v0 is the differing site of least sup norm, ties broken by the
    module-wide scan order.  Scanning |v| <= w suffices: the differing set
    is w-periodic and nonempty, so it meets the radius-w window.
    """
    _check_shift_pair(x, y)
    if x.cells == y.cells:
        return None, ShiftDistance.zero()
    w = x.width
    cx, cy = x.cells, y.cells
    for r in range(w + 1):
        for v in ring_vectors(r):
            idx = (v.x % w) * w + (v.y % w)
            if cx[idx] != cy[idx]:
                return v, ShiftDistance(r)
    raise AssertionError("distinct periodic points must differ within one period")


def shift_min_diff(x: PeriodicConfiguration, y: PeriodicConfiguration) -> ShiftDistance:
    """The shift ultrametric alpha**-m, m = min sup norm of a differing site."""
    return min_diff_vector(x, y)[1]


@dataclass(frozen=True)
class ShiftSystem:
    """The full shift over k symbols with base-alpha log-domain metric."""

    alphabet_size: int = 2
    alpha: Fraction = Fraction(2)

    def __post_init__(self):
        if not 2 <= self.alphabet_size <= 36:
            raise ValueError("alphabet size must be in 2..36")
        alpha = self.alpha if isinstance(self.alpha, Fraction) else Fraction(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if alpha <= 1:
            raise ValueError("alpha must exceed 1")

    @property
    def threshold_exponent(self) -> int:
        """Least t with alpha**t >= 4*alpha, so alpha**-t <= 1/(4*alpha).

        "Distance at least 1/(4*alpha)" is taken to mean "exponent at most
        t"; for the default alpha = 2 the two agree exactly (t = 3,
        2**-3 = 1/8)."""
        t = 0
        p = Fraction(1)
        bound = 4 * self.alpha
        while p < bound:
            p *= self.alpha
            t += 1
        return t

    @property
    def threshold(self) -> ShiftDistance:
        return ShiftDistance(self.threshold_exponent)

    def epsilon(self, n: int) -> ShiftDistance:
        """The separation scale alpha**-n."""
        return ShiftDistance(n)

    def check_point(self, x: PeriodicConfiguration) -> None:
        if x.alphabet_size != self.alphabet_size:
            raise MismatchedSystems(
                f"point over {x.alphabet_size} symbols in a "
                f"{self.alphabet_size}-symbol shift"
            )

    def apply(self, v: LatticeVector, x: PeriodicConfiguration) -> PeriodicConfiguration:
        """The action: apply(v, x) at u equals x at u + v."""
        self.check_point(x)
        return x.translated(v)

    def distance(self, x: PeriodicConfiguration, y: PeriodicConfiguration) -> ShiftDistance:
        self.check_point(x)
        return shift_min_diff(x, y)

    def distance_at_least(
        self, x: PeriodicConfiguration, y: PeriodicConfiguration, exponent: int
    ) -> bool:
        """Exact test distance(x, y) >= alpha**-exponent, via an early-exit
        window scan (equivalent to comparing shift_min_diff, but cheaper)."""
        _check_shift_pair(x, y)
        if x.cells == y.cells:
            return False
        w = x.width
        cx, cy = x.cells, y.cells
        for v in ball_vectors(min(exponent, w)):
            idx = (v.x % w) * w + (v.y % w)
            if cx[idx] != cy[idx]:
                return True
        return False


def enumerate_periodic_points(
    alphabet_size: int, width: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[PeriodicConfiguration]:
    """All k**(w*w) periodic points in lexicographic cell order.

    The first pattern is all-zero and the last is all-(k-1).  Raises
    CapExceeded when the universe is larger than `cap`.
    """
    total = alphabet_size ** (width * width)
    if total > cap:
        raise CapExceeded(
            f"{alphabet_size}^{width * width} = {total} patterns exceeds cap {cap}"
        )
    for combo in itertools.product(range(alphabet_size), repeat=width * width):
        yield PeriodicConfiguration(width, alphabet_size, combo)


def mix64(seed: int, index: int) -> int:
    """Deterministic 64-bit mixer used for all seeded sampling.

    Bit-exact definition (all arithmetic mod 2**64):

        z = seed + (index + 1) * 0x9E3779B97F4A7C15
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)

    This is the SplitMix64 finalizer over seed plus a golden-ratio
    multiple of (index + 1).
    """
    z = (seed + (index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def sample_periodic_points(
    alphabet_size: int, width: int, count: int, seed: int
) -> list[PeriodicConfiguration]:
    """`count` distinct periodic points, deterministic in (k, w, count, seed).

    Draw i uses the per-item seed mix64(seed, i); cell j of the draw is
    mix64(item_seed, j) mod k.  Duplicate draws are skipped, so the output
    order is the order of first appearance.
    """
    universe = alphabet_size ** (width * width)
    if count > universe:
        raise CapExceeded(
            f"requested {count} distinct patterns but only {universe} exist"
        )
    seed &= _MASK64
    cells_per = width * width
    # Generous stall guard; duplicate churn only matters when the request
    # covers most of a small universe.
    if universe <= (1 << 22):
        attempt_cap = 64 * universe + 256
    else:
        attempt_cap = 64 * count + 65536
    seen: set[tuple[int, ...]] = set()
    out: list[PeriodicConfiguration] = []
    index = 0
    while len(out) < count:
        if index >= attempt_cap:
            raise CapExceeded(
                f"sampling stalled after {index} draws for {count} patterns"
            )
        item = mix64(seed, index)
        cells = tuple(mix64(item, j) % alphabet_size for j in range(cells_per))
        index += 1
        if cells in seen:
            continue
        seen.add(cells)
        out.append(PeriodicConfiguration(width, alphabet_size, cells))
    return out


# --- torus system ---------------------------------------------------------

Matrix = tuple[tuple[int, int], tuple[int, int]]
TorusPoint = tuple[float, float]


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _mat_det(a: Matrix) -> int:
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]


def _mat_inv_unimodular(a: Matrix) -> Matrix:
    det = _mat_det(a)
    if det == 1:
        return ((a[1][1], -a[0][1]), (-a[1][0], a[0][0]))
    if det == -1:
        return ((-a[1][1], a[0][1]), (a[1][0], -a[0][0]))
    raise ValueError("matrix is not unimodular")


_IDENT: Matrix = ((1, 0), (0, 1))


def _mat_pow(a: Matrix, e: int, cap: int) -> Matrix:
    if e < 0:
        a, e = _mat_inv_unimodular(a), -e
    out = _IDENT
    base = a
    while e:
        if e & 1:
            out = _mat_mul(out, base)
        e >>= 1
        if e:
            base = _mat_mul(base, base)
        m = max(abs(v) for row in out for v in row)
        if m > cap:
            raise PrecisionLoss(f"matrix power entry magnitude {m} exceeds cap {cap}")
    return out


def _has_unit_modulus_eigenvalue(a: Matrix) -> bool:
    # Integer 2x2 with |det| = 1: eigenvalues on the unit circle iff
    # |trace| <= 2 when det = 1, or trace = 0 when det = -1.
    tr = a[0][0] + a[1][1]
    det = _mat_det(a)
    if det == 1:
        return abs(tr) <= 2
    return tr == 0


@dataclass(frozen=True)
class TorusSystem:
    """Two commuting hyperbolic unimodular matrices acting on the 2-torus.

    The metric is the truncated weighted sup metric
        D(x, y) = max_{|v| <= N} alpha**-|v| * rho(T^v x, T^v y),
    a floating-point surrogate; this system is an empirical probe only.
    Matrix power entries above `magnitude_cap` (default 2**52, the float
    integer-precision limit) raise PrecisionLoss rather than silently
    rounding.
    """

    matrix_a: Matrix
    matrix_b: Matrix
    alpha: Fraction = Fraction(2)
    truncation_radius: int = 8
    magnitude_cap: int = 1 << 52

    def __post_init__(self):
        alpha = self.alpha if isinstance(self.alpha, Fraction) else Fraction(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "matrix_a", tuple(map(tuple, self.matrix_a)))
        object.__setattr__(self, "matrix_b", tuple(map(tuple, self.matrix_b)))
        if alpha <= 1:
            raise ValueError("alpha must exceed 1")
        if self.truncation_radius < 0:
            raise ValueError("truncation radius must be >= 0")
        for name, m in (("A", self.matrix_a), ("B", self.matrix_b)):
            if abs(_mat_det(m)) != 1:
                raise ValueError(f"matrix {name} must have determinant +-1")
            if _has_unit_modulus_eigenvalue(m):
                raise ValueError(f"matrix {name} has an eigenvalue of modulus 1")
        if _mat_mul(self.matrix_a, self.matrix_b) != _mat_mul(
            self.matrix_b, self.matrix_a
        ):
            raise ValueError("generating matrices must commute")

    @property
    def threshold(self) -> float:
        return 1.0 / (4.0 * float(self.alpha))

    def epsilon(self, n: int) -> float:
        return float(self.alpha) ** (-n)

    def matrix_for(self, v: LatticeVector) -> Matrix:
        a = _mat_pow(self.matrix_a, v[0], self.magnitude_cap)
        b = _mat_pow(self.matrix_b, v[1], self.magnitude_cap)
        return _mat_mul(a, b)

    def apply(self, v: LatticeVector, x: TorusPoint) -> TorusPoint:
        m = self.matrix_for(v)
        return _apply_matrix(m, x)

    def distance(self, x: TorusPoint, y: TorusPoint) -> float:
        return torus_distance(self, x, y)


def _apply_matrix(m: Matrix, x: TorusPoint) -> TorusPoint:
    return (
        (m[0][0] * x[0] + m[0][1] * x[1]) % 1.0,
        (m[1][0] * x[0] + m[1][1] * x[1]) % 1.0,
    )


def torus_metric(x: TorusPoint, y: TorusPoint) -> float:
    """Sup-norm distance on the 2-torus, capped at 1."""
    out = 0.0
    for a, b in zip(x, y):
        d = abs(a - b) % 1.0
        d = min(d, 1.0 - d)
        if d > out:
            out = d
    return min(out, 1.0)


@functools.lru_cache(maxsize=None)
def _torus_transforms(system: TorusSystem) -> tuple[tuple[LatticeVector, Matrix], ...]:
    return tuple(
        (v, system.matrix_for(v)) for v in ball_vectors(system.truncation_radius)
    )


def torus_distance(system: TorusSystem, x: TorusPoint, y: TorusPoint) -> float:
    """Truncated weighted metric; 0.0 when the points agree to 1e-12."""
    a = float(system.alpha)
    best = 0.0
    for v, m in _torus_transforms(system):
        d = torus_metric(_apply_matrix(m, x), _apply_matrix(m, y))
        val = a ** (-v.norm) * d
        if val > best:
            best = val
    return 0.0 if best <= 1e-12 else best
