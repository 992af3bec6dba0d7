"""Exact arithmetic over Z/qZ for factored moduli.

Residues carry their modulus explicitly; mixing moduli raises instead of
silently coercing.  Valuations report an explicit "saturated" flag so that
"exactly p^k" and "at least p^k" stay distinguishable.  The multivariate
Hensel lift is Newton iteration with precision doubling and a final
verification pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import JacobianSingularError, ModulusError, PreconditionError


def inv_mod(a: int, m: int) -> int:
    """Inverse of a modulo m; raises ModulusError if not a unit."""
    try:
        return pow(a, -1, m)
    except ValueError:
        raise ModulusError(f"{a} is not a unit mod {m}") from None


def exact_div(x: int, t: int, q: int) -> int:
    """Divide the residue class x mod q by t, where t | q and t | x.

    Returns the quotient as a residue mod q // t.
    """
    if q % t:
        raise ModulusError(f"{t} does not divide the modulus {q}")
    x %= q
    if x % t:
        raise ModulusError(f"{t} does not divide {x} mod {q}")
    return (x // t) % (q // t)


def ord_int(x: int, p: int, r: int) -> tuple[int, bool]:
    """(ord_p(x mod p^r), saturated) with ord(0) = r flagged saturated."""
    x %= p**r
    if x == 0:
        return r, True
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, False


@dataclass(frozen=True)
class Residue:
    """An integer reduced mod an explicit modulus."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ModulusError(f"invalid modulus {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _same(self, other: "Residue") -> None:
        if self.modulus != other.modulus:
            raise ModulusError(
                f"mixed moduli {self.modulus} and {other.modulus}"
            )

    def __add__(self, other):
        self._same(other)
        return Residue(self.value + other.value, self.modulus)

    def __sub__(self, other):
        self._same(other)
        return Residue(self.value - other.value, self.modulus)

    def __mul__(self, other):
        self._same(other)
        return Residue(self.value * other.value, self.modulus)

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def inv(self) -> "Residue":
        return Residue(inv_mod(self.value, self.modulus), self.modulus)

    def reduce_to(self, m: int) -> "Residue":
        if self.modulus % m:
            raise ModulusError(f"{m} does not divide {self.modulus}")
        return Residue(self.value % m, m)


class Valuation(NamedTuple):
    v: int
    saturated: bool


def _prime_power_split(m: int, p: int) -> int:
    """Return r with m == p^r, or raise."""
    r = 0
    while m % p == 0:
        m //= p
        r += 1
    if m != 1 or r == 0:
        raise ModulusError(f"modulus is not a power of {p}")
    return r


def valuation(x: Residue, p: int) -> Valuation:
    """ord_p of a residue whose modulus is a power of p."""
    r = _prime_power_split(x.modulus, p)
    return Valuation(*ord_int(x.value, p, r))


def crt_ints(parts: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """CRT for (value, modulus) pairs with pairwise coprime moduli."""
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if math.gcd(parts[i][1], parts[j][1]) != 1:
                raise ModulusError(
                    f"moduli {parts[i][1]} and {parts[j][1]} are not coprime"
                )
    q = math.prod(m for _, m in parts) if parts else 1
    acc = 0
    for v, m in parts:
        rest = q // m
        acc += v * rest * inv_mod(rest, m)
    return acc % q, q


def crt_combine(parts: Sequence[Residue]) -> Residue:
    """Combine residues at pairwise coprime moduli into one residue."""
    v, q = crt_ints([(r.value, r.modulus) for r in parts])
    return Residue(v, q)


@dataclass(frozen=True)
class FactoredModulus:
    """A modulus q together with its prime factorization and level L.

    q0 = prod p_i, q1 = prod p_i^L, q2 = prod p_i^{4(L-1)}.
    """

    q: int
    factors: tuple[tuple[int, int], ...]
    L: int | None = None

    def __post_init__(self):
        if self.q < 2:
            raise ModulusError(f"modulus {self.q} < 2")
        prod = 1
        last = 1
        for p, a in self.factors:
            if p <= last:
                raise ModulusError("primes must be strictly increasing")
            if a < 1:
                raise ModulusError(f"exponent {a} < 1")
            last = p
            prod *= p**a
        if prod != self.q:
            raise ModulusError(f"factors do not multiply to {self.q}")
        if self.L is not None and self.L < 2:
            raise ModulusError(f"level L={self.L} < 2")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def min_alpha(self) -> int:
        return min(a for _, a in self.factors)

    @property
    def q0(self) -> int:
        return math.prod(self.primes)

    def _need_level(self) -> int:
        if self.L is None:
            raise ModulusError("level L is not set")
        return self.L

    @property
    def q1(self) -> int:
        L = self._need_level()
        return math.prod(p**L for p in self.primes)

    @property
    def q2(self) -> int:
        L = self._need_level()
        return math.prod(p ** (4 * (L - 1)) for p in self.primes)

    def with_level(self, L: int) -> "FactoredModulus":
        return FactoredModulus(self.q, self.factors, L)

    def check_dimension(self, d: int) -> None:
        """Assert that Z/p^L Z has at least d units at every prime."""
        L = self._need_level()
        for p in self.primes:
            if (p - 1) * p ** (L - 1) < d:
                raise ModulusError(
                    f"Z/{p}^{L}Z has fewer than {d} units; raise L"
                )

    def prime_piece(self, i: int) -> "FactoredModulus":
        """Single-prime-power sub-modulus p_i^{alpha_i}, same level."""
        p, a = self.factors[i]
        return FactoredModulus(p**a, ((p, a),), self.L)


def factorize(n: int) -> FactoredModulus:
    """Factor n >= 2 into prime powers (level left unset)."""
    if n < 2:
        raise ModulusError(f"cannot factor {n} < 2")
    from sympy import factorint

    factors = tuple(sorted(factorint(n).items()))
    return FactoredModulus(n, factors)


def min_level_L0(d: int, primes: Sequence[int]) -> tuple[dict[int, int], int]:
    """Per-prime minimal L >= 2 with phi(p^L) >= d, and the overall max."""
    if d < 2:
        raise PreconditionError(f"dimension {d} < 2")
    per = {}
    for p in primes:
        L = 2
        while (p - 1) * p ** (L - 1) < d:
            L += 1
        per[p] = L
    overall = max(per.values(), default=2)
    return per, overall


# ---------------------------------------------------------------------------
# Multivariate polynomial systems and Hensel lifting.
#
# A polynomial is a mapping exponent-vector -> integer coefficient, stored
# as a sorted tuple of (exponents, coeff) pairs so systems are hashable.


Poly = tuple[tuple[tuple[int, ...], int], ...]


def make_poly(terms: dict[tuple[int, ...], int]) -> Poly:
    return tuple(sorted((e, c) for e, c in terms.items() if c != 0))


def poly_eval(poly: Poly, xs: Sequence[int], m: int) -> int:
    acc = 0
    for exps, coeff in poly:
        t = coeff
        for x, e in zip(xs, exps):
            if e:
                t = t * pow(x, e, m)
        acc += t
    return acc % m


def poly_diff(poly: Poly, i: int) -> Poly:
    terms: dict[tuple[int, ...], int] = {}
    for exps, coeff in poly:
        e = exps[i]
        if e == 0:
            continue
        new = exps[:i] + (e - 1,) + exps[i + 1 :]
        terms[new] = terms.get(new, 0) + coeff * e
    return make_poly(terms)


@dataclass(frozen=True)
class PolySystem:
    """n-variable integer polynomial system considered mod powers of p."""

    n: int
    equations: tuple[Poly, ...]
    p: int

    def __post_init__(self):
        for poly in self.equations:
            for exps, _ in poly:
                if len(exps) != self.n:
                    raise PreconditionError(
                        "exponent vector length does not match variable count"
                    )

    def eval(self, xs: Sequence[int], m: int) -> list[int]:
        return [poly_eval(eq, xs, m) for eq in self.equations]

    def jacobian(self) -> list[list[Poly]]:
        return [
            [poly_diff(eq, j) for j in range(self.n)] for eq in self.equations
        ]


def _inv_matrix_mod(rows: list[list[int]], m: int, p: int) -> list[list[int]]:
    """Invert a square matrix mod m whose determinant is a unit mod p.

    Gauss-Jordan with pivots chosen to be units mod p.
    """
    n = len(rows)
    a = [[rows[i][j] % m for j in range(n)] + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col] % p != 0:
                piv = r
                break
        if piv is None:
            raise JacobianSingularError(
                f"no unit pivot in column {col} mod {p}",
                jacobian_mod_p=[[rows[i][j] % p for j in range(n)] for i in range(n)],
            )
        a[col], a[piv] = a[piv], a[col]
        inv = inv_mod(a[col][col], m)
        a[col] = [(x * inv) % m for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [(x - f * y) % m for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def hensel_lift_system(
    sys: PolySystem,
    x0: Sequence[int],
    base_level: int,
    target_level: int,
) -> tuple[int, ...]:
    """Lift a solution of sys from mod p^base_level to mod p^target_level.

    Requires sys(x0) == 0 mod p^base_level and a Jacobian invertible mod p.
    The returned vector is congruent to x0 mod p^base_level.
    """
    p = sys.p
    if target_level < base_level:
        raise PreconditionError("target level below base level")
    if len(x0) != sys.n:
        raise PreconditionError("initial vector length mismatch")
    m0 = p**base_level
    if any(v % m0 for v in sys.eval(x0, m0)):
        raise PreconditionError(
            f"initial vector is not a solution mod {p}^{base_level}"
        )
    jac = sys.jacobian()
    jp = [[poly_eval(e, x0, p) for e in row] for row in jac]
    _inv_matrix_mod(jp, p, p)  # raises JacobianSingularError if singular

    x = tuple(v % m0 for v in x0)
    level = base_level
    while level < target_level:
        level = min(2 * level, target_level)
        m = p**level
        f = sys.eval(x, m)
        j = [[poly_eval(e, x, m) for e in row] for row in jac]
        jinv = _inv_matrix_mod(j, m, p)
        x = tuple(
            (x[i] - sum(jinv[i][k] * f[k] for k in range(sys.n))) % m
            for i in range(sys.n)
        )
    m = p**target_level
    if any(v % m for v in sys.eval(x, m)):
        raise JacobianSingularError("post-lift verification failed")
    return x
