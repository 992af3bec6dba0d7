"""Element algebra for SL_d(Z/qZ), products of SL groups, and SA_d(Z/qZ).

Matrices are stored as flat row-major tuples of ints with one shared
modulus; mixing moduli or dimensions raises.  Group constructors verify
det == 1; a raw (unchecked) form exists for intermediate computations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ModulusError, PreconditionError, SeedConditionError
from .modarith import FactoredModulus, inv_mod, ord_int


# -- flat-tuple helpers ------------------------------------------------------


def identity_entries(d: int) -> tuple[int, ...]:
    return tuple(1 if i == j else 0 for i in range(d) for j in range(d))


def _mul_flat(d: int, q: int, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    out = []
    for i in range(d):
        row = a[i * d : (i + 1) * d]
        for j in range(d):
            out.append(sum(row[k] * b[k * d + j] for k in range(d)) % q)
    return tuple(out)


def det_int(d: int, entries: Sequence[int]) -> int:
    """Exact integer determinant (fraction-free Bareiss)."""
    a = [[int(entries[i * d + j]) for j in range(d)] for i in range(d)]
    sign = 1
    prev = 1
    for k in range(d - 1):
        if a[k][k] == 0:
            for r in range(k + 1, d):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, d):
            for j in range(k + 1, d):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[d - 1][d - 1]


def _minor(d: int, entries: Sequence[int], row: int, col: int) -> list[int]:
    return [
        entries[i * d + j]
        for i in range(d)
        if i != row
        for j in range(d)
        if j != col
    ]


def adjugate_int(d: int, entries: Sequence[int]) -> list[int]:
    """Integer adjugate: adj(A)[j][i] = cofactor(i, j)."""
    if d == 1:
        return [1]
    adj = [0] * (d * d)
    for i in range(d):
        for j in range(d):
            c = det_int(d - 1, _minor(d, entries, i, j))
            if (i + j) % 2:
                c = -c
            adj[j * d + i] = c
    return adj


# -- core types --------------------------------------------------------------


@dataclass(frozen=True)
class MatModQ:
    """A d x d matrix mod q.  checked=True means det == 1 was verified."""

    d: int
    q: int
    entries: tuple[int, ...]
    checked: bool = False

    def __post_init__(self):
        if len(self.entries) != self.d * self.d:
            raise PreconditionError("entry count does not match dimension")
        object.__setattr__(
            self, "entries", tuple(v % self.q for v in self.entries)
        )

    @classmethod
    def group_element(cls, d: int, q: int, entries: Iterable[int]) -> "MatModQ":
        m = cls(d, q, tuple(entries))
        if m.det() != 1 % q:
            raise PreconditionError(f"det = {m.det()} != 1 mod {q}")
        return cls(d, q, m.entries, checked=True)

    @classmethod
    def raw(cls, d: int, q: int, entries: Iterable[int]) -> "MatModQ":
        return cls(d, q, tuple(entries))

    @classmethod
    def identity(cls, d: int, q: int) -> "MatModQ":
        return cls(d, q, identity_entries(d), checked=True)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self.entries[i * self.d + j]

    def det(self) -> int:
        return det_int(self.d, self.entries) % self.q

    def rows(self) -> list[list[int]]:
        d = self.d
        return [list(self.entries[i * d : (i + 1) * d]) for i in range(d)]

    def transpose(self) -> "MatModQ":
        d = self.d
        ent = tuple(self.entries[j * d + i] for i in range(d) for j in range(d))
        return MatModQ(d, self.q, ent, checked=self.checked)

    def is_identity(self) -> bool:
        return self.entries == identity_entries(self.d)


def _check_compatible(a: MatModQ, b: MatModQ) -> None:
    if a.d != b.d:
        raise PreconditionError(f"dimension mismatch {a.d} vs {b.d}")
    if a.q != b.q:
        raise ModulusError(f"modulus mismatch {a.q} vs {b.q}")


def mat_mul(a: MatModQ, b: MatModQ) -> MatModQ:
    _check_compatible(a, b)
    ent = _mul_flat(a.d, a.q, a.entries, b.entries)
    return MatModQ(a.d, a.q, ent, checked=a.checked and b.checked)


def mat_inv(a: MatModQ) -> MatModQ:
    det = a.det()
    dinv = inv_mod(det, a.q)  # raises if det is not a unit
    adj = adjugate_int(a.d, a.entries)
    ent = tuple((x * dinv) % a.q for x in adj)
    return MatModQ(a.d, a.q, ent, checked=a.checked)


@dataclass(frozen=True)
class AffineModQ:
    """Element (h, u) of SA_d(Z/qZ); h is the linear part, u the translation.

    Product law: (h1, u1) * (h2, u2) = (h1 h2, h1 u2 + u1), i.e. composition
    of the affine maps x -> h x + u.
    """

    linear: MatModQ
    trans: tuple[int, ...]

    def __post_init__(self):
        if len(self.trans) != self.linear.d:
            raise PreconditionError("translation length does not match d")
        object.__setattr__(
            self, "trans", tuple(v % self.linear.q for v in self.trans)
        )

    @classmethod
    def identity(cls, d: int, q: int) -> "AffineModQ":
        return cls(MatModQ.identity(d, q), (0,) * d)

    @property
    def d(self) -> int:
        return self.linear.d

    @property
    def q(self) -> int:
        return self.linear.q

    def act(self, v: Sequence[int]) -> tuple[int, ...]:
        h, q, d = self.linear, self.q, self.d
        return tuple(
            (sum(h[i, k] * v[k] for k in range(d)) + self.trans[i]) % q
            for i in range(d)
        )

    def is_identity(self) -> bool:
        return self.linear.is_identity() and not any(self.trans)


def affine_mul(g1: AffineModQ, g2: AffineModQ) -> AffineModQ:
    _check_compatible(g1.linear, g2.linear)
    return AffineModQ(mat_mul(g1.linear, g2.linear), g1.act(g2.trans))


def affine_inv(g: AffineModQ) -> AffineModQ:
    hinv = mat_inv(g.linear)
    d, q = g.d, g.q
    u = tuple(
        -sum(hinv[i, k] * g.trans[k] for k in range(d)) % q for i in range(d)
    )
    return AffineModQ(hinv, u)


def theta(g: AffineModQ) -> MatModQ:
    """Quotient homomorphism onto the linear part."""
    return g.linear


def tau(g: AffineModQ) -> tuple[int, ...]:
    """Translation part: the image of the zero vector."""
    return g.act((0,) * g.d)


@dataclass(frozen=True)
class ProductModQ:
    """Element of SL_{d_1} x ... x SL_{d_k} over one modulus q."""

    components: tuple[MatModQ, ...]

    def __post_init__(self):
        qs = {c.q for c in self.components}
        if len(qs) != 1:
            raise ModulusError(f"components have mixed moduli {sorted(qs)}")

    @classmethod
    def identity(cls, dims: Sequence[int], q: int) -> "ProductModQ":
        return cls(tuple(MatModQ.identity(d, q) for d in dims))

    @property
    def q(self) -> int:
        return self.components[0].q

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(c.d for c in self.components)

    def is_identity(self) -> bool:
        return all(c.is_identity() for c in self.components)


def product_mul(a: ProductModQ, b: ProductModQ) -> ProductModQ:
    if a.dims != b.dims:
        raise PreconditionError("product shape mismatch")
    return ProductModQ(
        tuple(mat_mul(x, y) for x, y in zip(a.components, b.components))
    )


def product_inv(a: ProductModQ) -> ProductModQ:
    return ProductModQ(tuple(mat_inv(c) for c in a.components))


# -- level maps and congruence predicates ------------------------------------


def reduce_level(x, m: int):
    """Entrywise reduction mod m (m must divide the modulus); a homomorphism."""
    if isinstance(x, MatModQ):
        if x.q % m:
            raise ModulusError(f"{m} does not divide {x.q}")
        return MatModQ(x.d, m, tuple(v % m for v in x.entries), checked=x.checked)
    if isinstance(x, AffineModQ):
        return AffineModQ(reduce_level(x.linear, m), tuple(v % m for v in x.trans))
    if isinstance(x, ProductModQ):
        return ProductModQ(tuple(reduce_level(c, m) for c in x.components))
    raise TypeError(f"cannot reduce {type(x).__name__}")


def is_congruent_identity(x, m: int) -> bool:
    """True iff x lies in the level-m congruence subgroup."""
    if isinstance(x, MatModQ):
        if x.q % m:
            raise ModulusError(f"{m} does not divide {x.q}")
        return reduce_level(x, m).is_identity() if m > 1 else True
    if isinstance(x, AffineModQ):
        return is_congruent_identity(x.linear, m) and all(
            v % m == 0 for v in x.trans
        )
    if isinstance(x, ProductModQ):
        return all(is_congruent_identity(c, m) for c in x.components)
    raise TypeError(f"cannot test {type(x).__name__}")


def make_scaling(k: int, ell: int, lam: int, d: int, q: int) -> MatModQ:
    """Diagonal matrix with lam at (k,k), lam^{-1} at (ell,ell), 1 elsewhere."""
    if k == ell:
        raise PreconditionError("scaling indices must differ")
    lam_inv = inv_mod(lam, q)
    ent = list(identity_entries(d))
    ent[k * d + k] = lam % q
    ent[ell * d + ell] = lam_inv
    return MatModQ(d, q, tuple(ent), checked=True)


def elementary(d: int, q: int, i: int, j: int, c: int) -> MatModQ:
    """I + c E_{ij} for i != j."""
    if i == j:
        raise PreconditionError("elementary indices must differ")
    ent = list(identity_entries(d))
    ent[i * d + j] = c % q
    return MatModQ(d, q, tuple(ent), checked=True)


# -- seed-condition predicates ------------------------------------------------


@dataclass(frozen=True)
class SeedConditions:
    """Congruence conditions for the seed elements g0 (lower) / g0' (upper)."""

    variant: str  # "lower" | "upper"
    L: int
    modulus: FactoredModulus

    def __post_init__(self):
        if self.variant not in ("lower", "upper"):
            raise PreconditionError(f"unknown variant {self.variant!r}")


@dataclass(frozen=True)
class SeedCheck:
    ok: bool
    diagnostic: str

    def __bool__(self):
        return self.ok


def check_seed(g: MatModQ, cond: SeedConditions, strict_upper: bool = True) -> SeedCheck:
    """Check the diagonal/valuation conditions of a seed element.

    Lower variant: strict-lower entries have valuation exactly L-1 at every
    prime, strict-upper exactly 2(L-1); the upper variant swaps the two.
    Diagonal entries must be units and pairwise distinct mod p^L at every
    prime (distinctness mod q1 alone is not enough for the multi-prime
    construction).  strict_upper=False relaxes the larger-valuation side to
    "at least", which is what conjugated intermediates guarantee.
    """
    fm, L, d = cond.modulus, cond.L, g.d
    if g.q != fm.q:
        raise ModulusError(f"element modulus {g.q} != {fm.q}")
    if fm.min_alpha < 4 * (L - 1):
        raise ModulusError(
            f"modulus too small: some exponent < 4(L-1) = {4 * (L - 1)}"
        )
    lo = L - 1 if cond.variant == "lower" else 2 * (L - 1)
    hi = 2 * (L - 1) if cond.variant == "lower" else L - 1
    exact_lo = cond.variant == "lower" or strict_upper
    exact_hi = cond.variant == "upper" or strict_upper

    q1 = fm.q1
    diag = [g[i, i] for i in range(d)]
    for i, v in enumerate(diag):
        if math.gcd(v % q1, q1) != 1:
            return SeedCheck(False, f"diagonal entry ({i},{i}) = {v} not a unit mod {q1}")
    for p in fm.primes:
        pl = p**L
        seen = {}
        for i, v in enumerate(diag):
            r = v % pl
            if r in seen:
                return SeedCheck(
                    False,
                    f"diagonal entries {seen[r]} and {i} congruent mod {p}^{L}",
                )
            seen[r] = i
    for p, a in fm.factors:
        for i in range(d):
            for j in range(d):
                if i == j:
                    continue
                want, exact = (lo, exact_lo) if i > j else (hi, exact_hi)
                v, sat = ord_int(g[i, j], p, a)
                bad = (sat or v != want) if exact else (not sat and v < want)
                if bad:
                    rel = "exactly" if exact else "at least"
                    return SeedCheck(
                        False,
                        f"entry ({i},{j}) has ord_{p} = {'>=' + str(a) if sat else v},"
                        f" expected {rel} {want}",
                    )
    return SeedCheck(True, "ok")


# -- generating sets ----------------------------------------------------------


def _int_matrix(rows: Sequence[Sequence[int]]) -> tuple[int, tuple[int, ...]]:
    d = len(rows)
    if any(len(r) != d for r in rows):
        raise PreconditionError("generator matrix is not square")
    return d, tuple(int(v) for r in rows for v in r)


@dataclass(frozen=True)
class GenSet:
    """A symmetric finite generating set of integer elements.

    kind "SL": each generator is a flat d^2 tuple over Z.
    kind "SA": each generator is (flat d^2 tuple, length-d translation).
    kind "product": each generator is a tuple of flat matrices.
    """

    kind: str
    dims: tuple[int, ...]
    generators: tuple

    def __post_init__(self):
        if self.kind not in ("SL", "SA", "product"):
            raise PreconditionError(f"unknown group kind {self.kind!r}")
        if self.kind != "product" and len(self.dims) != 1:
            raise PreconditionError("non-product kinds take a single dimension")
        for g in self.generators:
            for d, flat in self._matrices(g):
                if det_int(d, flat) != 1:
                    raise PreconditionError(
                        "generator has determinant != 1 over Z"
                    )
        inv = {self._canon(self.invert_generator(g)) for g in self.generators}
        if inv != {self._canon(g) for g in self.generators}:
            raise PreconditionError("generating set is not symmetric")

    def _matrices(self, g):
        if self.kind == "SL":
            return [(self.dims[0], g)]
        if self.kind == "SA":
            return [(self.dims[0], g[0])]
        return list(zip(self.dims, g))

    @staticmethod
    def _canon(g):
        return json.dumps(g, sort_keys=True, default=list)

    def invert_generator(self, g):
        """Exact inverse over Z (valid because det == 1)."""
        if self.kind == "SL":
            d = self.dims[0]
            return tuple(adjugate_int(d, g))
        if self.kind == "SA":
            d = self.dims[0]
            hinv = adjugate_int(d, g[0])
            u = tuple(
                -sum(hinv[i * d + k] * g[1][k] for k in range(d))
                for i in range(d)
            )
            return (tuple(hinv), u)
        return tuple(tuple(adjugate_int(d, m)) for d, m in zip(self.dims, g))

    def inverse_index(self) -> list[int]:
        """For each generator, the index of its inverse."""
        canon = [self._canon(g) for g in self.generators]
        return [canon.index(self._canon(self.invert_generator(g))) for g in self.generators]

    def reduced(self, q: int) -> list:
        """Generators reduced mod q as group elements."""
        out = []
        for g in self.generators:
            if self.kind == "SL":
                out.append(MatModQ.group_element(self.dims[0], q, g))
            elif self.kind == "SA":
                out.append(
                    AffineModQ(
                        MatModQ.group_element(self.dims[0], q, g[0]),
                        tuple(v % q for v in g[1]),
                    )
                )
            else:
                out.append(
                    ProductModQ(
                        tuple(
                            MatModQ.group_element(d, q, m)
                            for d, m in zip(self.dims, g)
                        )
                    )
                )
        return out

    # JSON wire format: {"kind":…, "dims":[…], "generators":[…],
    # "close_symmetric": bool}.  SA generators: {"linear":…, "trans":…}.
    @classmethod
    def from_json(cls, obj: dict) -> "GenSet":
        kind = obj["kind"]
        dims = tuple(int(d) for d in obj["dims"])
        gens = []
        for raw in obj["generators"]:
            if kind == "SL":
                d, flat = _int_matrix(raw)
                if d != dims[0]:
                    raise PreconditionError("generator dimension mismatch")
                gens.append(flat)
            elif kind == "SA":
                d, flat = _int_matrix(raw["linear"])
                if d != dims[0]:
                    raise PreconditionError("generator dimension mismatch")
                gens.append((flat, tuple(int(v) for v in raw["trans"])))
            else:
                mats = []
                for d, comp in zip(dims, raw):
                    dd, flat = _int_matrix(comp)
                    if dd != d:
                        raise PreconditionError("generator dimension mismatch")
                    mats.append(flat)
                gens.append(tuple(mats))
        gs = object.__new__(cls)
        object.__setattr__(gs, "kind", kind)
        object.__setattr__(gs, "dims", dims)
        object.__setattr__(gs, "generators", tuple(gens))
        if obj.get("close_symmetric"):
            closed = list(gens)
            seen = {cls._canon(g) for g in closed}
            for g in gens:
                ginv = gs.invert_generator(g)
                if cls._canon(ginv) not in seen:
                    closed.append(ginv)
                    seen.add(cls._canon(ginv))
            return cls(kind, dims, tuple(closed))
        return cls(kind, dims, tuple(gens))

    @classmethod
    def load(cls, path) -> "GenSet":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        gens = []
        for g in self.generators:
            if self.kind == "SL":
                d = self.dims[0]
                gens.append([list(g[i * d : (i + 1) * d]) for i in range(d)])
            elif self.kind == "SA":
                d = self.dims[0]
                gens.append(
                    {
                        "linear": [list(g[0][i * d : (i + 1) * d]) for i in range(d)],
                        "trans": list(g[1]),
                    }
                )
            else:
                gens.append(
                    [
                        [list(m[i * d : (i + 1) * d]) for i in range(d)]
                        for d, m in zip(self.dims, g)
                    ]
                )
        return {"kind": self.kind, "dims": list(self.dims), "generators": gens}


def _closed(gens):
    out = []
    seen = set()
    for g in gens:
        if repr(g) not in seen:
            seen.add(repr(g))
            out.append(g)
    return tuple(out)


def standard_sl2_genset() -> GenSet:
    """SL_2 with S = {T, T^-1, U, U^-1}."""
    T = (1, 1, 0, 1)
    U = (1, 0, 1, 1)
    Ti = (1, -1, 0, 1)
    Ui = (1, 0, -1, 1)
    return GenSet("SL", (2,), (T, Ti, U, Ui))


def standard_sa2_genset() -> GenSet:
    """SA_2 with affine lifts of T, U and unit translations."""
    T = (1, 1, 0, 1)
    U = (1, 0, 1, 1)
    Ti = (1, -1, 0, 1)
    Ui = (1, 0, -1, 1)
    I = (1, 0, 0, 1)
    gens = (
        (T, (0, 0)),
        (Ti, (0, 0)),
        (U, (0, 0)),
        (Ui, (0, 0)),
        (I, (1, 0)),
        (I, (-1, 0)),
        (I, (0, 1)),
        (I, (0, -1)),
    )
    return GenSet("SA", (2,), gens)


def standard_product_genset() -> GenSet:
    """SL_2 x SL_2 with per-factor T, U generators."""
    T = (1, 1, 0, 1)
    U = (1, 0, 1, 1)
    Ti = (1, -1, 0, 1)
    Ui = (1, 0, -1, 1)
    I = (1, 0, 0, 1)
    gens = tuple(
        (a, b)
        for a, b in (
            (T, I), (Ti, I), (U, I), (Ui, I),
            (I, T), (I, Ti), (I, U), (I, Ui),
        )
    )
    return GenSet("product", (2, 2), gens)
