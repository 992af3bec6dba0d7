"""Bounded generation certificates in SL_d(Z/qZ).

Given a pair of seed elements g0 (lower profile) and g0' (upper profile),
every element congruent to the identity mod q2 = prod p^{4(L-1)} factors
as a product of at most 10d-8 conjugates of the seeds or their inverses,
with all conjugators congruent to the identity mod q0^{L-1}.  The word is
built constructively: triangularize the seed, realize unipotents as
commutator-style conjugate pairs, realize diagonal scalings through a
four-unipotent 2x2 factorization, then eliminate the target column by
column.  Every produced word is re-verified by multiplication.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .errors import (
    DecompositionError,
    ModulusError,
    PreconditionError,
    SeedConditionError,
)
from .matmod import (
    MatModQ,
    SeedConditions,
    check_seed,
    elementary,
    identity_entries,
    is_congruent_identity,
    make_scaling,
    mat_inv,
    mat_mul,
)
from .modarith import (
    FactoredModulus,
    _inv_matrix_mod,
    crt_ints,
    exact_div,
    factorize,
    inv_mod,
    ord_int,
)

_NEWTON_CAP = 64


def word_budget(d: int) -> int:
    """Pinned letter budget: 2(d-1) column clears + 8(d-1) scalings + 2."""
    return 10 * d - 8


# -- seeds and words ----------------------------------------------------------


@dataclass(frozen=True)
class SeedPair:
    """Validated seed elements (g0 lower profile, g0p upper profile)."""

    g0: MatModQ
    g0p: MatModQ
    modulus: FactoredModulus

    def __post_init__(self):
        fm = self.modulus
        fm._need_level()
        if self.g0.d != self.g0p.d:
            raise PreconditionError("seed dimensions differ")
        if self.g0.q != fm.q or self.g0p.q != fm.q:
            raise ModulusError("seed modulus does not match the factored modulus")
        for g, variant in ((self.g0, "lower"), (self.g0p, "upper")):
            chk = check_seed(g, SeedConditions(variant, fm.L, fm))
            if not chk:
                raise SeedConditionError(f"{variant} seed: {chk.diagnostic}")

    @property
    def d(self) -> int:
        return self.g0.d

    @property
    def q(self) -> int:
        return self.modulus.q

    @property
    def L(self) -> int:
        return self.modulus.L

    def base(self, name: str) -> MatModQ:
        if name == "g0":
            return self.g0
        if name == "g0p":
            return self.g0p
        raise PreconditionError(f"unknown base {name!r}")

    def reduce_to_prime(self, i: int) -> "SeedPair":
        piece = self.modulus.prime_piece(i)
        red = lambda g: MatModQ.group_element(
            g.d, piece.q, tuple(v % piece.q for v in g.entries)
        )
        return SeedPair(red(self.g0), red(self.g0p), piece)


class Letter(NamedTuple):
    conjugator: MatModQ
    base: str  # "g0" | "g0p"
    sign: int  # +1 | -1


@dataclass(frozen=True)
class ConjugateWord:
    """Certificate: target = prod conj_i * base_i^{sign_i} * conj_i^{-1}."""

    letters: tuple[Letter, ...]
    seeds: SeedPair

    def __len__(self) -> int:
        return len(self.letters)

    def evaluate(self) -> MatModQ:
        acc = MatModQ.identity(self.seeds.d, self.seeds.q)
        for c, name, sign in self.letters:
            b = self.seeds.base(name)
            if sign == -1:
                b = mat_inv(b)
            acc = mat_mul(acc, mat_mul(mat_mul(c, b), mat_inv(c)))
        return acc

    def schedule(self) -> tuple[tuple[str, int], ...]:
        return tuple((l.base, l.sign) for l in self.letters)

    def to_json(self) -> dict:
        fm = self.seeds.modulus
        return {
            "letters": [
                {
                    "conjugator": _rows(l.conjugator),
                    "base": l.base,
                    "sign": l.sign,
                }
                for l in self.letters
            ],
            "context": {
                "q": fm.q,
                "factors": [list(f) for f in fm.factors],
                "L": fm.L,
                "g0": _rows(self.seeds.g0),
                "g0p": _rows(self.seeds.g0p),
            },
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ConjugateWord":
        ctx = obj["context"]
        fm = FactoredModulus(
            ctx["q"], tuple((p, a) for p, a in ctx["factors"]), ctx["L"]
        )
        d = len(ctx["g0"])
        mk = lambda rows: MatModQ.group_element(
            d, fm.q, tuple(v for r in rows for v in r)
        )
        seeds = SeedPair(mk(ctx["g0"]), mk(ctx["g0p"]), fm)
        letters = tuple(
            Letter(mk(l["conjugator"]), l["base"], int(l["sign"]))
            for l in obj["letters"]
        )
        return cls(letters, seeds)

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)

    @classmethod
    def load(cls, path) -> "ConjugateWord":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def _rows(m: MatModQ) -> list[list[int]]:
    return m.rows()


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    detail: str

    def __bool__(self):
        return self.ok


def verify_word(word: ConjugateWord, target: MatModQ) -> VerifyResult:
    """Exact check: conjugator depth, length budget, and evaluation."""
    seeds = word.seeds
    depth = seeds.modulus.q0 ** (seeds.L - 1)
    for i, letter in enumerate(word.letters):
        if letter.sign not in (-1, 1):
            return VerifyResult(False, f"letter {i}: bad sign {letter.sign}")
        if letter.base not in ("g0", "g0p"):
            return VerifyResult(False, f"letter {i}: bad base {letter.base!r}")
        if not is_congruent_identity(letter.conjugator, depth):
            return VerifyResult(
                False,
                f"letter {i}: conjugator depth check failed"
                f" (not congruent to I mod {depth})",
            )
    budget = word_budget(seeds.d)
    if len(word.letters) > budget:
        return VerifyResult(
            False, f"word length {len(word.letters)} exceeds budget {budget}"
        )
    val = word.evaluate()
    if val.entries != tuple(v % seeds.q for v in target.entries):
        return VerifyResult(False, "evaluation does not match the target")
    return VerifyResult(True, "ok")


# -- step 1: triangularize the seed -------------------------------------------


@dataclass(frozen=True)
class TriangularizationResult:
    """x * g0 * x^{-1} = g1 with g1 lower triangular, x = I mod q0^{L-1}."""

    x: MatModQ
    g1: MatModQ
    modulus: FactoredModulus

    @property
    def diag(self) -> tuple[int, ...]:
        return tuple(self.g1[i, i] for i in range(self.g1.d))


def _solve_row_clear(
    ent: Sequence[int], d: int, k: int, p: int, a: int, L: int
) -> dict[int, int]:
    """Conjugator entries x_i (i > k) killing row k above the diagonal, mod p^a.

    Newton iteration on the normalized residual system; the Jacobian is
    upper triangular with unit diagonal mod p, so it lifts to any level.
    """
    pa = p**a
    A = [v % pa for v in ent]
    js = list(range(k + 1, d))
    if not js:
        return {}
    akk = A[k * d + k]
    e = {}
    for j in js:
        v, sat = ord_int(A[j * d + j] - akk, p, a)
        if sat or v > L - 1:
            raise SeedConditionError(
                f"diagonal entries {k} and {j} not distinct mod {p}^{L}"
            )
        e[j] = v
    pl = p ** (L - 1)

    def residual(t: dict[int, int]) -> dict[int, int]:
        out = {}
        for j in js:
            f = A[k * d + j]
            f += sum(pl * t[i] * A[i * d + j] for i in js)
            f -= pl * t[j] * (akk + sum(pl * t[i] * A[i * d + k] for i in js))
            s = p ** (L - 1 + e[j])
            if f % s:
                raise DecompositionError(
                    f"row-clear residual not divisible by {p}^{L - 1 + e[j]}"
                )
            out[j] = (f // s) % pa
        return out

    t = {j: 0 for j in js}
    for _ in range(_NEWTON_CAP):
        fv = residual(t)
        if all(v == 0 for v in fv.values()):
            return {j: (pl * t[j]) % pa for j in js}
        jac = []
        for j in js:
            s = p ** (L - 1 + e[j])
            row = []
            for i in js:
                if i == j:
                    dv = pl * (A[j * d + j] - akk)
                    dv -= pl * pl * (
                        sum(t[m] * A[m * d + k] for m in js)
                        + t[j] * A[j * d + k]
                    )
                else:
                    dv = pl * A[i * d + j] - pl * pl * t[j] * A[i * d + k]
                if dv % s:
                    raise DecompositionError("row-clear Jacobian not normalizable")
                row.append((dv // s) % pa)
            jac.append(row)
        jinv = _inv_matrix_mod(jac, pa, p)
        for r, j in enumerate(js):
            t[j] = (t[j] - sum(jinv[r][c] * fv[i] for c, i in enumerate(js))) % pa
    raise DecompositionError("row clearing did not converge")


def step1_triangularize(
    g0: MatModQ, L: int, modulus: Optional[FactoredModulus] = None
) -> TriangularizationResult:
    """Conjugate a lower-profile seed to lower-triangular form.

    Rows are cleared top to bottom; round k only touches row k and columns
    beyond k, so cleared rows stay cleared.  The pre-check relaxes the
    strict-upper valuation to "at least 2(L-1)" so that already-triangular
    inputs (and conjugated intermediates) are accepted.
    """
    fm = modulus if modulus is not None else factorize(g0.q).with_level(L)
    if fm.L != L:
        fm = fm.with_level(L)
    if fm.min_alpha < 4 * (L - 1):
        raise ModulusError(f"need every exponent >= 4(L-1) = {4 * (L - 1)}")
    chk = check_seed(g0, SeedConditions("lower", L, fm), strict_upper=False)
    if not chk:
        raise SeedConditionError(chk.diagnostic)
    d, q = g0.d, g0.q
    cur = g0
    x_total = MatModQ.identity(d, q)
    for k in range(d - 1):
        parts = {i: [] for i in range(k + 1, d)}
        for p, a in fm.factors:
            sol = _solve_row_clear(cur.entries, d, k, p, a, L)
            for i, v in sol.items():
                parts[i].append((v, p**a))
        ent = list(identity_entries(d))
        for i in range(k + 1, d):
            ent[k * d + i] = crt_ints(parts[i])[0]
        xmat = MatModQ(d, q, tuple(ent), checked=True)
        cur = mat_mul(mat_mul(xmat, cur), mat_inv(xmat))
        x_total = mat_mul(xmat, x_total)
    for i in range(d):
        for j in range(i + 1, d):
            if cur[i, j] != 0:
                raise DecompositionError("triangularization left a nonzero entry")
    g1 = MatModQ.group_element(d, q, cur.entries)
    return TriangularizationResult(x_total, g1, fm)


# -- step 2/3: unipotent targets as two-letter words ---------------------------


def _check_unipotent_offset(
    c: MatModQ, fm: FactoredModulus, side: str
) -> None:
    L, d = fm.L, c.d
    for i in range(d):
        for j in range(d):
            v = c[i, j]
            on_side = i > j if side == "lower" else i < j
            if not on_side:
                if v != 0:
                    raise PreconditionError(
                        f"offset has entry outside the strict {side} triangle"
                    )
                continue
            for p, a in fm.factors:
                w, sat = ord_int(v, p, a)
                if not sat and w < 2 * (L - 1):
                    raise PreconditionError(
                        f"offset entry ({i},{j}) has ord_{p} = {w}"
                        f" < 2(L-1) = {2 * (L - 1)}"
                    )


def _solve_lower_conjugation(
    g1: MatModQ, u: MatModQ, fm: FactoredModulus
) -> MatModQ:
    """Lower-unitriangular y with y*g1*y^{-1} = g1*u, solved by subdiagonals.

    The distance-m entry satisfies (lam_j - lam_i) y_ij = known terms; the
    right side is divisible by every prime power dividing lam_j - lam_i, so
    the division is exact and any lift of the quotient works.
    """
    d, q = g1.d, g1.q
    g2p = mat_mul(g1, u)
    lam = [g1[i, i] for i in range(d)]
    Y = [[0] * d for _ in range(d)]
    for m in range(1, d):
        for j in range(d - m):
            i = j + m
            rhs = g2p[i, j] - g1[i, j]
            for k in range(j + 1, i):
                rhs += g2p[i, k] * Y[k][j] - Y[i][k] * g1[k, j]
            rhs %= q
            den = (lam[j] - lam[i]) % q
            parts = []
            for p, a in fm.factors:
                pa = p**a
                e, sat = ord_int(den, p, a)
                if sat or e > fm.L - 1:
                    raise SeedConditionError(
                        f"diagonal entries {j} and {i} not distinct mod {p}^{fm.L}"
                    )
                pe = p**e
                if rhs % pa % pe:
                    raise DecompositionError(
                        "conjugation right side misses required divisibility"
                    )
                val = ((rhs % pa) // pe) * inv_mod((den % pa) // pe, pa) % pa
                parts.append((val, pa))
            Y[i][j] = crt_ints(parts)[0]
    ent = list(identity_entries(d))
    for i in range(d):
        for j in range(i):
            ent[i * d + j] = Y[i][j]
    y = MatModQ(d, q, tuple(ent), checked=True)
    if mat_mul(y, g1).entries != mat_mul(g2p, y).entries:
        raise DecompositionError("conjugation solve failed verification")
    return y


def step2_lower_unipotent_word(
    c: MatModQ,
    tri: TriangularizationResult,
    seeds: SeedPair,
    pad: bool = False,
) -> ConjugateWord:
    """Word for u = I + c (c strictly lower, entries with ord >= 2(L-1)).

    Realization: u = g1^{-1} * (y g1 y^{-1}) with y solving the conjugation
    equation against g2' = g1 * u, giving one conjugate of g0^{-1} and one
    of g0.  A zero offset yields the empty word unless pad is set.
    """
    fm = tri.modulus
    _check_unipotent_offset(c, fm, "lower")
    if not any(c.entries) and not pad:
        return ConjugateWord((), seeds)
    d, q = c.d, c.q
    u = MatModQ.group_element(
        d, q, tuple(v + i for v, i in zip(c.entries, identity_entries(d)))
    )
    y = _solve_lower_conjugation(tri.g1, u, fm)
    letters = (
        Letter(tri.x, "g0", -1),
        Letter(mat_mul(y, tri.x), "g0", +1),
    )
    return ConjugateWord(letters, seeds)


def step3_upper_unipotent_word(
    f: MatModQ,
    tri_t: TriangularizationResult,
    seeds: SeedPair,
    pad: bool = False,
) -> ConjugateWord:
    """Word for v = I + f (f strictly upper) built from the upper seed.

    Works in the transpose picture: tri_t triangularizes transpose(g0p),
    the lower-world solve handles transpose(v), and transposing the
    resulting identity swaps the letter order and inverts conjugators.
    """
    fm = tri_t.modulus
    _check_unipotent_offset(f, fm, "upper")
    if not any(f.entries) and not pad:
        return ConjugateWord((), seeds)
    d, q = f.d, f.q
    ut = MatModQ.group_element(
        d,
        q,
        tuple(v + i for v, i in zip(f.transpose().entries, identity_entries(d))),
    )
    y = _solve_lower_conjugation(tri_t.g1, ut, fm)
    c = mat_inv(tri_t.x.transpose())
    letters = (
        Letter(mat_mul(mat_inv(y.transpose()), c), "g0p", +1),
        Letter(c, "g0p", -1),
    )
    return ConjugateWord(letters, seeds)


# -- step 4: diagonal scalings --------------------------------------------------


def step4_scaling_word(
    k: int,
    ell: int,
    lam: int,
    tri: TriangularizationResult,
    tri_t: TriangularizationResult,
    seeds: SeedPair,
    pad: bool = False,
) -> ConjugateWord:
    """Word for the scaling with lam at (k,k) and lam^{-1} at (ell,ell).

    Requires lam = 1 mod p^{4(L-1)} at every prime.  The 2x2 block solve
    uses the four-unipotent pattern U(a) L(b) U(c) L(e) with b = q0^{2(L-1)},
    c = (lam^{-1}-1)/b, a = -c*lam, e = -b*lam; each factor then expands to
    two letters.
    """
    fm = tri.modulus
    d, q, L = seeds.d, seeds.q, fm.L
    if k == ell:
        raise PreconditionError("scaling indices must differ")
    if k > ell:
        return step4_scaling_word(
            ell, k, inv_mod(lam, q), tri, tri_t, seeds, pad
        )
    if (lam - 1) % fm.q2:
        raise PreconditionError(
            f"scaling unit {lam} is not congruent to 1 mod {fm.q2}"
        )
    if lam % q == 1 and not pad:
        return ConjugateWord((), seeds)
    b = fm.q0 ** (2 * (L - 1))
    lam_inv = inv_mod(lam, q)
    cval = exact_div((lam_inv - 1) % q, b, q)
    a = (-cval * lam) % q
    e = (-b * lam) % q
    target = make_scaling(k, ell, lam, d, q)
    prod = mat_mul(
        mat_mul(elementary(d, q, k, ell, a), elementary(d, q, ell, k, b)),
        mat_mul(elementary(d, q, k, ell, cval), elementary(d, q, ell, k, e)),
    )
    if prod.entries != target.entries:
        raise DecompositionError("2x2 scaling factorization failed verification")

    def upper(v):
        ent = [0] * (d * d)
        ent[k * d + ell] = v % q
        return MatModQ(d, q, tuple(ent))

    def lower(v):
        ent = [0] * (d * d)
        ent[ell * d + k] = v % q
        return MatModQ(d, q, tuple(ent))

    letters = (
        step3_upper_unipotent_word(upper(a), tri_t, seeds, pad).letters
        + step2_lower_unipotent_word(lower(b), tri, seeds, pad).letters
        + step3_upper_unipotent_word(upper(cval), tri_t, seeds, pad).letters
        + step2_lower_unipotent_word(lower(e), tri, seeds, pad).letters
    )
    return ConjugateWord(letters, seeds)


# -- steps 5/6: full decomposition ----------------------------------------------


def step5_prime_power_decompose(
    gamma: MatModQ, seeds: SeedPair, pad: bool = False
) -> ConjugateWord:
    """Decompose gamma = I mod q2 into at most 10d-8 seed conjugates.

    Column-by-column: clear below the diagonal with lower unipotents, fix
    the diagonal with adjacent scalings, absorb the rest into one upper
    unipotent.  Works for any modulus whose exponents all reach 4(L-1);
    the name reflects its per-prime role in the CRT-glued variant.
    """
    fm = seeds.modulus
    d, q, L = seeds.d, seeds.q, fm.L
    if gamma.q != q or gamma.d != d:
        raise PreconditionError("target and seeds live in different groups")
    if not is_congruent_identity(gamma, fm.q2):
        raise PreconditionError(
            f"target is not congruent to I mod q2 = {fm.q2}"
        )
    if gamma.is_identity() and not pad:
        return ConjugateWord((), seeds)
    tri = step1_triangularize(seeds.g0, L, fm)
    tri_t = step1_triangularize(seeds.g0p.transpose(), L, fm)
    letters: list[Letter] = []
    M = gamma
    for k in range(d - 1):
        mkk_inv = inv_mod(M[k, k], q)
        ent = list(identity_entries(d))
        off = [0] * (d * d)
        for j in range(k + 1, d):
            z = (-M[j, k] * mkk_inv) % q
            ent[j * d + k] = z
            off[j * d + k] = (-z) % q  # offset of the inverse clear matrix
        cmat = MatModQ(d, q, tuple(ent), checked=True)
        letters += step2_lower_unipotent_word(
            MatModQ(d, q, tuple(off)), tri, seeds, pad
        ).letters
        M = mat_mul(cmat, M)
        if not is_congruent_identity(M, fm.q2):
            raise DecompositionError("level preservation lost after a clear")
    for i in range(d):
        for j in range(i):
            if M[i, j] != 0:
                raise DecompositionError("column clearing left a residue")
    for k in range(d - 1):
        lam_word = M[k, k]  # word block must evaluate to the inverse scaling
        letters += step4_scaling_word(
            k, k + 1, lam_word, tri, tri_t, seeds, pad
        ).letters
        M = mat_mul(make_scaling(k, k + 1, inv_mod(lam_word, q), d, q), M)
        if not is_congruent_identity(M, fm.q2):
            raise DecompositionError("level preservation lost after a scaling")
    if any(M[i, i] != 1 for i in range(d)):
        raise DecompositionError("diagonal normalization failed")
    f = MatModQ(
        d, q, tuple(v - i for v, i in zip(M.entries, identity_entries(d)))
    )
    letters += step3_upper_unipotent_word(f, tri_t, seeds, pad).letters
    word = ConjugateWord(tuple(letters), seeds)
    if word.evaluate().entries != gamma.entries:
        raise DecompositionError("decomposition failed final verification")
    return word


def step6_decompose(gamma: MatModQ, seeds: SeedPair) -> ConjugateWord:
    """Decompose over a general modulus by gluing per-prime words with CRT.

    All prime-power runs are padded onto one fixed base-letter schedule, so
    the j-th letter uses the same seed and sign everywhere and conjugators
    can be glued entrywise.
    """
    fm = seeds.modulus
    if not is_congruent_identity(gamma, fm.q2):
        raise PreconditionError(
            f"target is not congruent to I mod q2 = {fm.q2}"
        )
    if gamma.is_identity():
        return ConjugateWord((), seeds)
    if len(fm.factors) == 1:
        return step5_prime_power_decompose(gamma, seeds)
    d, q = seeds.d, seeds.q
    words = []
    for i in range(len(fm.factors)):
        sub = seeds.reduce_to_prime(i)
        gi = MatModQ.group_element(
            d, sub.q, tuple(v % sub.q for v in gamma.entries)
        )
        words.append(step5_prime_power_decompose(gi, sub, pad=True))
    sched = words[0].schedule()
    if any(w.schedule() != sched for w in words[1:]):
        raise DecompositionError("base-letter schedules diverged across primes")
    letters = []
    for pos, (base, sign) in enumerate(sched):
        ent = tuple(
            crt_ints(
                [(w.letters[pos].conjugator.entries[idx], w.seeds.q) for w in words]
            )[0]
            for idx in range(d * d)
        )
        letters.append(Letter(MatModQ.group_element(d, q, ent), base, sign))
    word = ConjugateWord(tuple(letters), seeds)
    if word.evaluate().entries != gamma.entries:
        raise DecompositionError("glued word failed final verification")
    return word


# -- seed search ----------------------------------------------------------------


def _sample_unit(q0: int, bound: int, rng: random.Random) -> int:
    while True:
        u = rng.randrange(1, bound)
        if all(u % p for p in _prime_list(q0)):
            return u


def _prime_list(q0: int) -> list[int]:
    out, n, p = [], q0, 2
    while n > 1:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    return out


def _sample_seed(
    fm: FactoredModulus, d: int, variant: str, rng: random.Random
) -> Optional[MatModQ]:
    from .matmod import det_int, _minor

    q, L = fm.q, fm.L
    lo = fm.q0 ** (L - 1)
    hi = fm.q0 ** (2 * (L - 1))
    if variant == "upper":
        lo, hi = hi, lo
    ent = [0] * (d * d)
    diag_parts = [[] for _ in range(d)]
    for p, a in fm.factors:
        pa, pl = p**a, p**L
        seen = set()
        for i in range(d):
            while True:
                v = rng.randrange(1, pa)
                if v % p and v % pl not in seen:
                    seen.add(v % pl)
                    diag_parts[i].append((v, pa))
                    break
    for i in range(d):
        ent[i * d + i] = crt_ints(diag_parts[i])[0]
    for i in range(d):
        for j in range(d):
            if i == j:
                continue
            m = lo if i > j else hi
            ent[i * d + j] = (m * _sample_unit(fm.q0, max(q // m, 2), rng)) % q
    # repair det = 1 through the (0,0) entry; its cofactor is a unit
    save = ent[0]
    ent[0] = 0
    dd = det_int(d, ent) % q
    cof = det_int(d - 1, _minor(d, ent, 0, 0)) % q
    ent[0] = ((1 - dd) * inv_mod(cof, q)) % q
    try:
        g = MatModQ.group_element(d, q, tuple(ent))
    except Exception:
        return None
    if check_seed(g, SeedConditions(variant, L, fm)):
        return g
    return None


def find_seed_pair(
    fm: FactoredModulus,
    d: int,
    rng: Optional[random.Random] = None,
    max_tries: int = 500,
) -> SeedPair:
    """Randomized search for a valid (g0, g0p) pair at the given modulus."""
    fm._need_level()
    fm.check_dimension(d)
    if fm.min_alpha < 4 * (fm.L - 1):
        raise ModulusError(f"need every exponent >= 4(L-1) = {4 * (fm.L - 1)}")
    rng = rng if rng is not None else random.Random(0x5EED)
    found = {}
    for variant in ("lower", "upper"):
        for _ in range(max_tries):
            g = _sample_seed(fm, d, variant, rng)
            if g is not None:
                found[variant] = g
                break
        else:
            raise DecompositionError(
                f"no {variant} seed found in {max_tries} attempts"
            )
    return SeedPair(found["lower"], found["upper"], fm)
