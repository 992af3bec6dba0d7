"""Generator-word certificates for SA_d and SL x SL targets.

Combines three ingredients: the bounded-generation decomposition of a
linear part into seed conjugates, elimination-based lifts that reach any
prescribed linear part through elementary generators, and an auxiliary
kit of searched elements with controlled congruences.  Every assembled
word is re-evaluated against its target, and its length is checked
against a linear bound in the measured input lengths.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

from .bddgen import SeedPair, step6_decompose, word_budget
from .cayley import CayleyWord, identity_element, mul_elements, search_with_predicate
from .errors import (
    ConfigError,
    DecompositionError,
    PreconditionError,
    VerificationError,
)
from .matmod import (
    AffineModQ,
    GenSet,
    MatModQ,
    ProductModQ,
    SeedConditions,
    affine_mul,
    check_seed,
    det_int,
    _minor,
    identity_entries,
    make_scaling,
    mat_inv,
    mat_mul,
)
from .modarith import FactoredModulus, exact_div, inv_mod


# -- generator bookkeeping ------------------------------------------------------

_T = (1, 1, 0, 1)
_TI = (1, -1, 0, 1)
_U = (1, 0, 1, 1)
_UI = (1, 0, -1, 1)
_I2 = (1, 0, 0, 1)


@dataclass(frozen=True)
class ElementaryIndex:
    """Locations of the standard 2x2 elementary generators in a GenSet.

    For products the per-factor T/U lists are indexed by factor; for SA
    the unit translations (+-e_i) are also located.
    """

    t: tuple[int, ...]
    ti: tuple[int, ...]
    u: tuple[int, ...]
    ui: tuple[int, ...]
    trans: dict  # (coord, sign) -> generator index, SA only


def index_elementary(spec: GenSet) -> ElementaryIndex:
    if any(d != 2 for d in spec.dims):
        raise ConfigError("elimination lifts are implemented for 2x2 factors")
    n_factors = len(spec.dims) if spec.kind == "product" else 1

    def locate(factor: int, mat) -> int:
        for i, g in enumerate(spec.generators):
            if spec.kind == "SL" and g == mat:
                return i
            if spec.kind == "SA" and g[0] == mat and not any(g[1]):
                return i
            if spec.kind == "product":
                ok = all(
                    (g[f] == mat) if f == factor else (g[f] == _I2)
                    for f in range(n_factors)
                )
                if ok:
                    return i
        raise ConfigError(
            "generating set lacks a required elementary generator"
        )

    t, ti, u, ui = [], [], [], []
    for f in range(n_factors):
        t.append(locate(f, _T))
        ti.append(locate(f, _TI))
        u.append(locate(f, _U))
        ui.append(locate(f, _UI))
    trans = {}
    if spec.kind == "SA":
        d = spec.dims[0]
        for i, g in enumerate(spec.generators):
            if g[0] == identity_entries(d):
                nz = [(c, v) for c, v in enumerate(g[1]) if v]
                if len(nz) == 1 and nz[0][1] in (1, -1):
                    trans[(nz[0][0], nz[0][1])] = i
        for c in range(d):
            if (c, 1) not in trans or (c, -1) not in trans:
                raise ConfigError(
                    "SA generating set lacks unit translation generators"
                )
    return ElementaryIndex(tuple(t), tuple(ti), tuple(u), tuple(ui), trans)


def _balanced(v: int, q: int) -> int:
    v %= q
    return v - q if v > q // 2 else v


def _power_letters(pos: int, neg: int, e: int, q: int) -> list[int]:
    e = _balanced(e, q)
    return [pos] * e if e >= 0 else [neg] * (-e)


def elim_factors(x: MatModQ) -> list[tuple[str, int]]:
    """x as a product of E12/E21 elementary factors (unit-pivot algorithm)."""
    q = x.q
    a, b, c, d = x.entries
    pre = 0
    if math.gcd(c, q) != 1:
        from .modarith import crt_ints, factorize

        parts = []
        for p, al in factorize(q).factors:
            parts.append((1 if c % p == 0 else 0, p**al))
        pre = crt_ints(parts)[0]
        c = (c + pre * a) % q
        d = (d + pre * b) % q
    cinv = inv_mod(c, q)
    u = ((a - 1) * cinv) % q
    v = ((d - 1) * cinv) % q
    factors = [("E12", u), ("E21", c), ("E12", v)]
    if pre:
        factors.insert(0, ("E21", -pre))
    # re-verify by multiplication
    acc = MatModQ.identity(2, q)
    for kind, e in factors:
        ent = (1, e, 0, 1) if kind == "E12" else (1, 0, e, 1)
        acc = mat_mul(acc, MatModQ(2, q, ent, checked=True))
    if acc.entries != x.entries:
        raise DecompositionError("elementary factorization failed verification")
    return factors


def lift_word(x: MatModQ, spec: GenSet, idx: ElementaryIndex, factor: int = 0) -> CayleyWord:
    """Generator word whose linear part (at `factor`) equals x exactly.

    Uses only the elementary generators of that factor, so the other
    factors (or the SA translation part) stay at the identity.
    """
    q = x.q
    out: list[int] = []
    for kind, e in elim_factors(x):
        if kind == "E12":
            out += _power_letters(idx.t[factor], idx.ti[factor], e, q)
        else:
            out += _power_letters(idx.u[factor], idx.ui[factor], e, q)
    return CayleyWord(tuple(out))


def translation_letters(v, q: int, idx: ElementaryIndex) -> CayleyWord:
    """Word of unit translations evaluating to (I, v), balanced per coord."""
    out: list[int] = []
    for c, val in enumerate(v):
        e = _balanced(val, q)
        out += [idx.trans[(c, 1 if e >= 0 else -1)]] * abs(e)
    return CayleyWord(tuple(out))


# -- the key identity and translation synthesis ----------------------------------


def key_identity(T: MatModQ, v, v0) -> AffineModQ:
    """(T,v)^{-1} (I,v0) (T,v) computed two ways; returns (I, T^{-1}v0)."""
    from .matmod import affine_inv

    g = AffineModQ(T, tuple(v))
    lhs = affine_mul(affine_mul(affine_inv(g), AffineModQ(MatModQ.identity(T.d, T.q), tuple(v0))), g)
    tinv = mat_inv(T)
    direct = tuple(
        sum(tinv[i, k] * v0[k] for k in range(T.d)) % T.q for i in range(T.d)
    )
    if not lhs.linear.is_identity() or lhs.trans != direct:
        raise VerificationError("affine conjugation identity failed")
    return lhs


def solve_translation_pair(v, v0, fm: FactoredModulus) -> tuple[MatModQ, MatModQ]:
    """(A, B) congruent to I mod q0^{4(L-1)} with A*v0 - B*v0 = v.

    Constructive: B = I and A = U * H where H scales the first coordinate
    by 1 + v_1/v0_1 (an exact division thanks to the congruences) and the
    single-column unipotent U repairs the remaining coordinates.
    """
    q, L, d = fm.q, fm.L, len(v0)
    v = tuple(x % q for x in v)
    v0 = tuple(x % q for x in v0)
    s5 = fm.q0 ** (5 * (L - 1))
    sl = fm.q0 ** (L - 1)
    if any(x % math.gcd(s5, q) for x in v):
        raise PreconditionError(
            f"translation target is not congruent to 0 mod {math.gcd(s5, q)}"
        )
    want = (sl,) + (0,) * (d - 1)
    if any((a - b) % fm.q1 for a, b in zip(v0, want)):
        raise PreconditionError(
            f"base vector is not congruent to (q0^(L-1),0,...) mod {fm.q1}"
        )
    ident = MatModQ.identity(d, q)
    if not any(v):
        return ident, ident
    if q % s5:
        raise PreconditionError(
            f"nonzero targets need q0^(5L-5) = {s5} to divide the modulus"
        )
    u = exact_div(v0[0], sl, q)  # unit: congruent to 1 mod q0
    w = exact_div(v[0], s5, q)
    mu = (1 + fm.q0 ** (4 * (L - 1)) * w * inv_mod(u, q)) % q
    h = make_scaling(0, 1, mu, d, q)
    hv0 = tuple(
        sum(h[i, k] * v0[k] for k in range(d)) % q for i in range(d)
    )
    denom_unit = exact_div((v0[0] + v[0]) % q, sl, q)
    ent = list(identity_entries(d))
    for j in range(1, d):
        num = (v0[j] + v[j] - hv0[j]) % q
        cj = (exact_div(num, sl, q) * inv_mod(denom_unit, q)) % q
        ent[j * d] = cj
    A = mat_mul(MatModQ(d, q, tuple(ent), checked=True), h)
    av0 = tuple(sum(A[i, k] * v0[k] for k in range(d)) % q for i in range(d))
    if av0 != tuple((a + b) % q for a, b in zip(v0, v)):
        raise DecompositionError("translation pair failed verification")
    from .matmod import is_congruent_identity

    if not is_congruent_identity(A, fm.q2):
        raise DecompositionError("translation pair left the congruence level")
    return A, ident


# -- auxiliary kits ---------------------------------------------------------------


@dataclass(frozen=True)
class KitEntry:
    element: object
    word: CayleyWord


@dataclass(frozen=True)
class AuxiliaryKit:
    """Searched auxiliary elements with generator words.

    case "sa": entries t1, t1p, t2 — linear parts of t1/t1p satisfy the
    lower/upper seed conditions with translations = 0 mod q0^{5(L-1)};
    t2 has linear part = I mod q0^{4(L-1)} and translation = (q0^{L-1},0,..)
    mod q0^L.  case "product": entries p1, p1p, p2, p2p as in the text:
    p1/p1p carry factor-one seeds, p2/p2p factor-two seeds, with the other
    component = I mod q0^{5(L-1)}.
    """

    case: str
    entries: dict[str, KitEntry]
    modulus: FactoredModulus

    def element(self, name: str):
        return self.entries[name].element

    def word(self, name: str) -> CayleyWord:
        return self.entries[name].word


def _m5(fm: FactoredModulus) -> int:
    return math.gcd(fm.q0 ** (5 * (fm.L - 1)), fm.q)


def validate_kit(kit: AuxiliaryKit, spec: GenSet, q: int) -> None:
    fm = kit.modulus
    for name, entry in kit.entries.items():
        val = entry.word.evaluate(spec, q)
        if to_tuple(val) != to_tuple(entry.element):
            raise VerificationError(f"kit word for {name!r} does not evaluate")
    m5 = _m5(fm)
    if kit.case == "sa":
        t1, t1p, t2 = (kit.element(n) for n in ("t1", "t1p", "t2"))
        SeedPair(t1.linear, t1p.linear, fm)  # raises on condition failure
        for name, e in (("t1", t1), ("t1p", t1p)):
            if any(x % m5 for x in e.trans):
                raise VerificationError(f"kit {name}: translation not 0 mod {m5}")
        from .matmod import is_congruent_identity

        if not is_congruent_identity(t2.linear, fm.q2):
            raise VerificationError("kit t2: linear part not I mod q2")
        want = (fm.q0 ** (fm.L - 1),) + (0,) * (t2.d - 1)
        if any((a - b) % fm.q1 for a, b in zip(t2.trans, want)):
            raise VerificationError("kit t2: translation congruence failed")
    elif kit.case == "product":
        from .matmod import is_congruent_identity

        p1, p1p, p2, p2p = (
            kit.element(n) for n in ("p1", "p1p", "p2", "p2p")
        )
        SeedPair(p1.components[0], p1p.components[0], fm)
        SeedPair(p2.components[1], p2p.components[1], fm)
        for name, e, comp in (("p1", p1, 1), ("p1p", p1p, 1), ("p2", p2, 0), ("p2p", p2p, 0)):
            if not is_congruent_identity(e.components[comp], m5):
                raise VerificationError(
                    f"kit {name}: component {comp} not I mod {m5}"
                )
    else:
        raise PreconditionError(f"unknown kit case {kit.case!r}")


def to_tuple(x) -> tuple:
    from .cayley import to_flat

    return to_flat(x)


def _seed_predicate(fm: FactoredModulus, variant: str, component):
    cond = SeedConditions(variant, fm.L, fm)

    def pred(elem) -> bool:
        return bool(check_seed(component(elem), cond))

    return pred


def find_sa_kit(
    spec: GenSet,
    fm: FactoredModulus,
    rng: Optional[random.Random] = None,
    retries: int = 4000,
) -> AuxiliaryKit:
    """Search t1/t1p by random walk, then cancel their translations exactly."""
    if spec.kind != "SA":
        raise ConfigError("SA kit needs an SA generating set")
    q = fm.q
    rng = rng if rng is not None else random.Random(0xA0)
    idx = index_elementary(spec)
    entries = {}
    for name, variant in (("t1", "lower"), ("t1p", "upper")):
        res = search_with_predicate(
            spec,
            q,
            _seed_predicate(fm, variant, lambda e: e.linear),
            max_radius=2,
            walk_retries=retries,
            rng=rng,
        )
        if not res.found:
            raise DecompositionError(f"kit search for {name} failed: {res.detail}")
        elem, word = res.element, res.word
        # append (I, -T^{-1} u) so the translation becomes exactly zero
        tinv = mat_inv(elem.linear)
        fix = tuple(
            -sum(tinv[i, k] * elem.trans[k] for k in range(elem.d)) % q
            for i in range(elem.d)
        )
        word = word + translation_letters(fix, q, idx)
        elem = AffineModQ(elem.linear, (0,) * elem.d)
        entries[name] = KitEntry(elem, word)
    d = spec.dims[0]
    v2 = (fm.q0 ** (fm.L - 1),) + (0,) * (d - 1)
    entries["t2"] = KitEntry(
        AffineModQ(MatModQ.identity(d, q), v2), translation_letters(v2, q, idx)
    )
    kit = AuxiliaryKit("sa", entries, fm)
    validate_kit(kit, spec, q)
    return kit


def find_product_kit(
    spec: GenSet,
    fm: FactoredModulus,
    rng: Optional[random.Random] = None,
    retries: int = 4000,
) -> AuxiliaryKit:
    """Per-factor random-walk kit; the other component stays exactly I.

    When the modulus strictly exceeds q0^{5(L-1)}, the p2/p2p entries get a
    nontrivial first component T^{q0^{5(L-1)}} (still congruent to I at the
    required level) so the first-stage decomposition is exercised.
    """
    if spec.kind != "product" or len(spec.dims) != 2:
        raise ConfigError("product kit needs an SL x SL generating set")
    q = fm.q
    rng = rng if rng is not None else random.Random(0xB1)
    idx = index_elementary(spec)

    def factor_walk(name: str, factor: int, variant: str) -> KitEntry:
        gens = [idx.t[factor], idx.ti[factor], idx.u[factor], idx.ui[factor]]
        cond = SeedConditions(variant, fm.L, fm)
        steps = 4 * math.ceil(2 * math.log(max(q, 2)))
        for _ in range(retries):
            indices = [gens[rng.randrange(4)] for _ in range(steps)]
            word = CayleyWord(tuple(indices))
            elem = word.evaluate(spec, q)
            if check_seed(elem.components[factor], cond):
                return KitEntry(elem, word)
        raise DecompositionError(f"kit search for {name} failed")

    entries = {
        "p1": factor_walk("p1", 0, "lower"),
        "p1p": factor_walk("p1p", 0, "upper"),
        "p2": factor_walk("p2", 1, "lower"),
        "p2p": factor_walk("p2p", 1, "upper"),
    }
    s5 = fm.q0 ** (5 * (fm.L - 1))
    if q % s5 == 0 and q > s5:
        twist = CayleyWord((idx.t[0],) * s5)  # T^{s5} in the first factor
        for name in ("p2", "p2p"):
            e = entries[name]
            entries[name] = KitEntry(
                mul_elements(spec, twist.evaluate(spec, q), e.element),
                twist + e.word,
            )
    kit = AuxiliaryKit("product", entries, fm)
    validate_kit(kit, spec, q)
    return kit


# -- length accounting -------------------------------------------------------------


@dataclass
class LengthAccounting:
    """Measured input lengths and the linear bound they imply."""

    n_letters: int  # pinned conjugate-word budget N(d)
    terms: dict = field(default_factory=dict)
    assembled: int = 0
    bound: int = 0

    def within_bound(self) -> bool:
        return self.assembled <= self.bound


# -- Case 1: SA certificates --------------------------------------------------------


def _conjugate_blocks(
    letters,
    kit_words: dict[str, CayleyWord],
    spec: GenSet,
    idx: ElementaryIndex,
    factor: int,
    lift_lengths: list[int],
) -> CayleyWord:
    """Word for prod lift(x_i) * kitword(base_i)^{sign_i} * lift(x_i)^{-1}."""
    out = CayleyWord(())
    for conj, base, sign in letters:
        lift = lift_word(conj, spec, idx, factor)
        lift_lengths.append(len(lift))
        mid = kit_words[base] if sign == 1 else kit_words[base].inverse(spec)
        out = out + lift + mid + lift.inverse(spec)
    return out


def assemble_sa_certificate(
    target: AffineModQ,
    kit: AuxiliaryKit,
    spec: GenSet,
    seeds: Optional[SeedPair] = None,
) -> tuple[CayleyWord, LengthAccounting]:
    """Generator word for an SA target whose linear part is I mod q2.

    Pipeline: decompose T^{-1} into kit-seed conjugates (lifting each
    conjugator through elementary generators), reduce to a pure
    translation (I, z), split z into a small part (unit translations) and
    a multiple of q0^{5(L-1)} handled by the conjugation identity
    (A,*) (I,v0) (A,*)^{-1} (I,v0)^{-1} = (I, A v0 - v0).
    """
    if kit.case != "sa":
        raise PreconditionError("SA assembly needs an sa-case kit")
    fm = kit.modulus
    q, d = fm.q, target.d
    validate_kit(kit, spec, q)
    from .matmod import is_congruent_identity

    if not is_congruent_identity(target.linear, fm.q2):
        raise PreconditionError(
            f"target linear part is not congruent to I mod q2 = {fm.q2}"
        )
    seeds = seeds if seeds is not None else SeedPair(
        kit.element("t1").linear, kit.element("t1p").linear, fm
    )
    idx = index_elementary(spec)
    kit_words = {"g0": kit.word("t1"), "g0p": kit.word("t1p")}
    acct = LengthAccounting(n_letters=word_budget(d))
    lifts: list[int] = []
    overhead = 0

    if target.is_identity():
        acct.terms = {"empty": 0}
        return CayleyWord(()), acct

    # stage A: word with linear part T^{-1}
    tinv = mat_inv(target.linear)
    w_p = _conjugate_blocks(
        step6_decompose(tinv, seeds).letters, kit_words, spec, idx, 0, lifts
    )
    p_val = w_p.evaluate(spec, q)
    z = affine_mul(p_val, target).trans  # (T^{-1}, w)(T, v) = (I, z)

    s5 = _m5(fm)
    z_lo = tuple(_balanced(x % s5, s5) for x in z)
    z_hi = tuple((a - b) % q for a, b in zip(z, z_lo))
    w_lo = translation_letters(tuple(x % q for x in z_lo), q, idx)
    overhead += len(w_lo)

    w_hi = CayleyWord(())
    if any(z_hi):
        # W0 = (I, v0): decompose T2^{-1}, append the kit tail, then nudge
        # the translation into the required congruence class
        t2 = kit.element("t2")
        w_02 = _conjugate_blocks(
            step6_decompose(mat_inv(t2.linear), seeds).letters,
            kit_words,
            spec,
            idx,
            0,
            lifts,
        ) + kit.word("t2")
        v0_raw = w_02.evaluate(spec, q)
        if not v0_raw.linear.is_identity():
            raise DecompositionError("base translation block kept a linear part")
        want = (fm.q0 ** (fm.L - 1),) + (0,) * (d - 1)
        delta = tuple(
            _balanced((a - b) % fm.q1, fm.q1) % q
            for a, b in zip(want, v0_raw.trans)
        )
        corr = translation_letters(delta, q, idx)
        overhead += len(corr)
        w_0 = w_02 + corr
        v0 = tuple((a + b) % q for a, b in zip(v0_raw.trans, delta))
        A, _ = solve_translation_pair(z_hi, v0, fm)
        w_a = lift_word(A, spec, idx, 0)
        lifts.append(len(w_a))
        w_hi = w_a + w_0 + w_a.inverse(spec) + w_0.inverse(spec)

    word = w_p.inverse(spec) + w_hi + w_lo
    value = word.evaluate(spec, q)
    if to_tuple(value) != to_tuple(target):
        raise VerificationError("assembled SA word does not evaluate to target")

    n = acct.n_letters
    c1 = max(lifts, default=0)
    c2 = max(len(kit.word(k)) for k in ("t1", "t1p", "t2"))
    acct.terms = {"c1_lift": c1, "c2_kit": c2, "overhead": overhead}
    acct.assembled = len(word)
    acct.bound = (4 + 6 * n) * c1 + (2 + 3 * n) * c2 + overhead
    if not acct.within_bound():
        raise VerificationError(
            f"assembled length {acct.assembled} exceeds bound {acct.bound}"
        )
    return word, acct


# -- Case 2: product certificates ----------------------------------------------------


def _one_factor_word(
    x: MatModQ,
    axis: int,
    kit: AuxiliaryKit,
    spec: GenSet,
    idx: ElementaryIndex,
    lift_lengths: tuple[list[int], list[int]],
) -> CayleyWord:
    """Word for the product element with x at `axis` and I at the other.

    Stage one rebuilds the axis seeds (Q3, Q3') as base words using the
    other factor's seeds; stage two decomposes x against them.  The
    inherited seed conditions are verified, not assumed.
    """
    fm = kit.modulus
    q = fm.q
    other = 1 - axis
    if axis == 1:
        seed_names, tail_names = ("p1", "p1p"), ("p2", "p2p")
    else:
        seed_names, tail_names = ("p2", "p2p"), ("p1", "p1p")
    seeds_other = SeedPair(
        kit.element(seed_names[0]).components[other],
        kit.element(seed_names[1]).components[other],
        fm,
    )
    kit_words = {
        "g0": kit.word(seed_names[0]),
        "g0p": kit.word(seed_names[1]),
    }

    base_words: dict[str, CayleyWord] = {}
    base_elems: dict[str, MatModQ] = {}
    for key, tail, variant in (
        ("g0", tail_names[0], "lower"),
        ("g0p", tail_names[1], "upper"),
    ):
        tail_other = kit.element(tail).components[other]
        letters = step6_decompose(mat_inv(tail_other), seeds_other).letters
        w = _conjugate_blocks(
            letters, kit_words, spec, idx, other, lift_lengths[other]
        ) + kit.word(tail)
        val = w.evaluate(spec, q)
        if not val.components[other].is_identity():
            raise DecompositionError("stage-one block kept the other factor")
        q3 = val.components[axis]
        chk = check_seed(q3, SeedConditions(variant, fm.L, fm))
        if not chk:
            raise VerificationError(
                f"inherited seed check failed for {key}: {chk.diagnostic};"
                f" matrix {q3.rows()}"
            )
        base_words[key] = w
        base_elems[key] = q3

    seeds_axis = SeedPair(base_elems["g0"], base_elems["g0p"], fm)
    out = CayleyWord(())
    for conj, base, sign in step6_decompose(x, seeds_axis).letters:
        lift = lift_word(conj, spec, idx, axis)
        lift_lengths[axis].append(len(lift))
        mid = base_words[base] if sign == 1 else base_words[base].inverse(spec)
        out = out + lift + mid + lift.inverse(spec)
    val = out.evaluate(spec, q)
    if val.components[axis].entries != x.entries or not val.components[
        other
    ].is_identity():
        raise VerificationError("one-factor word failed verification")
    return out


def assemble_product_certificate(
    target: ProductModQ,
    kit: AuxiliaryKit,
    spec: GenSet,
    seeds: Optional[SeedPair] = None,
) -> tuple[CayleyWord, LengthAccounting]:
    """Word for (P, Q), both congruent to I mod q2, via (P, I)(I, Q)."""
    if kit.case != "product":
        raise PreconditionError("product assembly needs a product-case kit")
    fm = kit.modulus
    q = fm.q
    validate_kit(kit, spec, q)
    from .matmod import is_congruent_identity

    if not is_congruent_identity(target, fm.q2):
        raise PreconditionError(
            f"target is not congruent to I mod q2 = {fm.q2} componentwise"
        )
    idx = index_elementary(spec)
    acct = LengthAccounting(n_letters=word_budget(target.dims[0]))
    lift_lengths: tuple[list[int], list[int]] = ([], [])
    word = CayleyWord(())
    for axis in (0, 1):
        comp = target.components[axis]
        if comp.is_identity():
            continue
        word = word + _one_factor_word(comp, axis, kit, spec, idx, lift_lengths)
    value = word.evaluate(spec, q)
    if to_tuple(value) != to_tuple(target):
        raise VerificationError(
            "assembled product word does not evaluate to target"
        )
    n = acct.n_letters
    c3 = max(lift_lengths[0], default=0)
    c4 = max(lift_lengths[1], default=0)
    c5 = max(len(kit.word(k)) for k in ("p1", "p1p", "p2", "p2p"))
    acct.terms = {"c3_lift_f1": c3, "c4_lift_f2": c4, "c5_kit": c5}
    acct.assembled = len(word)
    acct.bound = (2 * n * n + 2 * n) * (c3 + c4 + c5)
    if not acct.within_bound():
        raise VerificationError(
            f"assembled length {acct.assembled} exceeds bound {acct.bound}"
        )
    return word, acct


# -- random admissible targets --------------------------------------------------------


def random_kernel_matrix(
    d: int, q: int, m: int, rng: random.Random
) -> MatModQ:
    """Uniform-ish element of SL_d congruent to I mod m (det fixed at (0,0))."""
    if q % m:
        raise PreconditionError(f"{m} does not divide {q}")
    while True:
        ent = [
            (1 if i == j else 0) + m * rng.randrange(q // m)
            for i in range(d)
            for j in range(d)
        ]
        cof = det_int(d - 1, _minor(d, ent, 0, 0)) % q if d > 1 else 1
        if math.gcd(cof, q) != 1:
            continue
        save = ent[0]
        ent[0] = 0
        rest = det_int(d, ent) % q
        # det = e00*cof + rest = 1 with e00 = 1 + m*x
        num = (1 - rest - cof) % q
        lifted = (num * inv_mod(cof, q)) % q
        if lifted % m:
            continue
        ent[0] = (1 + lifted) % q
        g = MatModQ.group_element(d, q, tuple(ent))
        from .matmod import is_congruent_identity

        if is_congruent_identity(g, m):
            return g


def random_admissible_sa(
    fm: FactoredModulus, d: int, rng: random.Random
) -> AffineModQ:
    T = random_kernel_matrix(d, fm.q, fm.q2, rng)
    v = tuple(rng.randrange(fm.q) for _ in range(d))
    return AffineModQ(T, v)


def random_admissible_product(
    fm: FactoredModulus, d: int, rng: random.Random
) -> ProductModQ:
    return ProductModQ(
        (
            random_kernel_matrix(d, fm.q, fm.q2, rng),
            random_kernel_matrix(d, fm.q, fm.q2, rng),
        )
    )
