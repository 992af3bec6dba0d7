import random

import pytest

from logdiam.certify import (
    assemble_product_certificate,
    assemble_sa_certificate,
    elim_factors,
    find_product_kit,
    find_sa_kit,
    index_elementary,
    key_identity,
    lift_word,
    random_admissible_product,
    random_admissible_sa,
    random_kernel_matrix,
    solve_translation_pair,
    translation_letters,
)
from logdiam.errors import ConfigError, PreconditionError
from logdiam.matmod import AffineModQ, GenSet, MatModQ, ProductModQ
from logdiam.modarith import factorize

Q = 3**5


def test_key_identity_random(rng, fm35):
    for _ in range(50):
        T = random_kernel_matrix(2, Q, 1, rng)
        v = tuple(rng.randrange(Q) for _ in range(2))
        v0 = tuple(rng.randrange(Q) for _ in range(2))
        out = key_identity(T, v, v0)
        assert out.linear.is_identity()


def test_solve_translation_pair_rejects_shallow(fm35):
    # v must be 0 mod q0^{5(L-1)} = 243; (0, 81) is not
    with pytest.raises(PreconditionError):
        solve_translation_pair((0, 81), (3, 0), fm35)


def test_solve_translation_pair_rejects_bad_base(fm35):
    with pytest.raises(PreconditionError):
        solve_translation_pair((0, 0), (1, 0), fm35)


def test_solve_translation_pair_zero(fm35):
    A, B = solve_translation_pair((0, 0), (3, 0), fm35)
    assert A.is_identity() and B.is_identity()


def test_solve_translation_pair_solves(fm37, rng):
    q = fm37.q
    for _ in range(10):
        v = tuple(3**5 * rng.randrange(9) for _ in range(2))
        v0 = (3 + 9 * rng.randrange(27), 9 * rng.randrange(27))
        A, B = solve_translation_pair(v, v0, fm37)
        av0 = tuple(sum(A[i, k] * v0[k] for k in range(2)) % q for i in range(2))
        bv0 = tuple(sum(B[i, k] * v0[k] for k in range(2)) % q for i in range(2))
        assert tuple((a - b) % q for a, b in zip(av0, bv0)) == tuple(x % q for x in v)


def test_index_elementary(sl2, sa2, prod2):
    for spec in (sl2, sa2, prod2):
        idx = index_elementary(spec)
        n = len(spec.dims) if spec.kind == "product" else 1
        assert len(idx.t) == n
    stripped = GenSet.from_json(
        {"kind": "SL", "dims": [2], "generators": [[[1, 1], [0, 1]], [[1, -1], [0, 1]]]}
    )
    with pytest.raises(ConfigError):
        index_elementary(stripped)


def test_elim_factors_random(rng):
    for q in (Q, 2**5 * 3**5):
        for _ in range(20):
            x = random_kernel_matrix(2, q, 1, rng)
            elim_factors(x)  # verifies internally
    # non-unit lower-left corner goes through the pre-step
    elim_factors(MatModQ.group_element(2, Q, (1, 5, 0, 1)))


def test_lift_word_isolates_factor(prod2, rng):
    idx = index_elementary(prod2)
    for factor in (0, 1):
        x = random_kernel_matrix(2, Q, 1, rng)
        w = lift_word(x, prod2, idx, factor)
        val = w.evaluate(prod2, Q)
        assert val.components[factor].entries == x.entries
        assert val.components[1 - factor].is_identity()


def test_lift_word_sa_keeps_translation_zero(sa2, rng):
    idx = index_elementary(sa2)
    x = random_kernel_matrix(2, Q, 1, rng)
    val = lift_word(x, sa2, idx).evaluate(sa2, Q)
    assert val.linear.entries == x.entries and val.trans == (0, 0)


def test_translation_letters(sa2):
    idx = index_elementary(sa2)
    w = translation_letters((5, Q - 2), Q, idx)
    val = w.evaluate(sa2, Q)
    assert val.linear.is_identity() and val.trans == (5, Q - 2)
    assert len(w) == 7  # balanced: 5 steps up, 2 steps down


@pytest.fixture(scope="module")
def sa_kit(sa2, fm35):
    return find_sa_kit(sa2, fm35)


@pytest.fixture(scope="module")
def prod_kit(prod2, fm35):
    return find_product_kit(prod2, fm35)


def test_sa_certificates(sa2, sa_kit, fm35, rng):
    for _ in range(4):
        target = random_admissible_sa(fm35, 2, rng)
        word, acct = assemble_sa_certificate(target, sa_kit, sa2)
        # assemble re-verifies; double-check the evaluation here
        val = word.evaluate(sa2, Q)
        assert val.linear.entries == target.linear.entries
        assert val.trans == target.trans
        assert acct.assembled <= acct.bound


def test_sa_identity_target(sa2, sa_kit, fm35):
    target = AffineModQ(MatModQ.identity(2, Q), (0, 0))
    word, acct = assemble_sa_certificate(target, sa_kit, sa2)
    assert len(word) == 0


def test_sa_rejects_shallow_target(sa2, sa_kit, fm35):
    bad = AffineModQ(MatModQ.group_element(2, Q, (1, 9, 0, 1)), (0, 0))
    with pytest.raises(PreconditionError):
        assemble_sa_certificate(bad, sa_kit, sa2)


def test_sa_certificate_deep_modulus(sa2, fm37):
    # modulus strictly above q0^{5(L-1)}: the conjugation-identity block
    # (nonzero high part of the translation) is exercised
    rng = random.Random(21)
    kit = find_sa_kit(sa2, fm37)
    target = random_admissible_sa(fm37, 2, rng)
    word, acct = assemble_sa_certificate(target, kit, sa2)
    assert word.evaluate(sa2, fm37.q).trans == target.trans
    assert acct.assembled <= acct.bound


def test_product_certificates(prod2, prod_kit, fm35, rng):
    for _ in range(4):
        target = random_admissible_product(fm35, 2, rng)
        word, acct = assemble_product_certificate(target, prod_kit, prod2)
        val = word.evaluate(prod2, Q)
        for i in range(2):
            assert val.components[i].entries == target.components[i].entries
        assert acct.assembled <= acct.bound


def test_product_identity_component(prod2, prod_kit, fm35, rng):
    p = random_kernel_matrix(2, Q, fm35.q2, rng)
    target = ProductModQ((p, MatModQ.identity(2, Q)))
    word, acct = assemble_product_certificate(target, prod_kit, prod2)
    val = word.evaluate(prod2, Q)
    assert val.components[0].entries == p.entries
    assert val.components[1].is_identity()


def test_product_deep_modulus_nontrivial_tail(prod2, fm37):
    # at this modulus the kit's p2/p2p first components are not the
    # identity, so the first stage does real work
    rng = random.Random(23)
    kit = find_product_kit(prod2, fm37)
    assert not kit.element("p2").components[0].is_identity()
    target = random_admissible_product(fm37, 2, rng)
    word, acct = assemble_product_certificate(target, kit, prod2)
    assert acct.assembled <= acct.bound


def test_kit_search_deterministic(sa2, fm35):
    a = find_sa_kit(sa2, fm35, random.Random(1))
    b = find_sa_kit(sa2, fm35, random.Random(1))
    assert a.word("t1").indices == b.word("t1").indices
