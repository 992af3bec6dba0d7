import math
import os
import random

import pytest

from logdiam.backend import compiled_available, packable
from logdiam.cayley import (
    CayleyWord,
    bfs_distance,
    diameter,
    diameter_scan,
    group_order,
    run_closure,
    scan_csv,
    search_with_predicate,
    sl_order,
    surjectivity_check,
)
from logdiam.errors import BudgetExceededError
from logdiam.matmod import GenSet, MatModQ, SeedConditions, check_seed
from logdiam.modarith import factorize

from .oracle_bfs import brute_diameter


def test_sl_order_closed_formula():
    assert sl_order(2, 2) == 6
    assert sl_order(2, 3) == 24
    assert sl_order(2, 4) == 48
    assert sl_order(2, 6) == 144
    assert sl_order(3, 2) == 168


def test_group_order_variants(sl2, sa2, prod2):
    assert group_order(sl2, 3) == 24
    assert group_order(sa2, 3) == 24 * 9
    assert group_order(prod2, 3) == 24 * 24


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_diameter_against_brute_oracle(sl2, q):
    want_diam, want_order = brute_diameter(q)
    rec = diameter(sl2, q)
    assert rec.diameter == want_diam
    assert rec.order == want_order == sl_order(2, q)


def test_closure_words_evaluate(sl2):
    q = 7
    clo = run_closure(sl2, q)
    rng = random.Random(1)
    elems = [flat for flat, _ in clo.items()]
    for _ in range(10):
        e = elems[rng.randrange(len(elems))]
        word = CayleyWord(tuple(clo.word_to(e)))
        assert word.evaluate(sl2, q).entries == e
        assert len(word) == clo.dist_of(e)


def test_bfs_distance(sl2):
    # T^2 mod 5 is two steps from the identity
    q = 5
    t2 = MatModQ.group_element(2, q, (1, 2, 0, 1))
    dist, word = bfs_distance(sl2, q, t2)
    assert dist == 2
    assert word.evaluate(sl2, q).entries == t2.entries
    dist0, _ = bfs_distance(sl2, q, MatModQ.identity(2, q))
    assert dist0 == 0


def test_backend_parity(sl2):
    if not compiled_available():
        pytest.skip("compiled kernel unavailable")
    q = 13
    assert packable(q, 4)
    rec = diameter(sl2, q)
    os.environ["LOGDIAM_PURE"] = "1"
    try:
        import importlib

        from logdiam import backend

        importlib.reload(backend)
        rec_pure = diameter(sl2, q)
    finally:
        del os.environ["LOGDIAM_PURE"]
        import importlib

        from logdiam import backend

        importlib.reload(backend)
    assert (rec.diameter, rec.order) == (rec_pure.diameter, rec_pure.order)


def test_budget_refusal(sl2):
    with pytest.raises(BudgetExceededError):
        run_closure(sl2, 64, budget_bytes=1024)


def test_surjectivity(sl2, sa2):
    assert surjectivity_check(sl2, 4)
    assert surjectivity_check(sl2, 1)
    assert surjectivity_check(sa2, 5)
    t_only = GenSet.from_json(
        {
            "kind": "SL",
            "dims": [2],
            "generators": [[[1, 1], [0, 1]], [[1, -1], [0, 1]]],
        }
    )
    assert not surjectivity_check(t_only, 5)
    clo = run_closure(t_only, 5)
    assert clo.count == 5  # the cyclic subgroup generated by T


def test_scan_and_csv(sl2):
    report = diameter_scan(sl2, range(2, 13))
    assert not report.failures
    assert [r.q for r in report.records] == list(range(2, 13))
    for r in report.records:
        if r.q >= 3:
            assert r.ratio <= report.fitted_c
    got = max(r.ratio for r in report.records if r.q >= 3)
    assert math.isclose(got, report.fitted_c)
    csv = scan_csv(report)
    lines = csv.strip().split("\n")
    assert lines[0] == "q,|Xq|,diam,ratio,ms"
    assert len(lines) == 12
    assert lines[1].startswith("2,6,3,")


def test_divisibility_monotonicity(sl2):
    recs = {r.q: r for r in diameter_scan(sl2, range(2, 25)).records}
    for q1 in recs:
        for q2 in recs:
            if q2 % q1 == 0:
                assert recs[q1].diameter <= recs[q2].diameter


def test_projection_shrinks_distances(sl2):
    # distances between reductions never exceed upstairs distances
    q2, q1 = 24, 8
    rng = random.Random(4)
    clo = run_closure(sl2, q2)
    elems = [flat for flat, _ in clo.items()]
    for _ in range(5):
        x = elems[rng.randrange(len(elems))]
        up = clo.dist_of(x)
        down, _ = bfs_distance(
            sl2, q1, MatModQ.group_element(2, q1, tuple(v % q1 for v in x))
        )
        assert down <= up


def test_search_with_predicate(sl2):
    fm = factorize(243).with_level(2)
    cond = SeedConditions("lower", 2, fm)
    res = search_with_predicate(
        sl2, 243, lambda g: bool(check_seed(g, cond)), max_radius=2
    )
    assert res.found
    assert check_seed(res.element, cond)
    assert res.word.evaluate(sl2, 243).entries == res.element.entries
    ruled_out = search_with_predicate(
        sl2, 7, lambda g: False, max_radius=3, walk_retries=5
    )
    assert not ruled_out.found


def test_word_inverse_and_concat(sl2):
    q = 11
    w = CayleyWord((0, 2, 0, 3))
    wi = w.inverse(sl2)
    both = w + wi
    assert both.evaluate(sl2, q).is_identity()
