import itertools
import os
import random

import pytest

from squareirr import klpoly as K
from squareirr import perm as P


def test_polynomial_value_type():
    p = K.KLPolynomial((1, 1, 2))
    assert str(p) == "1 + q + 2q^2"
    assert p(1) == 4
    assert p.to_json() == [1, 1, 2]
    assert K.KLPolynomial((1, 0, 0)) == K.KLPolynomial((1,))
    assert str(K.ZERO) == "0"


def test_trivial_values():
    for w in P.all_perms(4):
        assert K.kl_polynomial(w, w) == K.ONE
    assert K.kl_polynomial((1, 2, 3), (1, 3, 2)) == K.ONE  # simple reflection
    assert K.kl_polynomial((2, 1, 3), (1, 3, 2)) == K.ZERO  # incomparable


def test_leclerc_pair_value():
    p = K.kl_polynomial((1, 2, 4, 3), (4, 2, 3, 1))
    assert p(1) != 1
    assert p == K.KLPolynomial((1, 1))
    assert K.kl_at_one((1, 2, 4, 3), (4, 2, 3, 1)) == 2


def test_size_mismatch():
    with pytest.raises(ValueError):
        K.kl_polynomial((1, 2), (1, 2, 3))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_recursion_matches_oracle_exhaustively(n):
    for x in P.all_perms(n):
        for w in P.all_perms(n):
            assert K.kl_polynomial(x, w) == K.kl_oracle(x, w), (x, w)


def test_oracle_trivial_cases():
    assert K.kl_oracle((2, 1, 4, 3), (1, 2, 4, 3)) == K.ZERO
    assert K.kl_oracle((1, 2, 3, 4), (3, 4, 1, 2)) == K.kl_polynomial(
        (1, 2, 3, 4), (3, 4, 1, 2)
    )
    with pytest.raises(ValueError):
        K.kl_oracle(tuple(range(1, 8)), tuple(range(1, 8)))


def test_smooth_pairs_have_unit_polynomials():
    for k in (3, 4, 5):
        perms = list(P.all_perms(k))
        for sigma in perms:
            for sigma0 in perms:
                if not P.bruhat_leq(sigma0, sigma):
                    continue
                if P.smooth_pair_data(sigma0, sigma).is_smooth:
                    assert K.kl_at_one(sigma0, sigma) == 1
                    # and the whole upper interval is unit
                    for sp in perms:
                        if P.bruhat_leq(sigma0, sp) and P.bruhat_leq(sp, sigma):
                            assert K.kl_at_one(sp, sigma) == 1


def test_coefficients_nonnegative_and_degree_bounded():
    rng = random.Random(0)
    perms = list(P.all_perms(5))
    for _ in range(500):
        x = rng.choice(perms)
        w = rng.choice(perms)
        p = K.kl_polynomial(x, w)
        assert all(c >= 0 for c in p.coeffs)
        if p.coeffs:
            assert p.coeffs[0] == 1
            if x != w:
                assert 2 * p.degree <= P.length(w) - P.length(x) - 1


def test_symmetries():
    perms = list(P.all_perms(5))
    rng = random.Random(1)
    w0 = P.longest_element(5)
    for _ in range(200):
        x = rng.choice(perms)
        w = rng.choice(perms)
        p = K.kl_polynomial(x, w)
        assert p == K.kl_polynomial(P.inverse(x), P.inverse(w))
        conj = lambda u: P.compose(w0, P.compose(u, w0))
        assert p == K.kl_polynomial(conj(x), conj(w))


def test_full_table_mode():
    table = K.kl_table(4)
    for (x, w), poly in table.items():
        assert P.bruhat_leq(x, w)
        assert poly == K.kl_polynomial(x, w)
    comparable = sum(
        1 for x in P.all_perms(4) for w in P.all_perms(4) if P.bruhat_leq(x, w)
    )
    assert len(table) == comparable
    with pytest.raises(ValueError):
        K.kl_table(7)


def test_cache_roundtrip(tmp_path):
    # populate a few nontrivial columns, save, wipe, reload
    K.kl_polynomial((1, 2, 3, 4, 5), (5, 3, 4, 2, 1))
    path = os.fspath(tmp_path / "kl.cache")
    saved = K.save_cache(path)
    assert saved >= 1
    ctx = K._ctx(5)
    before = dict(ctx._cols)
    ctx._cols.clear()
    loaded = K.load_cache(path)
    assert loaded == saved
    for w, col in before.items():
        assert ctx._cols.get(w) == col

    with pytest.raises(ValueError):
        bad = tmp_path / "bad.cache"
        bad.write_bytes(b"nope")
        K.load_cache(os.fspath(bad))
