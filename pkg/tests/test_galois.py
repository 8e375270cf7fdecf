import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from projlds.galois import (
    PRIMITIVE_POLYS,
    FieldCtx,
    FieldError,
    field_for_q,
    field_new,
    prime_power,
)


def all_elements(ctx):
    return [ctx.elem(c) for c in itertools.product(range(ctx.p), repeat=ctx.n)]


def test_default_q3_modulus_is_pinned_polynomial():
    ctx = field_new(3, 1)
    assert ctx.modulus_poly == (1, 2, 0, 1)  # x^3 + 2x + 1
    assert ctx.alpha == ctx.elem([0, 1])


def test_gf8_alpha_has_order_7():
    ctx = field_new(2, 1)
    a = ctx.alpha
    powers = [ctx.pow(a, k) for k in range(1, 8)]
    assert all(p != ctx.one for p in powers[:-1])
    assert powers[-1] == ctx.one


@pytest.mark.parametrize("p", [4, 1, 0, 9])
def test_non_prime_rejected(p):
    with pytest.raises(FieldError, match="not prime"):
        field_new(p, 1)


def test_untabulated_rejected():
    with pytest.raises(FieldError, match="no primitive polynomial"):
        field_new(17, 1)


@pytest.mark.parametrize("q", [6, 10, 12, 1])
def test_not_prime_power(q):
    with pytest.raises(FieldError):
        prime_power(q)


@pytest.mark.parametrize("key", sorted(PRIMITIVE_POLYS))
def test_table_polynomials_primitive(key):
    ctx = FieldCtx(*key, PRIMITIVE_POLYS[key])
    assert ctx.multiplicative_order(ctx.alpha) == ctx.order - 1


def test_inverse_law_gf27():
    ctx = field_new(3, 1)
    for a in all_elements(ctx):
        if a:
            assert ctx.mul(a, ctx.inv(a)) == ctx.one


def test_inverse_of_zero():
    ctx = field_new(3, 1)
    with pytest.raises(ZeroDivisionError):
        ctx.inv(ctx.zero)


def test_alpha_pow_26_gf27():
    ctx = field_new(3, 1)
    assert ctx.pow(ctx.alpha, 26) == ctx.one
    assert ctx.pow(ctx.alpha, 13) != ctx.one


def test_characteristic_three():
    ctx = field_new(3, 1)
    for a in all_elements(ctx):
        assert a + a + a == ctx.zero


@pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (7, 1)])
def test_field_axioms_exhaustive_pairs(p, r):
    ctx = field_new(p, r)
    els = all_elements(ctx)
    for a, b in itertools.product(els, repeat=2):
        assert a + b == b + a
        assert a * b == b * a
    for a in els:
        assert a + ctx.zero == a and a * ctx.one == a
        assert a + (-a) == ctx.zero


@pytest.mark.parametrize("p,r", [(2, 1), (3, 1)])
def test_field_axioms_exhaustive_triples(p, r):
    ctx = field_new(p, r)
    els = all_elements(ctx)
    for a, b, c in itertools.product(els, repeat=3):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) + c == a + (b + c)


def _elems(ctx):
    return st.lists(st.integers(0, ctx.p - 1), min_size=ctx.n, max_size=ctx.n).map(ctx.elem)


@pytest.mark.parametrize("q", [4, 5, 8, 9, 11, 13])
def test_field_axioms_random(q):
    ctx = field_for_q(q)
    s = _elems(ctx)

    @settings(max_examples=60, deadline=None)
    @given(s, s, s)
    def check(a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if a:
            assert a * ctx.inv(a) == ctx.one

    check()


def mult_matrix_trace(ctx, g):
    """Absolute trace as the trace of x -> g x over GF(p) (independent oracle)."""
    basis = [ctx.elem([0] * i + [1]) for i in range(ctx.n)]
    M = np.array([list(ctx.mul(g, b).coeffs) for b in basis]).T
    return int(np.trace(M)) % ctx.p


def test_trace_q3_published_values():
    ctx = field_new(3, 1)
    tr = lambda i: ctx.trace(ctx.pow(ctx.alpha, i)).coeffs[0]
    assert [tr(0), tr(1), tr(2), tr(5), tr(12)] == [0, 0, 2, 1, 2]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_trace_matches_multiplication_matrix_oracle(p):
    ctx = field_new(p, 1)
    for g in ctx.powers(ctx.order - 1):
        t = ctx.trace(g)
        assert not any(t.coeffs[1:])
        assert t.coeffs[0] == mult_matrix_trace(ctx, g)


def test_trace_of_zero():
    ctx = field_new(3, 1)
    assert ctx.trace(ctx.zero) == ctx.zero


def test_q2_trace_zero_count():
    ctx = field_new(2, 1)
    zeros = [i for i, g in enumerate(ctx.powers(7)) if not ctx.trace(g)]
    assert len(zeros) == 3


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_trace_lands_in_subfield(q):
    ctx = field_for_q(q)
    for g in ctx.powers(min(ctx.order - 1, 400)):
        t = ctx.trace(g)
        assert ctx.frobenius(t) == t


@pytest.mark.parametrize("p", [2, 3])
def test_trace_additive_exhaustive(p):
    ctx = field_new(p, 1)
    els = all_elements(ctx)
    for a, b in itertools.product(els, repeat=2):
        assert ctx.trace(a + b) == ctx.trace(a) + ctx.trace(b)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13])
def test_singer_zero_count(q):
    ctx = field_for_q(q)
    L = q * q + q + 1
    assert sum(1 for g in ctx.powers(L) if not ctx.trace(g)) == q + 1
