import itertools

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from coding.galois import (
    FieldMismatchError,
    GaloisField,
    GfElement,
    GfMatrix,
    SingularMatrixError,
    clmul_reference,
    full_rank_bound,
    gf_add,
    gf_inv,
    gf_mul,
    rank,
    solve,
)


def test_add_examples():
    assert gf_add(GfElement(0x57), GfElement(0x57)).value == 0
    assert gf_add(GfElement(0x57), GfElement(0x83)).value == 0xD4
    for a in (0, 1, 0x57, 0xFF):
        assert gf_add(GfElement(a), GfElement(0)).value == a


def test_mul_examples():
    for a in (0, 1, 0x57, 0xFF):
        assert gf_mul(GfElement(a), GfElement(1)).value == a
        assert gf_mul(GfElement(a), GfElement(0)).value == 0
    assert gf_mul(GfElement(0x02), GfElement(0x80)).value == int(clmul_reference(0x02, 0x80))
    assert gf_mul(GfElement(0x02), GfElement(0x80)).value == 0x1B
    assert gf_mul(GfElement(0x57), GfElement(0x83)).value == 0xC1


def test_operators_on_elements():
    a, b = GfElement(0x57), GfElement(0x83)
    assert (a + b).value == 0xD4
    assert (a * b).value == 0xC1
    assert (a * a.inverse()).value == 1


def test_mismatched_fields_rejected():
    with pytest.raises(FieldMismatchError):
        gf_add(GfElement(3, degree=8), GfElement(3, degree=4))
    with pytest.raises(FieldMismatchError):
        gf_mul(GfElement(3, degree=8), GfElement(3, degree=4))


def test_element_range_checked():
    with pytest.raises(ValueError):
        GfElement(256)
    with pytest.raises(ValueError):
        GfElement(16, degree=4)


def test_table_mul_matches_oracle_exhaustively(gf):
    a, b = np.meshgrid(np.arange(256), np.arange(256))
    assert_array_equal(gf.mul(a, b), clmul_reference(a, b))


def test_inverse_exhaustive(gf):
    values = np.arange(1, 256)
    table = clmul_reference(values[:, None], values[None, :])
    for a in values:
        partners = np.flatnonzero(table[a - 1] == 1) + 1
        assert partners.size == 1
        assert gf_inv(GfElement(int(a))).value == partners[0]
    assert gf_inv(GfElement(1)).value == 1


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        gf_inv(GfElement(0))


def test_field_axioms_exhaustive_gf16(gf16):
    values = np.arange(16)
    a, b, c = (x.ravel() for x in np.meshgrid(values, values, values, indexing="ij"))
    mul, add = gf16.mul, gf16.add
    assert_array_equal(mul(mul(a, b), c), mul(a, mul(b, c)))
    assert_array_equal(mul(a, b), mul(b, a))
    assert_array_equal(mul(a, add(b, c)), add(mul(a, b), mul(a, c)))
    assert_array_equal(add(add(a, b), c), add(a, add(b, c)))


def test_field_axioms_sampled_gf256(gf, rng):
    a, b, c = (gf.random(rng, 100_000) for _ in range(3))
    assert_array_equal(gf.mul(gf.mul(a, b), c), gf.mul(a, gf.mul(b, c)))
    assert_array_equal(gf.mul(a, b), gf.mul(b, a))
    assert_array_equal(gf.mul(a, gf.add(b, c)), gf.add(gf.mul(a, b), gf.mul(a, c)))


def test_tables_are_read_only(gf):
    with pytest.raises(ValueError):
        gf._exp[0] = 5


def test_corrupted_field_disagrees_with_oracle(gf):
    bad = gf.corrupted()
    a, b = np.meshgrid(np.arange(256), np.arange(256))
    assert not np.array_equal(bad.mul(a, b), clmul_reference(a, b))
    assert np.array_equal(gf.mul(a, b), clmul_reference(a, b))


def test_reducible_polynomial_rejected():
    # x^4 + 1 = (x + 1)^4
    with pytest.raises(ValueError):
        GaloisField(4, polynomial=0x11)


@pytest.mark.parametrize("degree", [2, 3, 5, 10])
def test_other_degrees_match_oracle(degree):
    field = GaloisField.get(degree)
    rng = np.random.default_rng(degree)
    a = field.random(rng, 2000)
    b = field.random(rng, 2000)
    assert_array_equal(field.mul(a, b), clmul_reference(a, b, degree=degree))


def test_rank_examples(gf):
    assert GfMatrix.identity(3).rank() == 3
    assert rank(GfMatrix(np.zeros((3, 4), dtype=np.int64), gf)) == 0
    assert rank(GfMatrix.from_rows([[1, 2], [1, 2]])) == 1


def test_rank_bounded_by_shape(gf, rng):
    for rows, cols in [(2, 5), (5, 2), (4, 4)]:
        m = GfMatrix.random(rng, rows, cols, gf)
        assert m.rank() <= min(rows, cols)


def test_rank_invariant_under_row_operations(gf, rng):
    for _ in range(50):
        m = GfMatrix(gf.random(rng, (5, 4)) * (rng.random((5, 4)) < 0.5), gf)
        r = m.rank()
        assert m.swap_rows(0, 3).rank() == r
        assert m.scale_row(2, int(gf.random(rng, nonzero=True))).rank() == r


def test_random_square_full_rank_frequency(gf, rng):
    trials = 2000
    full = sum(GfMatrix.random(rng, 8, 8, gf).rank() == 8 for _ in range(trials))
    assert full / trials >= full_rank_bound(8, 8)


def test_solve_identity_and_permutation(gf):
    y = np.array([7, 0, 200])
    assert_array_equal(solve(GfMatrix.identity(3), y), y)
    perm = GfMatrix.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    # row i of perm picks x[(i + 1) % 3]
    assert_array_equal(solve(perm, y), np.array([200, 7, 0]))


def test_solve_round_trip(gf, rng):
    solved = 0
    while solved < 20:
        c = GfMatrix.random(rng, 4, 4, gf)
        if c.rank() < 4:
            continue
        x = gf.random(rng, 4)
        assert_array_equal(solve(c, c @ x), x)
        block = gf.random(rng, (4, 6))
        assert_array_equal(solve(c, c @ block), block)
        solved += 1


def test_solve_tall_consistent_system(gf, rng):
    c = GfMatrix.from_rows([[1, 0], [0, 1], [3, 5]])
    x = np.array([9, 44])
    assert_array_equal(c.solve(c @ x), x)


def test_solve_rejects_singular_and_inconsistent(gf):
    with pytest.raises(SingularMatrixError):
        solve(GfMatrix.from_rows([[1, 2], [1, 2]]), np.array([1, 1]))
    with pytest.raises(SingularMatrixError):
        solve(GfMatrix.from_rows([[1, 0], [0, 1], [1, 1]]), np.array([1, 2, 0]))


def test_full_rank_bound_values():
    assert full_rank_bound(8, 8) == pytest.approx((1 - 8 / 256) ** 8)
    assert full_rank_bound(0, 10) == 1.0
    assert full_rank_bound(300, 1) == 0.0


def test_field_associativity_small_triples_via_elements():
    values = range(4)
    for a, b, c in itertools.product(values, repeat=3):
        x, y, z = GfElement(a, 2), GfElement(b, 2), GfElement(c, 2)
        assert ((x * y) * z) == (x * (y * z))


def test_tables_agree_with_galois_package(gf, rng):
    galois = pytest.importorskip("galois")
    GF = galois.GF(2**8, irreducible_poly=gf.polynomial)
    a, b = np.meshgrid(np.arange(256), np.arange(256), indexing="ij")
    assert_array_equal(gf.mul(a, b), np.asarray(GF(a) * GF(b)))
    assert_array_equal(gf.inv(np.arange(1, 256)), np.asarray(GF(np.arange(1, 256)) ** -1))

    for _ in range(20):
        m = GfMatrix.random(rng, 5, 7, gf)
        assert rank(m) == np.linalg.matrix_rank(GF(np.asarray(m.entries)))
