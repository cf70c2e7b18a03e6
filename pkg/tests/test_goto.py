import numpy as np
import pytest

from waringwidth.exactnum import CycScalar, ExactMatrix, ExactPoly
from waringwidth.goto import (GotoError, ad_on_torus, build_goto, certify_goto, commutator_residual,
                              cycle_matrix, expected_char_poly, solve_commutator)
from waringwidth.groups import K2N, SPC, SU, GroupCtx, TorusPoint, member, random_element, torus_reduce


def poly(*coeffs):
    return ExactPoly.from_ints(list(coeffs))


def test_su3_is_three_cycle():
    X = build_goto(GroupCtx(SU, 3))
    assert X.exact == cycle_matrix(3)
    assert X.exact.char_poly() == poly(-1, 0, 0, 1)
    assert X.parity == "odd"


def test_su_even_scaled_cycle():
    X = build_goto(GroupCtx(SU, 4))
    assert X.exact == cycle_matrix(4).scale(CycScalar.zeta(8))
    assert X.parity == "even"
    assert X.exact.char_poly() == poly(1, 0, 0, 0, 1)


@pytest.mark.parametrize("n", range(1, 9))
def test_sp_char_poly(n):
    # t^{2n} + 1
    assert build_goto(GroupCtx(SPC, n)).exact.char_poly() == poly(*([1] + [0] * (2 * n - 1) + [1]))


@pytest.mark.parametrize("n", range(3, 9))
def test_k_char_poly(n):
    # (t^2 - 1)(t^{2n-2} - 1), expanded independently
    coeffs = [0] * (2 * n + 1)
    coeffs[0], coeffs[2], coeffs[2 * n - 2], coeffs[2 * n] = 1, -1, -1, 1
    assert build_goto(GroupCtx(K2N, n)).exact.char_poly() == poly(*coeffs)


def test_k_ad_matrix_shape():
    for n in range(3, 9):
        M = build_goto(GroupCtx(K2N, n)).ad_matrix
        expect = [[0] * n for _ in range(n)]
        expect[0][0] = -1
        expect[1][n - 1] = 1
        expect[2][1] = -1
        for i in range(3, n):
            expect[i][i - 1] = 1
        assert M == ExactMatrix(expect)
    assert build_goto(GroupCtx(K2N, 3)).ad_matrix == ExactMatrix([[-1, 0, 0], [0, 0, 1], [0, -1, 0]])


@pytest.mark.parametrize("family,lo", [(SU, 2), (SPC, 1), (K2N, 3)])
def test_ad_minus_one_nonsingular(family, lo):
    for n in range(lo, 17):
        X = build_goto(GroupCtx(family, n))
        M = X.ad_matrix
        assert not (M - ExactMatrix.identity(M.n)).det().is_zero()
        # float mirror agrees with the exact determinant
        assert abs(np.linalg.det(X.ad_float - np.eye(M.n))) > 0.5
        assert member(X.ctx, X.x, 1e-12)


def test_ad_identity_and_su_shift():
    ctx = GroupCtx(SU, 5)
    assert ad_on_torus(ctx, np.eye(5)) == ExactMatrix.identity(4)
    M = ad_on_torus(ctx, cycle_matrix(5))
    assert M.char_poly() == poly(1, 1, 1, 1, 1)  # the n-cycle on the sum-zero hyperplane
    assert not (M - ExactMatrix.identity(4)).det().is_zero()


def test_ad_rejects_non_normalizer():
    ctx = GroupCtx(SU, 2)
    c, s = np.cos(0.3), np.sin(0.3)
    with pytest.raises(GotoError):
        ad_on_torus(ctx, np.array([[c, s], [-s, c]]))


def test_build_goto_errors():
    with pytest.raises(GotoError):
        build_goto(GroupCtx(K2N, 2))
    with pytest.raises(GotoError):
        build_goto(GroupCtx(SU, 1))
    with pytest.raises(GotoError):
        build_goto(GroupCtx.parse("slq:2"))


@pytest.mark.parametrize("family,n", [(SU, 3), (SU, 4), (SU, 7), (SPC, 2), (SPC, 4), (K2N, 4), (K2N, 7)])
def test_expected_char_poly_and_certificate(family, n):
    ctx = GroupCtx(family, n)
    rep = certify_goto(ctx)
    assert rep["ok"], rep
    assert rep["char_poly_matches"] and rep["same_char_poly"]
    assert build_goto(ctx).exact.char_poly() == expected_char_poly(ctx)


def test_certificate_examples():
    rep = certify_goto(GroupCtx(SPC, 4))
    assert rep["principal_target"] == "zeta_16"
    assert rep["char_poly"] == str(poly(1, 0, 0, 0, 0, 0, 0, 0, 1))
    rep = certify_goto(GroupCtx(K2N, 4))
    assert rep["x_has_eigenvalue_1"] and rep["principal_has_eigenvalue_1"]
    assert rep["char_poly"] == str(poly(-1, 0, 1) * poly(-1, 0, 0, 0, 0, 0, 1))
    # SU(4): x_4 has eigenvalues zeta_8 * {1, i, -1, -i} = zeta_8^{+-1, +-3}
    z = np.exp(2j * np.pi / 8)
    ev = np.linalg.eigvals(build_goto(GroupCtx(SU, 4)).x)
    for target in (z, z**3, z**-1, z**-3):
        assert min(abs(ev - target)) < 1e-12


def test_commutator_identity_target():
    ctx = GroupCtx(SPC, 3)
    X = build_goto(ctx)
    t = solve_commutator(ctx, X, TorusPoint.identity(ctx))
    assert commutator_residual(X, t, TorusPoint.identity(ctx)) < 1e-12


def test_commutator_su2_half_angle():
    ctx = GroupCtx(SU, 2)
    X = build_goto(ctx)
    assert X.ad_matrix == ExactMatrix([[-1]])
    for phi in (0.4, 1.0, 2.5, -0.9):
        g0 = TorusPoint(ctx, (phi, -phi))
        t = solve_commutator(ctx, X, g0)
        assert np.exp(1j * t.angles[0]) == pytest.approx(np.exp(-0.5j * phi), abs=1e-12)
        # direct 2x2 multiplication
        T = t.matrix()
        comm = X.x @ T @ np.linalg.inv(X.x) @ np.linalg.inv(T)
        assert np.linalg.norm(comm - g0.matrix()) < 1e-12


@pytest.mark.parametrize("family,lo", [(SU, 2), (SPC, 1), (K2N, 3)])
def test_commutator_random_targets(family, lo, rng):
    for n in range(lo, 11):
        ctx = GroupCtx(family, n)
        X = build_goto(ctx)
        for _ in range(100 // (11 - lo) + 1):
            angles = rng.uniform(0, 2 * np.pi, n)
            if family == SU:
                angles[-1] = -angles[:-1].sum()
            g0 = TorusPoint(ctx, tuple(angles))
            t = solve_commutator(ctx, X, g0)
            assert commutator_residual(X, t, g0) <= 1e-9


def test_every_element_is_conjugate_to_a_commutator(rng):
    for group in ("su:5", "sp:3", "k:8"):
        ctx = GroupCtx.parse(group)
        X = build_goto(ctx)
        g = random_element(ctx, rng)
        c, g0 = torus_reduce(ctx, g)
        T = solve_commutator(ctx, X, g0).matrix()
        C = c.matrix
        comm = X.x @ T @ np.linalg.inv(X.x) @ np.linalg.inv(T)
        assert np.linalg.norm(C.conj().T @ comm @ C - g) < 1e-9
