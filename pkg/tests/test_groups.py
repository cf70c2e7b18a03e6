import itertools

import numpy as np
import pytest
import scipy.linalg

from waringwidth.exactnum import ExactMatrix
from waringwidth.goto import build_goto, cycle_matrix
from waringwidth.groups import (K2N, SL_EXACT, SL_FP, SPC, SU, ConjugacyObstruction, GroupCtx, GroupError,
                                TorusPoint, conj_in_group, finite_group_elements, lie_algebra_sample, member,
                                random_element, torus_reduce, weyl_element)
from waringwidth.principal import build_embedding

COMPACT_CTXS = ["su:2", "su:3", "su:6", "sp:1", "sp:2", "sp:4", "k:4", "k:6", "k:10"]


def test_parse_and_str():
    assert GroupCtx.parse("su:7") == GroupCtx(SU, 7)
    assert GroupCtx.parse("SP:4") == GroupCtx(SPC, 4)
    assert GroupCtx.parse("k:10") == GroupCtx(K2N, 5)
    assert GroupCtx.parse("slq:3") == GroupCtx(SL_EXACT, 3)
    assert GroupCtx.parse("slfp:2:7") == GroupCtx(SL_FP, 2, 7)
    for text in ["su:7", "sp:4", "k:10", "slq:3", "slfp:2:7"]:
        assert str(GroupCtx.parse(text)) == text
    for bad in ["su", "k:7", "slfp:2:8", "xx:3", "su:a", "su:0"]:
        with pytest.raises(GroupError):
            GroupCtx.parse(bad)


def test_dimensions_and_forms():
    assert GroupCtx.parse("su:5").dim == 5
    sp = GroupCtx.parse("sp:3")
    assert sp.dim == 6
    assert np.array_equal(sp.form, np.block([[np.zeros((3, 3)), np.eye(3)], [-np.eye(3), np.zeros((3, 3))]]))
    k = GroupCtx.parse("k:6")
    assert np.array_equal(k.form, np.block([[np.zeros((3, 3)), np.eye(3)], [np.eye(3), np.zeros((3, 3))]]))
    assert GroupCtx.parse("su:4").form is None


@pytest.mark.parametrize("group", COMPACT_CTXS)
def test_member_identity(group):
    ctx = GroupCtx.parse(group)
    assert member(ctx, np.eye(ctx.dim))


def test_member_examples():
    s3 = cycle_matrix(3)
    assert s3.det() == 1
    assert member(GroupCtx(SU, 3), s3.to_numpy())
    assert not member(GroupCtx(SU, 2), np.array([[0, 1], [1, 0]]))  # det -1
    x = build_goto(GroupCtx(SPC, 4)).x
    m = member(GroupCtx(SPC, 4), x)
    assert m and m.defects["form"] == 0
    assert not member(GroupCtx(SPC, 1), np.diag([1j, 1j]))  # unitary, det -1
    with pytest.raises(GroupError):
        member(GroupCtx(SU, 3), np.eye(2))


def test_member_exact_and_fp():
    assert member(GroupCtx(SL_EXACT, 2), ExactMatrix([[2, 3], [1, 2]]))
    assert not member(GroupCtx(SL_EXACT, 2), ExactMatrix([[2, 0], [0, 1]]))
    assert member(GroupCtx(SL_FP, 2, 7), [[2, 0], [0, 4]])
    assert not member(GroupCtx(SL_FP, 2, 7), [[2, 0], [0, 2]])


@pytest.mark.parametrize("group", COMPACT_CTXS)
def test_member_conjugation_stable(group, rng):
    ctx = GroupCtx.parse(group)
    for _ in range(5):
        g, c = random_element(ctx, rng), random_element(ctx, rng)
        assert member(ctx, g)
        assert member(ctx, c @ g @ c.conj().T, 2e-10)


@pytest.mark.parametrize("group", COMPACT_CTXS)
def test_lie_algebra_sample_exponentiates_into_group(group, rng):
    ctx = GroupCtx.parse(group)
    X = lie_algebra_sample(ctx, rng)
    assert member(ctx, scipy.linalg.expm(X))


def test_torus_reduce_diagonal_input():
    ctx = GroupCtx(SPC, 2)
    t = TorusPoint(ctx, (0.3, 1.1))
    c, t2 = torus_reduce(ctx, t.matrix())
    assert np.linalg.norm(c.matrix @ t.matrix() @ c.matrix.conj().T - t2.matrix()) < 1e-12
    assert sorted(t2.angles) == pytest.approx(sorted(t.angles))


@pytest.mark.parametrize("group", COMPACT_CTXS + ["su:8", "sp:5", "k:12"])
def test_torus_reduce_random(group, rng):
    ctx = GroupCtx.parse(group)
    for _ in range(10):
        g = random_element(ctx, rng)
        c, t = torus_reduce(ctx, g)
        C = c.matrix
        assert c.certified and member(ctx, C, 1e-9)
        assert np.linalg.norm(C @ g @ C.conj().T - t.matrix()) <= 1e-9
        assert np.linalg.norm(C.conj().T @ t.matrix() @ C - g) <= 2e-9
        assert t.sum_defect() < 1e-9


def test_torus_reduce_recovers_known_sp_angles(rng):
    ctx = GroupCtx(SPC, 2)
    known = TorusPoint(ctx, (2 * np.pi / 5, 4 * np.pi / 5))
    v = random_element(ctx, rng)
    g = v @ known.matrix() @ v.conj().T
    _, t = torus_reduce(ctx, g)
    # angles agree up to the Weyl group (signed permutations)
    got = sorted(min(a, 2 * np.pi - a) for a in t.angles)
    assert got == pytest.approx([2 * np.pi / 5, 4 * np.pi / 5], abs=1e-9)


@pytest.mark.parametrize("group,angles", [
    ("k:6", (np.pi, np.pi, 0.4)),
    ("k:6", (0.0, 0.0, 1.3)),
    ("sp:3", (0.0, np.pi, np.pi)),
    ("k:8", (0.5, 0.5, 0.5, 0.5)),
])
def test_torus_reduce_degenerate_eigenspaces(group, angles, rng):
    ctx = GroupCtx.parse(group)
    v = random_element(ctx, rng)
    g = v @ TorusPoint(ctx, angles).matrix() @ v.conj().T
    c, t = torus_reduce(ctx, g)
    assert np.linalg.norm(c.matrix @ g @ c.matrix.conj().T - t.matrix()) <= 1e-9
    assert member(ctx, c.matrix, 1e-9)


def test_torus_reduce_rejects_non_member():
    with pytest.raises(GroupError):
        torus_reduce(GroupCtx(SU, 2), np.diag([2.0, 0.5]))
    with pytest.raises(GroupError):
        torus_reduce(GroupCtx(SL_EXACT, 2), np.eye(2))


@pytest.mark.parametrize("group", COMPACT_CTXS)
def test_weyl_element_action(group, rng):
    ctx = GroupCtx.parse(group)
    n = ctx.n
    theta = rng.uniform(0, 2 * np.pi, n)
    if ctx.family == SU:
        theta[-1] = -theta[:-1].sum()
    for perm in itertools.islice(itertools.permutations(range(n)), 6):
        flips = () if ctx.family == SU else tuple(i for i in range(n) if rng.random() < 0.5)
        if ctx.family == K2N and len(flips) % 2:
            flips = flips[1:]
        W = weyl_element(ctx, perm, flips)
        assert member(ctx, W, 1e-12)
        signs = np.array([-1 if perm[i] in flips else 1 for i in range(n)])
        expect = TorusPoint(ctx, tuple(signs * theta[list(perm)])).matrix()
        T = TorusPoint(ctx, tuple(theta)).matrix()
        assert np.linalg.norm(W @ T @ W.conj().T - expect) < 1e-12


def test_conj_in_group_trivial(rng):
    ctx = GroupCtx(SU, 4)
    a = random_element(ctx, rng)
    c = conj_in_group(ctx, a, a)
    assert c.certified
    assert np.linalg.norm(c.matrix @ a @ c.matrix.conj().T - a) <= 1e-8


@pytest.mark.parametrize("group", COMPACT_CTXS)
def test_conj_in_group_random_pairs(group, rng):
    ctx = GroupCtx.parse(group)
    a = random_element(ctx, rng)
    v = random_element(ctx, rng)
    b = v @ a @ v.conj().T
    c = conj_in_group(ctx, a, b).matrix
    assert member(ctx, c, 1e-8)
    assert np.linalg.norm(c @ a @ c.conj().T - b) <= 1e-8


@pytest.mark.parametrize("family,n,m", [(SPC, 3, 12), (K2N, 4, 12), (SU, 5, 10), (SPC, 5, 20), (K2N, 6, 20)])
def test_principal_image_conjugate_to_goto(family, n, m):
    ctx = GroupCtx(family, n)
    a = build_embedding(family, n).torus_image(2 * np.pi / m)
    b = build_goto(ctx).x
    c = conj_in_group(ctx, a, b)
    assert c.certified
    assert np.linalg.norm(c.matrix @ a @ c.matrix.conj().T - b) <= 1e-8


def test_sp_signed_permutations_connect_torus_points(rng):
    ctx = GroupCtx(SPC, 3)
    theta = rng.uniform(0, 2 * np.pi, 3)
    other = TorusPoint(ctx, (-theta[2], theta[0], -theta[1]))
    c = conj_in_group(ctx, TorusPoint(ctx, tuple(theta)).matrix(), other.matrix())
    assert c.certified


def test_conj_in_group_errors():
    ctx = GroupCtx(SU, 2)
    with pytest.raises(ConjugacyObstruction):
        conj_in_group(ctx, TorusPoint(ctx, (0.3, -0.3)).matrix(), TorusPoint(ctx, (0.5, -0.5)).matrix())
    # K(4) torus points (a, b) and (a, -b) with no +-1 eigenvalue lie in different classes
    k = GroupCtx(K2N, 2)
    with pytest.raises(ConjugacyObstruction, match="parity"):
        conj_in_group(k, TorusPoint(k, (0.3, 0.7)).matrix(), TorusPoint(k, (0.3, -0.7)).matrix())
    # with an eigenvalue 1 slot the parity is absorbed
    c = conj_in_group(k, TorusPoint(k, (0.0, 0.7)).matrix(), TorusPoint(k, (0.0, -0.7)).matrix())
    assert c.certified


@pytest.mark.parametrize("p,order", [(2, 6), (3, 24), (5, 120), (7, 336)])
def test_finite_group_elements(p, order):
    els = finite_group_elements(GroupCtx(SL_FP, 2, p))
    assert len(els) == order == p * (p * p - 1)
    assert len(set(els)) == order
    assert all((a * d - b * c) % p == 1 for a, b, c, d in els)


def test_finite_group_elements_errors():
    with pytest.raises(GroupError):
        finite_group_elements(GroupCtx(SL_FP, 2, 37))
    with pytest.raises(GroupError):
        finite_group_elements(GroupCtx(SU, 2))
