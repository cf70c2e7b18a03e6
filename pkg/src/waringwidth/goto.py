"""Torus-normalizing elements with Ad(x) - 1 invertible on Lie(T).

For each compact family the element ``x_n`` is a signed permutation (times
a central root of unity for SU(n), n even).  Its action on the Lie algebra
of the diagonal torus is an integer matrix M in a fixed basis:

* SU(n): ``E^1 - E^2, ..., E^{n-1} - E^n``;
* Sp(n), K(2n): ``E^i - E^{n+i}``, i = 1..n.

Because ``[x, t] = (x t x^{-1}) t^{-1}`` is again a torus element, the
commutator equation ``[x, t] = g0`` becomes the linear system
``(M - I) theta_t = theta_g0`` in those coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exactnum import CycScalar, ExactMatrix, ExactPoly
from .groups import COMPACT, K2N, SPC, SU, GroupCtx, GroupError, TorusPoint, member
from .matnum import solve_real_linear


class GotoError(GroupError):
    pass


def cycle_matrix(n: int) -> ExactMatrix:
    """The n-cycle s_n: e_j -> e_{j+1}, e_n -> e_1."""
    return ExactMatrix([[1 if i == (j + 1) % n else 0 for j in range(n)] for i in range(n)])


def fixed_point_cycle(n: int) -> ExactMatrix:
    """s'_{n-1}: fixes e_1 and cycles e_2 -> e_3 -> ... -> e_n -> e_2."""
    rows = [[0] * n for _ in range(n)]
    rows[0][0] = 1
    for j in range(1, n):
        i = j + 1 if j + 1 < n else 1
        rows[i][j] = 1
    return ExactMatrix(rows)


def _diag_units(n: int, idx) -> list[list[int]]:
    return [[1 if (i == j and i in idx) else 0 for j in range(n)] for i in range(n)]


def _blocks(a, b, c, d) -> ExactMatrix:
    """Assemble [[a, b], [c, d]] from equal-size square integer blocks."""
    n = len(a)
    return ExactMatrix([a[i] + b[i] for i in range(n)] + [c[i] + d[i] for i in range(n)])


def goto_matrix(ctx: GroupCtx) -> ExactMatrix:
    n = ctx.n
    if ctx.family == SU:
        if n < 2:
            raise GotoError("SU(n) needs n >= 2")
        s = cycle_matrix(n)
        return s if n % 2 else s.scale(CycScalar.zeta(2 * n))
    if ctx.family == SPC:
        s = cycle_matrix(n)
        blocks = ExactMatrix.blockdiag([s, s])
        E = _diag_units(n, {0})
        I_minus = [[(1 if i == j else 0) - E[i][j] for j in range(n)] for i in range(n)]
        F = _blocks(I_minus, E, [[-x for x in r] for r in E], I_minus)
        return blocks @ F
    if ctx.family == K2N:
        if n < 3:
            raise GotoError("K(2n) needs n >= 3")
        s = fixed_point_cycle(n)
        blocks = ExactMatrix.blockdiag([s, s])
        E = _diag_units(n, {0, 1})
        I_minus = [[(1 if i == j else 0) - E[i][j] for j in range(n)] for i in range(n)]
        F = _blocks(I_minus, E, E, I_minus)
        return blocks @ F
    raise GotoError(f"no Goto element for family {ctx.family}")


def _lie_basis(ctx: GroupCtx) -> list[np.ndarray]:
    n, dim = ctx.n, ctx.dim
    out = []
    if ctx.family == SU:
        for i in range(n - 1):
            d = np.zeros(dim)
            d[i], d[i + 1] = 1, -1
            out.append(d)
    else:
        for i in range(n):
            d = np.zeros(dim)
            d[i], d[n + i] = 1, -1
            out.append(d)
    return out


def _lie_coords(ctx: GroupCtx, diag: np.ndarray) -> np.ndarray:
    """Coordinates of a diagonal (trace-zero / form-compatible) vector in the basis."""
    n = ctx.n
    if ctx.family == SU:
        return np.cumsum(diag[: n - 1])
    return diag[:n]


def ad_on_torus(ctx: GroupCtx, x, drift: float = 1e-10) -> ExactMatrix:
    """Integer matrix of Ad(x) on Lie(T) in the module's fixed basis."""
    if isinstance(x, ExactMatrix):
        x = x.to_numpy()
    x = np.asarray(x, dtype=complex)
    xinv = np.linalg.inv(x)
    cols = []
    for h in _lie_basis(ctx):
        img = x @ np.diag(h) @ xinv
        off = img - np.diag(np.diag(img))
        if np.linalg.norm(off) > drift:
            raise GotoError("x does not normalize the diagonal torus")
        d = np.diag(img)
        if np.max(np.abs(d.imag)) > drift:
            raise GotoError("Ad(x) does not preserve the real torus algebra")
        c = _lie_coords(ctx, d.real)
        if ctx.family != SU and np.linalg.norm(d.real[ctx.n:] + c) > drift:
            raise GotoError("Ad(x) image leaves the torus algebra")
        cols.append(c)
    M = np.column_stack(cols) if cols else np.zeros((0, 0))
    R = np.rint(M)
    if np.max(np.abs(M - R), initial=0.0) > drift:
        raise GotoError("Ad matrix is not integral within drift")
    return ExactMatrix(R.astype(int).tolist())


@dataclass
class GotoElement:
    ctx: GroupCtx
    exact: ExactMatrix
    x: np.ndarray
    ad_matrix: ExactMatrix
    parity: str | None = None  # SU only: "odd" or "even" branch

    @property
    def ad_float(self) -> np.ndarray:
        return np.array([[float(v.as_fraction()) for v in r] for r in self.ad_matrix.rows])


def build_goto(ctx: GroupCtx) -> GotoElement:
    if ctx.family not in COMPACT:
        raise GotoError(f"no Goto element for family {ctx.family}")
    if ctx.family == SPC and ctx.n < 1:
        raise GotoError("Sp(n) needs n >= 1")
    X = goto_matrix(ctx)
    x = X.to_numpy()
    mem = member(ctx, x, 1e-12)
    if not mem:
        raise GotoError(f"Goto element is not in {ctx}: {mem.defects}")
    M = ad_on_torus(ctx, x)
    if (M - ExactMatrix.identity(M.n)).det().is_zero():
        raise GotoError("Ad(x) - 1 is singular on Lie(T)")
    parity = ("odd" if ctx.n % 2 else "even") if ctx.family == SU else None
    return GotoElement(ctx, X, x, M, parity)


def expected_char_poly(ctx: GroupCtx) -> ExactPoly:
    """t^n - 1 / t^n + 1 (SU odd/even), t^{2n} + 1 (Sp), (t^2 - 1)(t^{2n-2} - 1) (K)."""
    n = ctx.n
    if ctx.family == SU:
        return ExactPoly.from_ints([-1 if n % 2 else 1] + [0] * (n - 1) + [1])
    if ctx.family == SPC:
        return ExactPoly.from_ints([1] + [0] * (2 * n - 1) + [1])
    return ExactPoly.from_ints([-1, 0, 1]) * ExactPoly.from_ints([-1] + [0] * (2 * n - 3) + [1])


def _angles_to_coords(ctx: GroupCtx, t: TorusPoint) -> np.ndarray:
    a = np.array(t.angles)
    if ctx.family == SU:
        # lift with exact zero sum; the SU constraint is then built into the difference basis
        a = np.where(a > np.pi, a - 2 * np.pi, a)
        a[-1] -= 2 * np.pi * np.round(a.sum() / (2 * np.pi))
        a[-1] -= a.sum()
        return np.cumsum(a[:-1])
    return a


def _coords_to_angles(ctx: GroupCtx, c: np.ndarray) -> np.ndarray:
    if ctx.family == SU:
        return np.diff(np.concatenate([[0.0], c, [0.0]]))
    return c


def commutator_residual(X: GotoElement, t: TorusPoint, g0: TorusPoint) -> float:
    T = t.matrix()
    comm = X.x @ T @ np.linalg.inv(X.x) @ T.conj().T
    return float(np.linalg.norm(comm - g0.matrix()))


def solve_commutator(ctx: GroupCtx, X: GotoElement, g0: TorusPoint, tol: float = 1e-9) -> TorusPoint:
    """Torus point t with ``x t x^{-1} t^{-1} = T(g0)``."""
    A = X.ad_float - np.eye(X.ad_float.shape[0])
    rhs = _angles_to_coords(ctx, g0)
    r = len(rhs)
    best = None
    shifts = [np.zeros(r)] + [s * np.eye(r)[i] for bound in range(1, ctx.n + 1)
                              for i in range(r) for s in (bound, -bound)]
    for k in shifts:
        theta = solve_real_linear(A, rhs + 2 * np.pi * k) if r else np.zeros(0)
        t = TorusPoint(ctx, tuple(_coords_to_angles(ctx, theta)))
        res = commutator_residual(X, t, g0)
        if best is None or res < best[0]:
            best = (res, t)
        if res <= tol:
            return t
    raise GotoError(f"no lattice shift solves the commutator equation (best residual {best[0]:.3e})")


def certify_goto(ctx: GroupCtx, X: GotoElement | None = None) -> dict:
    """Exact and numerical evidence that X is a usable Goto element."""
    from .principal import build_embedding

    if X is None:
        X = build_goto(ctx)
    n = ctx.n
    M = X.ad_matrix
    det = (M - ExactMatrix.identity(M.n)).det()
    cp = X.exact.char_poly()
    report = {
        "group": str(ctx),
        "det_ad_minus_1": str(det),
        "ad_minus_1_nonsingular": not det.is_zero(),
        "ad_matrix": [[str(v) for v in r] for r in M.rows],
        "char_poly": str(cp),
        "char_poly_expected": str(expected_char_poly(ctx)),
        "char_poly_matches": cp == expected_char_poly(ctx),
        "membership": member(ctx, X.x, 1e-12).defects,
    }
    if ctx.family == SU:
        m = 2 * n
    elif ctx.family == SPC:
        m = 4 * n
    else:
        m = 4 * n - 4
    emb = build_embedding(ctx.family, n)
    roots = [CycScalar.zeta(m, w) for w in emb.weights]
    principal_cp = ExactPoly.from_roots(roots)
    image = emb.torus_image(2 * np.pi / m)
    ev = np.linalg.eigvals(image)
    expect = np.array([complex(r) for r in roots])
    spread = max(min(abs(e - z) for z in expect) for e in ev)
    report.update({
        "principal_target": f"zeta_{m}",
        "principal_char_poly": str(principal_cp),
        "same_char_poly": principal_cp == cp,
        "principal_eigenvalue_error": float(spread),
    })
    if ctx.family == K2N:
        one = CycScalar.rational(1)
        report["x_has_eigenvalue_1"] = cp(one).is_zero()
        report["principal_has_eigenvalue_1"] = principal_cp(one).is_zero()
    report["ok"] = bool(report["ad_minus_1_nonsingular"] and report["char_poly_matches"]
                        and report["same_char_poly"] and spread < 1e-10
                        and report.get("x_has_eigenvalue_1", True)
                        and report.get("principal_has_eigenvalue_1", True))
    return report
