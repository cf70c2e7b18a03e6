"""Principal SU(2) embeddings into SU(n), Sp(n) and K(2n).

All three are built from symmetric powers of the defining representation
of SL_2.  ``sym_power(k, A)`` uses the monomial basis
``e1^(k-j) e2^j`` (j = 0..k), so integer and cyclotomic inputs stay exact.
The invariant bilinear form and the invariant Hermitian form of that basis
are found by solving linear invariance conditions over Q; the change of
basis onto the group's standard model is assembled from them and checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .exactnum import CycScalar, ExactMatrix
from .groups import K2N, SPC, SU, GroupCtx, member


class FormCongruenceError(AssertionError):
    pass


def sym_power(k: int, A):
    """Matrix of A acting on degree-k binary forms.

    Column j is the expansion of ``(a e1 + c e2)^(k-j) (b e1 + d e2)^j`` where
    ``A = [[a, b], [c, d]]``.  Accepts numpy arrays or :class:`ExactMatrix`.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    exact = isinstance(A, ExactMatrix)
    if exact:
        a, b, c, d = A[0, 0], A[0, 1], A[1, 0], A[1, 1]
        zero = CycScalar.rational(0)
    else:
        A = np.asarray(A)
        if A.shape != (2, 2):
            raise ValueError("sym_power needs a 2x2 matrix")
        a, b, c, d = A[0, 0], A[0, 1], A[1, 0], A[1, 1]
        zero = 0 * a
    pw = {}

    def power(x, e, key):
        if (key, e) not in pw:
            pw[key, e] = x**e if e else (CycScalar.rational(1) if exact else 1 + 0 * x)
        return pw[key, e]

    rows = [[zero] * (k + 1) for _ in range(k + 1)]
    for j in range(k + 1):
        for r in range(k - j + 1):
            left = comb(k - j, r) * power(a, k - j - r, "a") * power(c, r, "c")
            for s in range(j + 1):
                term = left * (comb(j, s) * power(b, j - s, "b") * power(d, s, "d"))
                rows[r + s][j] = rows[r + s][j] + term
    if exact:
        return ExactMatrix(rows)
    return np.array(rows, dtype=np.result_type(A, float))


# ---------------------------------------------------------------------------
# exact linear algebra over Q (small nullspaces)

def _nullspace_q(rows, ncols):
    """Basis of the rational nullspace of a list of equations (rows)."""
    mat = [list(map(Fraction, r)) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        p = mat[r][c]
        mat[r] = [x / p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -mat[i][f]
        basis.append(v)
    return basis


def _rational_rows(M: ExactMatrix):
    return [[x.as_fraction() for x in row] for row in M.rows]


_TORUS_GEN = ExactMatrix([[2, 0], [0, Fraction(1, 2)]])
_UNIPOTENT_GEN = ExactMatrix([[1, 1], [0, 1]])
# a rational point of SO(2) of infinite order
_ROTATION_GEN = ExactMatrix([[Fraction(3, 5), Fraction(4, 5)], [Fraction(-4, 5), Fraction(3, 5)]])


def _invariant_diagonal_pairing(k: int, gen: ExactMatrix, antidiagonal: bool):
    """Solve rho(g)^T X rho(g) = X for X supported on the (anti)diagonal.

    The torus generator diag(2, 1/2) acts on e1^(k-j) e2^j by 2^(k-2j), which
    forces an invariant bilinear form onto the antidiagonal (weights summing
    to zero) and an invariant Hermitian form with real torus onto the
    diagonal, so only k+1 unknowns remain.
    """
    R = _rational_rows(sym_power(k, gen))
    n = k + 1
    support = [(i, k - i) if antidiagonal else (i, i) for i in range(n)]
    eqs = []
    for p in range(n):
        for q in range(n):
            # (R^T X R - X)[p, q] as a linear form in the support values
            row = [R[i][p] * R[j][q] for (i, j) in support]
            for u, (i, j) in enumerate(support):
                if (i, j) == (p, q):
                    row[u] -= 1
            eqs.append(row)
    null = _nullspace_q(eqs, n)
    if len(null) != 1:
        raise FormCongruenceError(f"expected a one-dimensional space of invariant forms, got {len(null)}")
    v = null[0]
    scale = v[0]
    v = [x / scale for x in v]
    X = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), x in zip(support, v):
        X[i][j] = x
    return ExactMatrix(X)


def invariant_form(k: int) -> ExactMatrix:
    """The SL_2-invariant bilinear form on degree-k binary forms, normalized B[0, k] = 1."""
    torus_check = sym_power(k, _TORUS_GEN)
    B = _invariant_diagonal_pairing(k, _UNIPOTENT_GEN, antidiagonal=True)
    if torus_check.transpose() @ B @ torus_check != B:
        raise FormCongruenceError("form is not torus invariant")
    return B


def hermitian_form(k: int) -> ExactMatrix:
    """Diagonal SU(2)-invariant Hermitian Gram matrix of the monomial basis, H[0, 0] = 1.

    Invariance under diagonal unitaries forces a diagonal Gram matrix; the
    remaining unknowns are fixed by a rational rotation of infinite order.
    """
    return _invariant_diagonal_pairing(k, _ROTATION_GEN, antidiagonal=False)


# ---------------------------------------------------------------------------

def principal_weights(family: str, n: int) -> list[int]:
    if family == SU:
        return [n - 1 - 2 * j for j in range(n)]
    if family == SPC:
        return [2 * n - 1 - 2 * j for j in range(2 * n)]
    if family == K2N:
        return [2 * n - 2 - 2 * j for j in range(n)] + [-(2 * n - 2 - 2 * j) for j in range(n)]
    raise ValueError(f"no principal embedding for family {family!r}")


@dataclass
class PrincipalEmbed:
    """``embed(A) = Q rho(A) Q^{-1}``, with rho = Sym^k (plus a trivial summand for K2n)."""

    family: str
    n: int
    weights: list[int]
    Q: np.ndarray
    Qinv: np.ndarray
    sym_degree: int
    ctx: GroupCtx = field(init=False)

    def __post_init__(self):
        self.ctx = GroupCtx(self.family, self.n)

    def rho(self, A) -> np.ndarray:
        S = sym_power(self.sym_degree, np.asarray(A, dtype=complex))
        if self.family == K2N:
            out = np.zeros((S.shape[0] + 1,) * 2, dtype=complex)
            out[:-1, :-1] = S
            out[-1, -1] = 1.0
            return out
        return S

    def __call__(self, A) -> np.ndarray:
        img = self.Q @ self.rho(A) @ self.Qinv
        if self.family == SU:
            det = np.linalg.det(img)
            if abs(det - 1) > 1e-14:
                img = img / det ** (1.0 / self.n)
        return img

    def torus_image(self, theta: float) -> np.ndarray:
        return self(np.diag([np.exp(1j * theta), np.exp(-1j * theta)]))


def _to_float(M: ExactMatrix) -> np.ndarray:
    return np.array([[float(x.as_fraction()) for x in r] for r in M.rows])


def build_embedding(family: str, n: int) -> PrincipalEmbed:
    """Construct the principal embedding of SU(2) into the family's standard model."""
    if family == SU:
        if n < 2:
            raise ValueError("SU principal embedding needs n >= 2")
        k = n - 1
    elif family == SPC:
        if n < 1:
            raise ValueError("Sp principal embedding needs n >= 1")
        k = 2 * n - 1
    elif family == K2N:
        if n < 2:
            raise ValueError("K(2n) principal embedding needs n >= 2")
        k = 2 * n - 2
    else:
        raise ValueError(f"no principal embedding for family {family!r}")

    H = _to_float(hermitian_form(k))
    h = np.diag(H)
    if np.any(h <= 0):
        raise FormCongruenceError("invariant Hermitian form is not positive")
    f = [np.eye(k + 1)[:, j] / np.sqrt(h[j]) for j in range(k + 1)]  # orthonormal weight vectors

    if family == SU:
        W = np.column_stack(f).astype(complex)
        Htot = H
        Btot, target = None, None
    else:
        B = _to_float(invariant_form(k))
        dim = 2 * n
        if family == K2N:
            f = [np.append(v, 0.0) for v in f]
            triv = np.zeros(k + 2)
            triv[-1] = 1.0
            Btot = np.zeros((k + 2, k + 2))
            Btot[:-1, :-1] = B
            Btot[-1, -1] = 1.0
            Htot = np.zeros((k + 2, k + 2))
            Htot[:-1, :-1] = H
            Htot[-1, -1] = 1.0
        else:
            Btot, Htot = B, H

        def bil(u, v):
            return u @ Btot @ v

        norm = abs(bil(f[0], f[k]))
        cols = [None] * dim
        for j in range((k + 1) // 2):
            # weight k-2j goes to slot j, its negative to slot n+j
            beta = bil(f[j], f[k - j]) / norm
            if abs(abs(beta) - 1) > 1e-12:
                raise FormCongruenceError("bilinear and Hermitian forms are incompatible")
            cols[j] = f[j]
            cols[n + j] = f[k - j] / beta
        if family == K2N:
            mid = f[k // 2]
            beta = bil(mid, mid) / norm
            alpha = np.sqrt(complex(-1.0 / beta))
            cols[n - 1] = (alpha * mid + triv) / np.sqrt(2)
            cols[2 * n - 1] = (-alpha * mid + triv) / np.sqrt(2)
        W = np.column_stack(cols).astype(complex)
        Btot = Btot / norm
        target = GroupCtx(family, n).form

    gram = W.conj().T @ Htot @ W
    if np.linalg.norm(gram - np.eye(W.shape[1])) > 1e-10:
        raise FormCongruenceError("basis change is not unitary for the invariant Hermitian form")
    if target is not None and np.linalg.norm(W.T @ Btot @ W - target) > 1e-10:
        raise FormCongruenceError("basis change does not carry the invariant form to the standard form")
    Qinv = W
    Q = W.conj().T @ Htot
    emb = PrincipalEmbed(family, n, principal_weights(family, n), Q, Qinv, k)
    spot = emb(np.array([[0.6, 0.8j], [0.8j, 0.6]]))
    if not member(emb.ctx, spot, 1e-10):
        raise FormCongruenceError("spot check: image of an SU(2) element is not in the group")
    return emb
