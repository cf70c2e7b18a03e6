"""Group contexts, membership, torus reduction and in-group conjugators.

Families:

* ``SU``   -- SU(n), diagonal torus diag(e^{i theta_1}, ..., e^{i theta_n}).
* ``SpC``  -- compact Sp(n) = U(2n) preserving [[0, I], [-I, 0]].
* ``K2n``  -- K(2n) = U(2n) n SL(2n) preserving [[0, I], [I, 0]], the
  orthogonal group in a model with a diagonal torus.
* ``SL_exact`` -- SL_n over Q(zeta_k) with :class:`ExactMatrix` entries.
* ``SL_Fp``    -- SL_n(F_p), entries as integers mod p.

SpC and K2n share the torus diag(e^{i theta}, e^{-i theta}).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exactnum import ExactMatrix
from .matnum import NumericalError, eig_normal

SU, SPC, K2N, SL_EXACT, SL_FP = "SU", "SpC", "K2n", "SL_exact", "SL_Fp"
COMPACT = (SU, SPC, K2N)

_SLUG = {SU: "su", SPC: "sp", K2N: "k", SL_EXACT: "slq", SL_FP: "slfp"}


class GroupError(ValueError):
    pass


class TorusReductionError(GroupError):
    pass


class ConjugacyObstruction(GroupError):
    """Two elements could not be conjugated inside the group."""


@dataclass(frozen=True)
class GroupCtx:
    family: str
    n: int
    p: int | None = None

    def __post_init__(self):
        if self.family not in _SLUG:
            raise GroupError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise GroupError("rank parameter must be positive")
        if self.family == SL_FP:
            if self.p is None or self.p < 2 or any(self.p % q == 0 for q in range(2, math.isqrt(self.p) + 1)):
                raise GroupError("SL_Fp needs a prime p")
        elif self.p is not None:
            raise GroupError("only SL_Fp takes a prime")

    @classmethod
    def parse(cls, text: str) -> "GroupCtx":
        """Parse ``su:7``, ``sp:4``, ``k:10`` (K(2*5)), ``slq:4`` or ``slfp:2:7``."""
        parts = text.strip().lower().split(":")
        try:
            kind, nums = parts[0], [int(x) for x in parts[1:]]
        except ValueError as exc:
            raise GroupError(f"bad group spec {text!r}") from exc
        if kind == "su" and len(nums) == 1:
            return cls(SU, nums[0])
        if kind == "sp" and len(nums) == 1:
            return cls(SPC, nums[0])
        if kind == "k" and len(nums) == 1:
            if nums[0] % 2 or nums[0] < 2:
                raise GroupError("k:<dim> needs an even matrix dimension")
            return cls(K2N, nums[0] // 2)
        if kind == "slq" and len(nums) == 1:
            return cls(SL_EXACT, nums[0])
        if kind == "slfp" and len(nums) == 2:
            return cls(SL_FP, nums[0], nums[1])
        raise GroupError(f"bad group spec {text!r}")

    def __str__(self):
        if self.family == K2N:
            return f"k:{2 * self.n}"
        if self.family == SL_FP:
            return f"slfp:{self.n}:{self.p}"
        return f"{_SLUG[self.family]}:{self.n}"

    @property
    def dim(self) -> int:
        return 2 * self.n if self.family in (SPC, K2N) else self.n

    @property
    def backend(self) -> str:
        return {SL_EXACT: "exact", SL_FP: "fp"}.get(self.family, "float")

    @property
    def form(self) -> np.ndarray | None:
        n = self.n
        if self.family == SPC:
            return np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
        if self.family == K2N:
            return np.block([[np.zeros((n, n)), np.eye(n)], [np.eye(n), np.zeros((n, n))]])
        return None

    @property
    def torus_rank(self) -> int:
        return self.n - 1 if self.family == SU else self.n


@dataclass(frozen=True)
class TorusPoint:
    """A point of the diagonal torus, stored by angles in [0, 2*pi)."""

    ctx: GroupCtx
    angles: tuple[float, ...]

    def __post_init__(self):
        if self.ctx.family not in COMPACT:
            raise GroupError("tori are modelled for SU, SpC and K2n only")
        a = np.mod(np.asarray(self.angles, dtype=float), 2 * np.pi)
        a[a > 2 * np.pi - 1e-13] = 0.0
        if len(a) != self.ctx.n:
            raise GroupError(f"expected {self.ctx.n} angles")
        object.__setattr__(self, "angles", tuple(float(x) for x in a))

    def diagonal(self) -> np.ndarray:
        z = np.exp(1j * np.asarray(self.angles))
        if self.ctx.family == SU:
            return z
        return np.concatenate([z, z.conj()])

    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal())

    def sum_defect(self) -> float:
        """Distance of prod(e^{i theta}) from 1 (SU sum constraint)."""
        if self.ctx.family != SU:
            return 0.0
        return float(abs(np.exp(1j * sum(self.angles)) - 1))

    @classmethod
    def identity(cls, ctx: GroupCtx) -> "TorusPoint":
        return cls(ctx, (0.0,) * ctx.n)


@dataclass
class Conjugator:
    ctx: GroupCtx
    matrix: np.ndarray
    certified: bool = False


@dataclass
class Membership:
    """Result of :func:`member`; truthy iff every defect is within tolerance."""

    ok: bool
    defects: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------
# membership

def member(ctx: GroupCtx, g, tol: float = 1e-10) -> Membership:
    if ctx.family == SL_EXACT:
        if not isinstance(g, ExactMatrix):
            g = ExactMatrix(g)
        if g.n != ctx.dim:
            raise GroupError("dimension mismatch")
        ok = g.det() == 1
        return Membership(ok, {"det": "0" if ok else str(g.det() - 1)})
    if ctx.family == SL_FP:
        a = np.asarray(g, dtype=np.int64) % ctx.p
        if a.shape != (ctx.dim, ctx.dim):
            raise GroupError("dimension mismatch")
        d = int(round(ExactMatrix(a.tolist()).det().as_fraction())) % ctx.p
        return Membership(d == 1, {"det": (d - 1) % ctx.p})
    g = np.asarray(g, dtype=complex)
    if g.shape != (ctx.dim, ctx.dim):
        raise GroupError(f"expected a {ctx.dim}x{ctx.dim} matrix, got {g.shape}")
    defects = {
        "unitary": float(np.linalg.norm(g.conj().T @ g - np.eye(ctx.dim))),
        "det": float(abs(np.linalg.det(g) - 1)),
    }
    omega = ctx.form
    if omega is not None:
        defects["form"] = float(np.linalg.norm(g.T @ omega @ g - omega))
    return Membership(all(v <= tol for v in defects.values()), defects)


# ---------------------------------------------------------------------------
# torus reduction

def _antilinear(ctx: GroupCtx):
    """The map u -> partner column, so that [u_i | j(u_i)] lies in the group."""
    omega = ctx.form
    if ctx.family == SPC:
        return lambda u: -omega @ u.conj()
    return lambda u: omega @ u.conj()


def _proj_out(v, basis):
    for b in basis:
        v = v - (b.conj() @ v) * b
    return v


def _quaternionic_frame(W, jmap, m):
    """m vectors u in span(W) with {u, j(u)} jointly orthonormal (Sp case)."""
    cols = [W[:, i] for i in range(W.shape[1])]
    basis, us = [], []
    while len(us) < m:
        resid = [_proj_out(c, basis) for c in cols]
        norms = [np.linalg.norm(r) for r in resid]
        i = int(np.argmax(norms))
        if norms[i] < 0.5:
            raise TorusReductionError("degenerate eigenspace is not quaternionic")
        u = resid[i] / norms[i]
        ju = jmap(u)
        ju = _proj_out(ju, basis + [u])
        ju = ju / np.linalg.norm(ju)
        us.append(u)
        basis += [u, ju]
    return us


def _real_frame(W, jmap, m):
    """m isotropic unit vectors (a + i b)/sqrt2 from a real orthonormal frame (K case)."""
    fixed = []
    for i in range(W.shape[1]):
        w = W[:, i]
        fixed += [w + jmap(w), 1j * (w - jmap(w))]
    basis = []
    for v in sorted(fixed, key=lambda v: -np.linalg.norm(v)):
        r = _proj_out(v, basis)
        # keep r fixed by j; inner products between fixed vectors are real
        r = 0.5 * (r + jmap(r))
        nr = np.linalg.norm(r)
        if nr > 0.5 * np.linalg.norm(v) and nr > 1e-8:
            basis.append(r / nr)
        if len(basis) == 2 * m:
            break
    if len(basis) < 2 * m:
        raise TorusReductionError("degenerate eigenspace has no real frame")
    return [(basis[2 * i] + 1j * basis[2 * i + 1]) / np.sqrt(2) for i in range(m)]


def torus_reduce(ctx: GroupCtx, g, tol: float = 1e-9, real_tol: float = 1e-7):
    """Return ``(c, t)`` with ``c g c^{-1} = T(t)`` and ``c`` in the group."""
    if ctx.family not in COMPACT:
        raise GroupError("torus reduction is implemented for SU, SpC and K2n")
    g = np.asarray(g, dtype=complex)
    if not member(ctx, g, max(tol, 1e-8)):
        raise GroupError("input is not in the group")
    dec = eig_normal(g, tol=max(tol, 1e-10))
    lam, V = dec.eigenvalues, dec.eigenvectors
    n = ctx.n

    if ctx.family == SU:
        c = V.conj().T
        c = c * np.linalg.det(c) ** (-1.0 / n)
        t = TorusPoint(ctx, tuple(np.angle(lam)))
    else:
        jmap = _antilinear(ctx)
        pos = [i for i in range(2 * n) if lam[i].imag > real_tol]
        neg = [i for i in range(2 * n) if lam[i].imag < -real_tol]
        plus = [i for i in range(2 * n) if abs(lam[i].imag) <= real_tol and lam[i].real > 0]
        minus = [i for i in range(2 * n) if abs(lam[i].imag) <= real_tol and lam[i].real < 0]
        if len(pos) != len(neg) or len(plus) % 2 or len(minus) % 2:
            raise TorusReductionError("eigenvalues do not pair as lambda, 1/lambda")
        # pairing check: every lambda has a partner near conj(lambda)
        partners = list(neg)
        for i in pos:
            gaps = [abs(lam[j] - lam[i].conj()) for j in partners]
            k = int(np.argmin(gaps))
            if gaps[k] > max(10 * tol, 1e-8):
                raise TorusReductionError("eigenvalue pairing gap above tolerance")
            partners.pop(k)
        us = [V[:, i] for i in pos]
        frame = _quaternionic_frame if ctx.family == SPC else _real_frame
        slots = []
        for cluster in (plus, minus):
            if cluster:
                start = len(us)
                us += frame(V[:, cluster], jmap, len(cluster) // 2)
                slots += list(range(start, len(us)))
        U = np.column_stack(us + [jmap(u) for u in us])
        angles = [np.angle(u.conj() @ g @ u) for u in us]
        if ctx.family == K2N and np.linalg.det(U).real < 0:
            # swap u_i <-> j(u_i): flips det and negates theta_i; free on a +-1 slot
            i = slots[0] if slots else 0
            U[:, [i, n + i]] = U[:, [n + i, i]]
            angles[i] = -angles[i]
        c = U.conj().T
        t = TorusPoint(ctx, tuple(angles))
    res = float(np.linalg.norm(c @ g @ c.conj().T - t.matrix()))
    mem = member(ctx, c, max(tol, 1e-8))
    if res > tol or not mem:
        raise TorusReductionError(f"torus reduction residual {res:.3e}, conjugator defects {mem.defects}")
    return Conjugator(ctx, c, certified=True), t


# ---------------------------------------------------------------------------
# Weyl group elements

def _perm_matrix(perm) -> np.ndarray:
    """P with P diag(d) P^{-1} = diag(d[perm])."""
    n = len(perm)
    P = np.zeros((n, n))
    for i, j in enumerate(perm):
        P[i, j] = 1.0
    return P


def _perm_sign(perm) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            sign *= -1 if length % 2 == 0 else 1
    return sign


def weyl_element(ctx: GroupCtx, perm, flips=()) -> np.ndarray:
    """Group element acting on torus angles by ``theta -> (eps * theta)[perm]``.

    Conjugating ``T(theta)`` by the result gives ``T(theta')`` with
    ``theta'_i = s_i * theta_{perm[i]}`` where ``s_i = -1`` iff ``perm[i]`` is
    in ``flips``.
    """
    n = ctx.n
    flips = set(flips)
    if ctx.family == SU:
        W = _perm_matrix(perm).astype(complex)
        if _perm_sign(perm) < 0:
            W[:, 0] *= -1
        return W
    F = np.eye(2 * n, dtype=complex)
    for i in flips:
        F[i, i] = F[n + i, n + i] = 0
        if ctx.family == SPC:
            F[n + i, i] = -1
            F[i, n + i] = 1
        else:
            F[n + i, i] = F[i, n + i] = 1
    P = _perm_matrix(perm)
    return np.kron(np.eye(2), P).astype(complex) @ F


def _close(a: float, b: float, tol: float) -> bool:
    return abs(np.exp(1j * a) - np.exp(1j * b)) <= tol


def _match_angles(ctx, ta, tb, tol, limit=20000):
    """Find (perm, flips) carrying angle vector ta to tb; even #flips for K2n."""
    n = len(ta)
    signed = ctx.family != SU
    need_even = ctx.family == K2N
    count = [0]

    def rec(i, used, perm, flips):
        if i == n:
            if need_even and len(flips) % 2:
                # a slot with angle 0 or pi absorbs a parity fix
                slot = next((j for j in range(n) if _close(2 * ta[j], 0.0, tol)), None)
                if slot is None:
                    return None
                flips = flips ^ {slot}
            return perm, flips
        count[0] += 1
        if count[0] > limit:
            return None
        for j in range(n):
            if j in used:
                continue
            for s in ((1, -1) if signed else (1,)):
                if _close(s * ta[j], tb[i], tol):
                    res = rec(i + 1, used | {j}, perm + [j], flips ^ ({j} if s < 0 else set()))
                    if res is not None:
                        return res
        return None

    return rec(0, frozenset(), [], frozenset())


def conj_in_group(ctx: GroupCtx, a, b, tol: float = 1e-8, match_tol: float = 1e-6) -> Conjugator:
    """Return ``c`` in the group with ``c a c^{-1} = b``, verified before returning."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    ca, t_a = torus_reduce(ctx, a, tol=min(tol, 1e-9))
    cb, t_b = torus_reduce(ctx, b, tol=min(tol, 1e-9))
    match = _match_angles(ctx, t_a.angles, t_b.angles, match_tol)
    if match is None:
        if ctx.family == K2N and sorted(np.round(np.abs(np.angle(t_a.diagonal())), 6).tolist()) == \
                sorted(np.round(np.abs(np.angle(t_b.diagonal())), 6).tolist()):
            raise ConjugacyObstruction("K(2n) parity obstruction: no eigenvalue +-1 slot to absorb a sign flip")
        raise ConjugacyObstruction("inputs are not conjugate (eigenvalue data differ)")
    perm, flips = match
    W = weyl_element(ctx, perm, flips)
    c = cb.matrix.conj().T @ W @ ca.matrix
    res = float(np.linalg.norm(c @ a @ c.conj().T - b))
    mem = member(ctx, c, max(10 * tol, 1e-8))
    if res > tol or not mem:
        raise ConjugacyObstruction(f"conjugator failed verification (residual {res:.3e})")
    return Conjugator(ctx, c, certified=True)


# ---------------------------------------------------------------------------
# random elements and finite groups

def lie_algebra_sample(ctx: GroupCtx, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random element of the compact Lie algebra (anti-Hermitian, form-compatible)."""
    n = ctx.n

    def cplx(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    A = cplx(n, n)
    A = (A - A.conj().T) / 2
    if ctx.family == SU:
        return scale * (A - np.trace(A) / n * np.eye(n))
    B = cplx(n, n)
    if ctx.family == SPC:
        B = (B + B.T) / 2
        X = np.block([[A, B], [-B.conj(), A.conj()]])
    else:
        B = (B - B.T) / 2
        X = np.block([[A, B], [B.conj(), A.conj()]])
    return scale * X


def random_element(ctx: GroupCtx, rng: np.random.Generator) -> np.ndarray:
    """A random group element; Haar for SU, exponential of a wide Lie sample otherwise."""
    if ctx.family == SU:
        Z = (rng.standard_normal((ctx.n, ctx.n)) + 1j * rng.standard_normal((ctx.n, ctx.n))) / np.sqrt(2)
        Q, R = np.linalg.qr(Z)
        Q = Q * (np.diag(R) / np.abs(np.diag(R)))
        return Q / np.linalg.det(Q) ** (1.0 / ctx.n)
    if ctx.family in (SPC, K2N):
        g = scipy.linalg.expm(lie_algebra_sample(ctx, rng, 2.0))
        return g @ scipy.linalg.expm(lie_algebra_sample(ctx, rng, 2.0))
    raise GroupError("random elements are provided for compact families only")


FP_MAX_PRIME = 31


def finite_group_elements(ctx: GroupCtx) -> list[tuple[int, int, int, int]]:
    """All of SL_2(F_p) as row-major tuples (a, b, c, d), in lexicographic order."""
    if ctx.family != SL_FP or ctx.n != 2:
        raise GroupError("enumeration is provided for SL_2(F_p) only")
    p = ctx.p
    if p > FP_MAX_PRIME:
        raise GroupError(f"p = {p} exceeds the enumeration limit {FP_MAX_PRIME}")
    return [(a, b, c, d) for a, b, c, d in itertools.product(range(p), repeat=4)
            if (a * d - b * c) % p == 1]


__all__ = [
    "SU", "SPC", "K2N", "SL_EXACT", "SL_FP", "GroupCtx", "TorusPoint", "Conjugator",
    "Membership", "member", "torus_reduce", "conj_in_group", "weyl_element",
    "finite_group_elements", "random_element", "lie_algebra_sample",
    "GroupError", "TorusReductionError", "ConjugacyObstruction", "NumericalError",
]
