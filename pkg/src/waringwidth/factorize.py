"""Width-two factorizations ``g = w1(A) w2(B)`` and central two-squares identities.

The compact pipeline uses the identity

    g = c^{-1} [x, t] c = (c^{-1} x c) (c^{-1} t x^{-1} t^{-1} c)

where ``c g c^{-1}`` is the torus element ``[x, t]`` and ``x`` is the
Goto element.  The first factor is reached as ``w1`` of conjugated
principal images of an SU(2) preimage of the root-of-unity target, the
second one likewise with the inverse target.
"""

from __future__ import annotations

import datetime
import math
from dataclasses import dataclass, field

import numpy as np

from .exactnum import CycScalar, ExactMatrix, to_string
from .goto import build_goto, commutator_residual, solve_commutator
from .groups import COMPACT, GroupCtx, GroupError, member, torus_reduce
from .matnum import from_json, to_json
from .principal import build_embedding
from .search import (DEFAULT_ITERATIONS, DEFAULT_RESTARTS, empirical_threshold, mirror_preimage,
                     root_of_unity_order, su2_preimage)
from .wordlang import Word, evaluate, parse_word, print_word

CERT_TOL = 1e-8


class PreimageNotFound(RuntimeError):
    """The SU(2) preimage search ran out of budget for this word and rank."""

    def __init__(self, msg: str, word: Word, threshold: int | None):
        super().__init__(msg)
        self.word = word
        self.threshold = threshold


class CertificateError(ValueError):
    pass


@dataclass
class FactorizationCert:
    ctx: GroupCtx
    target: np.ndarray
    w1: Word
    w2: Word
    A: list[np.ndarray]
    B: list[np.ndarray]
    torus_angles: tuple
    goto: np.ndarray
    t_angles: tuple
    c0: np.ndarray
    q: np.ndarray
    root_order: int
    residual: float
    tol: float
    seed: int
    preimage_residuals: tuple = (0.0, 0.0)
    checks: dict = field(default_factory=dict)
    exact: bool = False

    @property
    def ok(self) -> bool:
        return self.residual <= self.tol and all(self.checks.values())

    def to_dict(self, timestamp: bool = True) -> dict:
        out = {
            "group": str(self.ctx),
            "words": [print_word(self.w1), print_word(self.w2)],
            "target": to_json(self.target),
            "witnesses_A": [to_json(a) for a in self.A],
            "witnesses_B": [to_json(b) for b in self.B],
            "conjugators": {"c0": to_json(self.c0), "q": to_json(self.q)},
            "torus_data": {
                "g0_angles": [float(a) for a in self.torus_angles],
                "t_angles": [float(a) for a in self.t_angles],
                "goto": to_json(self.goto),
                "root_order": self.root_order,
                "preimage_residuals": [float(r) for r in self.preimage_residuals],
            },
            "residual": self.residual,
            "checks": dict(self.checks),
            "seed": self.seed,
            "tol": self.tol,
            "exact": self.exact,
        }
        if timestamp:
            out["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        return out


def _conj(L, M):
    return L @ M @ np.linalg.inv(L)


def factorize_compact(ctx: GroupCtx, g, w1: Word, w2: Word, tol: float = CERT_TOL,
                      restarts: int = DEFAULT_RESTARTS, iterations: int = DEFAULT_ITERATIONS,
                      seed: int = 0, threshold_scan: int = 8) -> FactorizationCert:
    """Find A, B in the group with ``w1(A) w2(B) = g`` up to ``tol``.

    Raises :class:`PreimageNotFound` when a word has no SU(2) preimage of
    the root-of-unity target within budget; the error carries the least
    rank in ``[n, n + threshold_scan]`` at which the search succeeds.
    """
    if ctx.family not in COMPACT:
        raise GroupError("width-two factorization is implemented for SU, SpC and K2n")
    if w1.is_trivial() or w2.is_trivial():
        raise ValueError("words must be non-trivial")
    g = np.asarray(g, dtype=complex)
    if not member(ctx, g, 1e-7):
        raise GroupError("target is not in the group")

    c0, g0 = torus_reduce(ctx, g)
    X = build_goto(ctx)
    t = solve_commutator(ctx, X, g0)

    m = root_of_unity_order(ctx.family, ctx.n)
    phi = 2 * math.pi / m
    budget = dict(tol=1e-10, restarts=restarts, iterations=iterations, seed=seed)
    pre = {}
    for name, w, angle in (("w1", w1, phi), ("w2", w2, -phi)):
        if name == "w2" and w2 == w1 and pre["w1"].found:
            r = mirror_preimage(pre["w1"])
        else:
            r = su2_preimage(w, angle, **budget)
        if not r.found:
            lo = ctx.n + 1
            thr = empirical_threshold(w, ctx.family, lo, lo + threshold_scan, **budget)
            raise PreimageNotFound(
                f"no SU(2) preimage of exp({'+' if angle > 0 else '-'}2 pi i/{m}) for {print_word(w)} "
                f"in {ctx} (best residual {r.residual:.2e}); empirical threshold: "
                + (f"rank {thr}" if thr is not None else f"none up to rank {lo + threshold_scan}"), w, thr)
        pre[name] = r

    emb = build_embedding(ctx.family, ctx.n)
    from .groups import conj_in_group

    q = conj_in_group(ctx, emb.torus_image(phi), X.x).matrix
    c0m = c0.matrix
    L = c0m.conj().T @ q
    R = c0m.conj().T @ t.matrix() @ q
    A = [_conj(L, emb(a)) for a in pre["w1"].witnesses]
    B = [_conj(R, emb(b)) for b in pre["w2"].witnesses]

    W1 = evaluate(w1, A)
    W2 = evaluate(w2, B)
    residual = float(np.linalg.norm(W1 @ W2 - g))
    mtol = max(10 * tol, 1e-9)
    checks = {
        "witnesses_in_group": all(member(ctx, M, mtol) for M in A + B),
        "conjugators_in_group": bool(member(ctx, c0m, mtol) and member(ctx, q, mtol)),
        "commutator_equation": commutator_residual(X, t, g0) <= tol,
        # conjugator bookkeeping: w1(L a L^-1) = L w1(a) L^-1
        "conjugation_consistency": float(np.linalg.norm(
            W1 - _conj(L, evaluate(w1, [emb(a) for a in pre["w1"].witnesses])))) <= tol,
        "first_factor": float(np.linalg.norm(W1 - c0m.conj().T @ X.x @ c0m)) <= tol,
    }
    return FactorizationCert(ctx, g, w1, w2, A, B, g0.angles, X.x, t.angles, c0m, q, m,
                             residual, tol, seed, (pre["w1"].residual, pre["w2"].residual), checks)


def verify_certificate(data: dict, tol: float | None = None) -> dict:
    """Re-check a serialized certificate from its stored matrices alone."""
    try:
        ctx = GroupCtx.parse(data["group"])
        w1, w2 = (parse_word(s) for s in data["words"])
        g = from_json(data["target"])
        A = [from_json(a) for a in data["witnesses_A"]]
        B = [from_json(b) for b in data["witnesses_B"]]
        tol = float(data["tol"]) if tol is None else tol
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError(f"malformed certificate: {exc}") from exc
    if len(A) < w1.arity or len(B) < w2.arity:
        raise CertificateError("certificate has too few witnesses")
    residual = float(np.linalg.norm(evaluate(w1, A) @ evaluate(w2, B) - g))
    mtol = max(10 * tol, 1e-9)
    defects = [member(ctx, M, mtol) for M in A + B]
    report = {
        "group": str(ctx),
        "residual": residual,
        "tol": tol,
        "residual_ok": residual <= tol,
        "target_in_group": bool(member(ctx, g, mtol)),
        "witnesses_in_group": all(defects),
        "max_defect": max((max(d.defects.values()) for d in defects), default=0.0),
    }
    report["ok"] = report["residual_ok"] and report["witnesses_in_group"] and report["target_in_group"]
    return report


# ---------------------------------------------------------------------------
# central elements of SL_2n as products of two squares

def _J(r: CycScalar) -> ExactMatrix:
    return ExactMatrix([[0, 1], [r, 0]])


def central_two_squares(n: int, r) -> tuple[ExactMatrix, ExactMatrix]:
    """Exact P, Q in SL_2n with ``P^2 Q^2 = r I`` for a 2n-th root of unity r.

    ``J_r = [[0, 1], [r, 0]]`` squares to ``r I_2`` and has determinant -r.
    If (-r)^n = 1, P = I and Q is the block diagonal of n copies of J_r;
    otherwise P = diag(I_2, ..., I_2, J_{-1}) and
    Q = diag(J_r, ..., J_r, J_{-r}).
    """
    if n < 1:
        raise ValueError("n must be positive")
    r = CycScalar.coerce(r)
    one = CycScalar.rational(1)
    if r ** (2 * n) != one:
        raise ValueError(f"{to_string(r)} is not a {2 * n}-th root of unity")
    if (-r) ** n == one:
        P = ExactMatrix.identity(2 * n)
        Q = ExactMatrix.blockdiag([_J(r)] * n)
    else:
        P = ExactMatrix.blockdiag([ExactMatrix.identity(2)] * (n - 1) + [_J(-one)])
        Q = ExactMatrix.blockdiag([_J(r)] * (n - 1) + [_J(-r)])
    if P.det() != one or Q.det() != one:
        raise ArithmeticError("two-squares factors are not in SL")
    if P @ P @ Q @ Q != ExactMatrix.identity(2 * n).scale(r):
        raise ArithmeticError("P^2 Q^2 != r I")
    return P, Q


def central_report(n: int, r) -> dict:
    r = CycScalar.coerce(r)
    P, Q = central_two_squares(n, r)
    lhs = P @ P @ Q @ Q
    return {
        "n": n,
        "r": to_string(r),
        "branch": "P = I" if P.is_identity() else "P = diag(I, ..., J_-1)",
        "P": P.to_strings(),
        "Q": Q.to_strings(),
        "det_P": to_string(P.det()),
        "det_Q": to_string(Q.det()),
        "product_is_rI": lhs == ExactMatrix.identity(2 * n).scale(r),
        "exact": True,
    }


def roots_of_unity(m: int) -> list[CycScalar]:
    return [CycScalar.zeta(m, j) for j in range(m)]


def check_zeta4_condition(w: Word, restarts: int = DEFAULT_RESTARTS, iterations: int = DEFAULT_ITERATIONS,
                          seed: int = 0) -> dict:
    """Whether diag(i, -i) lies in w(SU(2)); only the preimage fact is asserted."""
    res = su2_preimage(w, math.pi / 2, restarts=restarts, iterations=iterations, seed=seed)
    out = res.to_dict()
    out["target"] = "zeta_4"
    out["implication"] = ("zeta_4 in w(SU(2)) is the hypothesis under which the word pair is expected "
                          "to cover the compact group in two factors; only the preimage is verified here")
    return out
