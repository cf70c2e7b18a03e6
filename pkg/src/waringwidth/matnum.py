"""Dense complex linear algebra helpers for unitary group elements."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

VERIFY_TOL = 1e-10
ACCEPT_TOL = 1e-8


class NumericalError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class EigDecomp:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def residual(self, A) -> float:
        V, lam = self.eigenvectors, self.eigenvalues
        return float(np.linalg.norm(A @ V - V * lam))


def _arg_key(z: complex):
    a = np.angle(z) % (2 * np.pi)
    if a > 2 * np.pi - 1e-12:
        a = 0.0
    return (round(a, 12), abs(z.imag))


def eig_normal(A, tol: float = VERIFY_TOL) -> EigDecomp:
    """Eigendecomposition of a normal matrix via the complex Schur form.

    For normal input the Schur factor is diagonal up to rounding, so the
    Schur vectors are an orthonormal eigenbasis, including inside repeated
    eigenspaces.  Eigenpairs are sorted by argument in [0, 2*pi).
    """
    A = np.asarray(A, dtype=complex)
    if not np.all(np.isfinite(A)):
        raise NumericalError("matrix has non-finite entries")
    scale = max(np.linalg.norm(A), 1.0)
    comm = np.linalg.norm(A @ A.conj().T - A.conj().T @ A)
    if comm > tol * scale**2:
        raise NumericalError(f"matrix is not normal (commutator norm {comm:.3e})")
    T, Z = scipy.linalg.schur(A, output="complex")
    lam = np.diag(T).copy()
    order = sorted(range(len(lam)), key=lambda i: _arg_key(lam[i]))
    lam = lam[order]
    Z = Z[:, order]
    dec = EigDecomp(lam, Z)
    if dec.residual(A) > tol * scale:
        raise NumericalError("eigendecomposition residual above tolerance")
    return dec


def solve_real_linear(M, b) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    b = np.asarray(b, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("M must be square")
    if np.linalg.cond(M) > 1e12:
        raise NumericalError("matrix is singular or ill-conditioned")
    x = np.linalg.solve(M, b)
    if np.linalg.norm(M @ x - b) > 1e-10 * (np.linalg.norm(M) * np.linalg.norm(x) + np.linalg.norm(b)):
        raise NumericalError("linear solve residual above tolerance")
    return x


def frobenius_dist(A, B) -> float:
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise ValueError("dimension mismatch")
    return float(np.linalg.norm(A - B))


def unitary_defect(A) -> float:
    A = np.asarray(A)
    return float(np.linalg.norm(A.conj().T @ A - np.eye(A.shape[0])))


def unitarize(A, max_dist: float = 0.1) -> np.ndarray:
    """Nearest unitary matrix (the unitary polar factor)."""
    A = np.asarray(A, dtype=complex)
    U, s, Vh = np.linalg.svd(A)
    dist = float(np.linalg.norm(s - 1.0))
    if dist > max_dist:
        raise NumericalError(f"input is {dist:.3g} away from the unitary group")
    return U @ Vh


def to_json(A) -> list:
    """Matrix as nested lists of [re, im] pairs."""
    A = np.asarray(A, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ValueError("expected rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]
