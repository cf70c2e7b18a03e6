"""Figures written next to the JSON artifacts of the CLI."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .wordlang import evaluate  # noqa: E402

FIGSIZE = (5.5, 5.0)
DPI = 120


def _save(fig, path) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)


def plot_factorization(cert, path) -> str:
    """Eigenvalues of g and of both factors on the unit circle."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    s = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(s), np.sin(s), color="0.8", lw=1)
    W1 = evaluate(cert.w1, cert.A)
    W2 = evaluate(cert.w2, cert.B)
    for M, label, marker, size in ((cert.target, "g", "o", 80), (W1, "w1(A)", "x", 60), (W2, "w2(B)", "+", 60)):
        ev = np.linalg.eigvals(M)
        ax.scatter(ev.real, ev.imag, marker=marker, s=size, label=label,
                   facecolors="none" if marker == "o" else None, edgecolors="k" if marker == "o" else None)
    ax.set_aspect("equal")
    ax.set_xlim(-1.25, 1.25)
    ax.set_ylim(-1.25, 1.25)
    ax.set_title(f"{cert.ctx}: {cert.w1} . {cert.w2}   residual {cert.residual:.1e}", fontsize=9)
    ax.legend(loc="upper right", fontsize=8)
    return _save(fig, path)


def plot_oracle(rep, path) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = [f"w1 = {rep.words[0]}", f"w2 = {rep.words[1]}", "w1 w2", "|G|"]
    vals = [rep.image_sizes[0], rep.image_sizes[1], rep.covered, rep.group_order]
    ax.bar(range(4), vals, color=["C0", "C1", "C2", "0.6"])
    ax.set_xticks(range(4))
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylabel("elements")
    ax.set_title(f"SL2(F_{rep.p}): coverage {rep.coverage}, -I covered: {rep.minus_identity_covered}", fontsize=9)
    return _save(fig, path)


def plot_discriminant(rep, path) -> str:
    """Sampled traces against the rational square roots of their discriminants."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    tr = np.array([float(s.trace) for s in rep.samples])
    root = np.array([float(s.root) for s in rep.samples])
    ax.scatter(tr, root, s=12)
    if len(tr):
        lo, hi = tr.min(), tr.max()
        x = np.linspace(min(lo, -2.5), max(hi, 2.5), 600)
        y = np.sqrt(np.clip(x * x - 4, 0, None))
        y[np.abs(x) < 2] = np.nan
        ax.plot(x, y, color="0.7", lw=1, label="sqrt(tr^2 - 4)")
        ax.legend(fontsize=8)
    ax.set_xscale("symlog")
    ax.set_yscale("symlog")
    ax.set_xlabel("trace")
    ax.set_ylabel("sqrt(discriminant)")
    ax.set_title(f"{rep.word}: {len(rep.samples)} samples, height <= {rep.height}", fontsize=9)
    return _save(fig, path)
