"""Exhaustive word images and product coverage over SL_2(F_p).

Group elements are rows (a, b, c, d) of an int64 array in lexicographic
order; the code ((a p + b) p + c) p + d indexes a lookup table giving the
position of an element, and subsets of the group are boolean masks over
positions.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .groups import FP_MAX_PRIME
from .wordlang import Word, print_word

EXHAUSTIVE_BUDGET = 5 * 10**7  # word evaluations allowed in exhaustive mode
CHUNK = 1 << 20


class OracleBudgetError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class FiniteSL2:
    p: int
    elements: np.ndarray  # (|G|, 4)
    lookup: np.ndarray  # code -> position, -1 outside SL_2

    @property
    def order(self) -> int:
        return len(self.elements)

    def codes(self, M: np.ndarray) -> np.ndarray:
        p = self.p
        return ((M[..., 0] * p + M[..., 1]) * p + M[..., 2]) * p + M[..., 3]

    def positions(self, M: np.ndarray) -> np.ndarray:
        return self.lookup[self.codes(M)]

    def mul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        a, b, c, d = (X[..., i] for i in range(4))
        e, f, g, h = (Y[..., i] for i in range(4))
        return np.stack([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h], axis=-1) % self.p

    def inv(self, X: np.ndarray) -> np.ndarray:
        return np.stack([X[..., 3], -X[..., 1], -X[..., 2], X[..., 0]], axis=-1) % self.p

    def power(self, X: np.ndarray, e: int) -> np.ndarray:
        if e < 0:
            X, e = self.inv(X), -e
        out = np.zeros_like(X)
        out[..., 0] = out[..., 3] = 1
        while e:
            if e & 1:
                out = self.mul(out, X)
            e >>= 1
            if e:
                X = self.mul(X, X)
        return out

    def evaluate(self, w: Word, args) -> np.ndarray:
        """Word values on broadcastable stacks of argument matrices."""
        out = None
        for g, e in w.syllables:
            f = self.power(args[g - 1], e)
            out = f if out is None else self.mul(out, f)
        return out

    def element(self, a, b, c, d) -> int:
        return int(self.lookup[self.codes(np.array([a, b, c, d]) % self.p)])

    def center(self) -> list[int]:
        p = self.p
        return sorted({self.element(1, 0, 0, 1), self.element(p - 1, 0, 0, p - 1)})


@lru_cache(maxsize=None)
def sl2_fp(p: int) -> FiniteSL2:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > FP_MAX_PRIME:
        raise OracleBudgetError(f"p = {p} exceeds the enumeration limit {FP_MAX_PRIME}")
    grid = np.stack(np.meshgrid(*[np.arange(p)] * 4, indexing="ij"), axis=-1).reshape(-1, 4)
    det = (grid[:, 0] * grid[:, 3] - grid[:, 1] * grid[:, 2]) % p
    elements = grid[det == 1].astype(np.int64)
    lookup = np.full(p**4, -1, dtype=np.int64)
    G = FiniteSL2(p, elements, lookup)
    lookup[G.codes(elements)] = np.arange(len(elements))
    if G.order != p * (p * p - 1):
        raise AssertionError("enumeration does not have order p(p^2 - 1)")
    return G


def _mark(G: FiniteSL2, w: Word, firsts: np.ndarray, d: int) -> np.ndarray:
    """Mask of w-values over tuples whose first coordinate ranges over ``firsts``."""
    mask = np.zeros(G.order, dtype=bool)
    E = G.elements
    if d == 1:
        mask[G.positions(G.evaluate(w, [E[firsts]]))] = True
        return mask
    # d == 2: all pairs (firsts x G)
    X = E[firsts][:, None, :]
    Y = E[None, :, :]
    mask[G.positions(G.evaluate(w, [X, Y])).ravel()] = True
    return mask


def word_image(p: int, w: Word, mode: str = "exhaustive", samples: int = 200_000, seed: int = 0,
               threads: int = 1) -> np.ndarray:
    """Boolean mask over SL_2(F_p) of the image w(G).

    ``exhaustive`` evaluates w on every tuple (arity <= 2, within budget);
    ``sample`` evaluates it on ``samples`` uniform random tuples, giving a
    subset of the image.
    """
    if w.is_trivial():
        G = sl2_fp(p)
        mask = np.zeros(G.order, dtype=bool)
        mask[G.element(1, 0, 0, 1)] = True
        return mask
    G = sl2_fp(p)
    d = w.arity
    if mode == "sample":
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, G.order, size=(samples, d))
        mask = np.zeros(G.order, dtype=bool)
        mask[G.positions(G.evaluate(w, [G.elements[idx[:, i]] for i in range(d)]))] = True
        return mask
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    if d > 2 or G.order**d > EXHAUSTIVE_BUDGET:
        raise OracleBudgetError(f"exhaustive image of a {d}-variable word over SL_2(F_{p}) "
                                f"needs {G.order ** d} evaluations (budget {EXHAUSTIVE_BUDGET})")
    step = max(1, CHUNK // (G.order if d == 2 else 1))
    parts = [np.arange(i, min(i + step, G.order)) for i in range(0, G.order, step)]
    if threads > 1 and len(parts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            masks = list(pool.map(lambda f: _mark(G, w, f, d), parts))
    else:
        masks = [_mark(G, w, f, d) for f in parts]
    return np.logical_or.reduce(masks)


def product_mask(G: FiniteSL2, S1: np.ndarray, S2: np.ndarray) -> np.ndarray:
    """Mask of S1 S2: g is covered iff s^{-1} g lies in S2 for some s in S1."""
    out = np.zeros(G.order, dtype=bool)
    A = G.elements[np.nonzero(S1)[0]]
    B = G.elements[np.nonzero(S2)[0]]
    if not len(A) or not len(B):
        return out
    step = max(1, CHUNK // len(B))
    for i in range(0, len(A), step):
        out[G.positions(G.mul(A[i:i + step, None, :], B[None, :, :])).ravel()] = True
    return out


_UNI = ((1, 1, 0, 1), (1, 0, 1, 1))  # generate SL_2(F_p)


def conjugation_closed(G: FiniteSL2, S: np.ndarray) -> bool:
    """Closure under conjugation by the two elementary generators, hence by all of G."""
    X = G.elements[np.nonzero(S)[0]]
    for u in _UNI:
        U = np.array(u, dtype=np.int64)
        img = G.positions(G.mul(G.mul(U, X), G.inv(U)))
        if not S[img].all():
            return False
    return True


def inversion_closed(G: FiniteSL2, S: np.ndarray) -> bool:
    return bool(S[G.positions(G.inv(G.elements[np.nonzero(S)[0]]))].all())


@dataclass
class OracleReport:
    p: int
    words: tuple[str, str]
    group_order: int
    image_sizes: tuple[int, int]
    covered: int
    coverage: str  # "G", "G\\Z", or "neither"
    identity_covered: bool
    minus_identity_covered: bool
    minus_identity_in_images: tuple[bool, bool]
    conjugation_closed: bool
    mode: str
    timing: dict = field(default_factory=dict)
    uncovered: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "words": list(self.words),
            "group_order": self.group_order,
            "image_sizes": list(self.image_sizes),
            "covered": self.covered,
            "coverage": self.coverage,
            "identity_covered": self.identity_covered,
            "minus_identity_covered": self.minus_identity_covered,
            "minus_identity_in_images": list(self.minus_identity_in_images),
            "conjugation_closed": self.conjugation_closed,
            "mode": self.mode,
            "uncovered_sample": self.uncovered,
            "timing_s": {k: round(v, 4) for k, v in self.timing.items()},
        }


def product_coverage(p: int, w1: Word, w2: Word, mode: str = "exhaustive", threads: int = 1,
                     **kw) -> OracleReport:
    """Which elements of SL_2(F_p) are products w1(g) w2(h)."""
    G = sl2_fp(p)
    t0 = time.perf_counter()
    S1 = word_image(p, w1, mode, threads=threads, **kw)
    S2 = S1 if w2 == w1 else word_image(p, w2, mode, threads=threads, **kw)
    t1 = time.perf_counter()
    cover = product_mask(G, S1, S2)
    t2 = time.perf_counter()
    one, minus = G.element(1, 0, 0, 1), G.element(p - 1, 0, 0, p - 1)
    central = np.zeros(G.order, dtype=bool)
    central[G.center()] = True
    if cover.all():
        cls = "G"
    elif cover[~central].all():
        cls = "G\\Z"
    else:
        cls = "neither"
    closed = conjugation_closed(G, S1) and conjugation_closed(G, S2)
    missing = [G.elements[i].tolist() for i in np.nonzero(~cover)[0][:10]]
    return OracleReport(p, (print_word(w1), print_word(w2)), G.order, (int(S1.sum()), int(S2.sum())),
                        int(cover.sum()), cls, bool(cover[one]), bool(cover[minus]),
                        (bool(S1[minus]), bool(S2[minus])), closed, mode,
                        {"images": t1 - t0, "product": t2 - t1}, missing)
