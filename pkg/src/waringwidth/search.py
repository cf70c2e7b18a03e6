"""Searches backing existence statements.

* :func:`su2_preimage` -- find SU(2) arguments whose word value is a given
  torus element diag(e^{i phi}, e^{-i phi}).
* :func:`sample_discriminant_squares` -- rational SL_2 tuples where
  ``tr(w)^2 - 4`` is a nonzero rational square.
* :func:`prop41_search` -- exhaustive bounded-height scan showing that
  ``A^4 B^4 = -I`` has no rational solutions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import least_squares, minimize

from .exactnum import ExactMatrix, field_degree_over_Q
from .wordlang import Word, evaluate, print_word

DEFAULT_RESTARTS = 64
DEFAULT_ITERATIONS = 2000
DEFAULT_TOL = 1e-10


# ---------------------------------------------------------------------------
# SU(2) preimages

def quat_to_su2(q) -> np.ndarray:
    a, b, c, d = np.asarray(q, dtype=float) / np.linalg.norm(q)
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]])


def torus2(phi: float) -> np.ndarray:
    return np.diag([np.exp(1j * phi), np.exp(-1j * phi)])


def _eval2(syllables, mats):
    """Word value on 2x2 unitaries (inverse = conjugate transpose)."""
    out = np.eye(2, dtype=complex)
    for g, e in syllables:
        m = mats[g - 1] if e > 0 else mats[g - 1].conj().T
        out = out @ np.linalg.matrix_power(m, abs(e))
    return out


@dataclass
class PreimageResult:
    word: Word
    target_angle: float
    found: bool
    witnesses: list[np.ndarray] = field(default_factory=list)
    quaternions: list[np.ndarray] = field(default_factory=list)
    residual: float = math.inf
    restarts: int = 0
    method: str = "search"

    @property
    def status(self) -> str:
        return "found" if self.found else "not-found"

    def to_dict(self) -> dict:
        from .matnum import to_json
        return {
            "word": print_word(self.word),
            "target_angle": self.target_angle,
            "status": self.status,
            "residual": self.residual,
            "restarts": self.restarts,
            "method": self.method,
            "witnesses": [to_json(w) for w in self.witnesses],
        }


def _verify(w: Word, mats, phi: float) -> float:
    # independent of the optimizer: generic word evaluation with true inverses
    return float(np.linalg.norm(evaluate(w, mats) - torus2(phi)))


def _power_word_witness(w: Word, phi: float):
    """Closed-form root for a single-syllable word x_i^e."""
    (g, e), = w.syllables
    mats = [np.eye(2, dtype=complex) for _ in range(w.arity)]
    mats[g - 1] = torus2(phi / e)
    quats = [np.array([1.0, 0, 0, 0]) for _ in range(w.arity)]
    quats[g - 1] = np.array([math.cos(phi / e), math.sin(phi / e), 0, 0])
    return mats, quats


def su2_preimage(w: Word, phi: float, tol: float = DEFAULT_TOL, restarts: int = DEFAULT_RESTARTS,
                 iterations: int = DEFAULT_ITERATIONS, seed: int = 0, method: str = "lsq") -> PreimageResult:
    """Search SU(2)^d for arguments with ``w(args) = diag(e^{i phi}, e^{-i phi})``.

    Single-syllable words are solved in closed form.  Otherwise each restart
    draws Haar-random unit quaternions and refines with a finite-difference
    trust-region least-squares solve on the entries of the word value
    (``method="lsq"``) or with derivative-free Nelder-Mead on the squared
    Frobenius distance (``method="nelder-mead"``).
    Restarts run in index order and the first one that meets ``tol`` wins,
    so the result is a function of ``seed``.  Not finding a preimage is not
    a proof that none exists.
    """
    if w.is_trivial():
        raise ValueError("word must be non-trivial")
    phi = float(phi)
    if len(w.syllables) == 1:
        mats, quats = _power_word_witness(w, phi)
        res = _verify(w, mats, phi)
        if res <= tol:
            return PreimageResult(w, phi, True, mats, quats, res, 0, "closed-form")
    d = w.arity
    target = torus2(phi)
    syl = w.syllables
    rng = np.random.default_rng(seed)

    def residuals(x):
        mats = [quat_to_su2(x[4 * i:4 * i + 4]) for i in range(d)]
        diff = _eval2(syl, mats) - target
        return np.concatenate([diff.real.ravel(), diff.imag.ravel(),
                               [np.dot(x[4 * i:4 * i + 4], x[4 * i:4 * i + 4]) - 1 for i in range(d)]])

    best = None
    for r in range(restarts):
        x0 = rng.standard_normal(4 * d)
        for i in range(d):
            x0[4 * i:4 * i + 4] /= np.linalg.norm(x0[4 * i:4 * i + 4])
        if method == "lsq":
            x = least_squares(residuals, x0, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15,
                              max_nfev=iterations).x
        elif method == "nelder-mead":
            x = minimize(lambda v: float(np.sum(residuals(v) ** 2)), x0, method="Nelder-Mead",
                         options={"maxiter": iterations, "xatol": 1e-14, "fatol": 1e-28, "adaptive": True}).x
        else:
            raise ValueError(f"unknown method {method!r}")
        quats = [x[4 * i:4 * i + 4] / np.linalg.norm(x[4 * i:4 * i + 4]) for i in range(d)]
        mats = [quat_to_su2(q) for q in quats]
        res = _verify(w, mats, phi)
        if best is None or res < best.residual:
            best = PreimageResult(w, phi, res <= tol, mats, quats, res, r + 1, method)
        if res <= tol:
            return best
    if best is None:
        return PreimageResult(w, phi, False, restarts=0, method=method)
    best.found = False
    return best


def mirror_preimage(res: PreimageResult) -> PreimageResult:
    """Entrywise complex conjugation turns a preimage for phi into one for -phi."""
    mats = [m.conj() for m in res.witnesses]
    quats = [q * np.array([1, -1, 1, -1]) for q in res.quaternions]
    resid = _verify(res.word, mats, -res.target_angle) if mats else math.inf
    return PreimageResult(res.word, -res.target_angle, res.found and resid <= max(res.residual, 1e-12) * 10,
                          mats, quats, resid, res.restarts, res.method + "+mirror")


@lru_cache(maxsize=256)
def cached_preimage(w: Word, phi: float, tol: float = DEFAULT_TOL, restarts: int = DEFAULT_RESTARTS,
                    iterations: int = DEFAULT_ITERATIONS, seed: int = 0) -> PreimageResult:
    return su2_preimage(w, phi, tol, restarts, iterations, seed)


def root_of_unity_order(family: str, n: int) -> int:
    """m such that zeta_m is the SU(2) torus target used for rank n."""
    from .groups import K2N, SPC, SU
    if family == SU:
        return 2 * n
    if family == SPC:
        return 4 * n
    if family == K2N:
        return 4 * n - 4
    raise ValueError(family)


def empirical_threshold(w: Word, family: str, n_min: int, n_max: int, **kw) -> int | None:
    """Least rank in [n_min, n_max] whose root-of-unity target and its inverse have preimages."""
    for n in range(n_min, n_max + 1):
        m = root_of_unity_order(family, n)
        r = cached_preimage(w, 2 * math.pi / m, **kw)
        if r.found and cached_preimage(w, -2 * math.pi / m, **kw).found:
            return n
    return None


# ---------------------------------------------------------------------------
# rational SL_2 enumeration

def rationals_of_height(h: int) -> list[Fraction]:
    """All rationals p/q with max(|p|, q) <= h, ordered by height then value."""
    seen = {Fraction(0)}
    out = [Fraction(0)]
    for level in range(1, h + 1):
        new = []
        for q in range(1, level + 1):
            for p in range(-level, level + 1):
                if max(abs(p), q) == level and math.gcd(p, q) == 1:
                    x = Fraction(p, q)
                    if x not in seen:
                        seen.add(x)
                        new.append(x)
        out += sorted(new)
    return out


def height(x: Fraction) -> int:
    return max(abs(x.numerator), x.denominator)


def _by_height(h: int) -> dict[int, list[tuple[int, int]]]:
    out: dict[int, list[tuple[int, int]]] = {}
    for x in rationals_of_height(h):
        out.setdefault(height(x), []).append((x.numerator, x.denominator))
    return out


def _sl2_integral(h: int):
    """Yield ``(N, D)`` with ``N / D`` in SL_2(Q), all entries of height <= h.

    Fixes (a, b, c) with a != 0 and completes with d = (1 + b c) / a.
    Triples come in order of increasing h(a) + h(b) + h(c), then by entry
    heights and values, so cheap matrices are produced first.  ``N`` is an
    integer 4-tuple and ``D`` the lcm of the entry denominators, so
    ``det N = D^2``.
    """
    layers = _by_height(h)
    for cost in range(3, 3 * h + 1):
        for ha in range(1, h + 1):
            for hb in range(1, h + 1):
                hc = cost - ha - hb
                if not 1 <= hc <= h:
                    continue
                for ap, aq in layers[ha]:
                    if ap == 0:
                        continue
                    for bp, bq in layers[hb]:
                        for cp, cq in layers[hc]:
                            num = (bq * cq + bp * cp) * aq
                            den = bq * cq * ap
                            g = math.gcd(num, den)
                            dp, dq = num // g, den // g
                            if dq < 0:
                                dp, dq = -dp, -dq
                            if max(abs(dp), dq) > h:
                                continue
                            D = math.lcm(aq, bq, cq, dq)
                            yield (ap * (D // aq), bp * (D // bq), cp * (D // cq), dp * (D // dq)), D


def sl2_rational(h: int):
    """SL_2(Q) matrices (a, b, c, d) as Fractions, all entries of height <= h (same order as the scan)."""
    for N, D in _sl2_integral(h):
        yield tuple(Fraction(x, D) for x in N)


def _mul(x, y):
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _inv(x):
    a, b, c, d = x
    return (d, -b, -c, a)


def _pow(x, e):
    if e < 0:
        x, e = _inv(x), -e
    out = (1, 0, 0, 1)
    while e:
        if e & 1:
            out = _mul(out, x)
        e >>= 1
        if e:
            x = _mul(x, x)
    return out


def _eval_tuple(w: Word, args):
    out = (1, 0, 0, 1)
    for g, e in w.syllables:
        out = _mul(out, _pow(args[g - 1], e))
    return out


def rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


@dataclass
class DiscriminantSample:
    word: Word
    args: tuple
    trace: Fraction
    delta: Fraction
    root: Fraction

    def to_dict(self) -> dict:
        s = lambda q: f"{q.numerator}/{q.denominator}"  # noqa: E731
        return {
            "args": [[s(v) for v in a] for a in self.args],
            "trace": s(self.trace),
            "delta": s(self.delta),
            "sqrt_delta": s(self.root),
        }


def discriminant(w: Word, args) -> tuple[Fraction, Fraction]:
    m = _eval_tuple(w, args)
    tr = m[0] + m[3]
    return tr, tr * tr - 4


@dataclass
class DiscriminantReport:
    word: Word
    samples: list[DiscriminantSample]
    requested: int
    height: int
    tuples_scanned: int

    @property
    def complete(self) -> bool:
        return len(self.samples) >= self.requested


def _trace_over(w: Word, args) -> tuple[int, int]:
    """Trace of w on integral pairs (N, D): returns (T, Den) with tr = T / Den."""
    out = (1, 0, 0, 1)
    den = 1
    for g, e in w.syllables:
        N, D = args[g - 1]
        out = _mul(out, _pow(N, e))  # adj(N) / D is the inverse since det N = D^2
        den *= D ** abs(e)
    return out[0] + out[3], den


# small primes for the quadratic-residue prefilter; a non-square passes all
# of them with probability about 2^-12
_QR_PRIMES = (1009, 1013, 1019, 1021, 1031, 1033, 1039, 1049, 1051, 1061, 1063, 1069)
_QR_TABLES = {}


def _qr_table(p: int) -> np.ndarray:
    if p not in _QR_TABLES:
        t = np.zeros(p, dtype=bool)
        t[(np.arange(p, dtype=np.int64) ** 2) % p] = True
        _QR_TABLES[p] = t
    return _QR_TABLES[p]


def _mul_vec(x, y, p=None):
    a, b, c, d = x[..., 0], x[..., 1], x[..., 2], x[..., 3]
    e, f, g, h = y[..., 0], y[..., 1], y[..., 2], y[..., 3]
    out = np.stack([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h], axis=-1)
    return out % p if p is not None else out


def _pow_vec(x, e, p=None):
    if e < 0:
        x = np.stack([x[..., 3], -x[..., 1], -x[..., 2], x[..., 0]], axis=-1)
        if p is not None:
            x = x % p
        e = -e
    out = None
    while e:
        if e & 1:
            out = x if out is None else _mul_vec(out, x, p)
        e >>= 1
        if e:
            x = _mul_vec(x, x, p)
    return out


class _Pool:
    """Growing arrays of stream matrices: float values and residues mod the filter primes."""

    def __init__(self, stream):
        self.stream = stream
        self.items: list = []
        self.done = False
        self._alloc(4096)

    def _alloc(self, cap: int) -> None:
        n = len(self.items)
        flt = np.zeros((cap, 4))
        mod = np.zeros((len(_QR_PRIMES), cap, 4), dtype=np.int64)
        den = np.zeros((len(_QR_PRIMES), cap), dtype=np.int64)
        if n:
            flt[:n], mod[:, :n], den[:, :n] = self.flt[:n], self.mod[:, :n], self.den[:, :n]
        self.flt, self.mod, self.den = flt, mod, den

    def fill(self, size: int) -> None:
        n = len(self.items)
        new = list(itertools.islice(self.stream, max(size - n, 0)))
        if len(new) < size - n:
            self.done = True
        if not new:
            return
        if n + len(new) > len(self.flt):
            self._alloc(max(2 * len(self.flt), n + len(new)))
        self.items += new
        N = np.array([m[0] for m in new], dtype=np.int64)
        D = np.array([m[1] for m in new], dtype=np.int64)
        P = np.array(_QR_PRIMES, dtype=np.int64)
        sl = slice(n, n + len(new))
        self.flt[sl] = N / D[:, None]
        self.mod[:, sl] = N[None] % P[:, None, None]
        self.den[:, sl] = D[None] % P[:, None]


def _tuple_block(j: int, d: int) -> np.ndarray:
    """Index tuples whose largest entry is j, ordered by first position of j, then lexicographically."""
    out = []
    for pos in range(d):
        shape = (j,) * pos + (1,) + (j + 1,) * (d - pos - 1)
        if 0 in shape:
            continue
        idx = np.indices(shape).reshape(d, -1)
        idx[pos] = j
        out.append(idx)
    return np.concatenate(out, axis=1) if out else np.zeros((d, 0), dtype=np.int64)


def _filter_block(w: Word, pool: _Pool, idx: np.ndarray) -> np.ndarray:
    """Boolean mask of tuples that may have a positive square discriminant."""
    val = None
    for g, e in w.syllables:
        f = _pow_vec(pool.flt[idx[g - 1]], e)
        val = f if val is None else _mul_vec(val, f)
    tr = val[:, 0] + val[:, 3]
    keep = tr * tr - 4 > -1e-9 * (1 + tr * tr)
    for k, p in enumerate(_QR_PRIMES):
        sel = np.nonzero(keep)[0]
        if not len(sel):
            break
        sub = idx[:, sel]
        val = None
        den = np.ones(len(sel), dtype=np.int64)
        for g, e in w.syllables:
            f = _pow_vec(pool.mod[k][sub[g - 1]], e, p)
            val = f if val is None else _mul_vec(val, f, p)
            for _ in range(abs(e)):
                den = den * pool.den[k][sub[g - 1]] % p
        T = (val[:, 0] + val[:, 3]) % p
        disc = (T * T - 4 * den * den) % p
        keep[sel[~_qr_table(p)[disc]]] = False
    return keep


def sample_discriminant_squares(w: Word, count: int = 100, height_bound: int = 50,
                                batch: int = 1 << 16) -> DiscriminantReport:
    """Scan rational tuples until ``count`` distinct traces with square discriminant appear.

    Matrices stream from the completion scheme of :func:`sl2_rational`.
    Tuples are visited in order of their newest stream index j; among tuples
    with newest index j, by the first coordinate equal to j and then
    lexicographically.  Blocks of tuples pass a float sign test and
    quadratic-residue tests mod small primes in numpy; survivors are
    confirmed exactly on integer numerators over a common denominator, where
    ``tr = T / Den`` has a nonzero square discriminant iff ``T^2 - 4 Den^2``
    is a positive perfect square.
    """
    if w.is_trivial():
        raise ValueError("word must be non-trivial")
    d = max(w.arity, 1)
    found: dict[Fraction, DiscriminantSample] = {}
    scanned = 0
    top = 0
    pool = _Pool(_sl2_integral(height_bound))
    j = 0
    while True:
        # collect whole j-blocks until the batch is full
        blocks = []
        size = 0
        while size < batch:
            if j >= len(pool.items) and not pool.done:
                pool.fill(j + 4096)
            if j >= len(pool.items):
                break
            b = _tuple_block(j, d)
            blocks.append(b)
            size += b.shape[1]
            j += 1
        if not blocks:
            break
        idx = np.concatenate(blocks, axis=1)
        keep = _filter_block(w, pool, idx)
        hits = np.nonzero(keep)[0]
        for t in hits:
            tup = [pool.items[i] for i in idx[:, t]]
            T, den = _trace_over(w, tup)
            disc = T * T - 4 * den * den
            if disc <= 0:
                continue
            r = math.isqrt(disc)
            if r * r != disc:
                continue
            tr = Fraction(T, den)
            if tr in found:
                continue
            args = tuple(tuple(Fraction(x, D) for x in N) for N, D in tup)
            top = max(top, *(height(x) for a in args for x in a))
            found[tr] = DiscriminantSample(w, args, tr, tr * tr - 4, Fraction(r, den))
            if len(found) >= count:
                scanned += int(t) + 1
                return DiscriminantReport(w, list(found.values()), count, top, scanned)
        scanned += idx.shape[1]
    return DiscriminantReport(w, list(found.values()), count, top, scanned)


def verify_sample(s: DiscriminantSample) -> bool:
    """Recheck a sample through the generic exact evaluator."""
    mats = [ExactMatrix([[a, b], [c, d]]) for a, b, c, d in s.args]
    if any(m.det() != 1 for m in mats):
        return False
    val = evaluate(s.word, mats)
    tr = (val[0, 0] + val[1, 1]).as_fraction()
    return tr == s.trace and s.delta == tr * tr - 4 and s.root * s.root == s.delta and s.delta != 0


# ---------------------------------------------------------------------------
# x^4 y^4 = -I over Q

def prop41_search(bound: int = 5, near: int = 5) -> dict:
    """Exhaustive scan of A^4 B^4 = -I over SL_2(Q) with entries of height <= bound.

    The matrix list is closed under inversion, so the pair scan reduces to
    asking whether some fourth power X has -X among the fourth powers.
    Independently, ``A^4 B^4 = -I`` forces ``tr A^4 = -tr B^4``, which is
    equivalent to an eigenvalue ratio of A and B being a primitive 8th root
    of unity; the closest trace sums are reported as near-solutions.
    """
    mats = list(sl2_rational(bound))
    fourth = {}
    for m in mats:
        fourth.setdefault(_pow(m, 4), m)
    solutions = []
    for X, A in fourth.items():
        negX = tuple(-v for v in X)
        if negX in fourth:
            B = _inv(fourth[negX])
            if _mul(_pow(A, 4), _pow(B, 4)) == (-1, 0, 0, -1):
                solutions.append((A, B))
    traces = sorted({X[0] + X[3] for X in fourth})
    trace_set = set(traces)
    matched = [t for t in traces if -t in trace_set]
    # nearest |tr A^4 + tr B^4| over pairs, via sorted traces against their negatives
    neg = sorted(-t for t in traces)
    close = []
    j = 0
    for t in traces:
        while j + 1 < len(neg) and abs(neg[j + 1] - t) <= abs(neg[j] - t):
            j += 1
        close.append((abs(neg[j] - t), t, -neg[j]))
    close.sort()
    s = lambda q: f"{q.numerator}/{q.denominator}"  # noqa: E731
    near_list = [{"trace_A4": s(t), "trace_B4": s(u), "gap": s(gap),
                  "ratio_is_primitive_8th_root": gap == 0} for gap, t, u in close[:near]]
    return {
        "bound": bound,
        "matrices": len(mats),
        "pairs_covered": len(mats) ** 2,
        "distinct_fourth_powers": len(fourth),
        "solutions": [[list(map(s, A)), list(map(s, B))] for A, B in solutions],
        "solution_count": len(solutions),
        "trace_matched_pairs": len(matched),
        "near_solutions": near_list,
        "degree_Q_zeta8": field_degree_over_Q(8),
    }
