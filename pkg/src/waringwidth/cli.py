"""Command-line entry point: ``waringwidth <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 verification failure (or a
search that could not produce a certificate).  Artifacts are JSON on
standard output or in ``--out``; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


def _word(text):
    from .wordlang import WordSyntaxError, parse_word

    try:
        w = parse_word(text)
    except WordSyntaxError as exc:
        raise UsageError(str(exc)) from exc
    if w.is_trivial():
        raise UsageError(f"word {text!r} is trivial")
    return w


def _group(text):
    from .groups import GroupCtx, GroupError

    try:
        return GroupCtx.parse(text)
    except GroupError as exc:
        raise UsageError(str(exc)) from exc


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _plot(fn, obj, path):
    if path:
        fn(obj, path)
        print(f"figure written to {path}", file=sys.stderr)


# ---------------------------------------------------------------------------
# commands

def cmd_factorize(args) -> int:
    from .factorize import PreimageNotFound, factorize_compact
    from .groups import random_element
    from .matnum import from_json

    ctx = _group(args.group)
    w1, w2 = _word(args.w1), _word(args.w2)
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    rng = np.random.default_rng(args.seed)
    if args.target == "random":
        g = random_element(ctx, rng)
    elif args.target == "identity":
        g = np.eye(ctx.dim, dtype=complex)
    else:
        try:
            g = from_json(json.loads(Path(args.target).read_text()))
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read target matrix from {args.target!r}: {exc}") from exc
        if g.shape != (ctx.dim, ctx.dim):
            raise UsageError(f"target must be {ctx.dim}x{ctx.dim}")
    try:
        cert = factorize_compact(ctx, g, w1, w2, tol=args.tol, restarts=args.restarts,
                                 iterations=args.iterations, seed=args.seed)
    except PreimageNotFound as exc:
        _emit({"status": "preimage-not-found", "group": str(ctx), "word": str(exc.word),
               "empirical_threshold": exc.threshold, "message": str(exc)}, args.out)
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    data = cert.to_dict(timestamp=not args.no_timestamp)
    data["target_kind"] = args.target if args.target in ("random", "identity") else "file"
    data["status"] = "ok" if cert.ok else "failed"
    _emit(data, args.out)
    if args.plot:
        from .report import plot_factorization
        _plot(plot_factorization, cert, args.plot)
    if not cert.ok:
        print(f"certificate failed: residual {cert.residual:.3e}, checks {cert.checks}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    from .factorize import CertificateError, verify_certificate

    try:
        data = json.loads(Path(args.cert).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read certificate {args.cert!r}: {exc}") from exc
    try:
        rep = verify_certificate(data, args.tol)
    except CertificateError as exc:
        raise UsageError(str(exc)) from exc
    _emit(rep, args.out)
    return EXIT_OK if rep["ok"] else EXIT_FAIL


def cmd_goto(args) -> int:
    from .goto import GotoError, build_goto, certify_goto

    ctx = _group(args.group)
    try:
        X = build_goto(ctx)
    except GotoError as exc:
        raise UsageError(str(exc)) from exc
    rep = certify_goto(ctx, X) if args.check else {
        "group": str(ctx),
        "goto": X.exact.to_strings(),
        "ad_matrix": [[str(v) for v in r] for r in X.ad_matrix.rows],
    }
    rep["goto"] = X.exact.to_strings()
    _emit(rep, args.out)
    return EXIT_OK if rep.get("ok", True) else EXIT_FAIL


def cmd_embed(args) -> int:
    from .groups import K2N, SPC, SU
    from .matnum import to_json
    from .principal import build_embedding

    family = {"su": SU, "sp": SPC, "k": K2N}[args.family]
    try:
        emb = build_embedding(family, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    theta = args.theta
    ev = np.linalg.eigvals(emb.torus_image(theta))
    expect = np.exp(1j * theta * np.array(emb.weights))
    err = max(min(abs(e - z) for z in expect) for e in ev)
    rep = {
        "family": family,
        "n": args.n,
        "sym_degree": emb.sym_degree,
        "weights": emb.weights,
        "theta": theta,
        "eigenvalue_error": float(err),
        "ok": bool(err < 1e-10),
    }
    if args.print:
        rep["Q"] = to_json(emb.Q)
        rep["Q_inverse"] = to_json(emb.Qinv)
    _emit(rep, args.out)
    return EXIT_OK if rep["ok"] else EXIT_FAIL


def cmd_oracle(args) -> int:
    from .oracle import OracleBudgetError, product_coverage

    w1 = _word(args.w1)
    w2 = _word(args.w2) if args.w2 else w1
    try:
        rep = product_coverage(args.p, w1, w2, mode=args.mode, threads=args.threads)
    except (OracleBudgetError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    data = rep.to_dict()
    if args.no_timestamp:
        data.pop("timing_s")
    _emit(data, args.report)
    if args.plot:
        from .report import plot_oracle
        _plot(plot_oracle, rep, args.plot)
    return EXIT_OK if rep.conjugation_closed else EXIT_FAIL


def cmd_central(args) -> int:
    from .exactnum import parse_scalar
    from .factorize import central_report

    try:
        r = parse_scalar(args.r)
        rep = central_report(args.n, r)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(rep, args.out)
    return EXIT_OK if rep["product_is_rI"] else EXIT_FAIL


def cmd_sample(args) -> int:
    from .search import sample_discriminant_squares, verify_sample

    w = _word(args.w)
    if args.count < 1 or args.height < 1:
        raise UsageError("--count and --height must be positive")
    rep = sample_discriminant_squares(w, args.count, args.height)
    ok = all(verify_sample(s) for s in rep.samples)
    data = {
        "word": str(w),
        "requested": args.count,
        "found": len(rep.samples),
        "complete": rep.complete,
        "height_bound": args.height,
        "max_entry_height": rep.height,
        "tuples_scanned": rep.tuples_scanned,
        "all_verified": ok,
        "samples": [s.to_dict() for s in rep.samples],
    }
    _emit(data, args.out)
    if not rep.complete:
        print(f"only {len(rep.samples)} of {args.count} samples within height {args.height}", file=sys.stderr)
    if args.plot:
        from .report import plot_discriminant
        _plot(plot_discriminant, rep, args.plot)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_prop41(args) -> int:
    from .search import prop41_search

    if args.bound < 1:
        raise UsageError("--bound must be positive")
    rep = prop41_search(args.bound, args.near)
    _emit(rep, args.out)
    if rep["solution_count"]:
        print("RATIONAL SOLUTION OF A^4 B^4 = -I FOUND", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_zeta4(args) -> int:
    from .factorize import check_zeta4_condition

    rep = check_zeta4_condition(_word(args.w), restarts=args.restarts, iterations=args.iterations,
                                seed=args.seed)
    _emit(rep, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="waringwidth", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=1, help="cap on internal parallelism")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out=True):
        if out:
            sp.add_argument("--out", help="write JSON here instead of standard output")
        return sp

    def budget(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--restarts", type=int, default=64)
        sp.add_argument("--iterations", type=int, default=2000)

    f = common(sub.add_parser("factorize", help="width-two factorization with a certificate"))
    f.add_argument("--group", required=True, help="su:N, sp:N or k:2N")
    f.add_argument("--w1", required=True)
    f.add_argument("--w2", required=True)
    f.add_argument("--target", default="random", help="random, identity, or a JSON matrix file")
    f.add_argument("--tol", type=float, default=1e-8)
    f.add_argument("--plot", help="write an eigenvalue figure to this path")
    f.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")
    budget(f)
    f.set_defaults(func=cmd_factorize)

    v = common(sub.add_parser("verify", help="re-check a certificate from its stored data"))
    v.add_argument("cert")
    v.add_argument("--tol", type=float, default=None)
    v.set_defaults(func=cmd_verify)

    g = common(sub.add_parser("goto", help="Goto element and its exact checks"))
    g.add_argument("--group", required=True)
    g.add_argument("--check", action="store_true")
    g.set_defaults(func=cmd_goto)

    e = common(sub.add_parser("embed", help="principal SU(2) embedding"))
    e.add_argument("--family", choices=["su", "sp", "k"], required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--theta", type=float, default=0.7)
    e.add_argument("--print", action="store_true", help="include the change-of-basis matrices")
    e.set_defaults(func=cmd_embed)

    o = sub.add_parser("oracle", help="SL2(F_p) image product coverage")
    o.add_argument("--p", type=int, required=True)
    o.add_argument("--w1", required=True)
    o.add_argument("--w2")
    o.add_argument("--mode", choices=["exhaustive", "sample"], default="exhaustive")
    o.add_argument("--report", help="write JSON here instead of standard output")
    o.add_argument("--plot", help="write a bar chart to this path")
    o.add_argument("--no-timestamp", action="store_true", help="omit timing fields")
    o.set_defaults(func=cmd_oracle)

    c = common(sub.add_parser("central", help="exact two-squares form of r I in SL_2n"))
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--r", required=True, help="e.g. -1, zeta:6:1 (= zeta_6)")
    c.set_defaults(func=cmd_central)

    s = common(sub.add_parser("sample-discriminant", help="rational tuples with square discriminant"))
    s.add_argument("--w", required=True)
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--height", type=int, default=50)
    s.add_argument("--plot", help="write a scatter plot to this path")
    s.set_defaults(func=cmd_sample)

    q = common(sub.add_parser("prop41", help="bounded scan of A^4 B^4 = -I over Q"))
    q.add_argument("--bound", type=int, default=5)
    q.add_argument("--near", type=int, default=5)
    q.set_defaults(func=cmd_prop41)

    z = common(sub.add_parser("zeta4", help="is diag(i, -i) in w(SU(2))?"))
    z.add_argument("--w", required=True)
    budget(z)
    z.set_defaults(func=cmd_zeta4)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.threads < 1 or getattr(args, "seed", 0) < 0 or getattr(args, "seed", 0) >= 2**64:
        print("--threads must be positive and --seed a 64-bit unsigned integer", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run(argv) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
