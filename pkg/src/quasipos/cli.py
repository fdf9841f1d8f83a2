"""Command line front end: ``verify``, ``scan`` and ``pontrjagin``.

Exit codes: 0 no flat plane, 1 flat plane found, 2 bad input or a failed
precondition, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product

import numpy as np

from .actions import PreconditionError, eschenburg_free, qp_hypothesis
from .charclasses import ConstraintError, p1_integral_m13, p1_mod_p
from .replay_so8 import ReplayFailure
from .verifier import verify_eschenburg, verify_m13, verify_n11

EXIT_OK, EXIT_FLAT, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3
VERDICT_EXIT = {"no-flat-plane": EXIT_OK, "flat-plane-found": EXIT_FLAT, "inconclusive": EXIT_INCONCLUSIVE}
COLUMNS = ("n", "p", "q", "free", "hypothesis", "verdict", "residual", "restarts", "seed", "ms")
SEED_ENV = "QUASIPOS_SEED"

# options whose values may start with '-'
_VALUE_OPTIONS = ("--p", "--q", "--q-range", "--theta")


def _normalize_argv(argv):
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _ints(text: str):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _range(text: str):
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None


def _default_seed():
    try:
        return int(os.environ.get(SEED_ENV, "0"))
    except ValueError:
        return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="quasipos", description="Flat-plane certificates and characteristic classes for biquotients.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="certify one point")
    v.add_argument("target", choices=("m13", "n11", "eschenburg"))
    v.add_argument("--theta", default="pi/4", help="rational multiple of pi, e.g. pi/4 (m13, n11)")
    v.add_argument("--p", type=_ints, help="left weights p1,...,p_{n+1} (eschenburg)")
    v.add_argument("--q", type=_ints, help="right weights q1,q2 (eschenburg)")
    v.add_argument("--n", type=int)
    v.add_argument("--mode", choices=("exact", "numeric", "both"), default="exact")
    v.add_argument("--seed", type=int, default=_default_seed())
    v.add_argument("--budget", type=int, default=1000)
    v.add_argument("--lam1", type=float, default=0.5)
    v.add_argument("--lam2", type=float, default=0.5)
    v.add_argument("--out")

    s = sub.add_parser("scan", help="sweep Eschenburg weights")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--bound", type=int, default=1, help="|p_i| <= bound")
    s.add_argument("--q-range", type=_range, default=(0, 0), help="LO:HI for both q entries")
    s.add_argument("--mode", choices=("exact", "numeric", "both"), default="numeric")
    s.add_argument("--seed", type=int, default=_default_seed())
    s.add_argument("--budget", type=int, default=50)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--out")
    s.add_argument("--timings", action="store_true", help="fill the ms column (breaks byte-identical reports)")

    c = sub.add_parser("pontrjagin", help="first Pontrjagin class")
    c.add_argument("family", choices=("s1xg2", "so3xg2", "m13"))
    c.add_argument("--q", type=_ints, default=(0, 0, 0, 1))
    c.add_argument("--mod", type=int, help="reduce the coefficient modulo this prime")
    c.add_argument("--integral", action="store_true")
    return ap


# ----------------------------------------------------------------------------
# verify


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def cmd_verify(args) -> int:
    try:
        if args.target == "eschenburg":
            if not args.p or not args.q:
                raise PreconditionError("eschenburg needs --p and --q")
            cert = verify_eschenburg(args.p, args.q, args.n, args.mode, args.budget, args.seed, args.lam1, args.lam2)
        else:
            fn = verify_m13 if args.target == "m13" else verify_n11
            cert = fn(args.theta, args.mode, args.budget, args.seed, args.lam1)
    except (PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ReplayFailure as exc:
        print(f"inconclusive: exact replay failed: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    try:
        _emit(cert.to_json(), args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return VERDICT_EXIT[cert.verdict]


# ----------------------------------------------------------------------------
# scan


@dataclass(frozen=True)
class ScanConfig:
    n: int = 2
    bound: int = 1
    q_range: tuple = (0, 0)
    seed: int = 0
    budget: int = 50
    mode: str = "numeric"
    jobs: int = 1
    timings: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.bound < 1:
            raise ValueError("bound must be at least 1")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")


@dataclass
class ScanRecord:
    n: int
    p: tuple
    q: tuple
    free: bool
    hypothesis: bool
    seed: int
    verdict: str | None = None
    residual: float | None = None
    restarts: int | None = None
    ms: float | None = field(default=None, compare=False)

    def row(self, timings=False) -> dict:
        return {
            "n": self.n,
            "p": ",".join(map(str, self.p)),
            "q": ",".join(map(str, self.q)),
            "free": int(self.free),
            "hypothesis": int(self.hypothesis),
            "verdict": self.verdict or "",
            "residual": "" if self.residual is None else f"{self.residual:.10e}",
            "restarts": "" if self.restarts is None else self.restarts,
            "seed": self.seed,
            "ms": f"{self.ms:.1f}" if timings and self.ms is not None else "",
        }


def lattice(cfg: ScanConfig):
    """Canonical (sorted) p with |p_i| <= bound and all q in range, in lexicographic order."""
    lo, hi = cfg.q_range
    ps = list(combinations_with_replacement(range(-cfg.bound, cfg.bound + 1), cfg.n + 1))
    qs = list(product(range(lo, hi + 1), repeat=2))
    return [(p, q) for p in ps for q in qs]


def point_seed(seed: int, p, q) -> int:
    """Seed for one lattice point, independent of the rest of the lattice."""
    zigzag = [2 * x if x >= 0 else -2 * x - 1 for x in (*p, *q)]
    return int(np.random.SeedSequence([seed, len(p), *zigzag]).generate_state(1)[0])


def scan_point(job) -> ScanRecord:
    cfg, p, q = job
    t0 = time.perf_counter()
    seed = point_seed(cfg.seed, p, q)
    free = eschenburg_free(p, q)
    hyp = qp_hypothesis(p, q)
    rec = ScanRecord(cfg.n, p, q, free, hyp, seed)
    if free and hyp:
        try:
            cert = verify_eschenburg(p, q, cfg.n, cfg.mode, cfg.budget, seed)
            rec.verdict = cert.verdict
            rec.residual = cert.residual
            rec.restarts = cert.restarts if cfg.mode != "exact" else None
        except ReplayFailure:
            rec.verdict = "inconclusive"
    rec.ms = (time.perf_counter() - t0) * 1e3
    return rec


def run_scan(cfg: ScanConfig) -> list[ScanRecord]:
    jobs = [(cfg, p, q) for p, q in lattice(cfg)]
    if cfg.jobs == 1 or len(jobs) < 2:
        recs = [scan_point(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            recs = list(ex.map(scan_point, jobs, chunksize=max(1, len(jobs) // (4 * cfg.jobs))))
    recs.sort(key=lambda r: (r.p, r.q))
    return recs


def render(records, fmt="csv", timings=False) -> str:
    rows = [r.row(timings) for r in records]
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_scan(args) -> int:
    try:
        cfg = ScanConfig(args.n, args.bound, tuple(args.q_range), args.seed, args.budget, args.mode, args.jobs, args.timings)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        try:
            open(args.out, "w").close()
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_INPUT
    text = render(run_scan(cfg), args.format, args.timings)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ----------------------------------------------------------------------------
# pontrjagin


def cmd_pontrjagin(args) -> int:
    try:
        if args.family == "m13" or args.integral:
            if args.family not in ("m13", "s1xg2") or tuple(args.q) != (0, 0, 0, 1):
                raise ValueError("the integral class is available for M13 only")
            res = p1_integral_m13()
            print(f"|p1| = {res.magnitude}")
            print(f"[integral; k in {{{', '.join(map(str, res.ks))}}}]")
            return EXIT_OK
        c = p1_mod_p(args.family, args.q, args.mod)
    except (ValueError, ConstraintError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"p1 = {c}·φ*(ū²)")
    tag = f"mod {args.mod}" if args.mod else "mod p, every odd prime p"
    print(f"[{tag}; q = {','.join(map(str, args.q))}]")
    return EXIT_OK


def main(argv=None) -> int:
    argv = _normalize_argv(sys.argv[1:] if argv is None else list(argv))
    args = build_parser().parse_args(argv)
    handler = {"verify": cmd_verify, "scan": cmd_scan, "pontrjagin": cmd_pontrjagin}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
