"""Command-line interface: ``qrt construct|certify|rank|spectrum|schutte|audit``.

Exit codes: 0 success, 1 invariant violation, 2 usage or precondition error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .constructions import ConstructionError, build_from_spec
from .core import Tournament, TournamentError, is_normal, is_regular
from .io import canonical_json, content_hash, dumps_tournament, read_tournament
from .jacobi import ConvergenceError
from .properties import BudgetExceeded, CertifyOptions, certify, has_schutte
from .ranking import (
    DP_CAP,
    CapExceeded,
    CertificateError,
    exact_max_consistent,
    heuristic_max_consistent,
)
from .spectral import SpectralError, check_spectrum, mixing_audit, spectrum_of

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: Optional[str]
    spec: Optional[dict]
    seed: int
    out: Optional[str]
    fmt: str
    threads: int


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_argument_group("input (a file, --spec, or --family with parameters)")
    src.add_argument("input", nargs="?", help="tournament text file")
    src.add_argument("--spec", help='construction spec JSON, e.g. \'{"family":"paley","p":7}\'')
    src.add_argument("--family", choices=["paley", "cyclotomic", "elliptic"])
    src.add_argument("--p", type=int, help="prime modulus")
    src.add_argument("--m", type=int, help="number of cyclotomic classes (even)")
    src.add_argument("--ivec", type=_int_list, help="class indices, comma separated")
    src.add_argument("--n", type=int, help="group order for the elliptic family")
    src.add_argument("--rule", choices=["canonical", "random"], default="canonical")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", dest="fmt", choices=["json", "text"], default="json")
    p.add_argument("--threads", type=int, default=1,
                   help="worker cap; QRT_THREADS overrides (computation is single-threaded)")


def _spec_from_args(args) -> Optional[dict]:
    if args.spec:
        try:
            spec = json.loads(args.spec)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--spec is not valid JSON: {exc}") from None
        if args.family:
            raise UsageError("give either --spec or --family, not both")
        return spec
    if not args.family:
        return None
    if args.p is None:
        raise UsageError("--p is required")
    if args.family == "paley":
        return {"family": "paley", "p": args.p}
    if args.family == "cyclotomic":
        if args.m is None or args.ivec is None:
            raise UsageError("cyclotomic needs --m and --ivec")
        return {"family": "cyclotomic", "p": args.p, "m": args.m, "ivec": args.ivec}
    if args.n is None:
        raise UsageError("elliptic needs --n")
    return {"family": "elliptic", "p": args.p, "n": args.n, "rule": args.rule,
            "seed": args.seed if args.rule == "random" else None}


def _config(args) -> RunConfig:
    spec = _spec_from_args(args)
    inp = getattr(args, "input", None)
    if (inp is None) == (spec is None):
        raise UsageError("exactly one input source is required: a file or a construction spec")
    threads = int(os.environ.get("QRT_THREADS", args.threads))
    if threads < 1:
        raise UsageError("thread count must be positive")
    return RunConfig(args.command, inp, spec, args.seed, args.out, args.fmt, threads)


def _load(cfg: RunConfig) -> tuple[Tournament, Optional[dict]]:
    if cfg.input is not None:
        return read_tournament(cfg.input), None
    return build_from_spec(cfg.spec)


def _text(obj, prefix="") -> str:
    lines = []
    for key in sorted(obj):
        val = obj[key]
        if isinstance(val, dict):
            lines.append(f"{prefix}{key}:")
            lines.append(_text(val, prefix + "  ").rstrip("\n"))
        else:
            lines.append(f"{prefix}{key}: {json.dumps(val)}")
    return "\n".join(lines) + "\n"


def _emit(cfg: RunConfig, payload: dict) -> None:
    text = canonical_json(payload) if cfg.fmt == "json" else _text(json.loads(canonical_json(payload)))
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_construct(args) -> int:
    cfg = _config(args)
    if cfg.spec is None:
        raise UsageError("construct needs a construction spec")
    t, norm = build_from_spec(cfg.spec)
    body = dumps_tournament(t)
    summary = (f"n: {t.n}\nfamily: {norm['family']}\nvalid: true\n"
               f"regular: {str(is_regular(t)).lower()}\nhash: {content_hash(t)}\n")
    if cfg.out:
        Path(cfg.out).write_text(body, encoding="utf-8")
        sys.stdout.write(summary)
    else:
        sys.stdout.write(body)
        sys.stderr.write(summary)
    return EXIT_OK


def cmd_certify(args) -> int:
    cfg = _config(args)
    t, spec = _load(cfg)
    if args.exact and t.n > args.dp_cap:
        raise CapExceeded(f"n={t.n} exceeds the exact-solver cap {args.dp_cap}")
    opts = CertifyOptions(
        exact_cap=args.dp_cap if not args.heuristic else 0,
        force_exact=args.exact,
        restarts=args.restarts,
        seed=cfg.seed,
        schutte_k=tuple(args.k),
        schutte_budget=args.budget,
        audit_mode=args.audit_mode,
        audit_trials=args.trials,
    )
    report = certify(t, spec, opts)
    _emit(cfg, report.to_dict())
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_rank(args) -> int:
    cfg = _config(args)
    t, _ = _load(cfg)
    if args.exact:
        result = exact_max_consistent(t, cap=args.dp_cap)
    else:
        result = heuristic_max_consistent(t, restarts=args.restarts, seed=cfg.seed)
    _emit(cfg, {**result.to_dict(), "n": t.n, "input_hash": content_hash(t)})
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cfg = _config(args)
    t, spec = _load(cfg)
    spectrum = spectrum_of(t, spec, method=args.method)
    problems = check_spectrum(spectrum)
    _emit(cfg, {**spectrum.to_dict(), "input_hash": content_hash(t), "problems": problems})
    return EXIT_VIOLATION if problems else EXIT_OK


def cmd_schutte(args) -> int:
    cfg = _config(args)
    t, _ = _load(cfg)
    result = has_schutte(t, args.k, budget=args.budget)
    _emit(cfg, {**result.to_dict(), "n": t.n, "input_hash": content_hash(t)})
    return EXIT_OK


def cmd_audit(args) -> int:
    cfg = _config(args)
    t, spec = _load(cfg)
    spectrum = spectrum_of(t, spec)
    result = mixing_audit(t, spectrum, mode=args.mode, trials=args.trials, seed=cfg.seed)
    _emit(cfg, {**result.to_dict(), "lambda": spectrum.lam, "n": t.n,
                "input_hash": content_hash(t)})
    return EXIT_OK if result.ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrt", description="Explicit quasi-random tournaments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a tournament and write it in text format")
    _add_source(p)
    _add_common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("certify", help="full quasi-randomness report")
    _add_source(p)
    _add_common(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="require the exact solver")
    mode.add_argument("--heuristic", action="store_true", help="skip the exact solver")
    p.add_argument("--dp-cap", type=int, default=DP_CAP)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--k", type=_int_list, default=[1, 2], help="Schütte orders to check")
    p.add_argument("--budget", type=int, default=10**8)
    p.add_argument("--audit-mode", choices=["auto", "exhaustive", "sampled", "none"], default="auto")
    p.add_argument("--trials", type=int, default=10_000)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("rank", help="maximum consistent-edge ranking")
    _add_source(p)
    _add_common(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--heuristic", action="store_true")
    p.add_argument("--dp-cap", type=int, default=DP_CAP)
    p.add_argument("--restarts", type=int, default=4)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("spectrum", help="non-Perron eigenvalue moduli and lambda")
    _add_source(p)
    _add_common(p)
    p.add_argument("--method", choices=["auto", "jacobi", "eigh"], default="auto")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("schutte", help="check property S_k")
    _add_source(p)
    _add_common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=int, default=10**8)
    p.set_defaults(func=cmd_schutte)

    p = sub.add_parser("audit", help="expander mixing audit")
    _add_source(p)
    _add_common(p)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="sampled")
    p.add_argument("--trials", type=int, default=10_000)
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConstructionError, CapExceeded, TournamentError, BudgetExceeded,
            SpectralError, ValueError, OSError) as exc:
        print(f"qrt {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CertificateError, ConvergenceError) as exc:
        print(f"qrt {args.command}: invariant violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
