"""wrpcodes command line: classify, build, search, verify-lemmas, report.

Exit codes: 0 all checks pass, 2 a check failed (mismatch, misclassified
input), 3 configuration error, 1 anything else.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import config as cfgmod
from .cache import RECHECK_FRACTION, ProfileCache, field_key
from .charsums import verify_lemmas
from .errors import (ConfigError, LengthMismatch, MismatchError, NotPlateaued, SpaceTooLarge,
                     UnsupportedIndexPair, WRPError)
from .field import make_field
from .plateaued import eval_descriptor
from .report import render
from .runner import SCHEMA, run
from .search import SearchSpec, search
from .survey import all_pairs, n0_sweep, verify_pairs

log = logging.getLogger("wrpcodes")

EXIT_OK, EXIT_ERROR, EXIT_MISMATCH, EXIT_CONFIG = 0, 1, 2, 3


def parse_descriptor(text: str) -> list[dict]:
    """"t^0:2, -t^1:6" -> [{"coeff": "t^0", "exp": 2}, {"coeff": "-t^1", "exp": 6}]."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        coeff, sep, exp = part.rpartition(":")
        if not sep:
            raise ConfigError(f"term {part!r} is not COEFF:EXP")
        coeff = coeff.strip()
        out.append({"coeff": int(coeff) if coeff.lstrip("-").isdigit() else coeff, "exp": int(exp)})
    if not out:
        raise ConfigError("empty descriptor")
    return out


def _int_list(text):
    return [int(c) for c in text.split(",")] if text else None


def _emit(payload: dict, fmt: str, out: str | None):
    text = render(payload, fmt)
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        sys.stdout.write(text)


def _recheck(args) -> float:
    if args.recheck is None:
        return RECHECK_FRACTION
    if not 0.0 <= args.recheck <= 1.0:
        raise ConfigError(f"--recheck must lie in [0, 1], got {args.recheck}")
    return args.recheck


def _field_from_args(args):
    theta = args.theta
    if theta is not None and "," in theta:
        theta = cfgmod._theta_encoding(args.p, _int_list(theta))
    elif theta is not None:
        theta = int(theta)
    try:
        return make_field(args.p, args.m, _int_list(args.modulus), theta)
    except WRPError as exc:
        raise ConfigError(f"field: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"field: {exc}") from exc


def cmd_classify(args):
    if args.config:
        cfg = cfgmod.load(args.config)
        spec = cfg.field()
        descs = {"f": cfg.f, "g": cfg.g}
    else:
        if args.p is None or not args.f:
            raise ConfigError("classify needs --config or --p/--m/--f")
        spec = _field_from_args(args)
        descs = {"f": parse_descriptor(args.f), "g": parse_descriptor(args.g) if args.g else None}
    cache = ProfileCache(args.cache, seed=args.seed or 0, recheck=_recheck(args))
    payload = {"schema": SCHEMA, "field": field_key(spec), "classify": {}, "status": "ok"}
    for key, desc in descs.items():
        if desc is None:
            continue
        fn = eval_descriptor(spec, desc)
        try:
            prof = cache.classify(fn).summary()
        except NotPlateaued as exc:
            prof = {"family": "not plateaued", "reason": str(exc), "s": None, "epsilon": None, "l": None, "h": None}
        payload["classify"][key] = {"descriptor": fn.describe(), "profile": prof}
    _emit(payload, args.format, args.out)
    return EXIT_OK


def cmd_build(args):
    cfg = cfgmod.load(args.config)
    if args.cache:
        cfg.cache_dir = args.cache
    if args.seed is not None:
        cfg.seed = args.seed
    if args.recheck is not None:
        cfg.cache_recheck = _recheck(args)
    res = run(cfg)
    payload = res.payload(cfg)
    fmt = args.format or cfg.out_format
    out = args.out or cfg.out_path
    if out and Path(out).suffix == "":
        # a directory: one report per task plus the combined report
        base = Path(out)
        base.mkdir(parents=True, exist_ok=True)
        for task in cfg.ordered_tasks():
            part = {k: v for k, v in payload.items() if k in ("schema", "config", "field", "status", task)}
            _emit(part, fmt, str(base / f"{task}.{fmt}"))
        _emit(payload, fmt, str(base / f"report.{fmt}"))
    else:
        _emit(payload, fmt, out)
    return res.exit_code


def cmd_search(args):
    if args.config:
        sspec = cfgmod.load_search(args.config)
    else:
        if args.p is None or not args.slot:
            raise ConfigError("search needs --config or --p/--m/--slot")
        spec = _field_from_args(args)
        slots = []
        for s in args.slot:
            exp, _, rng = s.partition(":")
            rng = rng or "all"
            if rng not in ("all", "nonzero", "prime", "prime-nonzero"):
                rng = [c.strip() for c in rng.split("|")]
            slots.append((int(exp), rng))
        cons = {k: v for k, v in (("s", args.s), ("l", args.l), ("epsilon", args.epsilon)) if v is not None}
        sspec = SearchSpec(spec, slots, args.target, cons, args.include_zero)
    cache = ProfileCache(args.cache, seed=args.seed or 0, recheck=_recheck(args)) if args.cache else None
    res = search(sspec, cache, jobs=args.jobs)
    payload = {"schema": SCHEMA, "field": field_key(sspec.spec), **res.as_dict(), "status": "ok"}
    code = EXIT_OK
    if (args.verify_pairs or args.all_pairs) and res.hits:
        if args.all_pairs:
            rep = all_pairs(res.hits, res.hits)
        else:
            rep = verify_pairs(res.hits, res.hits, per_signature=args.verify_pairs, seed=args.seed or 0)
        if args.n0_sweep:
            rep = rep.merge(n0_sweep(res.hits, res.hits))
        payload["branches_report"] = rep.rows()
        payload["rank_deficits"] = rep.rank_deficits
        payload["failures"] = rep.failures
        if rep.failures:
            payload["status"] = "mismatch"
            code = EXIT_MISMATCH
    _emit(payload, args.format, args.out)
    return code


def cmd_verify_lemmas(args):
    lines = verify_lemmas()
    payload = {"schema": SCHEMA, "verify-lemmas": [{"identity": n, "passed": ok} for n, ok in lines]}
    bad = [n for n, ok in lines if not ok]
    payload["status"] = "mismatch" if bad else "ok"
    _emit(payload, args.format, args.out)
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_report(args):
    """Re-render a saved JSON report in another format."""
    try:
        payload = json.loads(Path(args.input).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read report {args.input}: {exc}") from exc
    if payload.get("schema") != SCHEMA:
        raise ConfigError(f"report schema {payload.get('schema')!r} is not {SCHEMA}")
    _emit(payload, args.format, args.out)
    return EXIT_MISMATCH if payload.get("status") == "mismatch" else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (or directory for build)")
    common.add_argument("--cache", help="profile cache directory")
    common.add_argument("--recheck", type=float, default=None,
                        help=f"fraction of cache hits re-verified (default {RECHECK_FRACTION})")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=None, help="seed for spot-check sampling only")
    common.add_argument("-v", "--verbose", action="store_true")

    def fmt(p, default="json"):
        p.add_argument("--format", choices=("json", "csv", "text"), default=default)

    def field_args(p):
        p.add_argument("--p", type=int)
        p.add_argument("--m", type=int, default=1)
        p.add_argument("--modulus", help="coefficients lowest degree first, e.g. 2,0,1")
        p.add_argument("--theta", help="primitive element: integer encoding or coefficient list")

    ap = argparse.ArgumentParser(prog="wrpcodes", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="Walsh profile of f (and g)")
    p.add_argument("--config")
    field_args(p)
    p.add_argument("--f", help='descriptor "COEFF:EXP, ..."')
    p.add_argument("--g")
    fmt(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("build", parents=[common], help="run a config's task list")
    p.add_argument("--config", required=True)
    p.add_argument("--format", choices=("json", "csv", "text"), default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("search", parents=[common], help="search trace templates for WRP/WRPB functions")
    p.add_argument("--config")
    field_args(p)
    p.add_argument("--slot", action="append", help="EXP:RANGE with RANGE all|nonzero|prime|prime-nonzero|c1|c2..")
    p.add_argument("--target", choices=("WRP", "WRPB", "EITHER"), default="EITHER")
    p.add_argument("--s", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--epsilon", type=int, choices=(-1, 1))
    p.add_argument("--include-zero", action="store_true")
    p.add_argument("--verify-pairs", type=int, default=0, metavar="K",
                   help="check K sampled pairs per signature pair against the tables")
    p.add_argument("--n0-sweep", action="store_true", help="also compare N0 over every pair (small fields)")
    p.add_argument("--all-pairs", action="store_true",
                   help="check every pair of hits, one exact computation per histogram class pair")
    fmt(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify-lemmas", parents=[common], help="character-sum identity checks")
    fmt(p, "text")
    p.set_defaults(func=cmd_verify_lemmas)

    p = sub.add_parser("report", parents=[common], help="re-render a saved JSON report")
    p.add_argument("input")
    fmt(p, "text")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, UnsupportedIndexPair, SpaceTooLarge) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (MismatchError, LengthMismatch, NotPlateaued) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except WRPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
