"""Exhaustive search of small trace-polynomial families for WRP / WRPB specimens."""
from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cache import ProfileCache, profile_from_json, profile_to_json
from .errors import ConfigError, NotPlateaued, SpaceTooLarge
from .field import FieldSpec, format_element, make_field, parse_element
from .plateaued import NEITHER, WRP, WRPB, PFunction, PlateauedProfile, classify, eval_descriptor, from_values

log = logging.getLogger(__name__)

MAX_CANDIDATES = 10**6
MAX_SLOTS = 3
TARGETS = (WRP, WRPB, "EITHER")


def coefficient_range(spec: FieldSpec, rng) -> list[int]:
    """Slot coefficients: "all", "nonzero", "prime" (F_p), "prime-nonzero" or an explicit list."""
    if isinstance(rng, str):
        if rng == "all":
            return list(range(spec.q))
        if rng == "nonzero":
            return list(range(1, spec.q))
        if rng == "prime":
            return [parse_element(spec, c) for c in range(spec.p)]
        if rng == "prime-nonzero":
            return [parse_element(spec, c) for c in range(1, spec.p)]
        raise ConfigError(f"unknown coefficient range {rng!r}")
    return [parse_element(spec, c) for c in rng]


@dataclass
class SearchSpec:
    spec: FieldSpec
    slots: list[tuple[int, object]]
    target: str = "EITHER"
    constraints: dict = field(default_factory=dict)
    include_zero: bool = False

    def __post_init__(self):
        if len(self.slots) > MAX_SLOTS:
            raise ConfigError(f"at most {MAX_SLOTS} template slots are supported")
        if self.target not in TARGETS:
            raise ConfigError(f"target must be one of {TARGETS}")
        bad = set(self.constraints) - {"s", "l", "epsilon", "h"}
        if bad:
            raise ConfigError(f"unknown constraints {sorted(bad)}")

    def ranges(self):
        return [coefficient_range(self.spec, r) for _, r in self.slots]

    def size(self) -> int:
        n = 1
        for r in self.ranges():
            n *= len(r)
        return n if self.slots else 0


@dataclass
class SearchHit:
    descriptor: list[dict]
    function: PFunction = field(repr=False)
    profile: PlateauedProfile = field(repr=False)

    def as_dict(self):
        return {"descriptor": self.descriptor, "profile": self.profile.summary()}


@dataclass
class SearchResult:
    hits: list[SearchHit]
    candidates: int
    distinct: int
    not_plateaued: int
    rejected: int

    def as_dict(self):
        return {"candidates": self.candidates, "distinct_functions": self.distinct,
                "not_plateaued": self.not_plateaued, "rejected": self.rejected,
                "hits": [h.as_dict() for h in self.hits]}


def _matches(prof: PlateauedProfile, target, constraints) -> bool:
    if prof.family == NEITHER:
        return False
    if target != "EITHER" and prof.family != target:
        return False
    c = constraints
    if "s" in c and prof.s != c["s"]:
        return False
    if "epsilon" in c and prof.epsilon != c["epsilon"]:
        return False
    if "l" in c and c["l"] not in prof.indices:
        return False
    if "h" in c and prof.h != c["h"]:
        return False
    return True


_WORKER_FIELDS: dict = {}


def _classify_chunk(args):
    # worker side: rebuild the field once per process, classify a batch of value tables
    key, tables = args
    spec = _WORKER_FIELDS.get(key)
    if spec is None:
        p, m, modulus, theta = key
        spec = _WORKER_FIELDS[key] = make_field(p, m, modulus, theta)
    out = []
    for values in tables:
        try:
            out.append(profile_to_json(classify(from_values(spec, values))))
        except NotPlateaued:
            out.append(None)
    return out


def _classify_parallel(spec, funcs, jobs):
    key = (spec.p, spec.m, tuple(spec.modulus), spec.theta)
    size = max(1, -(-len(funcs) // (4 * jobs)))
    chunks = [(key, [f.values for f in funcs[i:i + size]]) for i in range(0, len(funcs), size)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        results = [r for part in ex.map(_classify_chunk, chunks) for r in part]
    return [profile_from_json(r) if r is not None else None for r in results]


def search(sspec: SearchSpec, cache: ProfileCache | None = None, jobs: int = 1) -> SearchResult:
    """Classify every template instance; distinct functions only, sorted by (s, descriptor).

    With ``jobs > 1`` and no cache the distinct candidates are classified in a
    process pool; results do not depend on ``jobs``.
    """
    total = sspec.size()
    if total > MAX_CANDIDATES:
        raise SpaceTooLarge(f"{total} candidates exceed the limit {MAX_CANDIDATES}")
    spec = sspec.spec
    exps = [e for e, _ in sspec.slots]
    seen = set()
    cands = []
    rejected = 0
    if total:
        for combo in itertools.product(*sspec.ranges()):
            desc = [(c, e) for c, e in zip(combo, exps) if c != 0]
            f = eval_descriptor(spec, [(np.int64(c), e) for c, e in desc])
            key = f.values.tobytes()
            if key in seen:
                continue
            seen.add(key)
            if not sspec.include_zero and not f.values.any():
                rejected += 1
                continue
            cands.append((desc, f))
    if jobs > 1 and cache is None and len(cands) > 1:
        profiles = _classify_parallel(spec, [f for _, f in cands], jobs)
    else:
        cache = cache or ProfileCache(None)
        profiles = []
        for _, f in cands:
            try:
                profiles.append(cache.classify(f))
            except NotPlateaued:
                profiles.append(None)
    hits, notp = [], 0
    for (desc, f), prof in zip(cands, profiles):
        if prof is None:
            notp += 1
        elif _matches(prof, sspec.target, sspec.constraints):
            hits.append(SearchHit([{"coeff": format_element(spec, c), "exp": e} for c, e in desc], f, prof))
        else:
            rejected += 1
    hits.sort(key=lambda h: (h.profile.s, [(d["exp"], d["coeff"]) for d in h.descriptor]))
    log.info("search: %d candidates, %d distinct, %d hits", total, len(seen), len(hits))
    return SearchResult(hits, total, len(seen), notp, rejected)


def signature(prof: PlateauedProfile) -> tuple:
    return (prof.family, prof.s, prof.epsilon, prof.indices)
