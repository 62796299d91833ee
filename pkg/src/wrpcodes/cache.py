"""Content-addressed on-disk cache of plateaued profiles.

Keys hash the field (p, m, modulus, theta) together with the value table, so
two descriptors that tabulate to the same function share an entry.  Writes go
through a temporary file and ``os.replace`` so a crashed run never leaves a
half-written entry behind.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import MismatchError, NotPlateaued
from .field import FieldSpec
from .plateaued import PFunction, PlateauedProfile, classify

RECHECK_FRACTION = 0.10


def function_key(f: PFunction) -> str:
    spec = f.spec
    h = hashlib.sha256()
    h.update(json.dumps([spec.p, spec.m, list(spec.modulus), spec.theta]).encode())
    h.update(np.ascontiguousarray(f.values, dtype=np.int64).tobytes())
    return h.hexdigest()


def profile_to_json(prof: PlateauedProfile) -> dict:
    return {"p": prof.p, "m": prof.m, "s": prof.s, "balanced": prof.balanced, "epsilon": prof.epsilon,
            "support": np.flatnonzero(prof.support).tolist(), "dual": prof.dual.tolist(), "h": prof.h,
            "indices": list(prof.indices), "family": prof.family, "f_zero": prof.f_zero,
            "notes": list(prof.notes)}


def profile_from_json(d: dict) -> PlateauedProfile:
    q = d["p"] ** d["m"]
    support = np.zeros(q, dtype=bool)
    support[d["support"]] = True
    return PlateauedProfile(d["p"], d["m"], d["s"], d["balanced"], d["epsilon"], support,
                            np.array(d["dual"], dtype=np.int64), d["h"], tuple(d["indices"]), d["family"],
                            d["f_zero"], tuple(d["notes"]))


def profiles_equal(a: PlateauedProfile, b: PlateauedProfile) -> bool:
    return profile_to_json(a) == profile_to_json(b)


class ProfileCache:
    """Profiles (or the marker ``not plateaued``) keyed by function content."""

    def __init__(self, root: str | os.PathLike | None, seed: int = 0, recheck: float = RECHECK_FRACTION):
        self.root = Path(root) if root else None
        self.rng = np.random.default_rng(seed)
        self.recheck = recheck
        self.hits = self.misses = self.rechecked = 0
        self._mem: dict[str, dict] = {}
        if self.root:
            self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, key):
        return self.root / key[:2] / f"{key}.json"

    def _load(self, key):
        if key in self._mem:
            return self._mem[key]
        if self.root is None:
            return None
        path = self._path(key)
        if not path.exists():
            return None
        with open(path) as fh:
            entry = json.load(fh)
        self._mem[key] = entry
        return entry

    def _store(self, key, entry):
        self._mem[key] = entry
        if self.root is None:
            return
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @staticmethod
    def _compute(f):
        try:
            return {"plateaued": True, "profile": profile_to_json(classify(f))}
        except NotPlateaued as exc:
            return {"plateaued": False, "reason": str(exc)}

    def classify(self, f: PFunction) -> PlateauedProfile:
        """Cached classify; raises NotPlateaued exactly as the uncached call would."""
        key = function_key(f)
        entry = self._load(key)
        if entry is None:
            self.misses += 1
            entry = self._compute(f)
            self._store(key, entry)
        else:
            self.hits += 1
            if self.rng.random() < self.recheck:
                self.rechecked += 1
                fresh = self._compute(f)
                if fresh != entry:
                    raise MismatchError("cached profile differs from a fresh classification",
                                        {"key": key, "cached": entry, "fresh": fresh})
        if not entry["plateaued"]:
            raise NotPlateaued(entry["reason"])
        return profile_from_json(entry["profile"])

    def stats(self) -> dict:
        return {"hits": self.hits, "misses": self.misses, "rechecked": self.rechecked}


def field_key(spec: FieldSpec) -> dict:
    return {"p": spec.p, "m": spec.m, "modulus": list(spec.modulus), "theta": spec.theta}
