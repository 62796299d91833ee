"""Run configuration files (YAML) for the command-line driver."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .cache import RECHECK_FRACTION
from .codes import BY_CLASS, CONVOLVE, ENUMERATE
from .errors import ConfigError
from .field import FieldSpec, make_field

TASKS = ("classify", "build", "enumerate", "predict", "puncture", "certify", "verify-lemmas")
FORMATS = ("json", "csv", "text")
MODES = (ENUMERATE, CONVOLVE, BY_CLASS)

# task -> tasks it needs in the same run
REQUIRES = {
    "predict": ("classify",),
    "build": ("classify",),
    "enumerate": ("build",),
    "puncture": ("build",),
    "certify": ("build",),
}


def _theta_encoding(p: int, theta) -> int | None:
    """theta as an integer encoding, or as a coefficient list lowest degree first."""
    if theta is None:
        return None
    if isinstance(theta, bool):
        raise ConfigError("theta must be an integer or a coefficient list")
    if isinstance(theta, int):
        return theta
    if isinstance(theta, (list, tuple)) and all(isinstance(c, int) for c in theta):
        return sum((c % p) * p**i for i, c in enumerate(theta))
    raise ConfigError(f"cannot read theta {theta!r}")


def _descriptor(raw, name):
    if raw is None:
        return None
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"{name} must be a nonempty list of terms")
    out = []
    for term in raw:
        if isinstance(term, dict) and set(term) == {"coeff", "exp"}:
            c, e = term["coeff"], term["exp"]
        elif isinstance(term, (list, tuple)) and len(term) == 2:
            c, e = term
        else:
            raise ConfigError(f"{name}: bad term {term!r}; use {{coeff, exp}} or [coeff, exp]")
        if not isinstance(e, int) or isinstance(e, bool):
            raise ConfigError(f"{name}: exponent {e!r} is not an integer")
        out.append({"coeff": c, "exp": e})
    return out


@dataclass
class RunConfig:
    p: int
    m: int
    modulus: tuple | None = None
    theta: int | None = None
    f: list | None = None
    g: list | None = None
    tasks: tuple = ()
    mode: str = ENUMERATE
    branch: str | None = None
    out_path: str | None = None
    out_format: str = "json"
    cache_dir: str | None = None
    cache_recheck: float = RECHECK_FRACTION
    seed: int = 0
    spot_checks: int = 1000
    source: str | None = field(default=None, compare=False)

    def field(self) -> FieldSpec:
        try:
            return make_field(self.p, self.m, self.modulus, self.theta)
        except Exception as exc:  # bad prime, reducible modulus, non-primitive theta
            raise ConfigError(f"field: {exc}") from exc

    def ordered_tasks(self) -> list[str]:
        return [t for t in TASKS if t in self.tasks]


def _fraction(x) -> float:
    try:
        x = float(x)
    except (TypeError, ValueError):
        raise ConfigError(f"cache_recheck must be a number in [0, 1], got {x!r}") from None
    if not 0.0 <= x <= 1.0:
        raise ConfigError(f"cache_recheck must lie in [0, 1], got {x}")
    return x


def from_dict(d: dict, source: str | None = None) -> RunConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a mapping")
    unknown = set(d) - {"field", "f", "g", "tasks", "mode", "branch", "output", "cache_dir", "cache_recheck", "seed",
                      "spot_checks"}
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    fld = d.get("field")
    if not isinstance(fld, dict) or "p" not in fld:
        raise ConfigError("field: {p, m, modulus?, theta?} is required")
    p, m = fld["p"], fld.get("m", 1)
    if not isinstance(p, int) or not isinstance(m, int):
        raise ConfigError("field.p and field.m must be integers")
    modulus = fld.get("modulus")
    if modulus is not None:
        if not isinstance(modulus, list) or not all(isinstance(c, int) for c in modulus):
            raise ConfigError("field.modulus is a coefficient list, lowest degree first")
        modulus = tuple(modulus)
    tasks = d.get("tasks")
    if not tasks:
        raise ConfigError("tasks must be a nonempty list")
    tasks = tuple(tasks)
    bad = [t for t in tasks if t not in TASKS]
    if bad:
        raise ConfigError(f"unknown tasks {bad}; choose from {list(TASKS)}")
    for t in tasks:
        for need in REQUIRES.get(t, ()):
            if need not in tasks:
                raise ConfigError(f"task {t!r} requires {need!r}")
    out = d.get("output") or {}
    fmt = str(out.get("format", "json")).lower()
    if fmt not in FORMATS:
        raise ConfigError(f"output.format must be one of {FORMATS}")
    mode = d.get("mode", ENUMERATE)
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}")
    cfg = RunConfig(p=p, m=m, modulus=modulus, theta=_theta_encoding(p, fld.get("theta")),
                    f=_descriptor(d.get("f"), "f"), g=_descriptor(d.get("g"), "g"), tasks=tasks, mode=mode,
                    branch=d.get("branch"), out_path=out.get("path"), out_format=fmt,
                    cache_dir=d.get("cache_dir"), cache_recheck=_fraction(d.get("cache_recheck", RECHECK_FRACTION)),
                    seed=int(d.get("seed", 0)),
                    spot_checks=int(d.get("spot_checks", 1000)), source=source)
    needs_pair = set(tasks) - {"verify-lemmas"}
    if needs_pair and (cfg.f is None or (cfg.g is None and set(tasks) - {"classify", "verify-lemmas"})):
        raise ConfigError("f (and g for pair tasks) must be given")
    return cfg


def load(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return from_dict(raw, str(path))


def search_from_dict(d: dict):
    """Search config: {field, slots: [[exp, range], ...], target?, constraints?, include_zero?}."""
    from .search import SearchSpec

    if not isinstance(d, dict) or "field" not in d or "slots" not in d:
        raise ConfigError("search config needs field and slots")
    fld = d["field"]
    try:
        spec = make_field(fld["p"], fld.get("m", 1), fld.get("modulus"), _theta_encoding(fld["p"], fld.get("theta")))
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"field: {exc}") from exc
    slots = []
    for s in d["slots"]:
        if not isinstance(s, (list, tuple)) or len(s) != 2:
            raise ConfigError(f"slot {s!r} must be [exponent, range]")
        slots.append((int(s[0]), s[1]))
    return SearchSpec(spec, slots, d.get("target", "EITHER"), dict(d.get("constraints") or {}),
                      bool(d.get("include_zero", False)))


def load_search(path: str | Path):
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return search_from_dict(raw)
