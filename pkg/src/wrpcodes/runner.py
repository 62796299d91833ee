"""Execute a RunConfig: tasks in dependency order, one report section per task."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .cache import ProfileCache, field_key
from .charsums import verify_lemmas
from .codes import (CodeReport, build_defining_set, certify_griesmer, certify_minimal, dimension,
                    dual_distance, puncture, weight_distribution)
from .config import RunConfig
from .errors import ConfigError, MismatchError, UnsupportedIndexPair
from .plateaued import eval_descriptor
from .predict import applicable_branches, minimality_threshold, predicted_distribution, punctured_report

log = logging.getLogger(__name__)

SCHEMA = 1


@dataclass
class RunResult:
    sections: dict = field(default_factory=dict)
    mismatches: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 2 if self.mismatches else 0

    def payload(self, cfg: RunConfig) -> dict:
        return {"schema": SCHEMA, "config": cfg.source, "tasks": cfg.ordered_tasks(),
                "status": "mismatch" if self.mismatches else "ok", "mismatches": self.mismatches,
                **self.sections}


def dist_diff(a: CodeReport, b: CodeReport) -> dict:
    """Symmetric description of where two reports disagree."""
    ws = sorted(set(a.dist) | set(b.dist))
    rows = [[w, a.dist.get(w, 0), b.dist.get(w, 0)] for w in ws if a.dist.get(w, 0) != b.dist.get(w, 0)]
    out = {"weights": rows}
    if a.n != b.n:
        out["n"] = [a.n, b.n]
    if a.k != b.k:
        out["k"] = [a.k, b.k]
    return out


def _code_section(rep: CodeReport) -> dict:
    d = rep.as_dict()
    d["enumerator"] = rep.enumerator()
    return d


def _certificates(rep: CodeReport) -> dict:
    return {"params": rep.params, "griesmer_optimal": certify_griesmer(rep), "griesmer_gap": rep.griesmer_gap,
            "minimal_ab": certify_minimal(rep), "ab_status": rep.ab_status(), "projective": rep.dual_d_ge_3}


def run(cfg: RunConfig) -> RunResult:
    res = RunResult()
    tasks = cfg.ordered_tasks()
    spec = cfg.field() if set(tasks) - {"verify-lemmas"} else None
    cache = ProfileCache(cfg.cache_dir, seed=cfg.seed, recheck=cfg.cache_recheck)
    if spec is not None:
        res.sections["field"] = field_key(spec)
    f = g = pf = pg = D = full = pred = P = punct = None

    if "classify" in tasks:
        f = eval_descriptor(spec, cfg.f)
        pf = cache.classify(f)
        sec = {"f": {"descriptor": f.describe(), "profile": pf.summary()}}
        if cfg.g is not None:
            g = eval_descriptor(spec, cfg.g)
            pg = cache.classify(g)
            sec["g"] = {"descriptor": g.describe(), "profile": pg.summary()}
            try:
                sec["branches"] = applicable_branches(pf, pg)
            except UnsupportedIndexPair as exc:
                sec["branches"] = []
                sec["unsupported"] = str(exc)
        res.sections["classify"] = sec

    if "build" in tasks:
        D = build_defining_set(f, g, pf, pg)
        res.sections["build"] = {"n": D.n, "k": dimension(D), "dual_distance": dual_distance(D)}

    if "enumerate" in tasks:
        full = weight_distribution(D, cfg.mode, pf, pg, seed=cfg.seed, spot_checks=cfg.spot_checks)
        res.sections["enumerate"] = _code_section(full)
        if full.checks.get("spot_check_failures"):
            res.mismatches.append({"task": "enumerate", "what": "class spot-check",
                                   "failures": full.checks["spot_check_failures"]})

    if "predict" in tasks:
        try:
            pred = predicted_distribution(pf, pg, cfg.branch)
        except UnsupportedIndexPair as exc:
            raise ConfigError(str(exc)) from exc
        sec = _code_section(pred)
        sec["minimality_threshold"] = minimality_threshold(pf, pg, pred.provenance)
        res.sections["predict"] = sec
        if full is not None:
            diff = dist_diff(pred, full)
            sec["agrees_with_enumeration"] = diff == {"weights": []}
            if not sec["agrees_with_enumeration"]:
                res.mismatches.append({"task": "predict", "what": "predicted vs enumerated", "diff": diff})

    if "puncture" in tasks:
        P = puncture(D)
        if full is not None:
            punct = weight_distribution(P, cfg.mode, pf, pg, seed=cfg.seed, spot_checks=cfg.spot_checks)
        elif pred is not None:
            punct = punctured_report(pred)
        sec = {"n": P.n, "orbit_rule": P.orbit_rule, "dual_distance": dual_distance(P)}
        if punct is not None:
            sec.update(_code_section(punct))
            if full is not None and pred is not None:
                diff = dist_diff(punctured_report(pred), punct)
                if diff != {"weights": []}:
                    res.mismatches.append({"task": "puncture", "what": "punctured vs predicted", "diff": diff})
        res.sections["puncture"] = sec

    if "certify" in tasks:
        base = full or pred
        if base is None:
            raise ConfigError("certify needs enumerate or predict")
        sec = {"full": _certificates(base)}
        if punct is not None:
            sec["punctured"] = _certificates(punct)
        res.sections["certify"] = sec

    if "verify-lemmas" in tasks:
        lines = verify_lemmas()
        res.sections["verify-lemmas"] = [{"identity": n, "passed": ok} for n, ok in lines]
        bad = [n for n, ok in lines if not ok]
        if bad:
            res.mismatches.append({"task": "verify-lemmas", "what": "identity failed", "identities": bad})

    if cache.root is not None:
        # kept out of the payload so reports stay byte-identical across cold and warm caches
        log.info("cache: %s", cache.stats())
    for m in res.mismatches:
        log.error("mismatch: %s", m)
    return res


def run_or_raise(cfg: RunConfig) -> RunResult:
    res = run(cfg)
    if res.mismatches:
        raise MismatchError("run produced mismatches", res.mismatches)
    return res
