"""Renderers for run payloads: JSON (canonical), CSV (weight tables) and plain text."""
from __future__ import annotations

import csv
import io
import json

CODE_SECTIONS = ("enumerate", "predict", "puncture")


def render_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, default=_default) + "\n"


def _default(o):
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    if hasattr(o, "item"):
        return o.item()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def render_csv(payload: dict) -> str:
    """One (section, weight, frequency) row per table entry; non-table sections are skipped."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["section", "weight", "frequency"])
    for name in CODE_SECTIONS:
        sec = payload.get(name)
        if sec and "distribution" in sec:
            for weight, freq in sec["distribution"]:
                w.writerow([name, weight, freq])
    if "verify-lemmas" in payload:
        for row in payload["verify-lemmas"]:
            w.writerow(["verify-lemmas", row["identity"], int(row["passed"])])
    return buf.getvalue()


def render_text(payload: dict) -> str:
    out = []
    fld = payload.get("field")
    if fld:
        out.append(f"field: F_{fld['p']}^{fld['m']}  modulus {fld['modulus']}  theta {fld['theta']}")
    cl = payload.get("classify")
    if cl:
        for key in ("f", "g"):
            if key in cl:
                pr = cl[key]["profile"]
                terms = " + ".join(f"{t['coeff']}*x^{t['exp']}" for t in cl[key]["descriptor"])
                out.append(f"{key} = Tr({terms}): {pr['family']} s={pr['s']} eps={pr['epsilon']} "
                           f"l={pr['l']} h={pr['h']}")
        if "branches" in cl:
            out.append(f"branches: {', '.join(cl['branches']) or 'none'}")
    if "build" in payload:
        b = payload["build"]
        out.append(f"defining set: n={b['n']} k={b['k']} dual distance {b['dual_distance']}")
    for name in CODE_SECTIONS:
        sec = payload.get(name)
        if sec and "params" in sec:
            out.append(f"{name}: {sec['params']} {sec['enumerator']}  ({sec['provenance']})")
    cert = payload.get("certify")
    if cert:
        for key in ("full", "punctured"):
            if key in cert:
                c = cert[key]
                g = "optimal" if c["griesmer_optimal"] else f"gap {c['griesmer_gap']}"
                out.append(f"{key} {c['params']} griesmer: {g}; minimality: {c['ab_status']}; "
                           f"projective: {c['projective']}")
    for row in payload.get("verify-lemmas", []):
        out.append(f"{'PASS' if row['passed'] else 'FAIL'}  {row['identity']}")
    if "hits" in payload:
        out.append(f"search: {payload['candidates']} candidates, {payload['distinct_functions']} distinct, "
                   f"{len(payload['hits'])} hits")
        for h in payload["hits"]:
            pr = h["profile"]
            terms = " + ".join(f"{t['coeff']}*x^{t['exp']}" for t in h["descriptor"])
            out.append(f"  s={pr['s']} eps={pr['epsilon']:+d} l={pr['l']} {pr['family']}  Tr({terms})")
    for row in payload.get("branches_report", []):
        extra = f" ({row['reason']})" if "reason" in row else ""
        out.append(f"  {row['branch']:<24} {row['status']:<12} pairs={row['pairs']}{extra}")
    for mm in payload.get("mismatches", []):
        out.append(f"MISMATCH {mm}")
    out.append(f"status: {payload.get('status', 'ok')}")
    return "\n".join(out) + "\n"


RENDERERS = {"json": render_json, "csv": render_csv, "text": render_text}


def render(payload: dict, fmt: str) -> str:
    return RENDERERS[fmt](payload)
