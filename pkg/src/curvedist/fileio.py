"""File formats: JSON descriptions of curves, plane systems, and indicator
families, plus deterministic CSV/JSON report writers.

Scalars in input files are exact: integers, rational strings ("-3/4"),
floats (converted exactly), or [re, im] pairs of those.  Angles and
trigonometric coefficients in family files are symbolic strings ("pi/3",
"-1/2") evaluated in a namespace containing only pi.

Report files are byte-deterministic for a given report: fixed column
order, %.12g floats, sorted JSON keys, no timestamps.
"""

from __future__ import annotations

import json

import sympy as sp

from .entire import (
    ExpPolynomial,
    HolomorphicCurve,
    LinearODE,
    OdeSolution,
    Polynomial,
)
from .exactnum import QC
from .indicator import (
    IndicatorFamily,
    PiecewiseIndicator,
    TrigArc,
    zero_indicator,
)
from .projgeo import Hyperplane, HyperplaneSystem


def _scalar(x):
    if isinstance(x, list):
        if len(x) != 2:
            raise ValueError("complex scalar must be a [re, im] pair")
        return QC(QC.parse(x[0]).re, QC.parse(x[1]).re)
    return QC.parse(x)


def _component(spec, ode):
    kind = spec.get("type")
    if kind == "poly":
        return Polynomial([_scalar(c) for c in spec["coeffs"]])
    if kind == "exppoly":
        terms = {}
        for t in spec["terms"]:
            freq = _scalar(t["freq"])
            poly = Polynomial([_scalar(c) for c in t["coeffs"]])
            terms[freq] = terms.get(freq, Polynomial()) + poly
        return ExpPolynomial(terms)
    if kind == "ode":
        if ode is None:
            raise ValueError("ode component without an ode block")
        return OdeSolution(ode, [_scalar(c) for c in spec["data"]],
                           label=spec.get("label", ""))
    raise ValueError("unknown component type %r" % kind)


def load_curve(path):
    with open(path) as fh:
        doc = json.load(fh)
    ode = None
    if "ode" in doc:
        ode = LinearODE([
            Polynomial([_scalar(c) for c in coeffs])
            for coeffs in doc["ode"]["coeffs"]
        ])
    comps = [_component(c, ode) for c in doc["components"]]
    return HolomorphicCurve(comps, label=doc.get("label", "curve"))


def load_planes(path, dim=None):
    with open(path) as fh:
        doc = json.load(fh)
    planes = []
    for i, p in enumerate(doc["planes"]):
        vec = [_scalar(c) for c in p["vector"]]
        if dim is not None and len(vec) != dim:
            raise ValueError("plane %d has dimension %d, expected %d"
                             % (i, len(vec), dim))
        planes.append(Hyperplane(vec, name=p.get("name", "a%d" % i)))
    return HyperplaneSystem(planes, name=doc.get("name", "system"))


_ANGLE_NS = {"pi": sp.pi}


def _sym(x):
    if isinstance(x, str):
        return sp.sympify(x, locals=_ANGLE_NS, rational=True)
    if isinstance(x, int):
        return sp.Integer(x)
    if isinstance(x, float):
        # exact binary value; write "pi/3" style strings for non-rationals
        return sp.Rational(x)
    raise ValueError("cannot read symbolic value %r" % (x,))


def _arcs(entries):
    return [
        TrigArc(_sym(e["lo"]), _sym(e["hi"]), _sym(e.get("A", 0)),
                _sym(e.get("B", 0)))
        for e in entries
    ]


def load_family(path):
    """(family, h_wronskian, jumps, dependent_sets) from a family file."""
    with open(path) as fh:
        doc = json.load(fh)
    rho = _sym(doc["rho"])
    members = {
        name: PiecewiseIndicator(rho, _arcs(entries))
        for name, entries in doc["members"].items()
    }
    family = IndicatorFamily(members, rho=rho)
    if "wronskian" in doc:
        h_w = PiecewiseIndicator(rho, _arcs(doc["wronskian"]))
    else:
        h_w = zero_indicator(rho)
    jumps = tuple(doc["jumps"]) if "jumps" in doc else None
    dep = tuple(tuple(s) for s in doc.get("dependent_sets", []))
    return family, h_w, jumps, dep


# ---------------------------------------------------------------------------
# report output
# ---------------------------------------------------------------------------

# bumped whenever a JSON report key changes meaning or disappears
REPORT_SCHEMA = 1


def _fmt(x):
    if x is None:
        return ""
    return "%.12g" % x


def report_columns(report):
    cols = ["r", "T"]
    cols += ["m_%s" % name for name in report.plane_names]
    cols += ["mk_%d" % k for k in range(1, report.dim)]
    cols += ["N_%s" % name for name in report.plane_names]
    cols += ["N1", "S_thm1", "S_cartan", "prop_gap", "status"]
    return cols


def report_rows(report):
    out = []
    for row in report.rows:
        rec = [_fmt(row.r_used), _fmt(row.T)]
        rec += [_fmt(row.m[name]) for name in report.plane_names]
        rec += [_fmt(v) for v in row.m_k]
        rec += [_fmt(row.N[name]) for name in report.plane_names]
        rec += [_fmt(row.N1), _fmt(row.S_thm1), _fmt(row.S_cartan),
                _fmt(row.prop_gap), row.status]
        out.append(rec)
    return out


def write_csv(report, path):
    lines = [",".join(report_columns(report))]
    for rec in report_rows(report):
        lines.append(",".join(rec))
    text = "\n".join(lines) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return text


def report_dict(report):
    rows = []
    for row in report.rows:
        rows.append({
            "r_requested": row.r_requested,
            "r_used": row.r_used,
            "nudged": row.nudged,
            "T": row.T,
            "m": dict(row.m),
            "m_k": list(row.m_k),
            "n_counts": dict(row.n_counts),
            "N": dict(row.N),
            "N1": row.N1,
            "S_thm1": row.S_thm1,
            "S_cartan": row.S_cartan,
            "prop_gap": row.prop_gap,
            "status": row.status,
            "diagnostics": {
                k: (v if isinstance(v, (int, str, bool, type(None)))
                    else float(v))
                for k, v in row.diagnostics.items()
            },
        })
    return {
        "schema": REPORT_SCHEMA,
        "curve": report.curve_label,
        "system": report.system_name,
        "tolerance": report.spec.tol,
        "precision": report.spec.prec,
        "plane_names": list(report.plane_names),
        "dim": report.dim,
        "rows": rows,
        "invariant_violations": list(report.invariant_violations),
        "meta": report.meta,
    }


def write_json(report, path):
    text = json.dumps(report_dict(report), sort_keys=True, indent=1)
    with open(path, "w") as fh:
        fh.write(text + "\n")
    return text
