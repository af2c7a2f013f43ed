"""
Deterministic text serialization of solve reports.

The document is JSON with a fixed key order.  Floats are written with 17
significant digits so that they parse back to the same doubles.  Nothing
time- or machine-dependent goes in, so equal inputs give equal bytes.
"""

import hashlib
import json
import math

import numpy as np

from .solver import Residuals, SolveReport, Status

FORMAT = "angled-report"
FORMAT_VERSION = 1
TOOL_VERSION = "0.1.0"

CAVEAT_RIGOROUS = "rigorous: the volume maximum is an interior critical point"
CAVEAT_CONDITIONAL = ("conditional: no interior critical point was found, so the bound "
                      "holds only if the conjectured inequality for angled triangulations does")


def input_digest(text):
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def _float(x):
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return x


def report_to_dict(rep, source_text="", options=None):
    res = rep.residuals
    return {
        "format": FORMAT,
        "version": FORMAT_VERSION,
        "tool_version": TOOL_VERSION,
        "input_digest": input_digest(source_text),
        "name": rep.name,
        "status": rep.status.value,
        "fillings": [{"cusp": c, "p": p, "q": q} for c, p, q in rep.fillings],
        "options": dict(options or {}),
        "iterations": rep.iterations,
        "gradient_norm": _float(rep.gradient_norm),
        "volume": _float(rep.volume),
        "lower_bound": {
            "value": _float(rep.lower_bound),
            "rigorous": rep.bound_rigorous,
            "caveat": (CAVEAT_RIGOROUS if rep.bound_rigorous else CAVEAT_CONDITIONAL)
            if rep.lower_bound is not None else "no feasible point",
        },
        "residuals": None if res is None else {
            "edge": _float(res.edge),
            "edge_imag": _float(res.edge_imag),
            "completeness": _float(res.completeness),
            "filling": _float(res.filling),
        },
        "verified": rep.verified,
        "margin": _float(rep.t_star),
        "thin": rep.thin,
        "basis": list(rep.basis),
        "angles": None if rep.angles is None else [_float(a) for a in rep.angles],
        "shapes": None if rep.shapes is None else [[_float(z.real), _float(z.imag)] for z in rep.shapes],
        "volume_history": [_float(v) for v in rep.history],
        "message": rep.message,
    }


def _emit(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        text = "%.17g" % obj
        return text if any(ch in text for ch in ".en") else text + ".0"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(x is None or isinstance(x, (int, float, str)) for x in obj):
            return "[" + ", ".join(_emit(x, indent, level + 1) for x in obj) + "]"
        items = [pad + _emit(x, indent, level + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc):
    return _emit(doc, 2, 0) + "\n"


def loads(text):
    doc = json.loads(text)
    if doc.get("format") != FORMAT:
        raise ValueError("not a report document")
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported report version {doc.get('version')!r}")
    return doc


def report_from_dict(doc):
    """Rebuild a :class:`SolveReport` from a parsed document."""
    res = doc["residuals"]
    return SolveReport(
        status=Status(doc["status"]),
        name=doc["name"],
        angles=None if doc["angles"] is None else np.array(doc["angles"]),
        shapes=None if doc["shapes"] is None else np.array([complex(a, b) for a, b in doc["shapes"]]),
        volume=doc["volume"],
        lower_bound=doc["lower_bound"]["value"],
        bound_rigorous=doc["lower_bound"]["rigorous"],
        residuals=None if res is None else Residuals(**res),
        verified=doc["verified"],
        iterations=doc["iterations"],
        gradient_norm=doc["gradient_norm"],
        history=list(doc["volume_history"]),
        fillings=tuple((f["cusp"], f["p"], f["q"]) for f in doc["fillings"]),
        t_star=doc["margin"],
        thin=doc["thin"],
        basis=tuple(doc["basis"]),
        message=doc["message"],
    )
