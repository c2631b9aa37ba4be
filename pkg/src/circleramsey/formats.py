"""JSON documents for every domain value.

Rationals are always the strings ``"num/den"``; decimal or float input is a
schema error.  Loaders reject unknown fields and report the JSON path of the
first problem.
"""
from __future__ import annotations

import json
import os
import re
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .circle import ArcUnion, from_intervals
from .coloring import EdgeColoring, RamseyCertificate
from .dynamics import PLCircleMap, make_pl, make_times_p
from .separated import SeparatedSetReport
from .verifiers import ShadowResult, TransferResult, VerificationReport

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")
TOOL = {"name": "circleramsey", "version": __version__}


class SchemaError(ValueError):
    def __init__(self, path: str, msg: str):
        super().__init__(f"{path or '$'}: {msg}")
        self.path = path


def fmt(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: Any, path: str = "") -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise SchemaError(path, f"expected a rational string 'num/den', got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not _RATIONAL.match(s.strip()):
        raise SchemaError(path, f"{s!r} is not an exact rational 'num/den'")
    num, _, den = s.strip().partition("/")
    if den and int(den) == 0:
        raise SchemaError(path, "zero denominator")
    return Fraction(int(num), int(den or 1))


def _obj(doc, path, required, optional=()):
    if not isinstance(doc, dict):
        raise SchemaError(path, f"expected an object, got {type(doc).__name__}")
    allowed = set(required) | set(optional) | {"tool"}
    for key in doc:
        if key not in allowed:
            raise SchemaError(f"{path}.{key}", "unknown field")
    for key in required:
        if key not in doc:
            raise SchemaError(f"{path}.{key}", "missing field")
    return doc


def _int(v, path, lo=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(path, f"expected an integer, got {v!r}")
    if lo is not None and v < lo:
        raise SchemaError(path, f"must be >= {lo}")
    return v


def _bool(v, path):
    if not isinstance(v, bool):
        raise SchemaError(path, f"expected true/false, got {v!r}")
    return v


def _list(v, path):
    if not isinstance(v, list):
        raise SchemaError(path, f"expected a list, got {type(v).__name__}")
    return v


def _rationals(v, path):
    return [parse_rational(x, f"{path}[{i}]") for i, x in enumerate(_list(v, path))]


# ---- generic encoding for report payloads ---------------------------------

def encode(value):
    if isinstance(value, Fraction):
        return fmt(value)
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, dict):
        return {k: encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    raise TypeError(f"cannot encode {type(value).__name__}")


def _decode(value):
    if isinstance(value, str) and "/" in value and _RATIONAL.match(value):
        return parse_rational(value)
    if isinstance(value, dict):
        return {k: _decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return tuple(_decode(v) for v in value)
    return value


# ---- arc unions and maps ---------------------------------------------------

def arcunion_to_json(A: ArcUnion) -> dict:
    return {
        "full_circle": A.full_circle,
        "arcs": [{"start": fmt(a.start), "length": fmt(a.length)} for a in A.arcs],
    }


def arcunion_from_json(doc, path="") -> ArcUnion:
    _obj(doc, path, ("full_circle", "arcs"))
    full = _bool(doc["full_circle"], f"{path}.full_circle")
    arcs = []
    for i, a in enumerate(_list(doc["arcs"], f"{path}.arcs")):
        p = f"{path}.arcs[{i}]"
        _obj(a, p, ("start", "length"))
        start = parse_rational(a["start"], f"{p}.start")
        length = parse_rational(a["length"], f"{p}.length")
        if not 0 < length <= 1:
            raise SchemaError(f"{p}.length", "arc length must lie in (0, 1]")
        arcs.append((start, start + length))
    if full:
        if arcs:
            raise SchemaError(f"{path}.arcs", "full circle cannot list arcs")
        return ArcUnion(full_circle=True)
    out = from_intervals(arcs)
    if len(out.arcs) != len(arcs):
        raise SchemaError(f"{path}.arcs", "arcs overlap")
    return out


def map_to_json(f: PLCircleMap) -> dict:
    return f.to_json()


def map_from_json(doc, path="") -> PLCircleMap:
    if not isinstance(doc, dict) or "type" not in doc:
        raise SchemaError(path, "map needs a 'type' field")
    if doc["type"] == "times_p":
        _obj(doc, path, ("type", "p"))
        return make_times_p(_int(doc["p"], f"{path}.p", lo=1))
    if doc["type"] == "pl":
        _obj(doc, path, ("type", "lift"))
        bps = []
        for i, pair in enumerate(_list(doc["lift"], f"{path}.lift")):
            p = f"{path}.lift[{i}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise SchemaError(p, "expected a [t, F(t)] pair")
            bps.append((parse_rational(pair[0], f"{p}[0]"), parse_rational(pair[1], f"{p}[1]")))
        try:
            return make_pl(bps)
        except ValueError as exc:
            raise SchemaError(f"{path}.lift", str(exc)) from exc
    raise SchemaError(f"{path}.type", f"unknown map type {doc['type']!r}")


# ---- separated sets --------------------------------------------------------

def report_to_json(rep: SeparatedSetReport) -> dict:
    doc = {
        "n": rep.n,
        "eps": fmt(rep.eps),
        "points": [fmt(x) for x in rep.points],
        "certified": rep.certified,
        "witnesses": None if rep.witnesses is None else [[i, j, s, fmt(w)] for i, j, s, w in rep.witnesses],
        "method": rep.method,
    }
    if rep.maximal is not None:
        doc["maximal"] = rep.maximal
    if rep.index_counts:
        doc["index_counts"] = list(rep.index_counts)
    if rep.witness_range is not None:
        doc["witness_range"] = [fmt(x) for x in rep.witness_range]
    if rep.first_failure is not None:
        doc["first_failure"] = list(rep.first_failure)
    return doc


def report_from_json(doc, path="") -> SeparatedSetReport:
    _obj(
        doc, path,
        ("n", "eps", "points", "certified", "method"),
        ("witnesses", "maximal", "index_counts", "witness_range", "first_failure", "packing_upper_bound"),
    )
    method = doc["method"]
    if method not in ("greedy", "exact", "external"):
        raise SchemaError(f"{path}.method", f"unknown method {method!r}")
    witnesses = doc.get("witnesses")
    if witnesses is not None:
        rows = []
        for k, w in enumerate(_list(witnesses, f"{path}.witnesses")):
            p = f"{path}.witnesses[{k}]"
            if not isinstance(w, list) or len(w) != 4:
                raise SchemaError(p, "expected [i, j, index, dist]")
            rows.append((_int(w[0], f"{p}[0]"), _int(w[1], f"{p}[1]"), _int(w[2], f"{p}[2]"),
                         parse_rational(w[3], f"{p}[3]")))
        witnesses = tuple(rows)
    wr = doc.get("witness_range")
    ff = doc.get("first_failure")
    return SeparatedSetReport(
        points=tuple(_rationals(doc["points"], f"{path}.points")),
        n=_int(doc["n"], f"{path}.n", lo=1),
        eps=parse_rational(doc["eps"], f"{path}.eps"),
        certified=_bool(doc["certified"], f"{path}.certified"),
        method=method,
        witnesses=witnesses,
        maximal=None if doc.get("maximal") is None else _bool(doc["maximal"], f"{path}.maximal"),
        index_counts=tuple(_int(c, f"{path}.index_counts") for c in doc.get("index_counts", [])),
        witness_range=None if wr is None else tuple(_rationals(wr, f"{path}.witness_range")),
        first_failure=None if ff is None else tuple(_int(v, f"{path}.first_failure") for v in ff),
    )


# ---- colourings and certificates -------------------------------------------

def coloring_to_json(c: EdgeColoring) -> dict:
    return {
        "n": c.num_colors,
        "vertices": [fmt(v) if isinstance(v, Fraction) else str(v) for v in c.vertices],
        "edges": [[i, j, col] for i, j, col in c.edges()],
    }


def coloring_from_json(doc, path="") -> EdgeColoring:
    _obj(doc, path, ("n", "vertices", "edges"))
    n = _int(doc["n"], f"{path}.n", lo=1)
    labels = _list(doc["vertices"], f"{path}.vertices")
    vertices = []
    for i, v in enumerate(labels):
        if not isinstance(v, str):
            raise SchemaError(f"{path}.vertices[{i}]", "vertex labels are strings")
        vertices.append(parse_rational(v) if _RATIONAL.match(v) else v)
    m = len(vertices)
    edges = _list(doc["edges"], f"{path}.edges")
    if len(edges) != m * (m - 1) // 2:
        raise SchemaError(f"{path}.edges", f"expected {m * (m - 1) // 2} edges for {m} vertices, got {len(edges)}")
    colors = np.full((m, m), -1, dtype=np.int16)
    for k, e in enumerate(edges):
        p = f"{path}.edges[{k}]"
        if not isinstance(e, list) or len(e) != 3:
            raise SchemaError(p, "expected [i, j, color]")
        i, j, col = (_int(x, p) for x in e)
        if not 0 <= i < j < m:
            raise SchemaError(p, "need 0 <= i < j < vertex count")
        if not 0 <= col < n:
            raise SchemaError(p, f"colour {col} outside [0, {n - 1}]")
        if colors[i, j] != -1:
            raise SchemaError(p, "duplicate edge")
        colors[i, j] = colors[j, i] = col
    return EdgeColoring(vertices, n, colors)


def certificate_to_json(c: RamseyCertificate) -> dict:
    return {
        "claim": c.claim,
        "k_plus_1": c.k_plus_1,
        "colors": c.colors,
        "vertices": c.vertices,
        "digest": c.digest,
        "capacity": c.capacity,
    }


def certificate_from_json(doc, path="") -> RamseyCertificate:
    _obj(doc, path, ("claim", "k_plus_1", "colors", "vertices", "digest", "capacity"))
    cert = RamseyCertificate(
        k_plus_1=_int(doc["k_plus_1"], f"{path}.k_plus_1", lo=1),
        colors=_int(doc["colors"], f"{path}.colors", lo=1),
        vertices=_int(doc["vertices"], f"{path}.vertices", lo=0),
        digest=str(doc["digest"]),
        capacity=str(doc["capacity"]),
    )
    if doc["claim"] != cert.claim:
        raise SchemaError(f"{path}.claim", f"claim {doc['claim']!r} disagrees with its fields ({cert.claim!r})")
    return cert


# ---- verifier outputs ------------------------------------------------------

def verification_to_json(rep: VerificationReport) -> dict:
    return {
        "claim_id": rep.claim_id,
        "parameters": encode(rep.parameters),
        "verdict": rep.verdict,
        "details": encode(rep.details),
        "exceptions": encode(rep.exceptions),
        "seed": rep.seed,
    }


def verification_from_json(doc, path="") -> VerificationReport:
    _obj(doc, path, ("claim_id", "parameters", "verdict", "details"), ("exceptions", "seed"))
    try:
        return VerificationReport(
            claim_id=doc["claim_id"],
            parameters=_decode(doc["parameters"]),
            verdict=doc["verdict"],
            details=[_decode(d) for d in _list(doc["details"], f"{path}.details")],
            seed=doc.get("seed"),
            exceptions=[_decode(d) for d in _list(doc.get("exceptions", []), f"{path}.exceptions")],
        )
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


def shadow_to_json(s: ShadowResult) -> dict:
    return {"y": fmt(s.y), "p": s.p, "deviations": [fmt(d) for d in s.deviations]}


def transfer_to_json(t: TransferResult) -> dict:
    return {
        "p": t.p,
        "delta": None if t.delta is None else fmt(t.delta),
        "points": [fmt(y) for y in t.points],
        "report": report_to_json(t.report),
    }


# ---- files -----------------------------------------------------------------

def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def write_atomic(path, text: str) -> Path:
    """Write via a temp file in the target directory and rename into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load_json(path) -> Any:
    with open(path) as fh:
        return json.load(fh)
