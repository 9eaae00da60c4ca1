"""Durable JSON formats for portfolio models, evidence, and sessions.

A model document names its variables, declares prior beliefs (one of
the six moment-matrix kinds), and gives the portfolio blend with its
factor models.  Serialization is canonical: fixed key order, two-space
indent, shortest round-trip float rendering, trailing newline.  Parsing
is strict and reports the JSON path of the offending field.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, replace
from pathlib import Path

from .moment import (
    BeliefError,
    MomentMatrix,
    from_linear_equation,
    from_normal,
    from_observation,
    from_regression,
    proper_lbf,
    vacuous,
)
from .portfolio import EvidenceItem, FactorModel, PortfolioSpec

FORMAT_VERSION = 1

BELIEF_KINDS = ("normal", "observation", "vacuous", "proper", "linear_equation", "regression")

FILE_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_-]*$")


class ModelFormatError(BeliefError, ValueError):
    """A document failed to parse; the message carries the field path."""

    def __init__(self, message: str, path: str | None = None):
        super().__init__(message)
        self.path = path


def _fail(path: str, msg: str):
    raise ModelFormatError(f"{path}: {msg}", path=path)


def _obj(x, path: str) -> dict:
    if not isinstance(x, dict):
        _fail(path, f"expected an object, got {type(x).__name__}")
    return x


def _arr(x, path: str) -> list:
    if not isinstance(x, list):
        _fail(path, f"expected an array, got {type(x).__name__}")
    return x


def _str(x, path: str) -> str:
    if not isinstance(x, str) or not x:
        _fail(path, f"expected a non-empty string, got {x!r}")
    return x


def _num(x, path: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        _fail(path, f"expected a number, got {type(x).__name__}")
    if not math.isfinite(x):
        _fail(path, f"expected a finite number, got {x!r}")
    return float(x)


def _vec(x, path: str) -> tuple[float, ...]:
    return tuple(_num(v, f"{path}[{i}]") for i, v in enumerate(_arr(x, path)))


def _mat(x, path: str) -> tuple[tuple[float, ...], ...]:
    return tuple(_vec(row, f"{path}[{i}]") for i, row in enumerate(_arr(x, path)))


def _names(x, path: str) -> tuple[str, ...]:
    vs = tuple(_str(v, f"{path}[{i}]") for i, v in enumerate(_arr(x, path)))
    if len(set(vs)) != len(vs):
        _fail(path, "names must be distinct")
    return vs


def _take(obj: dict, key: str, path: str, required: bool = True):
    if key not in obj:
        if required:
            _fail(path, f"missing field {key!r}")
        return None
    return obj.pop(key)


def _no_extras(obj: dict, path: str):
    if obj:
        _fail(path, f"unknown fields: {sorted(obj)}")


_KIND_FIELDS = {
    "normal": ("variables", "mean", "cov"),
    "proper": ("ignorant", "known", "mean", "cov"),
    "observation": ("variables", "values"),
    "vacuous": ("variables",),
    "linear_equation": ("inputs", "outputs", "coefficients", "intercept"),
    "regression": ("inputs", "outputs", "coefficients", "intercept", "residual_cov"),
}


@dataclass(frozen=True)
class BeliefDecl:
    """One declared belief: a kind plus the constructor's parameters."""

    label: str
    kind: str
    variables: tuple[str, ...] = ()
    ignorant: tuple[str, ...] = ()
    known: tuple[str, ...] = ()
    mean: tuple[float, ...] = ()
    cov: tuple[tuple[float, ...], ...] = ()
    values: tuple[float, ...] = ()
    inputs: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()
    coefficients: tuple[tuple[float, ...], ...] = ()
    intercept: tuple[float, ...] = ()
    residual_cov: tuple[tuple[float, ...], ...] = ()

    def domain(self) -> tuple[str, ...]:
        if self.kind in ("linear_equation", "regression"):
            return self.inputs + self.outputs
        if self.kind == "proper":
            return self.ignorant + self.known
        return self.variables

    def to_matrix(self) -> MomentMatrix:
        if self.kind == "normal":
            return from_normal(self.variables, self.mean, self.cov)
        if self.kind == "proper":
            return proper_lbf(self.ignorant, self.known, self.mean, self.cov)
        if self.kind == "observation":
            return from_observation(self.variables, self.values)
        if self.kind == "vacuous":
            return vacuous(self.variables)
        if self.kind == "linear_equation":
            return from_linear_equation(
                self.inputs, self.outputs, self.coefficients, self.intercept
            )
        if self.kind == "regression":
            return from_regression(
                self.inputs, self.outputs, self.coefficients, self.intercept,
                self.residual_cov,
            )
        raise ModelFormatError(f"unknown belief kind {self.kind!r}")


@dataclass(frozen=True)
class ModelDocument:
    """Parsed model file: declared beliefs plus the portfolio blend.

    ``portfolio`` holds no priors; the declared beliefs become the
    spec's priors through :func:`to_spec`.
    """

    format_version: int
    variables: tuple[str, ...]
    beliefs: tuple[BeliefDecl, ...]
    portfolio: PortfolioSpec
    evidence: tuple[EvidenceItem, ...] = ()


def to_spec(doc: ModelDocument) -> PortfolioSpec:
    """Portfolio spec with the document's beliefs attached as priors."""
    priors = tuple((b.label, b.to_matrix()) for b in doc.beliefs)
    return replace(doc.portfolio, priors=priors)


def _parse_belief(x, path: str) -> BeliefDecl:
    obj = dict(_obj(x, path))
    label = _str(_take(obj, "label", path), f"{path}.label")
    kind = _str(_take(obj, "kind", path), f"{path}.kind")
    if kind not in BELIEF_KINDS:
        _fail(f"{path}.kind", f"unknown belief kind {kind!r}; expected one of {list(BELIEF_KINDS)}")
    fields = {}
    for name in _KIND_FIELDS[kind]:
        raw = _take(obj, name, path)
        p = f"{path}.{name}"
        if name in ("variables", "ignorant", "known", "inputs", "outputs"):
            fields[name] = _names(raw, p)
        elif name in ("mean", "values", "intercept"):
            fields[name] = _vec(raw, p)
        else:
            fields[name] = _mat(raw, p)
    _no_extras(obj, path)
    decl = BeliefDecl(label=label, kind=kind, **fields)
    try:
        decl.to_matrix()  # dimension and definiteness validation
    except (BeliefError, ValueError) as e:
        _fail(path, str(e))
    return decl


def _parse_factor_model(x, path: str) -> FactorModel:
    obj = dict(_obj(x, path))
    stock = _str(_take(obj, "stock", path), f"{path}.stock")
    intercept = _num(_take(obj, "intercept", path), f"{path}.intercept")
    betas_raw = _obj(_take(obj, "betas", path), f"{path}.betas")
    betas = tuple(
        (name, _num(v, f"{path}.betas[{name!r}]")) for name, v in betas_raw.items()
    )
    residual = _str(_take(obj, "residual", path), f"{path}.residual")
    sd_raw = _take(obj, "residual_sd", path, required=False)
    residual_sd = None if sd_raw is None else _num(sd_raw, f"{path}.residual_sd")
    _no_extras(obj, path)
    try:
        return FactorModel(stock, intercept, betas, residual, residual_sd)
    except (BeliefError, ValueError) as e:
        _fail(path, str(e))


def _parse_evidence_item(x, path: str) -> EvidenceItem:
    obj = dict(_obj(x, path))
    variable = _str(_take(obj, "variable", path), f"{path}.variable")
    kind = _str(_take(obj, "kind", path), f"{path}.kind")
    note_raw = _take(obj, "note", path, required=False)
    note = "" if note_raw is None else _str(note_raw, f"{path}.note")
    if kind == "normal":
        mean = _num(_take(obj, "mean", path), f"{path}.mean")
        sd = _num(_take(obj, "sd", path), f"{path}.sd")
    elif kind == "observation":
        mean = _num(_take(obj, "value", path), f"{path}.value")
        sd = None
    else:
        _fail(f"{path}.kind", f"expected 'normal' or 'observation', got {kind!r}")
    _no_extras(obj, path)
    try:
        return EvidenceItem(variable, kind, mean, sd, note)
    except (BeliefError, ValueError) as e:
        _fail(path, str(e))


def _decode(text) -> dict:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ModelFormatError(f"document is not utf-8: {e}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None


def parse_model(text) -> ModelDocument:
    """Validate a model document from JSON bytes or text."""
    obj = dict(_obj(_decode(text), "document"))
    version = _take(obj, "format_version", "document")
    if version != FORMAT_VERSION:
        _fail("document.format_version", f"unsupported version {version!r}, expected {FORMAT_VERSION}")
    variables = _names(_take(obj, "variables", "document"), "document.variables")
    beliefs = tuple(
        _parse_belief(b, f"beliefs[{i}]")
        for i, b in enumerate(_arr(_take(obj, "beliefs", "document"), "document.beliefs"))
    )
    labels = [b.label for b in beliefs]
    if len(set(labels)) != len(labels):
        _fail("document.beliefs", "belief labels must be distinct")

    ppath = "portfolio"
    pobj = dict(_obj(_take(obj, "portfolio", "document"), ppath))
    pvar_raw = _take(pobj, "variable", ppath, required=False)
    pvar = "P" if pvar_raw is None else _str(pvar_raw, f"{ppath}.variable")
    stocks = _names(_take(pobj, "stocks", ppath), f"{ppath}.stocks")
    weights = _vec(_take(pobj, "weights", ppath), f"{ppath}.weights")
    models = tuple(
        _parse_factor_model(m, f"{ppath}.factor_models[{i}]")
        for i, m in enumerate(_arr(_take(pobj, "factor_models", ppath), f"{ppath}.factor_models"))
    )
    _no_extras(pobj, ppath)
    try:
        spec = PortfolioSpec(stocks, weights, models, priors=(), portfolio_variable=pvar)
    except (BeliefError, ValueError) as e:
        _fail(ppath, str(e))

    ev_raw = _take(obj, "evidence", "document", required=False)
    evidence = ()
    if ev_raw is not None:
        evidence = tuple(
            _parse_evidence_item(e, f"evidence[{i}]")
            for i, e in enumerate(_arr(ev_raw, "document.evidence"))
        )
    _no_extras(obj, "document")

    declared = set(variables)
    used = {pvar, *stocks}
    for m in models:
        used.update(m.factors)
        used.add(m.residual)
    for b in beliefs:
        used.update(b.domain())
    for e in evidence:
        used.add(e.variable)
    undeclared = sorted(used - declared)
    if undeclared:
        _fail("document.variables", f"used but not declared: {undeclared}")
    return ModelDocument(FORMAT_VERSION, variables, beliefs, spec, evidence)


def _belief_payload(b: BeliefDecl) -> dict:
    out: dict = {"label": b.label, "kind": b.kind}
    for name in _KIND_FIELDS[b.kind]:
        value = getattr(b, name)
        if name in ("variables", "ignorant", "known", "inputs", "outputs"):
            out[name] = list(value)
        elif name in ("mean", "values", "intercept"):
            out[name] = [float(v) for v in value]
        else:
            out[name] = [[float(v) for v in row] for row in value]
    return out


def _evidence_payload(e: EvidenceItem) -> dict:
    out: dict = {"variable": e.variable, "kind": e.kind}
    if e.kind == "normal":
        out["mean"] = float(e.mean)
        out["sd"] = float(e.sd)
    else:
        out["value"] = float(e.mean)
    if e.note:
        out["note"] = e.note
    return out


def _dump(payload: dict) -> bytes:
    return (json.dumps(payload, indent=2, allow_nan=False) + "\n").encode("utf-8")


def serialize_model(doc: ModelDocument) -> bytes:
    """Canonical bytes: parse(serialize(doc)) reproduces the document."""
    spec = doc.portfolio
    payload: dict = {
        "format_version": doc.format_version,
        "variables": list(doc.variables),
        "beliefs": [_belief_payload(b) for b in doc.beliefs],
        "portfolio": {
            "variable": spec.portfolio_variable,
            "stocks": list(spec.stocks),
            "weights": [float(w) for w in spec.weights],
            "factor_models": [
                {
                    "stock": m.stock,
                    "intercept": float(m.intercept),
                    "betas": {f: float(b) for f, b in m.betas},
                    "residual": m.residual,
                    **({} if m.residual_sd is None else {"residual_sd": float(m.residual_sd)}),
                }
                for m in spec.factor_models
            ],
        },
    }
    if doc.evidence:
        payload["evidence"] = [_evidence_payload(e) for e in doc.evidence]
    return _dump(payload)


def parse_evidence_item(obj, path: str = "evidence") -> EvidenceItem:
    """One evidence object (e.g. an HTTP body) to a validated item."""
    return _parse_evidence_item(obj, path)


def parse_evidence_file(text) -> tuple[EvidenceItem, ...]:
    """Standalone evidence list: {format_version, evidence: [...]}."""
    obj = dict(_obj(_decode(text), "document"))
    version = _take(obj, "format_version", "document")
    if version != FORMAT_VERSION:
        _fail("document.format_version", f"unsupported version {version!r}, expected {FORMAT_VERSION}")
    items = tuple(
        _parse_evidence_item(e, f"evidence[{i}]")
        for i, e in enumerate(_arr(_take(obj, "evidence", "document"), "document.evidence"))
    )
    _no_extras(obj, "document")
    return items


def serialize_evidence(items) -> bytes:
    return _dump(
        {
            "format_version": FORMAT_VERSION,
            "evidence": [_evidence_payload(e) for e in items],
        }
    )


# ---------------------------------------------------------------------------
# Model directories and session stores
# ---------------------------------------------------------------------------


def _checked_id(file_id: str, what: str) -> str:
    if not FILE_ID_RE.match(file_id):
        raise ModelFormatError(f"invalid {what} {file_id!r}")
    return file_id


def list_models(model_dir) -> tuple[str, ...]:
    """Ids (file stems) of every document in the directory that parses."""
    ids = []
    for p in sorted(Path(model_dir).glob("*.json")):
        if not FILE_ID_RE.match(p.stem):
            continue
        try:
            parse_model(p.read_bytes())
        except ModelFormatError:
            continue
        ids.append(p.stem)
    return tuple(ids)


def load_model(model_dir, model_id: str) -> ModelDocument:
    path = Path(model_dir) / f"{_checked_id(model_id, 'model id')}.json"
    if not path.is_file():
        raise FileNotFoundError(f"no model {model_id!r} in {model_dir}")
    return parse_model(path.read_bytes())


@dataclass(frozen=True)
class SessionRecord:
    """A base model plus the evidence applied so far, replayable."""

    session_id: str
    model_id: str
    created_at: str
    evidence: tuple[EvidenceItem, ...] = ()


def serialize_session(rec: SessionRecord) -> bytes:
    return _dump(
        {
            "format_version": FORMAT_VERSION,
            "session_id": rec.session_id,
            "model_id": rec.model_id,
            "created_at": rec.created_at,
            "evidence": [_evidence_payload(e) for e in rec.evidence],
        }
    )


def parse_session(text) -> SessionRecord:
    obj = dict(_obj(_decode(text), "session"))
    version = _take(obj, "format_version", "session")
    if version != FORMAT_VERSION:
        _fail("session.format_version", f"unsupported version {version!r}, expected {FORMAT_VERSION}")
    sid = _checked_id(_str(_take(obj, "session_id", "session"), "session.session_id"), "session id")
    model_id = _checked_id(_str(_take(obj, "model_id", "session"), "session.model_id"), "model id")
    created_at = _str(_take(obj, "created_at", "session"), "session.created_at")
    evidence = tuple(
        _parse_evidence_item(e, f"evidence[{i}]")
        for i, e in enumerate(_arr(_take(obj, "evidence", "session"), "session.evidence"))
    )
    _no_extras(obj, "session")
    return SessionRecord(sid, model_id, created_at, evidence)


def save_session(session_dir, rec: SessionRecord) -> Path:
    """Write the record canonically; replace any previous version atomically."""
    d = Path(session_dir)
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"{_checked_id(rec.session_id, 'session id')}.json"
    tmp = path.with_suffix(".json.tmp")
    tmp.write_bytes(serialize_session(rec))
    tmp.replace(path)
    return path


def load_session(session_dir, session_id: str) -> SessionRecord:
    path = Path(session_dir) / f"{_checked_id(session_id, 'session id')}.json"
    if not path.is_file():
        raise FileNotFoundError(f"no session {session_id!r} in {session_dir}")
    return parse_session(path.read_bytes())
