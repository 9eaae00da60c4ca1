"""Command-line entry points: batch evaluation and the HTTP service.

``linbelief evaluate`` prints a 4-decimal moment-matrix table, per-asset
mean/sd lines, and tangency weights; ``--format json`` emits the same
numbers at full precision.  ``linbelief serve`` runs the what-if HTTP
service over a model directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from decimal import ROUND_HALF_UP, Decimal, localcontext
from pathlib import Path

import numpy as np

from .modelio import parse_evidence_file, parse_model, to_spec
from .moment import BeliefError
from .portfolio import evaluate, query_summary, tangency_weights

DEFAULT_BIND = "127.0.0.1:8420"
BIND_ENV_VAR = "LINBELIEF_BIND"


def _fmt(x: float) -> str:
    # snap float noise at 12 decimals, then round half-up like the
    # published tables: 0.03425 arrives as 0.0342499999999..., yet must
    # print 0.0343
    with localcontext() as ctx:
        ctx.prec = 60
        d = Decimal(repr(float(x))).quantize(Decimal("1e-12"), rounding=ROUND_HALF_UP)
        d = d.quantize(Decimal("0.0001"), rounding=ROUND_HALF_UP)
    return f"{abs(d) if d == 0 else d:.4f}"


def _moment_table(variables, mean, cov) -> list[str]:
    label_w = max(len(v) for v in ("mean",) + tuple(variables))
    cell_w = max(
        [len(v) for v in variables]
        + [len(_fmt(x)) for x in mean]
        + [len(_fmt(x)) for row in cov for x in row]
    )
    def row(label, cells):
        return "  ".join([label.ljust(label_w)] + [c.rjust(cell_w) for c in cells])
    lines = [row("", list(variables))]
    lines.append(row("mean", [_fmt(x) for x in mean]))
    for v, r in zip(variables, cov):
        lines.append(row(v, [_fmt(x) for x in r]))
    return lines


def _summary_lines(variables, mean, cov) -> list[str]:
    sds = np.sqrt(np.maximum(np.diag(np.asarray(cov, dtype=float)), 0.0))
    label_w = max(len(v) for v in variables)
    return [
        f"{v.ljust(label_w)}  mean {_fmt(m)}  sd {_fmt(s)}"
        for v, m, s in zip(variables, mean, sds)
    ]


def _weight_lines(stocks, weights, riskless_rate) -> list[str]:
    lines = [f"Tangency weights (riskless rate {_fmt(riskless_rate)})"]
    if weights is None:
        lines.append("unavailable: stock covariance block is singular")
        return lines
    label_w = max(len(s) for s in stocks)
    lines += [f"{s.ljust(label_w)}  {_fmt(w)}" for s, w in zip(stocks, weights)]
    return lines


def _render_table(variables, mean, cov, weight_block) -> str:
    lines = [f"Moment matrix ({', '.join(variables)})"]
    lines += _moment_table(variables, mean, cov)
    lines.append("")
    lines.append("Asset summary")
    lines += _summary_lines(variables, mean, cov)
    if weight_block is not None:
        lines.append("")
        lines += weight_block
    return "\n".join(lines) + "\n"


def _render_json(variables, mean, cov, stocks, weights, riskless_rate) -> str:
    sds = np.sqrt(np.maximum(np.diag(np.asarray(cov, dtype=float)), 0.0))
    payload = {
        "variables": list(variables),
        "mean": [float(x) for x in mean],
        "covariance": [[float(x) for x in row] for row in cov],
        "assets": {
            v: {"mean": float(m), "sd": float(s)}
            for v, m, s in zip(variables, mean, sds)
        },
        "riskless_rate": float(riskless_rate),
        "tangency_weights": (
            None if weights is None
            else {s: float(w) for s, w in zip(stocks, weights)}
        ),
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def cmd_evaluate(args) -> int:
    model_path = Path(args.model)
    if not model_path.is_file():
        print(f"error: model file not found: {model_path}", file=sys.stderr)
        return 1
    doc = parse_model(model_path.read_bytes())
    evidence = list(doc.evidence)
    if args.evidence is not None:
        ev_path = Path(args.evidence)
        if not ev_path.is_file():
            print(f"error: evidence file not found: {ev_path}", file=sys.stderr)
            return 1
        evidence += list(parse_evidence_file(ev_path.read_bytes()))
    spec = to_spec(doc)

    if args.query is None:
        report = evaluate(spec, evidence, riskless_rate=args.riskless_rate)
        variables, mean, cov = report.variables, report.mean, report.covariance
        stocks, weights = spec.stocks, report.optimal_weights
    else:
        query = tuple(v.strip() for v in args.query.split(",") if v.strip())
        if not query:
            print("error: --query needs at least one variable", file=sys.stderr)
            return 1
        variables, mean, cov = query_summary(spec, query, evidence)
        stocks = tuple(s for s in spec.stocks if s in set(variables))
        if len(stocks) >= 2:
            idx = [variables.index(s) for s in stocks]
            try:
                weights = tangency_weights(
                    mean[list(idx)], cov[np.ix_(idx, idx)], args.riskless_rate
                )
            except (BeliefError, ValueError):
                weights = None
        else:
            stocks, weights = (), None

    if args.format == "json":
        out = _render_json(variables, mean, cov, stocks, weights, args.riskless_rate)
    else:
        wb = _weight_lines(stocks, weights, args.riskless_rate) if stocks else None
        out = _render_table(variables, mean, cov, wb)
    sys.stdout.write(out)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    bind = args.bind or os.environ.get(BIND_ENV_VAR, DEFAULT_BIND)
    host, sep, port_s = bind.rpartition(":")
    if not sep or not port_s.isdigit():
        print(f"error: bind address must be HOST:PORT, got {bind!r}", file=sys.stderr)
        return 1
    app = create_app(args.model_dir, args.session_dir)
    uvicorn.run(app, host=host, port=int(port_s), log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linbelief",
        description="Evaluate portfolio belief models and serve the what-if API.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evaluate", help="print a portfolio report for a model file")
    ev.add_argument("--model", required=True, help="model JSON file")
    ev.add_argument("--evidence", help="evidence JSON file applied on top of the model")
    ev.add_argument("--query", help="comma-separated variables to marginalize onto")
    ev.add_argument("--riskless-rate", type=float, default=0.0,
                    help="riskless rate for tangency weights (default 0)")
    ev.add_argument("--format", choices=("table", "json"), default="table")
    ev.set_defaults(func=cmd_evaluate)

    sv = sub.add_parser("serve", help="run the HTTP what-if service")
    sv.add_argument("--model-dir", default="models", help="directory of model files")
    sv.add_argument("--session-dir", default="sessions", help="directory for session files")
    sv.add_argument("--bind", help=f"HOST:PORT (default ${BIND_ENV_VAR} or {DEFAULT_BIND})")
    sv.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BeliefError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
