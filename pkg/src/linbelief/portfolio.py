"""Portfolio evaluation over factor-model belief networks.

Each stock's return is a regression on shared economic factors with an
explicit residual variable, so later evidence can target the residuals
as easily as the factors.  The stocks blend into a portfolio-return
variable through a deterministic weighted sum.  Everything becomes a
belief in a valuation network; return summaries come from its marginals
and Sharpe-optimal weights from the stock mean/covariance block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .moment import (
    BeliefError,
    MomentMatrix,
    SingularBlockError,
    Variable,
    _as_square,
    _as_vector,
    _check_symmetric,
    _is_invertible,
    condition,
    from_linear_equation,
    from_normal,
    from_observation,
    sweep,
    to_summary,
)
from .network import ValuationNetwork, add_belief, add_variables, marginal

WEIGHT_SUM_ATOL = 1e-9


class SpecError(BeliefError, ValueError):
    """A portfolio spec, prior, or evidence item is inconsistent."""


def _pairs(betas) -> tuple[tuple[Variable, float], ...]:
    items = betas.items() if isinstance(betas, Mapping) else betas
    return tuple((str(k), float(v)) for k, v in items)


@dataclass(frozen=True)
class FactorModel:
    """One stock's return as intercept + sum(beta * factor) + residual."""

    stock: Variable
    intercept: float
    betas: tuple[tuple[Variable, float], ...]
    residual: Variable
    residual_sd: float | None = None  # None leaves the residual vacuous

    def __post_init__(self):
        object.__setattr__(self, "betas", _pairs(self.betas))
        names = [f for f, _ in self.betas]
        if len(set(names)) != len(names):
            raise SpecError(f"model for {self.stock!r} repeats a factor")
        if self.stock in names or self.residual in names or self.stock == self.residual:
            raise SpecError(f"model for {self.stock!r} reuses a variable name")
        if self.residual_sd is not None and self.residual_sd < 0:
            raise SpecError(f"model for {self.stock!r} has negative residual sd")

    @property
    def factors(self) -> tuple[Variable, ...]:
        return tuple(f for f, _ in self.betas)


@dataclass(frozen=True)
class PortfolioSpec:
    """Stocks, blend weights, their factor models, and factor priors."""

    stocks: tuple[Variable, ...]
    weights: np.ndarray
    factor_models: tuple[FactorModel, ...]
    priors: tuple[tuple[str, MomentMatrix], ...] = ()
    portfolio_variable: Variable = "P"

    def __post_init__(self):
        stocks = tuple(self.stocks)
        if len(set(stocks)) != len(stocks) or not stocks:
            raise SpecError("stocks must be a non-empty list of distinct names")
        if self.portfolio_variable in stocks:
            raise SpecError("portfolio variable collides with a stock name")
        w = _as_vector(self.weights, len(stocks), "weights")
        if abs(float(w.sum()) - 1.0) > WEIGHT_SUM_ATOL:
            raise SpecError(f"weights sum to {float(w.sum())!r}, expected 1")
        w.flags.writeable = False
        models = tuple(self.factor_models)
        by_stock = [m.stock for m in models]
        if len(set(by_stock)) != len(by_stock):
            raise SpecError("more than one factor model for a stock")
        missing = [s for s in stocks if s not in set(by_stock)]
        extra = [s for s in by_stock if s not in set(stocks)]
        if missing or extra:
            raise SpecError(
                f"factor models must cover the stocks exactly "
                f"(missing {missing}, extraneous {extra})"
            )
        object.__setattr__(self, "stocks", stocks)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "factor_models", models)
        object.__setattr__(self, "priors", tuple(self.priors))

    def model_for(self, stock: Variable) -> FactorModel:
        for m in self.factor_models:
            if m.stock == stock:
                return m
        raise KeyError(stock)


@dataclass(frozen=True)
class EvidenceItem:
    """Runtime evidence on one variable: a normal reading or an exact value."""

    variable: Variable
    kind: str  # "normal" or "observation"
    mean: float
    sd: float | None = None
    note: str = ""

    def __post_init__(self):
        if self.kind == "normal":
            if self.sd is None or not self.sd > 0:
                raise SpecError(f"normal evidence on {self.variable!r} needs sd > 0")
        elif self.kind == "observation":
            if self.sd is not None:
                raise SpecError(f"observation on {self.variable!r} takes no sd")
        else:
            raise SpecError(f"unknown evidence kind {self.kind!r}")

    def to_matrix(self) -> MomentMatrix:
        if self.kind == "normal":
            return from_normal((self.variable,), [self.mean], [[self.sd**2]])
        return from_observation((self.variable,), [self.mean])


@dataclass(frozen=True)
class AssetReport:
    """Return summary over the portfolio variable and its stocks."""

    variables: tuple[Variable, ...]  # portfolio variable first, then stocks
    mean: np.ndarray
    covariance: np.ndarray
    optimal_weights: np.ndarray | None  # None when the stock block is singular
    riskless_rate: float

    def __post_init__(self):
        k = len(self.variables)
        mu = np.array(_as_vector(self.mean, k, "mean"))
        cov = np.array(_check_symmetric(_as_square(self.covariance, k, "covariance"), "covariance"))
        mu.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "mean", mu)
        object.__setattr__(self, "covariance", cov)
        if self.optimal_weights is not None:
            w = np.array(_as_vector(self.optimal_weights, k - 1, "weights"))
            w.flags.writeable = False
            object.__setattr__(self, "optimal_weights", w)

    @property
    def sd(self) -> np.ndarray:
        return np.sqrt(np.maximum(np.diag(self.covariance), 0.0))

    def value_of(self, variable: Variable) -> tuple[float, float]:
        i = self.variables.index(variable)
        return float(self.mean[i]), float(self.sd[i])


def build_network(spec: PortfolioSpec) -> ValuationNetwork:
    """Valuation network for the spec.

    Per stock: one linear-equation belief stock = intercept + betas @
    factors + residual, plus (when the model gives a residual sd) a
    fully swept normal prior on the residual.  One blend equation ties
    the stocks to the portfolio variable, and each prior matrix joins
    under its own label.
    """
    net = ValuationNetwork()
    for s in spec.stocks:
        m = spec.model_for(s)
        inputs = m.factors + (m.residual,)
        coefs = [b for _, b in m.betas] + [1.0]
        net = add_belief(
            net, f"model {s}",
            from_linear_equation(inputs, (s,), [[c] for c in coefs], [m.intercept]),
        )
        if m.residual_sd is not None:
            if m.residual_sd == 0:
                raise SpecError(
                    f"model for {s!r} has zero residual sd; enter an exact "
                    f"observation on {m.residual!r} as evidence instead"
                )
            prior = from_normal((m.residual,), [0.0], [[m.residual_sd**2]])
            net = add_belief(net, f"residual {s}", sweep(prior, (m.residual,)))
    net = add_belief(
        net, f"blend {spec.portfolio_variable}",
        from_linear_equation(
            spec.stocks, (spec.portfolio_variable,),
            spec.weights.reshape(-1, 1), [0.0],
        ),
    )
    known = set(net.variables)
    for label, m in spec.priors:
        unknown = set(m.variables) - known
        if unknown:
            raise SpecError(
                f"prior {label!r} names variables outside the model: {sorted(unknown)}"
            )
        net = add_belief(net, label, m)
    return net


def tangency_weights(mean, cov, riskless_rate: float = 0.0) -> np.ndarray:
    """Weights maximizing (w'mean - rate) / sqrt(w'cov w), scaled to sum 1."""
    mu = np.asarray(mean, dtype=float).reshape(-1)
    n = mu.size
    sigma = _check_symmetric(_as_square(cov, n, "cov"), "cov")
    if not _is_invertible(sigma) or float(np.linalg.eigvalsh(sigma).min()) <= 0:
        raise SingularBlockError("covariance is singular or not positive definite")
    excess = mu - riskless_rate
    if float(np.linalg.norm(excess)) == 0.0:
        raise SpecError("all excess returns are zero; no tangency portfolio")
    w = np.linalg.solve(sigma, excess)
    total = float(w.sum())
    if abs(total) < 1e-300:
        raise SpecError("tangency weights sum to zero; cannot scale to unit budget")
    return w / total


def query_summary(
    spec: PortfolioSpec,
    query: Iterable[Variable],
    extra_evidence: Iterable[EvidenceItem] = (),
) -> tuple[tuple[Variable, ...], np.ndarray, np.ndarray]:
    """Mean and covariance over ``query`` under the evidence.

    Normal evidence joins the network as extra beliefs.  Exact
    observations condition the joint marginal instead (zero variance has
    no potential form); observed query variables come back with their
    exact value and a zero covariance row.  A query variable nothing
    constrains raises :class:`~linbelief.moment.VacuousVariableError`.
    """
    net = build_network(spec)
    observed: list[EvidenceItem] = []
    for i, item in enumerate(extra_evidence):
        if item.kind == "observation":
            observed.append(item)
        else:
            net = add_variables(net, (item.variable,))
            net = add_belief(net, f"evidence {i + 1}", item.to_matrix())

    query = tuple(dict.fromkeys(query))
    obs_vars = list(dict.fromkeys(item.variable for item in observed))
    # variables no belief mentions are simply vacuous; register them so the
    # marginal reports them that way (to_summary then names them)
    net = add_variables(net, [v for v in query + tuple(obs_vars) if v not in set(net.variables)])
    values: dict[Variable, float] = {}
    for item in observed:
        if item.variable in values and values[item.variable] != item.mean:
            raise SpecError(
                f"conflicting observations on {item.variable!r}: "
                f"{values[item.variable]!r} vs {item.mean!r}"
            )
        values[item.variable] = item.mean

    wide = list(dict.fromkeys(query + tuple(obs_vars)))
    m = marginal(net, wide)
    if obs_vars:
        m = condition(m, obs_vars, [values[v] for v in obs_vars])

    free = [v for v in query if v not in set(obs_vars)]
    summary = to_summary(m.reordered(free))
    k = len(query)
    mu = np.zeros(k)
    cov = np.zeros((k, k))
    fi = [query.index(v) for v in summary.variables]
    mu[fi] = summary.mean
    cov[np.ix_(fi, fi)] = summary.covariance
    for v in query:
        if v in set(obs_vars):
            mu[query.index(v)] = values[v]
    return query, mu, cov


def evaluate(
    spec: PortfolioSpec,
    extra_evidence: Iterable[EvidenceItem] = (),
    riskless_rate: float = 0.0,
) -> AssetReport:
    """Report on the portfolio variable and stocks under the evidence.

    The tangency weights use the stocks' mean/covariance block; when it
    is singular (some stock deterministic) the report carries None.
    """
    query, mu, cov = query_summary(
        spec, (spec.portfolio_variable,) + spec.stocks, extra_evidence
    )
    try:
        w = tangency_weights(mu[1:], cov[1:, 1:], riskless_rate)
    except (SingularBlockError, SpecError):
        w = None
    return AssetReport(query, mu, cov, w, riskless_rate)
