"""Valuation networks and marginal queries by variable elimination.

A valuation network is a bipartite graph: variable nodes on one side,
belief-function nodes (each a :class:`~linbelief.moment.MomentMatrix`) on
the other, with edges given by each belief's domain.  Several beliefs may
bear on the same variables; each should stem from a distinct piece of
evidence.

Marginals are computed by fusion: eliminate the non-query variables one
at a time, combining only the beliefs that touch the variable being
removed.  Combination and marginalization of these belief functions
satisfy the local-computation axioms, so the result equals combining
everything first and marginalizing afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .moment import (
    BeliefError,
    DimensionError,
    MomentMatrix,
    SingularBlockError,
    Variable,
    combine,
    extend,
    marginalize,
    vacuous,
)


class DuplicateLabelError(BeliefError, ValueError):
    """A belief label is already present in the network."""


class FusionError(BeliefError):
    """Marginal computation failed; the message names the beliefs involved."""


@dataclass(frozen=True)
class ValuationNetwork:
    """Immutable network of variables and labeled belief functions."""

    variables: tuple[Variable, ...] = ()
    beliefs: tuple[tuple[str, MomentMatrix], ...] = ()

    def __post_init__(self):
        vs = tuple(self.variables)
        if len(set(vs)) != len(vs):
            raise DimensionError("network variables contain duplicates")
        labels = [label for label, _ in self.beliefs]
        if len(set(labels)) != len(labels):
            raise DuplicateLabelError("belief labels contain duplicates")
        known = set(vs)
        for label, m in self.beliefs:
            missing = set(m.variables) - known
            if missing:
                raise DimensionError(
                    f"belief {label!r} uses unregistered variables: {sorted(missing)}"
                )
        object.__setattr__(self, "variables", vs)
        object.__setattr__(self, "beliefs", tuple(self.beliefs))

    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.beliefs)

    def belief(self, label: str) -> MomentMatrix:
        for lab, m in self.beliefs:
            if lab == label:
                return m
        raise KeyError(label)


def add_variables(net: ValuationNetwork, variables: Iterable[Variable]) -> ValuationNetwork:
    """Register variables (idempotent for ones already present)."""
    new = tuple(v for v in dict.fromkeys(variables) if v not in set(net.variables))
    if not new:
        return net
    return ValuationNetwork(net.variables + new, net.beliefs)


def add_belief(net: ValuationNetwork, label: str, m: MomentMatrix) -> ValuationNetwork:
    """Return a new network with the belief appended.

    Variables of ``m`` not yet registered are added in the matrix's order.
    Multiple beliefs over the same variables are allowed; labels are not.
    """
    if label in set(net.labels()):
        raise DuplicateLabelError(f"belief label {label!r} already in network")
    net = add_variables(net, m.variables)
    return ValuationNetwork(net.variables, net.beliefs + ((label, m),))


def _interaction_graph(net: ValuationNetwork) -> dict[Variable, set[Variable]]:
    adj: dict[Variable, set[Variable]] = {v: set() for v in net.variables}
    for _, m in net.beliefs:
        for v in m.variables:
            adj[v].update(set(m.variables) - {v})
    return adj


def elimination_order(net: ValuationNetwork, query: Iterable[Variable]) -> tuple[Variable, ...]:
    """Greedy min-fill order over the variables outside ``query``.

    Ties break by registration order, which keeps the fusion path (and
    therefore all printed output) deterministic.
    """
    qs = set(query)
    adj = _interaction_graph(net)
    remaining = [v for v in net.variables if v not in qs]
    order: list[Variable] = []
    while remaining:
        best = None
        best_fill = None
        for v in remaining:
            nbrs = [u for u in adj[v] if u != v]
            fill = sum(
                1
                for i, x in enumerate(nbrs)
                for y in nbrs[i + 1 :]
                if y not in adj[x]
            )
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
        nbrs = adj[best] - {best}
        for x in nbrs:
            adj[x].update(nbrs - {x})
            adj[x].discard(best)
        del adj[best]
        remaining.remove(best)
        order.append(best)
    return tuple(order)


def marginal(
    net: ValuationNetwork,
    query: Iterable[Variable],
    *,
    order: Iterable[Variable] | None = None,
) -> MomentMatrix:
    """Joint marginal of all beliefs, restricted to ``query``.

    Query variables no belief bears on come back vacuous (swept, zero).
    The result may be partially swept; read it with
    :func:`~linbelief.moment.to_summary` for mean/covariance form.
    ``order`` overrides the min-fill elimination order; any permutation
    of the non-query variables yields the same marginal.
    """
    qs = list(dict.fromkeys(query))
    unknown = set(qs) - set(net.variables)
    if unknown:
        raise DimensionError(f"query names unknown variables: {sorted(unknown)}")
    if order is None:
        order = elimination_order(net, qs)
    else:
        order = tuple(order)
        if sorted(order) != sorted(set(net.variables) - set(qs)):
            raise DimensionError(
                "order must be a permutation of the non-query variables"
            )

    pool: list[tuple[tuple[str, ...], MomentMatrix]] = [
        ((label,), m) for label, m in net.beliefs
    ]
    for v in order:
        hit = [i for i, (_, m) in enumerate(pool) if v in m.variables]
        if not hit:
            continue
        touching = [pool[i] for i in hit]
        pool = [item for i, item in enumerate(pool) if i not in set(hit)]
        labels = tuple(lab for labs, _ in touching for lab in labs)
        try:
            joint = touching[0][1]
            for _, m in touching[1:]:
                joint = combine(joint, m)
            keep = [u for u in joint.variables if u != v]
            reduced = marginalize(joint, keep)
        except SingularBlockError as e:
            raise FusionError(
                f"eliminating {v!r} from beliefs {list(labels)} failed: {e}"
            ) from e
        pool.append((labels, reduced))

    result = vacuous(())
    labels_all: tuple[str, ...] = ()
    try:
        for labs, m in pool:
            result = combine(result, m)
            labels_all += labs
    except SingularBlockError as e:
        raise FusionError(
            f"combining beliefs {list(labels_all)} failed: {e}"
        ) from e
    uncovered = [v for v in qs if v not in set(result.variables)]
    if uncovered:
        result = extend(result, uncovered)
    # present in network registration order
    order_out = [v for v in net.variables if v in set(qs)]
    return result.reordered(order_out)
