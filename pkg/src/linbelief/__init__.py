"""Linear belief functions over swept moment matrices.

The package splits into layers, each usable on its own:

- :mod:`linbelief.moment`: the moment-matrix representation, the six
  knowledge-case constructors, sweeping, combination, conditioning
- :mod:`linbelief.network`: labeled valuation networks and
  elimination-based marginals
- :mod:`linbelief.portfolio`: factor-model portfolio specs, report
  evaluation, tangency weights
- :mod:`linbelief.modelio`: canonical JSON model/evidence/session files
- :mod:`linbelief.service`: the HTTP what-if service
- :mod:`linbelief.cli`: the ``linbelief`` command
"""

from linbelief.moment import (
    BeliefError,
    DimensionError,
    GaussianSummary,
    MomentMatrix,
    SingularBlockError,
    SweepStateError,
    VacuousVariableError,
    Variable,
    combine,
    condition,
    extend,
    from_linear_equation,
    from_normal,
    from_observation,
    from_regression,
    marginalize,
    proper_lbf,
    sweep,
    to_summary,
    unsweep,
    vacuous,
)
from linbelief.network import (
    DuplicateLabelError,
    FusionError,
    ValuationNetwork,
    add_belief,
    add_variables,
    elimination_order,
    marginal,
)
from linbelief.portfolio import (
    AssetReport,
    EvidenceItem,
    FactorModel,
    PortfolioSpec,
    SpecError,
    build_network,
    evaluate,
    query_summary,
    tangency_weights,
)
from linbelief.modelio import (
    BeliefDecl,
    ModelDocument,
    ModelFormatError,
    SessionRecord,
    list_models,
    load_model,
    load_session,
    parse_evidence_file,
    parse_evidence_item,
    parse_model,
    parse_session,
    save_session,
    serialize_evidence,
    serialize_model,
    serialize_session,
    to_spec,
)

__all__ = [
    "BeliefError",
    "DimensionError",
    "SweepStateError",
    "SingularBlockError",
    "VacuousVariableError",
    "DuplicateLabelError",
    "FusionError",
    "SpecError",
    "ModelFormatError",
    "Variable",
    "MomentMatrix",
    "GaussianSummary",
    "from_normal",
    "from_observation",
    "vacuous",
    "proper_lbf",
    "from_linear_equation",
    "from_regression",
    "sweep",
    "unsweep",
    "marginalize",
    "extend",
    "combine",
    "condition",
    "to_summary",
    "ValuationNetwork",
    "add_variables",
    "add_belief",
    "elimination_order",
    "marginal",
    "FactorModel",
    "PortfolioSpec",
    "EvidenceItem",
    "AssetReport",
    "build_network",
    "tangency_weights",
    "query_summary",
    "evaluate",
    "BeliefDecl",
    "ModelDocument",
    "SessionRecord",
    "to_spec",
    "parse_model",
    "serialize_model",
    "parse_evidence_item",
    "parse_evidence_file",
    "serialize_evidence",
    "list_models",
    "load_model",
    "parse_session",
    "serialize_session",
    "save_session",
    "load_session",
]

__version__ = "0.1.0"
