"""Shared test utilities: random generators and closed-form oracles.

The oracles here are deliberately independent of the sweep machinery:
plain inverse/solve formulas on covariance form, so they can referee it.
"""

import numpy as np

from linbelief.moment import MomentMatrix, combine, extend, from_normal, marginalize, sweep, vacuous
from linbelief.network import ValuationNetwork, add_belief, add_variables


def random_psd(rng, n, lo=0.5, hi=2.0):
    """Well-conditioned random PSD matrix (eigenvalues in [lo, hi])."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    lam = rng.uniform(lo, hi, size=n)
    return (q * lam) @ q.T


def random_normal_matrix(rng, variables, scale=1.0):
    """Nondegenerate normal belief over the given variables."""
    n = len(variables)
    return from_normal(variables, rng.standard_normal(n) * scale, random_psd(rng, n))


def assert_mm_close(a: MomentMatrix, b: MomentMatrix, atol=1e-9, rtol=1e-9):
    """Entrywise comparison after aligning b's variable order to a's."""
    assert set(a.variables) == set(b.variables)
    b = b.reordered(a.variables)
    assert a.swept == b.swept, f"swept sets differ: {a.swept} vs {b.swept}"
    np.testing.assert_allclose(b.mean, a.mean, atol=atol, rtol=rtol)
    np.testing.assert_allclose(b.block, a.block, atol=atol, rtol=rtol)


def product_oracle(mean1, cov1, mean2, cov2):
    """Density-product Gaussian: precision-weighted combination."""
    l1 = np.linalg.inv(cov1)
    l2 = np.linalg.inv(cov2)
    cov = np.linalg.inv(l1 + l2)
    mean = (np.asarray(mean1) @ l1 + np.asarray(mean2) @ l2) @ cov
    return mean, cov


def conditional_oracle(mean, cov, obs_idx, values):
    """Textbook Gaussian conditional of the non-observed coordinates."""
    mean = np.asarray(mean, dtype=float)
    cov = np.asarray(cov, dtype=float)
    n = len(mean)
    rest = [i for i in range(n) if i not in set(obs_idx)]
    s11 = cov[np.ix_(obs_idx, obs_idx)]
    s12 = cov[np.ix_(obs_idx, rest)]
    s22 = cov[np.ix_(rest, rest)]
    gain = np.linalg.solve(s11, s12)
    cmean = mean[rest] + (np.asarray(values) - mean[obs_idx]) @ gain
    ccov = s22 - s12.T @ gain
    return cmean, ccov


# ---------------------------------------------------------------------------
# Three-gold-stocks example: closed-form factor-model oracle
# ---------------------------------------------------------------------------

GOLD_BETAS = np.array([[0.60, 0.40], [0.45, 0.25], [0.50, 0.30]])  # columns: G, M
GOLD_ALPHAS = np.array([0.03, 0.03, 0.03])
GOLD_RESID_SDS = np.array([0.08, 0.04, 0.05])
GOLD_WEIGHTS = np.array([0.2, 0.7, 0.1])
GOLD_G_PRIOR = (-0.05, 0.02**2)
GOLD_M_PRIOR = (0.10, 0.08**2)


def gold_oracle_summary(g_evidence=None):
    """Means and covariance over (P, S1, S2, S3) by direct propagation.

    Stocks are affine in the independent factors (G, M, residuals), so the
    joint follows from linearity; `g_evidence=(mean, var)` first merges an
    extra normal belief on G with its prior, precision-weighted.
    """
    g_mean, g_var = GOLD_G_PRIOR
    if g_evidence is not None:
        ev_mean, ev_var = g_evidence
        prec = 1.0 / g_var + 1.0 / ev_var
        g_mean = (g_mean / g_var + ev_mean / ev_var) / prec
        g_var = 1.0 / prec
    m_mean, m_var = GOLD_M_PRIOR
    factor_mean = np.array([g_mean, m_mean])
    factor_cov = np.diag([g_var, m_var])

    mean_s = GOLD_ALPHAS + GOLD_BETAS @ factor_mean
    cov_s = GOLD_BETAS @ factor_cov @ GOLD_BETAS.T + np.diag(GOLD_RESID_SDS**2)

    w = GOLD_WEIGHTS
    mean = np.concatenate([[w @ mean_s], mean_s])
    cov = np.zeros((4, 4))
    cov[0, 0] = w @ cov_s @ w
    cov[0, 1:] = cov[1:, 0] = cov_s @ w
    cov[1:, 1:] = cov_s
    return mean, cov


TABLE2_MEAN = np.array([0.0343, 0.0400, 0.0325, 0.0350])
TABLE2_COV = np.array(
    [
        [0.0017, 0.0021, 0.0017, 0.0009],
        [0.0021, 0.0076, 0.0007, 0.0009],
        [0.0017, 0.0007, 0.0021, 0.0006],
        [0.0009, 0.0009, 0.0006, 0.0032],
    ]
)
TABLE3_MEAN = np.array([0.0753, 0.0908, 0.0706, 0.0774])
TABLE3_COV = np.array(
    [
        [0.0016, 0.0020, 0.0016, 0.0008],
        [0.0020, 0.0074, 0.0006, 0.0008],
        [0.0016, 0.0006, 0.0020, 0.0005],
        [0.0008, 0.0008, 0.0005, 0.0031],
    ]
)
GOLD_EVIDENCE = (0.04, 0.005**2)


def gold_portfolio_spec():
    """The shipped three-stock example as a PortfolioSpec."""
    from linbelief.moment import from_normal
    from linbelief.portfolio import FactorModel, PortfolioSpec

    models = tuple(
        FactorModel(
            stock=f"S{i + 1}",
            intercept=float(GOLD_ALPHAS[i]),
            betas=(("G", float(GOLD_BETAS[i, 0])), ("M", float(GOLD_BETAS[i, 1]))),
            residual=f"F{i + 1}",
            residual_sd=float(GOLD_RESID_SDS[i]),
        )
        for i in range(3)
    )
    priors = (
        ("prior G", from_normal(("G",), [GOLD_G_PRIOR[0]], [[GOLD_G_PRIOR[1]]])),
        ("prior M", from_normal(("M",), [GOLD_M_PRIOR[0]], [[GOLD_M_PRIOR[1]]])),
    )
    return PortfolioSpec(
        stocks=("S1", "S2", "S3"),
        weights=GOLD_WEIGHTS,
        factor_models=models,
        priors=priors,
    )


# published tables round to 4 decimals; a true value can sit exactly on the
# half-unit boundary (P mean 0.03425 vs printed 0.0343), so the inclusive
# tolerance needs float headroom
TABLE_ATOL = 5e-5 + 1e-12


def assert_table_close(got, want, atol=TABLE_ATOL):
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    worst = float(np.abs(got - want).max())
    assert worst <= atol, f"max deviation {worst} exceeds {atol}"


def random_network(rng, max_vars=6, max_beliefs=5):
    """Random nondegenerate valuation network plus a query subset."""
    n = int(rng.integers(2, max_vars + 1))
    names = tuple(f"v{i}" for i in range(n))
    net = ValuationNetwork()
    for b in range(int(rng.integers(1, max_beliefs + 1))):
        k = int(rng.integers(1, min(4, n) + 1))
        dom = tuple(names[i] for i in sorted(rng.choice(n, size=k, replace=False)))
        m = from_normal(dom, rng.normal(size=k), random_psd(rng, k))
        if rng.random() < 0.3:
            m = sweep(m, dom[: int(rng.integers(0, k + 1))])
        net = add_belief(net, f"b{b}", m)
    net = add_variables(net, names)
    q = int(rng.integers(1, n + 1))
    query = tuple(names[i] for i in sorted(rng.choice(n, size=q, replace=False)))
    return net, query


def brute_marginal(net, query):
    """Reference for fusion: combine everything, then marginalize once."""
    joint = vacuous(())
    for _, m in net.beliefs:
        joint = combine(joint, m)
    missing = [v for v in query if v not in set(joint.variables)]
    if missing:
        joint = extend(joint, missing)
    keep = [v for v in net.variables if v in set(query)]
    return marginalize(joint, keep).reordered(keep)
