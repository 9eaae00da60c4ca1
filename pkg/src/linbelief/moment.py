"""Moment-matrix calculus for linear belief functions.

A linear belief function (LBF) over continuous variables is stored as a
*partially swept moment matrix*: an ordered variable list, a mean row, a
square block, and the set of variables currently swept.  One structure
covers every knowledge case this library deals in:

==================  =========================================
normal              unswept mean/covariance
observation         unswept, zero block
vacuous             fully swept, all zero (infinite variance)
proper belief       normal on some variables, vacuous on others
linear equation     inputs swept, zero output block
regression          inputs swept, residual covariance on outputs
==================  =========================================

For unswept coordinates the block holds covariance; for swept coordinates
it holds negated inverse-covariance (the potential form, defined up to
normalization); mixed swept/unswept positions hold regression coefficients.
Forward sweeping moves variables from covariance form to potential form,
reverse sweeping moves them back, and Dempster's rule of combination is
entrywise addition once the operands' sweep states are aligned.

All values are immutable; every operation returns a new matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

Variable = str

# A sub-block counts as invertible iff its smallest singular value exceeds
# this fraction of its largest.  Zero blocks (observations, vacuous parts)
# then register as singular instead of producing garbage.
SINGULARITY_RTOL = 1e-10

# Covariance inputs rounded to a few decimals can be marginally indefinite;
# eigenvalues may dip this far (times the trace) below zero.
PSD_EIGEN_FLOOR = 1e-8

_SYMMETRY_RTOL = 1e-8


class BeliefError(Exception):
    """Base class for errors raised by the belief-function calculus."""


class DimensionError(BeliefError, ValueError):
    """Inputs have inconsistent shapes, duplicate or unknown variables."""


class SweepStateError(BeliefError, ValueError):
    """A sweep target is already swept, or an unsweep target is not swept."""


class SingularBlockError(BeliefError):
    """A sub-block that must be inverted is singular at tolerance.

    Typically signals that the operation needs :func:`condition` (zero
    variance, infinite precision) or that a variable is vacuous.
    """


class VacuousVariableError(SingularBlockError):
    """A vacuous variable blocks the operation (no finite-covariance reading)."""


def _as_vector(x, n: int, what: str) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.shape != (n,):
        raise DimensionError(f"{what} must have length {n}, got shape {np.shape(x)}")
    return v


def _as_square(x, n: int, what: str) -> np.ndarray:
    m = np.asarray(x, dtype=float)
    if m.shape == (0,) and n == 0:
        m = m.reshape(0, 0)
    if m.shape != (n, n):
        raise DimensionError(f"{what} must be {n}x{n}, got shape {np.shape(x)}")
    return m


def _check_symmetric(m: np.ndarray, what: str) -> np.ndarray:
    if m.size == 0:
        return m
    scale = max(float(np.abs(m).max()), 1.0)
    if float(np.abs(m - m.T).max()) > _SYMMETRY_RTOL * scale:
        raise DimensionError(f"{what} is not symmetric to tolerance")
    return 0.5 * (m + m.T)


def _check_psd(m: np.ndarray, what: str) -> np.ndarray:
    m = _check_symmetric(m, what)
    if m.size:
        floor = -PSD_EIGEN_FLOOR * max(float(np.trace(m)), 1e-300)
        if float(np.linalg.eigvalsh(m).min()) < floor:
            raise DimensionError(f"{what} is not positive semidefinite to tolerance")
    return m


def _is_invertible(sub: np.ndarray) -> bool:
    if sub.size == 0:
        return True
    svals = np.linalg.svd(sub, compute_uv=False)
    return bool(svals[-1] > SINGULARITY_RTOL * svals[0])


def _inverse(sub: np.ndarray, what: str) -> np.ndarray:
    if not _is_invertible(sub):
        raise SingularBlockError(f"{what} is singular at tolerance")
    inv = np.linalg.inv(sub)
    return 0.5 * (inv + inv.T)


def _unique_vars(variables: Iterable[Variable], what: str) -> tuple[Variable, ...]:
    vs = tuple(variables)
    for v in vs:
        if not isinstance(v, str) or not v:
            raise DimensionError(f"{what} must be non-empty label strings, got {v!r}")
    if len(set(vs)) != len(vs):
        raise DimensionError(f"{what} contains duplicate variables")
    return vs


@dataclass(frozen=True)
class MomentMatrix:
    """A linear belief function as a partially swept moment matrix.

    Parameters
    ----------
    variables : tuple of str
        Ordered variable labels, unique within the matrix.
    swept : frozenset of str
        The subset of ``variables`` currently in potential form.
    mean : ndarray, shape (n,)
        Mean row; for swept coordinates the potential-form value.
    block : ndarray, shape (n, n)
        Covariance on unswept coordinates, negated precision on swept
        ones, regression coefficients on mixed positions.
    """

    variables: tuple[Variable, ...]
    swept: frozenset[Variable]
    mean: np.ndarray
    block: np.ndarray

    def __post_init__(self):
        vs = _unique_vars(self.variables, "variables")
        object.__setattr__(self, "variables", vs)
        swept = frozenset(self.swept)
        unknown = swept - set(vs)
        if unknown:
            raise DimensionError(f"swept set names unknown variables: {sorted(unknown)}")
        object.__setattr__(self, "swept", swept)
        n = len(vs)
        mean = np.array(_as_vector(self.mean, n, "mean"))
        block = np.array(_as_square(self.block, n, "block"))
        mean.setflags(write=False)
        block.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "block", block)

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def unswept(self) -> tuple[Variable, ...]:
        return tuple(v for v in self.variables if v not in self.swept)

    def index_of(self, v: Variable) -> int:
        try:
            return self.variables.index(v)
        except ValueError:
            raise DimensionError(f"unknown variable {v!r}") from None

    def indices_of(self, vs: Iterable[Variable]) -> list[int]:
        return [self.index_of(v) for v in vs]

    def is_null_on(self, v: Variable) -> bool:
        """True if every entry indexed by ``v`` is exactly zero."""
        i = self.index_of(v)
        return (
            self.mean[i] == 0.0
            and not self.block[i, :].any()
            and not self.block[:, i].any()
        )

    def reordered(self, order: Sequence[Variable]) -> "MomentMatrix":
        """Permute to the given variable order (same variable set)."""
        order = tuple(order)
        if set(order) != set(self.variables) or len(order) != self.n:
            raise DimensionError("reorder target is not a permutation of the variables")
        idx = self.indices_of(order)
        return MomentMatrix(order, self.swept, self.mean[idx], self.block[np.ix_(idx, idx)])

    def validate(self, atol: float = 1e-8) -> None:
        """Raise if the symmetry / definiteness invariants are violated.

        The stored block is symmetric in value: the sweep transformation
        writes a coefficient matrix into one mixed block and its transpose
        into the other.  The unswept diagonal block must be PSD, the swept
        one NSD, both to an ``atol`` scaled by the matrix magnitude.
        """
        scale = max(float(np.abs(self.block).max()) if self.block.size else 0.0, 1.0)
        asym = float(np.abs(self.block - self.block.T).max()) if self.block.size else 0.0
        if asym > atol * scale:
            raise BeliefError(f"block asymmetry {asym:.3g} exceeds tolerance")
        ui = [i for i, v in enumerate(self.variables) if v not in self.swept]
        si = [i for i, v in enumerate(self.variables) if v in self.swept]
        if ui:
            sub = self.block[np.ix_(ui, ui)]
            if float(np.linalg.eigvalsh(0.5 * (sub + sub.T)).min()) < -atol * scale:
                raise BeliefError("unswept sub-block is not PSD to tolerance")
        if si:
            sub = self.block[np.ix_(si, si)]
            if float(np.linalg.eigvalsh(0.5 * (sub + sub.T)).max()) > atol * scale:
                raise BeliefError("swept sub-block is not NSD to tolerance")

    def __repr__(self) -> str:  # compact, for debugging and error messages
        tags = ", ".join(f"{v}^" if v in self.swept else v for v in self.variables)
        return f"MomentMatrix([{tags}])"


@dataclass(frozen=True)
class GaussianSummary:
    """Plain mean/covariance reading of a fully unswept moment matrix."""

    variables: tuple[Variable, ...]
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        vs = _unique_vars(self.variables, "variables")
        object.__setattr__(self, "variables", vs)
        n = len(vs)
        mean = np.array(_as_vector(self.mean, n, "mean"))
        cov = np.array(_check_psd(_as_square(self.covariance, n, "covariance"), "covariance"))
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @property
    def sd(self) -> np.ndarray:
        return np.sqrt(np.maximum(np.diag(self.covariance), 0.0))


# ---------------------------------------------------------------------------
# Constructors: the six knowledge cases
# ---------------------------------------------------------------------------

def from_normal(variables: Iterable[Variable], mean, cov) -> MomentMatrix:
    """Normal distribution N(mean, cov) as a fully unswept matrix."""
    vs = _unique_vars(variables, "variables")
    n = len(vs)
    mu = _as_vector(mean, n, "mean")
    sigma = _check_psd(_as_square(cov, n, "cov"), "cov")
    return MomentMatrix(vs, frozenset(), mu, sigma)


def from_observation(variables: Iterable[Variable], values) -> MomentMatrix:
    """Direct observation: unswept, zero block (no uncertainty)."""
    vs = _unique_vars(variables, "variables")
    x = _as_vector(values, len(vs), "values")
    return MomentMatrix(vs, frozenset(), x, np.zeros((len(vs), len(vs))))


def vacuous(variables: Iterable[Variable]) -> MomentMatrix:
    """Complete ignorance: fully swept, all zero (the infinite-variance limit)."""
    vs = _unique_vars(variables, "variables")
    n = len(vs)
    return MomentMatrix(vs, frozenset(vs), np.zeros(n), np.zeros((n, n)))


def proper_lbf(ignorant: Iterable[Variable], known: Iterable[Variable], mean, cov) -> MomentMatrix:
    """Partial belief: normal on ``known``, vacuous on ``ignorant``.

    Requires less-than-perfect correlation between the groups, so every
    ignorant-indexed entry is zero.
    """
    ig = _unique_vars(ignorant, "ignorant")
    kn = _unique_vars(known, "known")
    vs = _unique_vars(ig + kn, "ignorant + known")
    k, n = len(kn), len(vs)
    mu = _as_vector(mean, k, "mean")
    sigma = _check_psd(_as_square(cov, k, "cov"), "cov")
    full_mean = np.zeros(n)
    full_block = np.zeros((n, n))
    full_mean[len(ig):] = mu
    full_block[len(ig):, len(ig):] = sigma
    return MomentMatrix(vs, frozenset(ig), full_mean, full_block)


def _coef_matrix(A, n_in: int, n_out: int) -> np.ndarray:
    a = np.asarray(A, dtype=float)
    if a.ndim == 1:
        if n_out == 1:
            a = a.reshape(-1, 1)
        elif n_in == 1:
            a = a.reshape(1, -1)
    if a.shape != (n_in, n_out):
        raise DimensionError(f"coefficients must be {n_in}x{n_out}, got shape {np.shape(A)}")
    return a


def from_linear_equation(inputs: Iterable[Variable], outputs: Iterable[Variable], A, b) -> MomentMatrix:
    """Deterministic relation outputs = inputs @ A + b.

    Inputs are swept (we are ignorant of them); given inputs = 0 the
    outputs equal ``b`` exactly, so the output block is zero and the mixed
    blocks carry the coefficients.
    """
    ins = _unique_vars(inputs, "inputs")
    outs = _unique_vars(outputs, "outputs")
    vs = _unique_vars(ins + outs, "inputs + outputs")
    p, q = len(ins), len(outs)
    a = _coef_matrix(A, p, q)
    bv = _as_vector(b, q, "b")
    n = p + q
    mean = np.zeros(n)
    mean[p:] = bv
    block = np.zeros((n, n))
    block[:p, p:] = a
    block[p:, :p] = a.T
    return MomentMatrix(vs, frozenset(ins), mean, block)


def from_regression(inputs: Iterable[Variable], outputs: Iterable[Variable], A, b, residual_cov) -> MomentMatrix:
    """Regression outputs = inputs @ A + b + noise, noise ~ N(0, residual_cov).

    Same layout as :func:`from_linear_equation` with the residual
    covariance folded into the output block.
    """
    ins = tuple(inputs)
    outs = tuple(outputs)
    m = from_linear_equation(ins, outs, A, b)
    p, q = len(ins), len(outs)
    resid = _check_psd(_as_square(residual_cov, q, "residual_cov"), "residual_cov")
    block = np.array(m.block)
    block[p:, p:] = resid
    return MomentMatrix(m.variables, m.swept, m.mean, block)


# ---------------------------------------------------------------------------
# Sweepings
# ---------------------------------------------------------------------------

def _target_list(m: MomentMatrix, targets: Iterable[Variable]) -> list[Variable]:
    ts = list(dict.fromkeys(targets))  # preserve order, drop repeats
    for v in ts:
        m.index_of(v)
    return ts


def _sweep_core(m: MomentMatrix, targets: list[Variable], reverse: bool) -> MomentMatrix:
    ti = m.indices_of(targets)
    ri = [i for i in range(m.n) if i not in set(ti)]
    word = "swept" if reverse else "unswept"
    sub = m.block[np.ix_(ti, ti)]
    try:
        inv = _inverse(sub, f"{word} block for {targets}")
    except SingularBlockError:
        raise SingularBlockError(
            f"cannot {'reverse-' if reverse else ''}sweep on {targets}: "
            f"target block is singular at tolerance"
        ) from None
    sgn = -1.0 if reverse else 1.0
    mu1, mu2 = m.mean[ti], m.mean[ri]
    B12 = m.block[np.ix_(ti, ri)]
    B21 = m.block[np.ix_(ri, ti)]
    B22 = m.block[np.ix_(ri, ri)]

    mean = np.empty(m.n)
    block = np.empty((m.n, m.n))
    mean[ti] = sgn * (mu1 @ inv)
    mean[ri] = mu2 - (mu1 @ inv) @ B12
    block[np.ix_(ti, ti)] = -inv
    block[np.ix_(ti, ri)] = sgn * (inv @ B12)
    block[np.ix_(ri, ti)] = sgn * (B21 @ inv)
    block[np.ix_(ri, ri)] = B22 - B21 @ inv @ B12
    # bound floating-point drift in the symmetric structure
    block = 0.5 * (block + block.T)

    swept = (m.swept - set(targets)) if reverse else (m.swept | set(targets))
    return MomentMatrix(m.variables, swept, mean, block)


def sweep(m: MomentMatrix, targets: Iterable[Variable]) -> MomentMatrix:
    """Forward-sweep currently unswept ``targets`` into potential form."""
    ts = _target_list(m, targets)
    bad = [v for v in ts if v in m.swept]
    if bad:
        raise SweepStateError(f"sweep targets already swept: {bad}")
    if not ts:
        return m
    return _sweep_core(m, ts, reverse=False)


def unsweep(m: MomentMatrix, targets: Iterable[Variable]) -> MomentMatrix:
    """Reverse-sweep currently swept ``targets`` back to covariance form."""
    ts = _target_list(m, targets)
    bad = [v for v in ts if v not in m.swept]
    if bad:
        raise SweepStateError(f"unsweep targets not swept: {bad}")
    if not ts:
        return m
    return _sweep_core(m, ts, reverse=True)


# ---------------------------------------------------------------------------
# Marginalization, extension, combination, conditioning
# ---------------------------------------------------------------------------

def _restrict(m: MomentMatrix, keep_idx: list[int]) -> MomentMatrix:
    vs = tuple(m.variables[i] for i in keep_idx)
    return MomentMatrix(
        vs,
        m.swept & set(vs),
        m.mean[keep_idx],
        m.block[np.ix_(keep_idx, keep_idx)],
    )


def marginalize(m: MomentMatrix, keep: Iterable[Variable]) -> MomentMatrix:
    """Restrict to ``keep``, removing the other variables.

    Removal is only valid on unswept variables, so swept removables are
    reverse-swept first.  A vacuous removable (singular swept block) is
    dropped directly when it is uncorrelated (all entries zero); a
    correlated vacuous variable has no finite reading and raises.
    """
    keep_set = set(_unique_vars(keep, "keep"))
    unknown = keep_set - set(m.variables)
    if unknown:
        raise DimensionError(f"keep names unknown variables: {sorted(unknown)}")
    removed = [v for v in m.variables if v not in keep_set]
    if not removed:
        return m

    # exact removal of vacuous, uncorrelated variables
    null_vacuous = [v for v in removed if v in m.swept and m.is_null_on(v)]
    if null_vacuous:
        drop = set(null_vacuous)
        m = _restrict(m, [i for i, v in enumerate(m.variables) if v not in drop])
        removed = [v for v in removed if v not in drop]

    swept_removed = [v for v in removed if v in m.swept]
    if swept_removed:
        try:
            m = unsweep(m, swept_removed)
        except SingularBlockError:
            raise VacuousVariableError(
                f"cannot remove {swept_removed}: vacuous with correlated entries "
                f"(or singular precision), no finite marginal exists"
            ) from None
    return _restrict(m, [i for i, v in enumerate(m.variables) if v in keep_set])


def extend(m: MomentMatrix, new_vars: Iterable[Variable]) -> MomentMatrix:
    """Vacuously extend the domain: new variables enter swept, all zero."""
    new = _unique_vars(new_vars, "new_vars")
    overlap = set(new) & set(m.variables)
    if overlap:
        raise DimensionError(f"extension variables already present: {sorted(overlap)}")
    if not new:
        return m
    n, k = m.n, len(new)
    mean = np.zeros(n + k)
    mean[:n] = m.mean
    block = np.zeros((n + k, n + k))
    block[:n, :n] = m.block
    return MomentMatrix(m.variables + new, m.swept | set(new), mean, block)


def combine(a: MomentMatrix, b: MomentMatrix) -> MomentMatrix:
    """Dempster's rule: entrywise sum after aligning domains and sweeps.

    Both operands are vacuously extended to the union domain (a's order
    first).  A variable left unswept in one operand is acceptable exactly
    when the other operand has no entries on it; otherwise both operands
    are swept on it first.  A singular block met while aligning means the
    combination is deterministic/conflicting and needs :func:`condition`.
    """
    union = a.variables + tuple(v for v in b.variables if v not in set(a.variables))
    ea = extend(a, tuple(v for v in union if v not in set(a.variables)))
    eb = extend(b, tuple(v for v in union if v not in set(b.variables))).reordered(union)

    # an unswept variable may stay unswept only if the other operand is
    # silent on it (all-zero entries); otherwise both sides go to potential form
    need_a = [
        v for v in union
        if v not in ea.swept and (v not in eb.swept or not eb.is_null_on(v))
    ]
    need_b = [
        v for v in union
        if v not in eb.swept and (v not in ea.swept or not ea.is_null_on(v))
    ]
    try:
        if need_a:
            ea = sweep(ea, need_a)
        if need_b:
            eb = sweep(eb, need_b)
    except SingularBlockError as e:
        raise SingularBlockError(f"combination requires conditioning: {e}") from None

    return MomentMatrix(union, ea.swept & eb.swept, ea.mean + eb.mean, ea.block + eb.block)


def condition(m: MomentMatrix, observed: Iterable[Variable], values) -> MomentMatrix:
    """Condition on exact values of ``observed`` and drop them.

    The analytic limit of combining with an observation (which has zero
    variance and cannot be swept).  Unswept observed variables are swept
    first; swept ones (linear-equation inputs) are consumed directly.  The
    remaining variables keep their sweep states.
    """
    obs = _unique_vars(observed, "observed")
    x = _as_vector(values, len(obs), "values")
    for v in obs:
        m.index_of(v)
    to_sweep = [v for v in obs if v not in m.swept]
    if to_sweep:
        try:
            m = sweep(m, to_sweep)
        except SingularBlockError:
            raise SingularBlockError(
                f"cannot condition on {to_sweep}: observed block is singular "
                f"(already deterministic)"
            ) from None
    oi = m.indices_of(obs)
    ri = [i for i in range(m.n) if i not in set(oi)]
    mean = m.mean[ri] + x @ m.block[np.ix_(oi, ri)]
    vs = tuple(m.variables[i] for i in ri)
    return MomentMatrix(vs, m.swept & set(vs), mean, m.block[np.ix_(ri, ri)])


def to_summary(m: MomentMatrix) -> GaussianSummary:
    """Mean/covariance reading of the fully unswept form.

    Raises :class:`VacuousVariableError` when a vacuous component is
    present (infinite variance has no covariance reading).
    """
    swept = [v for v in m.variables if v in m.swept]
    if swept:
        try:
            m = unsweep(m, swept)
        except SingularBlockError:
            raise VacuousVariableError(
                f"no covariance reading: vacuous component on {swept}"
            ) from None
    cov = 0.5 * (m.block + m.block.T)
    if cov.size:
        # clip tiny negative eigenvalue drift so the summary validates
        floor = -PSD_EIGEN_FLOOR * max(abs(float(np.trace(cov))), 1.0)
        if float(np.linalg.eigvalsh(cov).min()) >= floor:
            w, q = np.linalg.eigh(cov)
            cov = (q * np.maximum(w, 0.0)) @ q.T
    return GaussianSummary(m.variables, m.mean, cov)
