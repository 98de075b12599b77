"""Theoretical error budgets for the translate operator.

Three budget variants are computed, matching the three error theorems:
the p = 2 budget (sup of the reciprocal tail vs the l2 sum of blockwise
alias maxima), the general-p budget (difference tails plus the aliased
block-edge sum), and the multivariate p = 2 budget with box-truncated
block sums.  Every sum is truncated explicitly and reports the bound on
what was discarded; a report whose tail is not negligible is flagged
rather than silently trusted.

Two index-range conventions are pinned here: the block sum runs over
all nonzero block indices (both signs), and the sup of the reciprocal
tail is taken over the strict exterior |k|_inf > m in every dimension,
matching the univariate convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._alias import band_arrays, k_prime_array, md_index_box
from .sequences import (
    CoefficientSequence,
    Exponential,
    ExponentMask,
    Korobov,
    MaskPower,
    SequenceError,
    TailRule,
    check_nondecreasing_type,
)

__all__ = [
    "EpsilonReport",
    "RatePrediction",
    "gamma_k",
    "epsilon_p2",
    "epsilon_general_p",
    "epsilon_p2_md",
    "predicted_rate",
    "inv_sup_outside_box",
]


@dataclass(frozen=True)
class EpsilonReport:
    """A theoretical error budget value with truncation diagnostics."""

    value: float
    truncation_radius: int
    tail_bound: float
    variant: str  # p2_univariate | general_p | p2_multivariate
    components: dict
    tail_dominated: bool = False

    def __float__(self):
        return self.value


def gamma_k(lam: CoefficientSequence, beta: CoefficientSequence, m: int, k):
    """Aliased coefficient ratio alpha_{k'} beta_k^{-1}.

    Real for the built-in families, complex for complex custom tables.
    """
    if lam.dimension != beta.dimension:
        raise SequenceError("sequence dimensions differ")
    d = lam.dimension
    arr = np.atleast_1d(np.asarray(k, dtype=np.int64))
    if arr.size != d:
        raise SequenceError(f"index {k!r} does not have dimension {d}")
    kp = k_prime_array(arr, m)
    if d == 1:
        kp, arr = kp[0], arr[0]
    inv_l = np.asarray(lam.inv_values(kp))[()]
    inv_b = np.asarray(beta.inv_values(kp))[()]
    if inv_b == 0:
        raise SequenceError("generator sequence vanishes inside the reproduced band")
    out = (inv_l / inv_b) * np.asarray(beta.inv_values(arr))[()]
    return complex(out) if np.iscomplexobj(out) else float(out)


# ---------------------------------------------------------------------------
# Block-tail bounds.  a_j = (2m+1) j - m is the leftmost frequency of the
# j-th alias block; bounds use that rule reciprocals decrease beyond the
# scanned range.


def _block_l2sq_tail(rule: TailRule, m: int, J: int) -> float:
    """Bound on sum_{j > J} (sup over block j of |inv|)^2, one-sided."""
    a = (2 * m + 1) * (J + 1) - m
    return rule.inv_sup(a - 1) ** 2 + rule.inv_l2_sq(a - 1) / (2 * (2 * m + 1))


def _comb_l1_tail(rule: TailRule, step: int, offset: int, T: int) -> float:
    """Bound on sum_{t > T} |inv(step t + offset)|."""
    a = step * (T + 1) + offset
    return rule.inv_sup(a - 1) + rule.inv_l1(a - 1) / (2 * step)


def _default_J(rule: TailRule) -> int:
    if rule.kind == "exponential":
        return 10**3
    if rule.kind == "finite":
        return 10**3
    return 10**5


def epsilon_p2(
    lam: CoefficientSequence,
    beta: CoefficientSequence,
    m: int,
    J_max: Optional[int] = None,
) -> EpsilonReport:
    """p = 2 budget: max of the reciprocal sup tail and the block l2 sum.

    The block sum runs over alias blocks |j| <= J_max (default 1e5 for
    power tails, 1e3 for exponential) and stops early once the rule
    bounds the remainder below 1e-10 of the accumulated sum.
    """
    if lam.dimension != 1 or beta.dimension != 1:
        raise SequenceError("epsilon_p2 is univariate; see epsilon_p2_md")
    inv_lam, inv_beta, alpha = band_arrays(lam, beta, m)
    rule = beta.tail_rule()
    if J_max is None:
        J_max = _default_J(rule)
    alpha_max = float(np.max(np.abs(alpha)))
    sup_term = lam.inv_sup_tail(m)
    n = 2 * m + 1
    jp = np.arange(-m, m + 1)
    acc = 0.0
    stop_J = J_max
    block = max(1, 2_000_000 // n)
    for t0 in range(1, J_max + 1, block):
        ts = np.arange(t0, min(J_max, t0 + block - 1) + 1)
        pos = (n * ts)[:, None] + jp[None, :]
        neg = -(n * ts)[:, None] + jp[None, :]
        gp = np.abs(alpha)[None, :] * np.abs(np.asarray(beta.inv_values(pos)))
        gn = np.abs(alpha)[None, :] * np.abs(np.asarray(beta.inv_values(neg)))
        contrib = float(np.sum(gp.max(axis=1) ** 2) + np.sum(gn.max(axis=1) ** 2))
        acc += contrib
        rem = 2 * alpha_max**2 * _block_l2sq_tail(rule, m, int(ts[-1]))
        if acc > 0 and contrib + rem <= 1e-10 * acc:
            stop_J = int(ts[-1])
            break
    tail_sq = 2 * alpha_max**2 * _block_l2sq_tail(rule, m, stop_J)
    gamma_sum = math.sqrt(acc)
    value = max(sup_term, gamma_sum)
    tail_bound = math.sqrt(acc + tail_sq) - gamma_sum if math.isfinite(tail_sq) else math.inf
    flagged = not (math.isfinite(value) and tail_bound < 0.01 * value) if value > 0 else False
    return EpsilonReport(
        value=value,
        truncation_radius=stop_J,
        tail_bound=tail_bound,
        variant="p2_univariate",
        components={"sup_term": sup_term, "gamma_sum_term": gamma_sum},
        tail_dominated=flagged,
    )


def _diff_sum(vals: np.ndarray) -> float:
    return float(np.sum(np.abs(np.diff(vals))))


def _is_tail_monotone(vals: np.ndarray, window: int = 32) -> bool:
    tail = vals[-window:]
    return bool(np.all(np.diff(tail) <= 0))


def epsilon_general_p(
    lam: CoefficientSequence,
    beta: CoefficientSequence,
    m: int,
    K_max: Optional[int] = None,
) -> EpsilonReport:
    """General-p budget: difference tails plus the aliased block edges.

    The two bracketed quantities are max-ed: the sum of reciprocal
    differences over both tails, and the sum of gamma differences plus
    the gamma values on the block right-edges m + t(2m+1), t in Z.
    Negative tails traverse the reflected sequence.
    """
    if lam.dimension != 1 or beta.dimension != 1:
        raise SequenceError("epsilon_general_p is univariate")
    inv_lam_band, inv_beta_band, alpha = band_arrays(lam, beta, m)
    alpha_max = float(np.max(np.abs(alpha)))
    rule_l = lam.tail_rule()
    rule_b = beta.tail_rule()
    if K_max is None:
        kinds = {rule_l.kind, rule_b.kind}
        if kinds <= {"exponential", "finite"}:
            K_max = max(
                 rule_l.radius_for_l1(1e-30, cap=10**5) if rule_l.kind == "exponential" else rule_l.radius,
                 rule_b.radius_for_l1(1e-30, cap=10**5) if rule_b.kind == "exponential" else rule_b.radius,
                 m + 10 * (2 * m + 1),
            )
        else:
            K_max = 10**5
    K_max = max(K_max, m + 2 * (2 * m + 1))
    n = 2 * m + 1

    ks = np.arange(m + 1, K_max + 2)
    il_pos = np.abs(np.asarray(lam.inv_values(ks)))
    il_neg = np.abs(np.asarray(lam.inv_values(-ks)))
    delta_lambda = _diff_sum(il_pos) + _diff_sum(il_neg)
    dl_tail = 0.0
    for side in (il_pos, il_neg):
        if _is_tail_monotone(side):
            dl_tail += float(side[-1])  # telescoping remainder
        else:
            dl_tail += lam.inv_l1_tail(K_max)

    kp = k_prime_array(ks, m)
    g_pos = np.abs(alpha[kp + m]) * np.abs(np.asarray(beta.inv_values(ks)))
    kpn = k_prime_array(-ks, m)
    g_neg = np.abs(alpha[kpn + m]) * np.abs(np.asarray(beta.inv_values(-ks)))
    delta_gamma = _diff_sum(g_pos) + _diff_sum(g_neg)
    dg_tail = 0.0
    for side in (g_pos, g_neg):
        if _is_tail_monotone(side):
            dg_tail += float(side[-1])
        else:
            dg_tail += alpha_max * beta.inv_l1_tail(K_max)

    T = max(1, (K_max - m) // n)
    ts = np.arange(-T, T + 1)
    edges = ts * n + m
    alpha_m = float(np.abs(alpha[2 * m]))  # residue of every edge is m
    gamma_alias = alpha_m * float(np.sum(np.abs(np.asarray(beta.inv_values(edges)))))
    ga_tail = alpha_m * (
        _comb_l1_tail(rule_b, n, m, T) + _comb_l1_tail(rule_b, n, -m, T)
    )

    second = delta_gamma + gamma_alias
    value = max(delta_lambda, second)
    tail_bound = max(dl_tail, dg_tail + ga_tail)
    flagged = not (math.isfinite(value) and tail_bound < 0.01 * value) if value > 0 else False
    return EpsilonReport(
        value=value,
        truncation_radius=int(K_max),
        tail_bound=tail_bound,
        variant="general_p",
        components={
            "delta_lambda_term": delta_lambda,
            "delta_gamma_term": delta_gamma,
            "gamma_alias_term": gamma_alias,
        },
        tail_dominated=flagged,
    )


# ---------------------------------------------------------------------------
# Multivariate budget


def _axis_inv_sup_all(ax: CoefficientSequence, scan: int = 256) -> float:
    rule = ax.tail_rule()
    R = max(scan, rule.radius)
    ks = np.arange(-R, R + 1)
    return max(float(np.max(np.abs(ax.inv_values(ks)))), rule.inv_sup(R))


def inv_sup_outside_box(seq: CoefficientSequence, m: int, scan: int = 256) -> float:
    """sup of |seq^{-1}| outside the box |k|_inf <= m."""
    if seq.dimension == 1:
        return seq.inv_sup_tail(m, scan=scan)
    try:
        outs = []
        alls = []
        for j in range(seq.dimension):
            ax = seq._axis_factor(j)
            outs.append(ax.inv_sup_tail(m, scan=scan))
            alls.append(_axis_inv_sup_all(ax, scan=scan))
        best = 0.0
        for a in range(seq.dimension):
            prod = outs[a]
            for b in range(seq.dimension):
                if b != a:
                    prod *= alls[b]
            best = max(best, prod)
        return best
    except SequenceError:
        # no product structure: scan a finite shell, no rule tail available
        R = m + scan
        box = md_index_box(R, seq.dimension)
        outer = np.max(np.abs(box), axis=1) > m
        return float(np.max(np.abs(seq.inv_values(box[outer]))))


def epsilon_p2_md(
    lam: CoefficientSequence,
    beta: CoefficientSequence,
    m: int,
    J_max: Optional[int] = None,
) -> EpsilonReport:
    """Multivariate p = 2 budget with box-truncated block sums.

    For product sequences the blockwise maxima factor per axis, so the
    j-sum is a product of univariate sums; otherwise blocks are
    enumerated directly under the memory guard.
    """
    d = lam.dimension
    if beta.dimension != d:
        raise SequenceError("sequence dimensions differ")
    if d == 1:
        rep = epsilon_p2(lam, beta, m, J_max=J_max)
        return EpsilonReport(
            rep.value,
            rep.truncation_radius,
            rep.tail_bound,
            "p2_multivariate",
            rep.components,
            rep.tail_dominated,
        )
    sup_term = inv_sup_outside_box(lam, m)
    n = 2 * m + 1
    jp = np.arange(-m, m + 1)
    try:
        S = []
        S0 = []
        tails = []
        J_used = 0
        for j in range(d):
            axl, axb = lam._axis_factor(j), beta._axis_factor(j)
            rule = axb.tail_rule()
            J = J_max if J_max is not None else _default_J(rule)
            J_used = max(J_used, J)
            inv_l = np.asarray(axl.inv_values(jp))
            inv_b = np.asarray(axb.inv_values(jp))
            if np.any(inv_b == 0):
                raise SequenceError("generator sequence vanishes inside the band")
            alpha = np.abs(inv_l / inv_b)
            ts = np.arange(-J, J + 1)
            offs = (n * ts)[:, None] + jp[None, :]
            G = np.max(alpha[None, :] * np.abs(np.asarray(axb.inv_values(offs))), axis=1)
            S.append(float(np.sum(G**2)))
            S0.append(float(G[J] ** 2))  # t = 0 block
            amax = float(np.max(alpha))
            tails.append(2 * amax**2 * _block_l2sq_tail(rule, m, J))
        gamma_sq = float(np.prod(S) - np.prod(S0))
        tail_sq = float(np.prod([s + t for s, t in zip(S, tails)]) - np.prod(S))
        trunc = J_used
    except SequenceError:
        # direct enumeration under the guard, rule-free tail
        J = J_max if J_max is not None else 32
        while (2 * J + 1) ** d * n**d > 4 * 10**7 and J > 1:
            J //= 2
        box_j = md_index_box(J, d)
        box_j = box_j[np.max(np.abs(box_j), axis=1) > 0]
        box_k = md_index_box(m, d)
        inv_l = np.asarray(lam.inv_values(box_k))
        inv_b = np.asarray(beta.inv_values(box_k))
        if np.any(inv_b == 0):
            raise SequenceError("generator sequence vanishes inside the band")
        alpha = np.abs(inv_l / inv_b)
        gamma_sq = 0.0
        for jv in box_j:
            freqs = box_k + n * jv[None, :]
            g = alpha * np.abs(np.asarray(beta.inv_values(freqs)))
            gamma_sq += float(np.max(g) ** 2)
        tail_sq = math.inf
        trunc = J
    gamma_sum = math.sqrt(gamma_sq)
    value = max(sup_term, gamma_sum)
    tail_bound = (
        math.sqrt(gamma_sq + tail_sq) - gamma_sum if math.isfinite(tail_sq) else math.inf
    )
    flagged = not (math.isfinite(value) and tail_bound < 0.01 * value) if value > 0 else False
    return EpsilonReport(
        value=value,
        truncation_radius=int(trunc),
        tail_bound=tail_bound,
        variant="p2_multivariate",
        components={"sup_term": sup_term, "gamma_sum_term": gamma_sum},
        tail_dominated=flagged,
    )


# ---------------------------------------------------------------------------
# Closed-form rate predictions


@dataclass(frozen=True)
class RatePrediction:
    """Theoretical decay law matched to the sequence pair, if any."""

    applies: bool
    form: str  # power | exponential | series_l2 | series_l1 | sup_box | none
    exponent: Optional[float]
    reason: str
    lam: Optional[CoefficientSequence] = field(default=None, repr=False)

    @property
    def label(self) -> str:
        if not self.applies:
            return "no-theorem-applies"
        if self.form == "power":
            return f"m^-{self.exponent:g}"
        if self.form == "exponential":
            return f"exp(-{self.exponent:g} m)"
        return self.form

    def value_at(self, m: int) -> float:
        if not self.applies:
            return math.nan
        if self.form == "power":
            return float(m) ** (-self.exponent)
        if self.form == "exponential":
            return math.exp(-self.exponent * m)
        if self.form == "series_l2":
            return math.sqrt(2.0 * _series_sum(self.lam, m, power=2))
        if self.form == "series_l1":
            return _series_sum(self.lam, m, power=1)
        if self.form == "sup_box":
            return inv_sup_outside_box(self.lam, m)
        return math.nan


def _series_sum(lam: CoefficientSequence, m: int, power: int, N: int = 10**5) -> float:
    """sum_{k >= 1} |lam_{mk}|^{-power}, truncated with a rule tail."""
    rule = lam.tail_rule()
    tail_fn = rule.inv_l1 if power == 1 else rule.inv_l2_sq
    if not math.isfinite(tail_fn(max(m, rule.radius, 1))):
        return math.inf
    ks = m * np.arange(1, N + 1)
    vals = np.abs(np.asarray(lam.inv_values(ks))) ** power
    total = float(np.sum(vals))
    return total + tail_fn(m * N) / (2 * m)


def _probe_view(dimension, fn):
    view = CoefficientSequence()
    view.dimension = dimension
    view.family = "probe-view"
    view.values = fn  # type: ignore[method-assign]
    return view


def _ratio_power_probe(seq: CoefficientSequence, rho: float, radius: int) -> bool:
    """Probe {theta_k / |k|_2^rho} for nondecreasing type."""

    def fn(k):
        k = np.asarray(k, dtype=np.int64)
        if seq.dimension == 1:
            nrm = np.abs(k).astype(float)
        else:
            nrm = np.sqrt(np.sum(k.astype(float) ** 2, axis=-1))
        return np.asarray(seq.values(k)) / np.maximum(nrm, 1.0) ** rho

    return check_nondecreasing_type(_probe_view(seq.dimension, fn), radius).holds


def _bounded_inv_ratio(beta, lam, radius) -> bool:
    """|beta_k^{-1}| <= c |lam_k^{-1}| witnessed on the probe range."""
    ks = np.arange(-radius, radius + 1)
    ib = np.abs(np.asarray(beta.inv_values(ks)))
    il = np.abs(np.asarray(lam.inv_values(ks)))
    edge = lam.tail_rule().inv_sup(radius)
    if edge == 0:
        return False
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(il > 0, ib / il, np.inf)
    return bool(np.all(np.isfinite(ratio)))


def _log_ratio_doubling(lam, beta, upto: int = 40) -> bool:
    """{log(beta_k/lam_k) / 2^k} nondecreasing on the probe range."""
    ks = np.arange(1, upto + 1)
    with np.errstate(divide="ignore", over="ignore"):
        alpha = np.asarray(lam.inv_values(ks)) / np.asarray(beta.inv_values(ks))
    if np.any(alpha <= 0) or np.any(~np.isfinite(alpha)):
        return False
    seq = np.log(alpha) / 2.0**ks
    return bool(np.all(np.diff(seq) >= -1e-12))


def _nondecreasing_positive(seq, upto: int = 64) -> bool:
    ks = np.arange(1, upto + 1)
    vals = np.asarray(seq.values(ks))
    return bool(np.all(vals > 0) and np.all(np.diff(vals) >= -1e-12))


def _symmetric_on_probe(seq, radius: int = 64) -> bool:
    ks = np.arange(1, radius + 1)
    return bool(np.allclose(seq.values(ks), seq.values(-ks), rtol=1e-12, atol=0.0))


def predicted_rate(
    lam: CoefficientSequence,
    beta: CoefficientSequence,
    p: float,
    d: Optional[int] = None,
) -> RatePrediction:
    """Match (lam, beta, p) against the rate theorems' hypotheses.

    Hypotheses are certified by finite probes (radius 64 in one
    dimension), so a positive answer is probe-certified, never proved.
    Returns a no-theorem prediction when every gate fails.
    """
    if d is None:
        d = lam.dimension
    if lam.dimension != d or beta.dimension != d:
        raise SequenceError("sequence dimensions differ from d")
    if not 1.0 < p < math.inf:
        raise ValueError("p must lie in (1, inf)")
    none = lambda why: RatePrediction(False, "none", None, why)

    if d == 1:
        same = lam == beta
        if same and isinstance(lam, Korobov):
            if lam.r > 0.5 and _ratio_power_probe(lam, lam.r, 64):
                return RatePrediction(True, "power", lam.r, "power-law pair (probe-certified)")
            return none("power-law pair needs exponent r > 1/2")
        if same and isinstance(lam, Exponential):
            return RatePrediction(True, "exponential", lam.s, "exponential pair")
        if same and isinstance(lam, MaskPower):
            if lam.r > 1 and lam.oscillation.check_bounds()[2]:
                return RatePrediction(True, "power", lam.r, "mask pair of type r > 1")
            return none("mask pair needs type r > 1 with certified profile bounds")
        if isinstance(lam, MaskPower) and isinstance(beta, ExponentMask):
            if lam.r > 1 and lam.oscillation.check_bounds()[2]:
                return RatePrediction(
                    True, "power", lam.r, "mask plus exponent-type generator"
                )
            return none("mask/exponent pair needs mask type r > 1")
        if p == 2.0:
            if (
                check_nondecreasing_type(lam, 64).holds
                and check_nondecreasing_type(beta, 64).holds
                and _bounded_inv_ratio(beta, lam, 64)
            ):
                pred = RatePrediction(
                    True, "series_l2", None, "nondecreasing-type pair (probe-certified)", lam
                )
                if math.isfinite(pred.value_at(1)):
                    return pred
                return none("block series diverges for this sequence")
            return none("nondecreasing-type probes failed")
        if (
            _symmetric_on_probe(lam)
            and _symmetric_on_probe(beta)
            and _log_ratio_doubling(lam, beta)
            and _nondecreasing_positive(lam)
        ):
            pred = RatePrediction(
                True, "series_l1", None, "doubling-ratio pair (probe-certified)", lam
            )
            if math.isfinite(pred.value_at(1)):
                return pred
            return none("reciprocal series diverges for this sequence")
        return none("no general-p gate matched")

    if p != 2.0:
        return none("multivariate rate theory covers p = 2 only")
    probe_radius = 6 if d == 2 else 4
    lo = d / 2.0 + 0.25
    for rho in np.arange(lo, 4.0 * d + 0.01, 0.25):
        if _ratio_power_probe(lam, float(rho), probe_radius):
            if lam == beta or _bounded_inv_ratio(beta, lam, 16):
                return RatePrediction(
                    True,
                    "sup_box",
                    float(rho),
                    f"box-sup rate (probe-certified at rho={rho:g})",
                    lam,
                )
    return none("no multivariate gate matched")
