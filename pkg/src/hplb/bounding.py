"""The piecewise bounding envelope Q(z, lam) and its violation predicate.

For a TV candidate lam in [0, 1], split the error budget three ways at
level alpha/3 each: two binomial quantiles absorb the (unobserved) witness
counts on the left and right of the score ordering,

    q_m = q_{1 - alpha/3}(lam, m),   q_n = q_{1 - alpha/3}(lam, n),

leaving effective sizes m_eff = m - q_m and n_eff = n - q_n, and a
simultaneous band at level alpha/3 covers the reduced counting process in
between:

    Q(z, lam) = z                              for z <= q_m,
                m                              for z >= m + n_eff,
                q_m + band(z - q_m; m_eff, n_eff)   otherwise.

At the true TV the counting process exceeds Q somewhere with probability
at most alpha, which is exactly what the adaptive estimator needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .counting import CountingPath, band_constant, band_value
from .distributions import BinomialParams, binom_quantile
from .errors import ParameterError

__all__ = ["BoundSpec", "EffectiveSizes", "effective_sizes", "q_bound", "is_violated"]


@dataclass(frozen=True)
class BoundSpec:
    """Configuration of the bounding envelope."""

    alpha: float = 0.05
    band_kind: str = "simulated"
    sims: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.band_kind not in ("analytic", "simulated"):
            raise ParameterError(f"unknown band kind {self.band_kind!r}")
        if self.band_kind == "simulated" and self.sims < 100:
            raise ParameterError("simulated band needs sims >= 100")


@dataclass(frozen=True)
class EffectiveSizes:
    q_m: int
    q_n: int
    m_eff: int = field(init=False)
    n_eff: int = field(init=False)
    m: int = 0
    n: int = 0

    def __post_init__(self):
        object.__setattr__(self, "m_eff", self.m - self.q_m)
        object.__setattr__(self, "n_eff", self.n - self.q_n)


def effective_sizes(lambda_tilde: float, m: int, n: int, spec: BoundSpec) -> EffectiveSizes:
    """Binomial 1 - alpha/3 quantiles of the witness counts and the remainders."""
    if m < 1 or n < 1:
        raise ParameterError("class sizes must be at least 1")
    level = 1.0 - spec.alpha / 3.0
    if lambda_tilde <= 0.0:
        q_m, q_n = 0, 0
    elif lambda_tilde >= 1.0:
        q_m, q_n = m, n
    else:
        q_m = binom_quantile(level, BinomialParams(lambda_tilde, m))
        q_n = binom_quantile(level, BinomialParams(lambda_tilde, n))
    return EffectiveSizes(q_m=q_m, q_n=q_n, m=m, n=n)


def _band_for(sizes: EffectiveSizes, spec: BoundSpec):
    return band_constant(
        spec.alpha / 3.0,
        sizes.m_eff,
        sizes.n_eff,
        spec.band_kind,
        sims=spec.sims,
        seed=spec.seed,
    )


def q_bound(z, lambda_tilde: float, m: int, n: int, spec: BoundSpec):
    """Evaluate Q(z, lambda_tilde); z may be a scalar or a vector in [1, m+n-1].

    When the middle region is empty (m_eff or n_eff is zero) the two outer
    branches meet and the envelope is z up to q_m and m beyond, which
    dominates every admissible path pointwise.  With the analytic band and
    m_eff < 8, the simulated band at the same level is substituted.
    """
    N = m + n
    z_arr = np.asarray(z)
    if (z_arr < 1).any() or (z_arr > N - 1).any():
        raise ParameterError(f"z must lie in [1, {N - 1}]")
    sizes = effective_sizes(lambda_tilde, m, n, spec)
    q = np.where(z_arr <= sizes.q_m, z_arr, float(m)).astype(float)
    if sizes.m_eff > 0 and sizes.n_eff > 0:
        mid = (z_arr > sizes.q_m) & (z_arr < m + sizes.n_eff)
        if mid.any():
            const = _band_for(sizes, spec)
            q[mid] = sizes.q_m + band_value(const, z_arr[mid] - sizes.q_m)
    out = q
    return float(out) if np.asarray(z).ndim == 0 else out


def is_violated(path: CountingPath, lambda_tilde: float, spec: BoundSpec):
    """Whether sup_z (V[z] - Q(z, lambda_tilde)) > 0, plus the argmax z.

    Only the middle branch can be exceeded (V[z] <= min(z, m) always), so
    the scan is restricted there.
    """
    m, n = path.m, path.n
    sizes = effective_sizes(lambda_tilde, m, n, spec)
    if sizes.m_eff == 0 or sizes.n_eff == 0:
        return False, None
    z = np.arange(1, m + n)
    mid = (z > sizes.q_m) & (z < m + sizes.n_eff)
    if not mid.any():
        return False, None
    const = _band_for(sizes, spec)
    gap = path.v[mid] - (sizes.q_m + band_value(const, z[mid] - sizes.q_m))
    k = int(np.argmax(gap))
    if gap[k] > 0.0:
        return True, int(z[mid][k])
    return False, None
