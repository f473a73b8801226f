"""The linearized solution operator S(t) and its derivative/weighted variants.

    (S(t) f)(r,z) = (1/(4 pi t)) int (rb/r)^{1/2} H(t/(r rb))
                    exp(-((r-rb)^2 + (z-zb)^2)/(4t)) f(rb,zb) drb dzb

The kernel separates into an r-matrix (with the H prefactor) and a Gaussian
z-convolution; the analytic Gaussian is used as written, with no discrete
renormalization, so the operator identities behind the estimate powers stay
clean.  Integration-by-parts kernels give S(t) applied to divergences and
the gradient of S(t) without differencing the state:

    A_r = (t/(r rb^2)) H'(t/(r rb)) - (1/(2 rb) + (r-rb)/(2t)) H(t/(r rb))
    A_z = -((z-zb)/(2t)) H(t/(r rb))        [divergence form, d/drb parts]

and the mirrored (d/dr) pair for the gradient-output variant.

For t below h^2/4 the discrete kernel is under-resolved and apply_S refuses
(UnderResolvedError); t = 0 returns the identity.
"""

from __future__ import annotations

import numpy as np
from scipy.fft import irfft, next_fast_len, rfft

from .errors import DomainError, UnderResolvedError
from .fields import ScalarField
from .grids import Grid
from .norms import weighted_lp
from .reports import RatioReport, make_ratio_report
from .sampling import gaussian_mixture
from .special import eval_H, eval_H_prime


def resolution_floor(grid: Grid) -> float:
    h = max(grid.h_r, grid.h_z)
    return h * h / 4.0


def _check_time(t: float, grid: Grid):
    if not np.isfinite(t) or t < 0:
        raise DomainError("time must be finite and nonnegative")
    if 0 < t < resolution_floor(grid):
        raise UnderResolvedError(
            f"t={t:g} below kernel resolution floor h^2/4={resolution_floor(grid):g}; "
            "substep with coarser times"
        )


# ---------------------------------------------------------------------------
# kernel plans


class SemigroupKernelPlan:
    """Assembled discrete kernel for one (t, grid, variant) combination.

    variant "plain":       r-matrix + Gaussian z-profile
    variant "div_applied": (A_r matrix, H matrix) + (Gaussian, dGaussian)
    variant "grad_output": output-gradient kernels, optional weights (gamma, eps)
    """

    def __init__(self, t: float, grid: Grid, variant: str = "plain",
                 weights: tuple[float, float] = (0.0, 0.0)):
        self.t = float(t)
        self.grid = grid
        self.grid_hash = grid.content_hash()
        self.variant = variant
        self.weights = weights
        t = self.t
        r = grid.r
        ri = r[:, None]
        rj = r[None, :]
        arg = t / (ri * rj)
        h_mat = eval_H(arg)
        gauss_r = np.exp(-((ri - rj) ** 2) / (4.0 * t))
        scale = grid.cell_area / (4.0 * np.pi * t)
        self.fft_size = next_fast_len(2 * grid.n_z)
        dz = (np.arange(2 * grid.n_z - 1) - (grid.n_z - 1)) * grid.h_z
        self.gauss_hat = rfft(np.exp(-(dz**2) / (4.0 * t)), self.fft_size)
        if variant == "plain":
            self.m_plain = scale * np.sqrt(rj / ri) * h_mat * gauss_r
        elif variant == "div_applied":
            hp_mat = eval_H_prime(arg)
            a_r = (t / (ri * rj**2)) * hp_mat - (1.0 / (2 * rj) + (ri - rj) / (2 * t)) * h_mat
            base = scale * np.sqrt(rj / ri) * gauss_r
            self.m_ar = base * a_r
            self.m_h = base * h_mat
            self.dgauss_hat = rfft(-(dz / (2.0 * t)) * np.exp(-(dz**2) / (4.0 * t)), self.fft_size)
        elif variant == "grad_output":
            gamma, eps = weights
            hp_mat = eval_H_prime(arg)
            b_r = -(t / (ri**2 * rj)) * hp_mat - (1.0 / (2 * ri) + (ri - rj) / (2 * t)) * h_mat
            base = scale * rj ** (0.5 + eps) / ri ** (0.5 - gamma) * gauss_r
            self.m_br = base * b_r
            self.m_h = base * h_mat
            self.dgauss_hat = rfft(-(dz / (2.0 * t)) * np.exp(-(dz**2) / (4.0 * t)), self.fft_size)
        else:
            raise DomainError(f"unknown semigroup variant {variant!r}")

    def _zconv(self, values: np.ndarray, kernel_hat: np.ndarray) -> np.ndarray:
        n_z = self.grid.n_z
        v_hat = rfft(values, self.fft_size, axis=1)
        return irfft(v_hat * kernel_hat[None, :], self.fft_size, axis=1)[
            :, n_z - 1 : 2 * n_z - 1
        ]

    def apply_plain(self, f: ScalarField) -> ScalarField:
        return f.with_values(self.m_plain @ self._zconv(f.values, self.gauss_hat))

    def apply_div(self, v_r: ScalarField, v_z: ScalarField) -> ScalarField:
        out = self.m_ar @ self._zconv(v_r.values, self.gauss_hat)
        out += self.m_h @ self._zconv(v_z.values, self.dgauss_hat)
        return v_r.with_values(out, "generic")

    def apply_grad(self, f: ScalarField) -> tuple[ScalarField, ScalarField]:
        g_r = self.m_br @ self._zconv(f.values, self.gauss_hat)
        g_z = self.m_h @ self._zconv(f.values, self.dgauss_hat)
        return f.with_values(g_r, "generic"), f.with_values(g_z, "generic")


_PLAN_CACHE: dict[tuple, SemigroupKernelPlan] = {}
_PLAN_CACHE_MAX = 48


def _plan(t: float, grid: Grid, variant: str, weights=(0.0, 0.0)) -> SemigroupKernelPlan:
    key = (variant, float(t), grid.content_hash(), weights)
    plan = _PLAN_CACHE.get(key)
    if plan is None:
        if len(_PLAN_CACHE) >= _PLAN_CACHE_MAX:
            _PLAN_CACHE.pop(next(iter(_PLAN_CACHE)))
        plan = SemigroupKernelPlan(t, grid, variant, weights)
        _PLAN_CACHE[key] = plan
    return plan


# ---------------------------------------------------------------------------
# public operations


def apply_S(t: float, f: ScalarField) -> ScalarField:
    """S(t) f; S(0) is the identity by convention."""
    _check_time(t, f.grid)
    if t == 0:
        return f.copy()
    return _plan(t, f.grid, "plain").apply_plain(f)


def apply_S_div(t: float, v_r: ScalarField, v_z: ScalarField) -> ScalarField:
    """S(t) applied to d_r(v_r) + d_z(v_z) via the integration-by-parts
    kernel; the state is never differenced."""
    if t <= 0 or not np.isfinite(t):
        raise DomainError("apply_S_div needs t > 0")
    _check_time(t, v_r.grid)
    if v_r.grid != v_z.grid:
        raise DomainError("flux components live on different grids")
    return _plan(t, v_r.grid, "div_applied").apply_div(v_r, v_z)


def apply_S_grad(t: float, f: ScalarField, gamma: float = 0.0, eps: float = 0.0):
    """(r^gamma d_r S(t)(r^eps f), r^gamma d_z S(t)(r^eps f)) by the explicit
    differentiated kernel."""
    if t <= 0 or not np.isfinite(t):
        raise DomainError("apply_S_grad needs t > 0")
    _check_time(t, f.grid)
    return _plan(t, f.grid, "grad_output", (gamma, eps)).apply_grad(f)


# ---------------------------------------------------------------------------
# empirical estimate suites


def _weight_field(f: ScalarField, a: float) -> ScalarField:
    if a == 0.0:
        return f
    return f.with_values(f.grid.r[:, None] ** a * f.values)


def check_semigroup_bound(
    variant: str,
    p: float,
    q: float,
    exponents: tuple[float, float],
    trials: int,
    grid: Grid | None = None,
    seed: int = 0,
    t_range: tuple[float, float] = (1e-2, 1e2),
) -> RatioReport:
    """Sampled sup of t^power * (weighted output L^q(Omega)) / (input L^p(Omega)).

    variant "i":   ||r^a S(t) grad(r^b f)||_q,  a+b <= 0, a,b >= -1
    variant "ii":  ||r^a S(t) (r^(b-1) f)||_q,  a+b <= 1, a,b >= -1
    variant "iii": ||r^g grad S(t) (r^e f)||_q, g+e <= 0, g >= 0, e >= -1
    with power = 1/2 - (a+b)/2 + 1/p - 1/q  (variant ii drops nothing: same
    formula; the plain bound is a = 0, b = 1).
    """
    a, b = exponents
    if not (1 <= p <= q):
        raise DomainError("need 1 <= p <= q")
    if variant == "i":
        if not (a + b <= 0 and a >= -1 and b >= -1):
            raise DomainError("variant i needs a+b <= 0, a,b >= -1")
    elif variant == "ii":
        if not (a + b <= 1 and a >= -1 and b >= -1):
            raise DomainError("variant ii needs a+b <= 1, a,b >= -1")
    elif variant == "iii":
        if not (a + b <= 0 and a >= 0 and b >= -1):
            raise DomainError("variant iii needs g+e <= 0, g >= 0, e >= -1")
    else:
        raise DomainError(f"unknown variant {variant!r}")
    power = 0.5 - (a + b) / 2.0 + 1.0 / p - 1.0 / q
    grid = grid or Grid(64, 128, 8.0, 8.0)
    lo = max(t_range[0], resolution_floor(grid))
    rng = np.random.default_rng(seed)
    ratios = []
    for _ in range(trials):
        f = gaussian_mixture(grid, rng, axis_taper=0.5)
        t = np.exp(rng.uniform(np.log(lo), np.log(t_range[1])))
        denom = weighted_lp(f, 0.0, p, "omega")
        if denom == 0.0:
            continue
        if variant == "i":
            rb_f = _weight_field(f, b)
            plan = _plan(t, grid, "div_applied")
            g_r = plan.apply_div(rb_f, ScalarField.zeros(grid))
            g_z = plan.apply_div(ScalarField.zeros(grid), rb_f)
            out = f.with_values(np.hypot(g_r.values, g_z.values))
            num = weighted_lp(out, a, q, "omega")
        elif variant == "ii":
            out = apply_S(t, _weight_field(f, b - 1.0))
            num = weighted_lp(out, a, q, "omega")
        else:
            g_r, g_z = apply_S_grad(t, f, gamma=a, eps=b)
            out = f.with_values(np.hypot(g_r.values, g_z.values))
            num = weighted_lp(out, 0.0, q, "omega")
        ratios.append(t**power * num / denom)
    return make_ratio_report(
        f"semigroup_{variant}",
        {"p": p, "q": q, "alpha": a, "beta": b, "power": power},
        ratios,
    )


def check_pointwise_assertions(
    assertion: str,
    samples: int,
    alpha: float = 0.0,
    beta: float = 0.0,
    seed: int = 0,
) -> RatioReport:
    """Monte-Carlo sup of the pointwise kernel bounds.

    Assertion "a" bounds the H/H' combination

        A = (t r^{a-3/2} rb^{b-3/2} |H'| + r^{a-1/2} rb^{b-1/2} |H|) e^{-|zeta|^2/4t}

    and assertion "b" the drift part

        B = rb^{1/2+b} r^{a-1/2} (|r-rb| + |z-zb|)/(2t) |H| e^{-|zeta|^2/4t}

    both against t^{-(1/2-(a+b)/2)} e^{-|zeta|^2/5t}.  Ranges: a+b <= 1 for
    "a", a+b <= 0 for "b", both with a, b >= -1.
    """
    if assertion == "a":
        if not (alpha + beta <= 1 and alpha >= -1 and beta >= -1):
            raise DomainError("assertion a needs a+b <= 1, a,b >= -1")
    elif assertion == "b":
        if not (alpha + beta <= 0 and alpha >= -1 and beta >= -1):
            raise DomainError("assertion b needs a+b <= 0, a,b >= -1")
    else:
        raise DomainError("assertion must be 'a' or 'b'")
    rng = np.random.default_rng(seed)
    r = np.exp(rng.uniform(np.log(1e-3), np.log(1e3), samples))
    rb = np.exp(rng.uniform(np.log(1e-3), np.log(1e3), samples))
    t = np.exp(rng.uniform(np.log(1e-4), np.log(1e4), samples))
    dz = np.exp(rng.uniform(np.log(1e-4), np.log(1e3), samples)) * rng.choice(
        [-1.0, 1.0], samples
    )
    zeta2 = (r - rb) ** 2 + dz**2
    arg = t / (r * rb)
    h = np.abs(eval_H(arg))
    # ratio = LHS / [t^{-(1/2-(a+b)/2)} e^{-zeta^2/5t}] with the Gaussian
    # quotient folded analytically: e^{-zeta^2/4t}/e^{-zeta^2/5t} = e^{-zeta^2/20t}
    damp = np.exp(-zeta2 / (20.0 * t)) * t ** (0.5 - (alpha + beta) / 2.0)
    if assertion == "a":
        hp = np.abs(eval_H_prime(arg))
        lhs = t * r ** (alpha - 1.5) * rb ** (beta - 1.5) * hp + r ** (
            alpha - 0.5
        ) * rb ** (beta - 0.5) * h
    else:
        lhs = (
            rb ** (0.5 + beta)
            * r ** (alpha - 0.5)
            * (np.abs(r - rb) + np.abs(dz))
            / (2.0 * t)
            * h
        )
    ratios = lhs * damp
    return make_ratio_report(
        f"pointwise_{assertion}", {"alpha": alpha, "beta": beta}, ratios
    )
