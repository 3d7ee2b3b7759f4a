"""
Fourier symbols of the BFD operator.

The two node families see different stencils, so a single Fourier mode is not
an eigenvector.  On the block grid the mode exp(i omega x) and its alias
exp(i nu x), nu = omega -/+ N, differ only by a factor of +/-i on each node
family, and Q maps their span into itself.  Each low wavenumber omega
therefore carries a 2x2 problem whose eigenvalues Qhat_1, Qhat_2 and
eigenvectors

    psi_k = alpha_k exp(i omega x) + beta_k exp(i nu x),   |alpha_k|^2 + |beta_k|^2 = 1,

give the full spectral decomposition of Q.  Qhat_1 is the branch that tends to
-i omega as omega h -> 0 (the physical mode); Qhat_2 is its oscillatory
partner.

Wavenumbers are integer indices; the physical wavenumber of index m is
2 pi m / L and theta = omega h = 2 pi omega / N is the dimensionless phase.
"""

from dataclasses import dataclass

import mpmath
import numpy as np

from .grid import BlockGrid, GridFunction
from .operators import SchemeParams, _bfd_quiet, apply

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ModePair:
    omega: int
    nu: int
    theta_h: float


def mode_pair(omega: int, N: int) -> ModePair:
    nu = omega - N if omega > 0 else omega + N
    return ModePair(int(omega), int(nu), 2 * np.pi * omega / N)


def low_band(N: int) -> np.ndarray:
    """Low wavenumbers whose pairs (omega, nu) cover all 2N grid modes once."""
    return np.arange(-((N - 1) // 2), N // 2 + 1)


def mode_pairs(N: int) -> list[ModePair]:
    return [mode_pair(w, N) for w in low_band(N)]


def mu_sigma(theta_h, h, params: SchemeParams):
    """Diagonal symbols of Q on exp(i omega x) (mu) and on exp(i nu x) (sigma).

    Entry 1 is the x_{j-1/4} family, entry 2 the x_{j+1/4} family.
    """
    t = np.asarray(theta_h, dtype=float)
    c1, c2 = params.c1, params.c2
    s4, co4 = np.sin(t / 4) ** 4, np.cos(t / 4) ** 4
    half = np.exp(0.5j * t)
    lo = -1j * (8 * np.sin(t / 2) - np.sin(t))
    hi = 1j * (8 * np.sin(t / 2) + np.sin(t))
    mu1 = (lo - 8 * s4 * (c1 + c2 * half)) / (3 * h)
    mu2 = (lo + 8 * s4 * (c1 / half + c2)) / (3 * h)
    sigma1 = (hi - 8 * co4 * (c1 - c2 * half)) / (3 * h)
    sigma2 = (hi - 8 * co4 * (c1 / half - c2)) / (3 * h)
    return mu1, mu2, sigma1, sigma2


def _omega_delta(t, c1, c2, sin=np.sin, cos=np.cos):
    # sign of the sine term in Omega differs from the printed display; this
    # is the value implied by mu/sigma (the trace of the 2x2 problem)
    omega = 4j * (c1 + c2 + 1) * sin(t) + 6 * (c2 - c1) * cos(t) + 10 * (c2 - c1)
    delta = (-80 * c1 - 256 + 55 * c1**2 + 55 * c2**2 - 2 * (63 * c1 + 40) * c2
             + 4 * (15 * c1**2 + c1 * (16 - 30 * c2) + c2 * (15 * c2 + 16) + 64) * cos(t)
             + (13 * c1**2 + 2 * c1 * (8 - 5 * c2) + c2 * (13 * c2 + 16)) * cos(2 * t)
             + 8j * (c2 - c1) * sin(t) * ((3 * c1 + 3 * c2 + 4) * cos(t) + 5 * c1 + 5 * c2 + 28))
    return omega, delta


def eigen_symbols(theta_h, h, params: SchemeParams):
    """Closed-form eigenvalues (Qhat1, Qhat2) and the intermediates (Omega, Delta).

    Qhat = (Omega -/+ sqrt(2 Delta)) / 12h, labelled so that Qhat1 is the root
    nearer to -i theta/h.
    """
    t = np.asarray(theta_h, dtype=float)
    omega, delta = _omega_delta(t, params.c1, params.c2)
    root = np.sqrt(2 * delta + 0j)
    a = (omega - root) / (12 * h)
    b = (omega + root) / (12 * h)
    target = -1j * t / h
    swap = np.abs(b - target) < np.abs(a - target)
    return np.where(swap, b, a), np.where(swap, a, b), omega, delta


def _sign(theta):
    # e^{i nu x} = s * (-i) e^{i omega x} on the x_{j-1/4} family
    return np.where(np.asarray(theta) > 0, 1.0, -1.0)


def coefficients(theta_h, h, params: SchemeParams, qhat, mu, sigma, k: int):
    """Eigenvector coefficients (r_k, alpha_k, beta_k) for eigenvalue ``qhat``.

    ``mu`` and ``sigma`` are the pairs returned by :func:`mu_sigma`.
    r_k = i beta_k / alpha_k comes from the x_{j-1/4} equation of the reduced
    system; when that equation degenerates (pure alias eigenvector, e.g. the
    partner mode of the central scheme) the x_{j+1/4} equation is used, and
    r_k = inf marks alpha_k = 0.
    """
    mu1, mu2 = mu
    sigma1, sigma2 = sigma
    s = _sign(theta_h)
    qhat = np.asarray(qhat, dtype=complex)
    scale = np.abs(mu1) + np.abs(sigma1) + np.abs(mu2) + np.abs(sigma2) + np.abs(qhat)
    tol = 64 * _EPS * scale

    num1, den1 = mu1 - qhat, sigma1 - qhat
    num2, den2 = qhat - mu2, sigma2 - qhat
    use2 = (np.abs(den1) <= tol) & (np.abs(num1) <= tol)
    num = np.where(use2, num2, num1)
    den = np.where(use2, den2, den1)
    null = (np.abs(den) <= tol) & (np.abs(num) <= tol)
    alias = (np.abs(den) <= tol) & ~null
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(alias | null, 0, s * num / np.where(alias | null, 1, den))
    r = np.where(alias | (null & (k == 2)), np.inf, r)

    mag = np.abs(r)
    finite = np.isfinite(mag)
    norm = np.hypot(1.0, np.where(finite, mag, 0.0))
    if k == 1:
        alpha = np.where(finite, 1 / norm, 0.0)
        beta = np.where(finite, -1j * np.where(finite, r, 0) / norm, -1j)
    elif k == 2:
        with np.errstate(divide="ignore", invalid="ignore"):
            phase = np.where((mag == 0) | ~finite, 1.0, mag / np.where(mag == 0, 1, r))
        alpha = np.where(finite, 1j * phase / norm, 0.0)
        beta = np.where(finite, np.where(finite, mag, 0.0) / norm, 1.0)
    else:
        raise ValueError("k must be 1 or 2")
    return r + 0j, alpha + 0j, beta + 0j


@dataclass(frozen=True)
class SymbolDecomposition:
    mode: ModePair
    params: SchemeParams
    h: float
    mu1: complex
    mu2: complex
    sigma1: complex
    sigma2: complex
    Omega: complex
    Delta: complex
    Qhat1: complex
    Qhat2: complex
    r1: complex
    r2: complex
    alpha1: complex
    beta1: complex
    alpha2: complex
    beta2: complex
    cos_theta: float

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([self.Qhat1, self.Qhat2])

    @property
    def eigenvectors(self) -> np.ndarray:
        """Columns (alpha_k, beta_k) in (exp(i omega x), exp(i nu x)) coordinates."""
        return np.array([[self.alpha1, self.alpha2], [self.beta1, self.beta2]])


def _table(theta, h, params):
    theta = np.asarray(theta, dtype=float)
    mu1, mu2, s1, s2 = mu_sigma(theta, h, params)
    q1, q2, omega, delta = eigen_symbols(theta, h, params)
    r1, a1, b1 = coefficients(theta, h, params, q1, (mu1, mu2), (s1, s2), 1)
    r2, a2, b2 = coefficients(theta, h, params, q2, (mu1, mu2), (s1, s2), 2)
    cos = np.abs(np.conj(a1) * a2 + np.conj(b1) * b2)
    return dict(mu1=mu1, mu2=mu2, sigma1=s1, sigma2=s2, Omega=omega, Delta=delta,
                Qhat1=q1, Qhat2=q2, r1=r1, r2=r2, alpha1=a1, beta1=b1,
                alpha2=a2, beta2=b2, cos_theta=cos)


def decompose(mode: ModePair, h: float, params: SchemeParams) -> SymbolDecomposition:
    """Eigen-decomposition of Q restricted to the (omega, nu) pair."""
    row = {k: complex(np.asarray(v)) for k, v in _table(mode.theta_h, h, params).items()}
    if mode.omega == 0:
        # constant mode and its alias exp(i N x); exact values, no roundoff
        row.update(Qhat1=0j, Qhat2=8 * (params.c2 - params.c1) / (3 * h) + 0j,
                   r1=0j, r2=complex(np.inf), alpha1=1 + 0j, beta1=0j,
                   alpha2=0j, beta2=1 + 0j, cos_theta=0.0)
    row["cos_theta"] = float(np.real(row["cos_theta"]))
    return SymbolDecomposition(mode=mode, params=params, h=h, **row)


def decompose_all(N: int, h: float, params: SchemeParams) -> list[SymbolDecomposition]:
    return [decompose(m, h, params) for m in mode_pairs(N)]


def reduced_residual(dec: SymbolDecomposition) -> float:
    """Largest relative residual of the two reduced equations over k = 1, 2.

    Written in (alpha, beta) form so pure-alias eigenvectors are covered.
    """
    s = 1.0 if dec.mode.omega > 0 else -1.0
    worst = 0.0
    for q, a, b in ((dec.Qhat1, dec.alpha1, dec.beta1), (dec.Qhat2, dec.alpha2, dec.beta2)):
        # family values: alpha + s1 beta with s1 = -i s (j-1/4) and +i s (j+1/4)
        e1 = dec.mu1 * a - 1j * s * dec.sigma1 * b - q * (a - 1j * s * b)
        e2 = dec.mu2 * a + 1j * s * dec.sigma2 * b - q * (a + 1j * s * b)
        scale = abs(dec.mu1) + abs(dec.mu2) + abs(dec.sigma1) + abs(dec.sigma2) + abs(q)
        if scale:
            worst = max(worst, abs(e1) / scale, abs(e2) / scale)
    return worst


def fourier_mode(grid: BlockGrid, index) -> np.ndarray:
    """Samples of exp(2 pi i m x / L) at the grid nodes."""
    return np.exp(1j * grid.wavenumber(index) * grid.nodes)


def build_mode_vectors(grid: BlockGrid, mode: ModePair, dec: SymbolDecomposition,
                       check: bool = True):
    """Grid eigenvectors psi_1, psi_2 of the pair.

    With ``check`` the eigen-residual is verified against the assembled
    operator; a failure means the eigenvalue and eigenvector labels disagree.
    """
    ew, ev = fourier_mode(grid, mode.omega), fourier_mode(grid, mode.nu)
    psi = [GridFunction(grid, dec.alpha1 * ew + dec.beta1 * ev),
           GridFunction(grid, dec.alpha2 * ew + dec.beta2 * ev)]
    if check:
        op = _bfd_quiet(grid, dec.params)
        qnorm = np.abs(np.concatenate([op.A, op.B, op.C], axis=1)).sum(axis=1).max()
        for p, q in zip(psi, dec.eigenvalues):
            res = np.abs(apply(op, p).values - q * p.values).max()
            if res > 1e-9 * qnorm * np.abs(p.values).max():
                raise RuntimeError(
                    f"mode {mode.omega}: eigen-residual {res:.3e} exceeds tolerance")
    return tuple(psi)


def cos_theta(dec: SymbolDecomposition) -> float:
    """|<psi_1, psi_2>| for the unit-normalised pair eigenvectors."""
    return float(abs(np.conj(dec.alpha1) * dec.alpha2 + np.conj(dec.beta1) * dec.beta2))


@dataclass(frozen=True)
class StabilityReport:
    params: SchemeParams
    max_re_Q1: float
    max_re_Q2: float
    max_cos_theta: float
    h: float = 1.0

    @property
    def max_re(self) -> float:
        return max(self.max_re_Q1, self.max_re_Q2)

    @property
    def stable(self) -> bool:
        return self.max_re <= 1e-10 / self.h and self.max_cos_theta < 0.4


def stability_scan(params: SchemeParams, theta_samples: int = 257,
                   h: float = 1.0) -> StabilityReport:
    """Scan the symbols over theta in [-pi, pi] (plus the zero-frequency pair)."""
    if theta_samples < 64:
        raise ValueError("use at least 64 theta samples")
    theta = np.linspace(-np.pi, np.pi, theta_samples)
    theta = theta[theta != 0]
    tab = _table(theta, h, params)
    zero_partner = 8 * (params.c2 - params.c1) / (3 * h)
    return StabilityReport(
        params,
        max_re_Q1=float(max(tab["Qhat1"].real.max(), 0.0)),
        max_re_Q2=float(max(tab["Qhat2"].real.max(), zero_partner)),
        max_cos_theta=float(tab["cos_theta"].max()),
        h=h,
    )


# -- small-theta behaviour of the physical branch --------------------------

def _qhat1_mp(theta, c1, c2):
    """h * Qhat1 at phase theta, in mpmath precision."""
    omega, delta = _omega_delta(theta, c1, c2, sin=mpmath.sin, cos=mpmath.cos)
    root = mpmath.sqrt(2 * delta)
    a, b = (omega - root) / 12, (omega + root) / 12
    target = -1j * theta
    return b if abs(b - target) < abs(a - target) else a


@dataclass(frozen=True)
class AsymptoticFit:
    """Series h (Qhat1 + i omega) = theta^5 (a0 + a1 theta + a2 theta^2 + ...).

    ``coefficients[k]`` multiplies h^(4+k) omega^(5+k) in Qhat1 + i omega.
    ``leading_power`` is the fitted log-log slope of |Qhat1 + i omega| in h
    on the smallest decade of theta.
    """

    params: SchemeParams
    coefficients: np.ndarray
    expected: dict
    leading_power: float

    def relative_error(self, k: int) -> float:
        want = self.expected[k]
        return abs(self.coefficients[k] - want) / abs(want)


def expected_series(params: SchemeParams) -> dict:
    """Known leading coefficients of h^(4+k) omega^(5+k) in Qhat1 + i omega."""
    c1, c2 = params.c1, params.c2
    if c1 > c2:
        return {0: 1j / 480, 1: -(c1 + c2) / (384 * (c1 - c2))}
    if c1 == c2:
        c = c1
        return {0: 1j * (1 - 2 * c) / (240 * (c + 2)), 1: 0.0,
                2: -1j * (2 * c**2 - 6 * c + 1) / (4032 * (c + 2) ** 2)}
    raise ValueError("the series is only tabulated for c1 >= c2")


def asymptotic_check(params: SchemeParams, theta_range=(1e-3, 1e-1), samples: int = 25,
                     terms: int = 7, dps: int = 50) -> AsymptoticFit:
    """Fit the small-theta series of Qhat1 + i omega.

    The closed form is evaluated in ``dps``-digit arithmetic: at theta = 1e-3
    the correction is ~1e-18 of |Qhat1| and double precision cannot resolve it.
    """
    with mpmath.workdps(dps):
        lo, hi = (mpmath.mpf(v) for v in theta_range)
        thetas = [lo * (hi / lo) ** (mpmath.mpf(i) / (samples - 1)) for i in range(samples)]
        g = [_qhat1_mp(t, mpmath.mpf(params.c1), mpmath.mpf(params.c2)) + 1j * t
             for t in thetas]
        A = mpmath.matrix([[t**k for k in range(terms)] for t in thetas])
        rhs = mpmath.matrix([gi / t**5 for gi, t in zip(g, thetas)])
        coef = mpmath.qr_solve(A, rhs)[0]
        logs = [(float(mpmath.log(t)), float(mpmath.log(abs(gi)))) for t, gi in zip(thetas, g)]
    coef = np.array([complex(c) for c in coef])
    first_decade = [p for p in logs if p[0] <= np.log(theta_range[0] * 10)]
    x, y = np.array(first_decade).T
    slope = float(np.polyfit(x, y, 1)[0])
    return AsymptoticFit(params, coef, expected_series(params), leading_power=slope - 1)
