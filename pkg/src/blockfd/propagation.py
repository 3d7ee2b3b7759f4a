"""
Time propagation of u_t = Q u.

Two routes: a fixed-step explicit Runge-Kutta integrator (Butcher's 7-stage,
order 6 method) for moderate final times, and an exact modal propagator that
evaluates exp(Q t) u0 through the (omega, nu) pair decomposition of Q at O(N)
cost per output time, for arbitrarily long times.
"""

import functools
from fractions import Fraction
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .grid import BlockGrid, GridFunction
from .operators import BlockOperator, SchemeParams, StencilOperator, assemble_bfd, to_dense
from .symbol import decompose, mode_pair, low_band


@dataclass(frozen=True)
class RKTableau:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    order: int
    name: str = ""

    @property
    def stages(self) -> int:
        return len(self.b)


def _fractions(rows):
    return np.array([[float(Fraction(str(x))) for x in r] for r in rows])


BUTCHER_RK6 = RKTableau(
    a=_fractions([
        [0, 0, 0, 0, 0, 0, 0],
        ["1/3", 0, 0, 0, 0, 0, 0],
        [0, "2/3", 0, 0, 0, 0, 0],
        ["1/12", "1/3", "-1/12", 0, 0, 0, 0],
        ["-1/16", "9/8", "-3/16", "-3/8", 0, 0, 0],
        [0, "9/8", "-3/8", "-3/4", "1/2", 0, 0],
        ["9/44", "-9/11", "63/44", "18/11", 0, "-16/11", 0],
    ]),
    b=_fractions([["11/120", 0, "27/40", "27/40", "-4/15", "-4/15", "11/120"]])[0],
    c=_fractions([[0, "1/3", "2/3", "1/3", "1/2", "1/2", 1]])[0],
    order=6,
    name="Butcher (1964) 7-stage order 6",
)


# -- order conditions over rooted trees --------------------------------------

def _canon(children):
    return tuple(sorted(children))


def _graft(tree):
    """All trees obtained from ``tree`` by attaching one new leaf."""
    yield _canon(tree + ((),))
    for i, child in enumerate(tree):
        for g in _graft(child):
            yield _canon(tree[:i] + (g,) + tree[i + 1:])


@functools.lru_cache(maxsize=None)
def rooted_trees(order: int) -> tuple:
    """Rooted trees with ``order`` nodes, each a sorted tuple of subtrees."""
    if order == 1:
        return ((),)
    return tuple(sorted({g for t in rooted_trees(order - 1) for g in _graft(t)}))


def _size(tree):
    return 1 + sum(_size(c) for c in tree)


def _density(tree):
    out = _size(tree)
    for c in tree:
        out *= _density(c)
    return out


def _weights(tab, tree):
    g = np.ones(tab.stages)
    for c in tree:
        g = g * (tab.a @ _weights(tab, c))
    return g


def order_condition_residuals(tab: RKTableau, max_order: Optional[int] = None) -> dict:
    """|b . Phi(t) - 1/gamma(t)| for every rooted tree t up to ``max_order``."""
    max_order = tab.order if max_order is None else max_order
    return {t: abs(tab.b @ _weights(tab, t) - 1.0 / _density(t))
            for n in range(1, max_order + 1) for t in rooted_trees(n)}


# -- Runge-Kutta stepping ---------------------------------------------------

def rk_step(f, u, dt, tab: RKTableau = BUTCHER_RK6):
    k = []
    for i in range(tab.stages):
        ui = u
        for j in range(i):
            if tab.a[i, j]:
                ui = ui + dt * tab.a[i, j] * k[j]
        k.append(f(ui))
    out = u
    for bi, ki in zip(tab.b, k):
        if bi:
            out = out + dt * bi * ki
    return out


def time_steps(T: float, dx: float, cfl: float) -> tuple[int, float]:
    """Number of steps and the step size, at most cfl * dx, that lands on T."""
    if cfl <= 0:
        raise ValueError("cfl must be positive")
    if T < 0:
        raise ValueError("final time must be non-negative")
    if T == 0:
        return 0, 0.0
    n = int(np.ceil(T / (cfl * dx) * (1 - 1e-12)))
    return n, T / n


def rk_integrate(op, u0: GridFunction, T: float, cfl: float = 0.2,
                 tableau: RKTableau = BUTCHER_RK6) -> GridFunction:
    """Integrate u_t = op u from 0 to T with a fixed step cfl * h/2."""
    n, dt = time_steps(T, u0.grid.dx, cfl)
    u = np.array(u0.values)
    for step in range(n):
        with np.errstate(over="ignore", invalid="ignore"):
            u = rk_step(op.matvec, u, dt, tableau)
        if not np.isfinite(u).all():
            raise FloatingPointError(
                f"{getattr(op, 'label', 'operator')}: non-finite values after step "
                f"{step + 1}/{n} (t={dt * (step + 1):.4g}); unstable scheme or cfl={cfl} too large")
    return u0.with_values(u)


# -- exact modal propagation ------------------------------------------------

@dataclass(frozen=True)
class ModalExpansion:
    """u = sum over pairs of d_1 psi_1 + d_2 psi_2.

    ``vectors[p]`` has columns (alpha_k, beta_k): the eigenvectors of pair p in
    (exp(i omega x), exp(i nu x)) coordinates.
    """

    grid: BlockGrid
    omega: np.ndarray
    nu: np.ndarray
    eigenvalues: np.ndarray
    vectors: np.ndarray
    coefficients: np.ndarray
    real: bool
    decompositions: Optional[tuple] = None

    def amplitudes(self, t: float = 0.0) -> np.ndarray:
        """Fourier amplitudes (u_hat(omega), u_hat(nu)) of every pair at time t."""
        growth = np.exp(self.eigenvalues * t) * self.coefficients
        return np.einsum("pij,pj->pi", self.vectors, growth)


def fourier_amplitudes(u: np.ndarray, grid: BlockGrid, index) -> np.ndarray:
    """u_hat(m) with u = sum_m u_hat(m) exp(2 pi i m x / L) on the nodes."""
    n = grid.size
    index = np.asarray(index)
    spectrum = np.fft.fft(u) / n
    return spectrum[np.mod(index, n)] * np.exp(-1j * grid.wavenumber(index) * grid.nodes[0])


def from_fourier(amplitudes, grid: BlockGrid, index) -> np.ndarray:
    n = grid.size
    index = np.asarray(index)
    spectrum = np.zeros(n, dtype=complex)
    spectrum[np.mod(index, n)] = amplitudes * np.exp(1j * grid.wavenumber(index) * grid.nodes[0])
    return np.fft.ifft(spectrum) * n


def _block_pair_system(op: BlockOperator, grid: BlockGrid, omega, nu):
    """Eigenpairs of a generic block operator on each (omega, nu) span."""
    h = grid.h
    kw, kn = grid.wavenumber(omega), grid.wavenumber(nu)

    def family_symbols(kappa):
        out = np.zeros((len(kappa), 2), dtype=complex)
        for shift, W in ((-1, op.A), (0, op.B), (1, op.C)):
            for f in range(2):
                for m in range(2):
                    out[:, f] += W[f, m] * np.exp(1j * kappa * (shift * h + (m - f) * h / 2))
        return out

    mu, sigma = family_symbols(kw), family_symbols(kn)
    ratio = np.exp(1j * np.multiply.outer(kn - kw, grid.nodes[:2]))  # (P, 2)
    K = np.stack([np.stack([mu[:, 0], sigma[:, 0] * ratio[:, 0]], -1),
                  np.stack([mu[:, 1], sigma[:, 1] * ratio[:, 1]], -1)], 1)
    P = np.stack([np.stack([np.ones_like(ratio[:, 0]), ratio[:, 0]], -1),
                  np.stack([np.ones_like(ratio[:, 1]), ratio[:, 1]], -1)], 1)
    lam, vec = np.linalg.eig(np.linalg.solve(P, K))
    return lam, vec


def _spectral_data(op, grid: BlockGrid):
    omega = low_band(grid.N)
    nu = np.array([mode_pair(w, grid.N).nu for w in omega])
    decs = None
    if isinstance(op, SchemeParams):
        op = assemble_bfd(grid, op)
    if isinstance(op, StencilOperator):
        lam = np.stack([op.symbol(grid.wavenumber(omega)), op.symbol(grid.wavenumber(nu))], 1)
        vec = np.broadcast_to(np.eye(2, dtype=complex), (len(omega), 2, 2))
    elif op.params is not None:
        decs = tuple(decompose(mode_pair(w, grid.N), grid.h, op.params) for w in omega)
        lam = np.array([d.eigenvalues for d in decs])
        vec = np.array([d.eigenvectors for d in decs])
    else:
        lam, vec = _block_pair_system(op, grid, omega, nu)
    return omega, nu, lam, vec, decs


def modal_decompose(u0: GridFunction, op) -> ModalExpansion:
    """Expand u0 in the eigenvectors of ``op``.

    ``op`` is a :class:`SchemeParams` or an assembled operator.  BFD operators
    use the closed-form pair decomposition; other block operators fall back
    to a numerical 2x2 eigensolve per pair, stencil operators are diagonal in
    Fourier space.
    """
    grid = u0.grid
    if not isinstance(op, SchemeParams) and 2 * op.N != grid.size:
        raise ValueError("operator and grid function sizes differ")
    omega, nu, lam, vec, decs = _spectral_data(op, grid)
    values = u0.values
    rhs = np.stack([fourier_amplitudes(values, grid, omega),
                    fourier_amplitudes(values, grid, nu)], 1)
    cond = np.linalg.cond(vec)
    if not np.all(cond < 1e10):
        bad = omega[np.argmax(cond)]
        raise np.linalg.LinAlgError(f"eigenvectors of pair omega={bad} are nearly parallel")
    d = np.linalg.solve(vec, rhs[..., None])[..., 0]
    return ModalExpansion(grid, omega, nu, lam, np.array(vec), d,
                          real=bool(np.isrealobj(values)), decompositions=decs)


def modal_propagate(expansion: ModalExpansion, t: float) -> GridFunction:
    """exp(Q t) u0 evaluated mode by mode."""
    amp = expansion.amplitudes(t)
    grid = expansion.grid
    index = np.concatenate([expansion.omega, expansion.nu])
    u = from_fourier(np.concatenate([amp[:, 0], amp[:, 1]]), grid, index)
    return GridFunction(grid, u.real if expansion.real else u)


def dense_expm(op, t: float) -> np.ndarray:
    """Dense exp(Q t) by scaling and squaring (oracle for small grids)."""
    if op.N > 128:
        raise ValueError(f"dense exponential limited to N <= 128, got {op.N}")
    return scipy.linalg.expm(t * to_dense(op))
