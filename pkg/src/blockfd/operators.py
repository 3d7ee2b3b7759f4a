"""
Semi-discrete transport operators on the block grid.

Every operator here is the right-hand side Q of the semi-discrete system
u_t = Q u for u_t + u_x = 0, i.e. Q approximates -d/dx.  The BFD operator is
held in block form: the pair of unknowns of block j evolves as

    d/dt u_j = A u_{j-1} + B u_j + C u_{j+1},   u_j = (u_{j-1/4}, u_{j+1/4}).

The three-stencil form (a central fourth-order stencil plus two oscillatory
corrections weighted by c1 and c2) is kept as a separate assembly path used to
cross-check the blocks.
"""

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .grid import BlockGrid, GridFunction, build_grid, sample


@dataclass(frozen=True)
class SchemeParams:
    c1: float
    c2: float

    @property
    def stable(self) -> bool:
        """Necessary condition c1 >= c2; below it the zero-frequency partner
        mode grows like exp(8 (c2 - c1) t / 3h).

        Not sufficient: for c1 > c2 with c1 + c2 < 0 the low modes grow
        slowly (run :func:`blockfd.symbol.stability_scan` for the verdict).
        """
        return self.c1 >= self.c2


@dataclass(frozen=True)
class BlockOperator:
    """Periodic block-tridiagonal operator with 2x2 blocks A, B, C."""

    N: int
    h: float
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    label: str = ""
    params: Optional[SchemeParams] = None

    def matvec(self, values: np.ndarray) -> np.ndarray:
        U = values.reshape(self.N, 2)
        out = (np.roll(U, 1, axis=0) @ self.A.T + U @ self.B.T
               + np.roll(U, -1, axis=0) @ self.C.T)
        return out.reshape(-1)


@dataclass(frozen=True)
class StencilOperator:
    """Periodic central-difference operator -D on a uniform grid.

    ``coefficients`` are the first-derivative weights for offsets -m..m in
    units of 1/spacing; the operator applied is their negative (the
    transport right-hand side).
    """

    coefficients: np.ndarray
    spacing: float
    n_points: int
    label: str = ""

    @property
    def N(self) -> int:
        return self.n_points // 2

    @property
    def offsets(self) -> np.ndarray:
        m = len(self.coefficients) // 2
        return np.arange(-m, m + 1)

    def matvec(self, values: np.ndarray) -> np.ndarray:
        out = np.zeros_like(values, dtype=np.result_type(values, float))
        for k, w in zip(self.offsets, self.coefficients):
            if w:
                out += w * np.roll(values, -k)
        return -out / self.spacing

    def symbol(self, kappa):
        """Eigenvalue of the operator on the Fourier mode exp(i kappa x)."""
        kappa = np.asarray(kappa, dtype=float)
        phase = np.exp(1j * np.multiply.outer(kappa * self.spacing, self.offsets))
        return -(phase @ self.coefficients) / self.spacing


def _bfd_blocks(c1, c2, h):
    s = 1.0 / (6.0 * h)
    A = s * np.array([[-1 - c1, 8 + 4 * c1 - c2],
                      [c1, -1 - 4 * c1 + c2]])
    B = s * np.array([[-6 * c1 + 4 * c2, -8 + 4 * c1 - 6 * c2],
                      [8 + 6 * c1 - 4 * c2, -4 * c1 + 6 * c2]])
    C = s * np.array([[1 - c1 + 4 * c2, -c2],
                      [-8 + c1 - 4 * c2, 1 + c2]])
    return A, B, C


def assemble_bfd(grid: BlockGrid, params: SchemeParams) -> BlockOperator:
    """Assemble the block finite difference operator for (c1, c2).

    Parameter pairs with c1 < c2 are unstable; they are still assembled
    (useful for scans) but a warning is issued.
    """
    if not params.stable:
        warnings.warn(f"c1={params.c1} < c2={params.c2}: the scheme is unstable",
                      stacklevel=2)
    A, B, C = _bfd_blocks(params.c1, params.c2, grid.h)
    return BlockOperator(grid.N, grid.h, A, B, C,
                         label=f"bfd({params.c1:g},{params.c2:g})", params=params)


# Row patterns of the three stencils, as (first column offset in nodes, weights)
# for the x_{j-1/4} row and the x_{j+1/4} row respectively.
_CENTRAL = ((-2, [1, -8, 0, 8, -1]), (-2, [1, -8, 0, 8, -1]))
_C1_STENCIL = ((-2, [1, -4, 6, -4, 1]), (-3, [-1, 4, -6, 4, -1]))
_C2_STENCIL = ((-1, [1, -4, 6, -4, 1]), (-2, [-1, 4, -6, 4, -1]))


def assemble_bfd_stencils(grid: BlockGrid, params: SchemeParams) -> np.ndarray:
    """Dense matrix of the BFD operator built row by row from its three stencils.

    Independent of the block form; used only to cross-validate it.
    """
    n = grid.size
    D = np.zeros((n, n))
    for weight, pattern in ((1.0, _CENTRAL), (params.c1, _C1_STENCIL),
                            (params.c2, _C2_STENCIL)):
        for i in range(n):
            start, stencil = pattern[i % 2]
            for k, w in enumerate(stencil):
                D[i, (i + start + k) % n] += weight * w
    # the stencils approximate +d/dx; the transport right-hand side is its negative
    return -D / (6.0 * grid.h)


_CENTRAL_WEIGHTS = {
    2: np.array([-1, 0, 1]) / 2,
    4: np.array([1, -8, 0, 8, -1]) / 12,
    6: np.array([-1, 9, -45, 0, 45, -9, 1]) / 60,
}


def central_weights(order: int) -> np.ndarray:
    """First-derivative central-difference weights of the given order."""
    try:
        return _CENTRAL_WEIGHTS[order].copy()
    except KeyError:
        raise ValueError(f"unsupported order {order!r}; choose 2, 4 or 6") from None


def assemble_standard_fd(grid: BlockGrid, order: int) -> StencilOperator:
    """Classical central difference of the given order on spacing h/2."""
    w = central_weights(order)
    if grid.size <= len(w):
        raise ValueError(f"{grid.size} points is too few for a {len(w)}-point stencil")
    return StencilOperator(w, grid.dx, grid.size, label=f"fd{order}")


def _check_size(op, n):
    expected = 2 * op.N
    if n != expected:
        raise ValueError(f"operator acts on {expected} values, got {n}")


def apply(op, u: GridFunction) -> GridFunction:
    """Apply a block or stencil operator to a grid function."""
    _check_size(op, u.grid.size)
    return u.with_values(op.matvec(u.values))


def to_dense(op) -> np.ndarray:
    """Explicit 2N x 2N matrix of the operator."""
    if isinstance(op, StencilOperator):
        n = op.n_points
        D = np.zeros((n, n))
        for k, w in zip(op.offsets, op.coefficients):
            D[np.arange(n), (np.arange(n) + k) % n] += w
        return -D / op.spacing
    N = op.N
    Q = np.zeros((2 * N, 2 * N))
    for shift, block in ((-1, op.A), (0, op.B), (1, op.C)):
        for j in range(N):
            k = (j + shift) % N
            Q[2 * j:2 * j + 2, 2 * k:2 * k + 2] += block
    return Q


@dataclass(frozen=True)
class TruncationOrder:
    h: np.ndarray
    error_minus: np.ndarray
    error_plus: np.ndarray
    order_minus: float
    order_plus: float


def fit_slope(x, y) -> float:
    """Least-squares slope of log(y) against log(x)."""
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def measure_truncation_order(params: SchemeParams, f, df, N_list, L: float = 1.0):
    """Fit the order of the truncation error Q u + u_x on each node family.

    ``f`` must be smooth and L-periodic; ``df`` is its exact derivative.
    The fit uses the max norm of the residual over the x_{j-1/4} nodes and,
    separately, over the x_{j+1/4} nodes.
    """
    N_list = sorted(N_list)
    if len(N_list) < 4:
        raise ValueError("need at least four grid sizes")
    hs, em, ep = [], [], []
    for N in N_list:
        grid = build_grid(N, L)
        r = apply(_bfd_quiet(grid, params), sample(grid, f)).values + df(grid.nodes)
        hs.append(grid.h)
        em.append(np.abs(r[0::2]).max())
        ep.append(np.abs(r[1::2]).max())
    hs, em, ep = map(np.array, (hs, em, ep))
    if min(em.min(), ep.min()) < 1e-12 * hs.min() ** -1:
        raise ArithmeticError("truncation error reached the rounding floor; use coarser grids")
    return TruncationOrder(hs, em, ep, fit_slope(hs, em), fit_slope(hs, ep))


def _bfd_quiet(grid, params):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return assemble_bfd(grid, params)
