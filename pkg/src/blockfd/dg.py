"""
Nodal p=1 discontinuous Galerkin schemes for u_t + u_x = 0.

Each cell carries the linear polynomial through the two block nodes
x_j -+ h/4, so a DG scheme has the same unknowns and the same block-circulant
structure as the BFD operator.  With the upwind flux and no penalties this is
the standard second-order DG method.  Adding interface jump penalties in the
value and the slope, each tested against the trace and the slope of the test
function, gives an eight-parameter family which contains every BFD scheme.
"""

from dataclasses import astuple, dataclass, fields

import numpy as np

from .operators import BlockOperator, SchemeParams, _bfd_blocks


@dataclass(frozen=True)
class PenaltyCoefficients:
    """Dimensionless penalty weights; the powers of h live in the weak form.

    C1, C2: jumps of u and h u_x at the right interface, tested with v^-.
    D1, D2: the same at the left interface, tested with v^+.
    E1, E2: jumps of h u and h^2 u_x at the right interface, tested with v_x.
    F1, F2: the same at the left interface, tested with v_x.
    """

    C1: float = 0.0
    C2: float = 0.0
    D1: float = 0.0
    D2: float = 0.0
    E1: float = 0.0
    E2: float = 0.0
    F1: float = 0.0
    F2: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, values) -> "PenaltyCoefficients":
        return cls(*map(float, values))


def closed_form_penalties(c1: float, c2: float) -> PenaltyCoefficients:
    """Penalty weights that turn the DG scheme into BFD(c1, c2)."""
    return PenaltyCoefficients(
        C1=-0.5, C2=-1 / 12, D1=-0.5, D2=-1 / 12,
        E1=(2 * c1 - 6 * c2 + 1) / 36, E2=(c1 - c2) / 72,
        F1=(-6 * c1 + 2 * c2 + 1) / 36, F2=(c1 - c2) / 72)


@dataclass(frozen=True)
class ElementBasis:
    """Lagrange basis on one cell in the local coordinate s = (x - x_j)/h.

    phi_minus = 1/2 - 2 s, phi_plus = 1/2 + 2 s.  Arrays are indexed by basis
    function (minus, plus).
    """

    h: float
    trace_left: np.ndarray    # phi at x_{j-1/2}
    trace_right: np.ndarray   # phi at x_{j+1/2}
    slope: np.ndarray         # d phi / dx
    mass: np.ndarray
    quad_points: np.ndarray   # in s
    quad_weights: np.ndarray  # sum to 1

    def evaluate(self, s) -> np.ndarray:
        """Basis values at local coordinates s, shape (2, len(s))."""
        s = np.asarray(s, dtype=float)
        return np.array([0.5 - 2 * s, 0.5 + 2 * s])


def element_basis(h: float) -> ElementBasis:
    if not h > 0:
        raise ValueError(f"cell width must be positive, got {h!r}")
    s, w = np.polynomial.legendre.leggauss(2)
    s, w = s / 2, w / 2
    phi = np.array([0.5 - 2 * s, 0.5 + 2 * s])
    mass = h * (phi * w) @ phi.T
    return ElementBasis(h, np.array([1.5, -0.5]), np.array([-0.5, 1.5]),
                        np.array([-2.0, 2.0]) / h, mass, s, w)


@dataclass(frozen=True)
class DGBlocks:
    """Block rows d/dt u_j = A u_{j-1} + B u_j + C u_{j+1} of a DG scheme."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    h: float
    label: str = ""

    def to_operator(self, N: int) -> BlockOperator:
        return BlockOperator(N, self.h, self.A, self.B, self.C, label=self.label)

    @classmethod
    def from_operator(cls, op: BlockOperator) -> "DGBlocks":
        return cls(op.A, op.B, op.C, op.h, op.label)

    def stacked(self) -> np.ndarray:
        return np.stack([self.A, self.B, self.C])


def penalized_dg_blocks(pc: PenaltyCoefficients, h: float) -> DGBlocks:
    """Assemble the penalized weak form cell by cell.

    For cell j and test function v,

        int u_t v = int u v_x - u^-_{j+1/2} v^-_{j+1/2} + u^-_{j-1/2} v^+_{j-1/2}
                    + penalties,

    where the flux is upwind and each penalty multiplies an interface jump
    [w] = w^+ - w^- of u or h u_x by a trace or slope of v.  The right
    interface terms enter with a plus sign and the left ones with a minus
    sign.
    """
    eb = element_basis(h)
    EL, ER, D = eb.trace_left, eb.trace_right, eb.slope
    Km, K0, Kp = np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 2))

    # volume term: row = test function, column = unknown; v_x is constant
    K0 += np.outer(D, h * (eb.evaluate(eb.quad_points) @ eb.quad_weights))
    # upwind flux
    K0 -= np.outer(ER, ER)
    Km += np.outer(EL, ER)

    groups = (
        (pc.C1, h * pc.C2, ER, 1.0, "right"),
        (pc.D1, h * pc.D2, EL, -1.0, "left"),
        (h * pc.E1, h * h * pc.E2, D, 1.0, "right"),
        (h * pc.F1, h * h * pc.F2, D, -1.0, "left"),
    )
    for cu, cux, test, sign, side in groups:
        # jump = (cu u + cux u_x) evaluated from the outer cell minus the inner one
        outer_side = cu * EL + cux * D   # '+' trace, taken from the cell to the right
        inner_side = cu * ER + cux * D   # '-' trace, taken from the cell to the left
        if side == "right":
            Kp += sign * np.outer(test, outer_side)
            K0 -= sign * np.outer(test, inner_side)
        else:
            K0 += sign * np.outer(test, outer_side)
            Km -= sign * np.outer(test, inner_side)

    Minv = np.linalg.inv(eb.mass)
    label = "dg" if not pc.as_array().any() else "dg-pen"
    return DGBlocks(Minv @ Km, Minv @ K0, Minv @ Kp, h, label)


def standard_dg_blocks(h: float) -> DGBlocks:
    """Upwind p=1 DG without penalties."""
    return penalized_dg_blocks(PenaltyCoefficients(), h)


def _flat(blocks) -> np.ndarray:
    return np.concatenate([np.ravel(b) for b in blocks])


def influence_matrix(h: float = 1.0) -> np.ndarray:
    """12 x 8 matrix of block perturbations per unit penalty coefficient."""
    base = _flat(standard_dg_blocks(h).stacked())
    cols = [_flat(penalized_dg_blocks(PenaltyCoefficients.from_array(e), h).stacked()) - base
            for e in np.eye(len(fields(PenaltyCoefficients)))]
    return np.array(cols).T


def solve_penalties(c1: float, c2: float, h: float = 1.0) -> PenaltyCoefficients:
    """Penalty weights for which penalized DG reproduces BFD(c1, c2).

    Penalties enter the blocks linearly, so the 12 block entries give an
    overdetermined linear system in the 8 coefficients.  It must have full
    column rank and be consistent.
    """
    G = influence_matrix(h)
    rank = np.linalg.matrix_rank(G)
    if rank != G.shape[1]:
        raise np.linalg.LinAlgError(f"influence matrix has rank {rank} < 8; assembly error")
    target = _flat(_bfd_blocks(c1, c2, h)) - _flat(standard_dg_blocks(h).stacked())
    x, *_ = np.linalg.lstsq(G, target, rcond=None)
    residual = np.abs(G @ x - target).max()
    if residual > 1e-10 / h:
        raise ArithmeticError(f"no penalty choice reproduces BFD({c1}, {c2}); residual {residual:.3g}")
    return PenaltyCoefficients.from_array(x)


def block_discrepancy(c1: float, c2: float, h: float = 1.0) -> float:
    """max |penalized DG block - BFD block| with the solved penalties."""
    dg = penalized_dg_blocks(solve_penalties(c1, c2, h), h).stacked()
    return float(np.abs(dg - np.stack(_bfd_blocks(c1, c2, h))).max())


def dg_operator(N: int, h: float, pc: PenaltyCoefficients = None) -> BlockOperator:
    blocks = penalized_dg_blocks(pc or PenaltyCoefficients(), h)
    return blocks.to_operator(N)


def bfd_as_dg(N: int, h: float, params: SchemeParams) -> BlockOperator:
    """BFD operator assembled through the penalized DG route."""
    op = penalized_dg_blocks(solve_penalties(params.c1, params.c2, h), h).to_operator(N)
    return BlockOperator(op.N, op.h, op.A, op.B, op.C,
                         label=f"dg-pen({params.c1:g},{params.c2:g})")


def dg_l2_error(u, f, t: float = 0.0, quad_points: int = 6) -> float:
    """L2 error over [0, L) of the piecewise-linear DG solution against f(x - t).

    Unlike the nodal norm this measures the DG function itself, including
    its interpolation error between and beyond the two nodes of each cell.
    """
    grid = u.grid
    s, w = np.polynomial.legendre.leggauss(quad_points)
    s, w = s / 2, w / 2
    U = u.values.reshape(grid.N, 2)
    poly = U[:, :1] * (0.5 - 2 * s) + U[:, 1:] * (0.5 + 2 * s)
    x = (grid.h * np.arange(grid.N) + grid.h / 2)[:, None] + grid.h * s
    err = poly - f(np.mod(x - np.mod(t, grid.L), grid.L))
    return float(np.sqrt(grid.h * np.sum(w * np.abs(err) ** 2)))
