"""
Numerical experiments behind the command line: grid-refinement studies,
long-time error growth, the phase demonstration, stability scans, the DG
equivalence check and per-mode symbol tables.

Each ``cmd_*`` function takes an :class:`ExperimentConfig` and returns a
plain result object; writing tables is left to :func:`write_table`.
"""

import csv
import io
import json
import warnings
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np
import scipy.stats

from .dg import block_discrepancy, bfd_as_dg, closed_form_penalties, dg_operator, solve_penalties
from .grid import build_grid, exact_solution, norms, sample
from .operators import SchemeParams, assemble_bfd, assemble_standard_fd, to_dense
from .postproc import spectral_filter
from .propagation import modal_decompose, modal_propagate, rk_integrate
from .symbol import build_mode_vectors, decompose_all, mode_pairs, stability_scan

REFINEMENT_N = (48, 60, 72, 96, 120, 144)
SCHEMES = ("bfd", "fd", "dg", "dg-pen")


def smooth_data(L: float = 1.0):
    """exp(cos(2 pi x / L)), the default initial condition."""
    return lambda x: np.exp(np.cos(2 * np.pi * x / L))


def wave_data(L: float = 1.0, k: int = 2):
    """sin(2 pi k x / L); k=2 on [0, 1] is sin(4 pi x)."""
    return lambda x: np.sin(2 * np.pi * k * x / L)


@dataclass(frozen=True)
class ExperimentConfig:
    command: str = "convergence"
    scheme: str = "bfd"
    c1: float = 0.5
    c2: float = 0.5
    order: int = 4
    N: tuple = REFINEMENT_N
    L: float = 1.0
    T: float = 1.0
    cfl: float = 0.2
    post_process: bool = False
    propagator: str = "rk"
    out: Optional[str] = None
    fmt: str = "csv"
    seed: int = 0

    def __post_init__(self):
        N = tuple(int(n) for n in self.N)
        object.__setattr__(self, "N", N)
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if any(b <= a for a, b in zip(N, N[1:])):
            raise ValueError(f"N list must be strictly increasing, got {N}")
        if N and N[0] < 3:
            raise ValueError("every N must be at least 3")
        if not self.L > 0 or self.T < 0 or not self.cfl > 0:
            raise ValueError("need L > 0, T >= 0 and cfl > 0")
        if self.propagator not in ("rk", "modal"):
            raise ValueError(f"unknown propagator {self.propagator!r}")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown format {self.fmt!r}")

    @property
    def params(self) -> SchemeParams:
        return SchemeParams(self.c1, self.c2)

    @property
    def label(self) -> str:
        if self.scheme == "fd":
            return f"fd{self.order}"
        if self.scheme == "dg":
            return "dg"
        return f"{self.scheme}({self.c1:g},{self.c2:g})" + ("+filter" if self.post_process else "")


def make_operator(config: ExperimentConfig, grid):
    if config.scheme == "bfd":
        return assemble_bfd(grid, config.params)
    if config.scheme == "fd":
        return assemble_standard_fd(grid, config.order)
    if config.scheme == "dg":
        return dg_operator(grid.N, grid.h)
    return bfd_as_dg(grid.N, grid.h, config.params)


# -- slope fitting -----------------------------------------------------------

@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    ci95: float          # half-width of the 95% confidence interval
    residual: float      # max |log10 error - fit|

    @property
    def accepted(self) -> bool:
        return self.residual < 0.15


def fit_loglog(x, y) -> SlopeFit:
    """Least-squares line through (log10 x, log10 y)."""
    lx, ly = np.log10(np.asarray(x, float)), np.log10(np.asarray(y, float))
    if len(lx) < 3:
        raise ValueError("need at least three points for a slope fit")
    res = scipy.stats.linregress(lx, ly)
    resid = ly - (res.intercept + res.slope * lx)
    ci = scipy.stats.t.ppf(0.975, len(lx) - 2) * res.stderr
    return SlopeFit(float(res.slope), float(res.intercept), float(ci), float(np.abs(resid).max()))


# -- convergence studies ------------------------------------------------------

@dataclass
class ConvergenceReport:
    config: ExperimentConfig
    rows: list = field(default_factory=list)   # (N, h, l2_error, linf_error)
    failed: list = field(default_factory=list)  # (N, message)

    @property
    def h(self) -> np.ndarray:
        return np.array([r[1] for r in self.rows])

    @property
    def l2(self) -> np.ndarray:
        return np.array([r[2] for r in self.rows])

    @property
    def linf(self) -> np.ndarray:
        return np.array([r[3] for r in self.rows])

    def fit(self, norm: str = "l2", subset: slice = slice(None)) -> SlopeFit:
        err = self.l2 if norm == "l2" else self.linf
        return fit_loglog(self.h[subset], err[subset])

    def summary(self) -> dict:
        out = {"label": self.config.label, "T": self.config.T}
        for norm in ("l2", "linf"):
            s = self.fit(norm)
            out[norm] = {"slope": s.slope, "ci95": s.ci95, "residual": s.residual,
                         "accepted": s.accepted}
        return out


def solve_at(config: ExperimentConfig, N: int, f=None, T=None):
    """Numerical and exact solutions at time T on N blocks."""
    f = f or smooth_data(config.L)
    T = config.T if T is None else T
    grid = build_grid(N, config.L)
    u0 = sample(grid, f)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        op = make_operator(config, grid)
    if config.propagator == "modal":
        u = modal_propagate(modal_decompose(u0, op), T)
    else:
        u = rk_integrate(op, u0, T, config.cfl)
    if config.post_process:
        u = spectral_filter(u)
    return u, exact_solution(grid, f, T)


def cmd_convergence(config: ExperimentConfig, f=None) -> ConvergenceReport:
    report = ConvergenceReport(config)
    for N in config.N:
        try:
            u, exact = solve_at(config, N, f)
        except FloatingPointError as exc:
            warnings.warn(f"N={N} excluded from fit: {exc}")
            report.failed.append((N, str(exc)))
            continue
        l2, linf = norms(u.with_values(u.values - exact.values))
        report.rows.append((N, u.grid.h, l2, linf))
    if len(report.rows) < 3:
        raise RuntimeError(f"only {len(report.rows)} grids completed; cannot fit a slope")
    return report


def cmd_long_time(config: ExperimentConfig, f=None) -> ConvergenceReport:
    """Refinement study at a large final time, normally with the modal propagator."""
    return cmd_convergence(config, f)


# -- error against time -------------------------------------------------------

def log_times(t_max: float = 1e10, t_min: float = 0.1, per_decade: int = 12) -> np.ndarray:
    n = int(round(np.log10(t_max / t_min) * per_decade))
    return t_min * 10 ** (np.arange(n + 1) / per_decade)


@dataclass(frozen=True)
class ErrorCurve:
    label: str
    N: int
    t: np.ndarray
    error: np.ndarray
    amplitude: float

    @property
    def plateau(self) -> float:
        """Median error over 1 <= t <= 10."""
        sel = (self.t >= 1) & (self.t <= 10)
        return float(np.median(self.error[sel]))

    def growth_fit(self, after_plateau: bool = False) -> SlopeFit:
        """Slope of log error against log t before saturation.

        Saturation is taken as 1% of max|u0|: beyond it the highest
        harmonics have drifted out of phase and the curve bends.  With
        ``after_plateau`` only errors above ten times the plateau are used.
        """
        sel = (self.error <= 0.01 * self.amplitude) & (self.error > 1e-11)
        if after_plateau:
            sel &= self.error >= 10 * self.plateau
        return fit_loglog(self.t[sel], self.error[sel])


def error_curve(config: ExperimentConfig, N: int, times, f=None) -> ErrorCurve:
    f = f or smooth_data(config.L)
    grid = build_grid(N, config.L)
    u0 = sample(grid, f)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        expansion = modal_decompose(u0, make_operator(config, grid))
    err = np.empty(len(times))
    for i, t in enumerate(times):
        u = modal_propagate(expansion, t)
        if config.post_process:
            u = spectral_filter(u)
        err[i] = norms(u.with_values(u.values - exact_solution(grid, f, t).values))[1]
    return ErrorCurve(config.label, N, np.asarray(times), err, float(np.abs(u0.values).max()))


def error_vs_time_configs(base: ExperimentConfig) -> list:
    """fd 2/4/6 and bfd with and without the filter."""
    fd = [replace(base, scheme="fd", order=p, post_process=False) for p in (2, 4, 6)]
    bfd = [replace(base, scheme="bfd", post_process=flag) for flag in (False, True)]
    return fd + bfd


def cmd_error_vs_time(config: ExperimentConfig, times=None, f=None) -> list:
    times = log_times() if times is None else times
    return [error_curve(c, N, times, f) for N in config.N
            for c in error_vs_time_configs(config)]


# -- phase demo ---------------------------------------------------------------

@dataclass(frozen=True)
class PhaseProfile:
    label: str
    x: np.ndarray
    exact: np.ndarray
    numeric: np.ndarray

    @property
    def linf_error(self) -> float:
        return float(np.abs(self.numeric - self.exact).max())


def cmd_phase_demo(config: ExperimentConfig) -> list:
    """Profiles of sin(4 pi x) after long transport for bfd(0,0) and bfd(1/2,1/2)."""
    f = wave_data(config.L)
    out = []
    for c1, c2 in ((0.0, 0.0), (0.5, 0.5)):
        for flag in (False, True):
            cfg = replace(config, scheme="bfd", c1=c1, c2=c2, post_process=flag,
                          propagator="modal")
            u, exact = solve_at(cfg, config.N[0], f)
            out.append(PhaseProfile(cfg.label, u.grid.nodes, exact.values, u.values))
    return out


# -- stability ---------------------------------------------------------------

def claimed_stable(c1: float, c2: float) -> bool:
    """The asserted stability region: every -1 <= c2 <= c1 <= 1."""
    return c1 >= c2


def cmd_stability(lattice: int = 33, lo: float = -1.0, hi: float = 1.0, N: int = 16,
                  theta_samples: int = 257) -> list:
    """Closed-form symbol scan on a (c1, c2) lattice, checked against a dense
    eigensolve of the assembled operator on N blocks."""
    values = np.linspace(lo, hi, lattice)
    grid = build_grid(N, 1.0)
    tol = 1e-10 / grid.h
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for c1 in values:
            for c2 in values:
                params = SchemeParams(float(c1), float(c2))
                rep = stability_scan(params, theta_samples, h=grid.h)
                dense = float(np.linalg.eigvals(to_dense(assemble_bfd(grid, params))).real.max())
                verdict = rep.stable
                rows.append({
                    "c1": float(c1), "c2": float(c2),
                    "max_re_h": rep.max_re * grid.h, "max_cos_theta": rep.max_cos_theta,
                    "stable": verdict, "dense_max_re_h": dense * grid.h,
                    "dense_stable": dense <= tol, "claimed_stable": claimed_stable(c1, c2),
                })
    return rows


# -- DG and symbol tables -----------------------------------------------------

def cmd_dg_check(c1: float, c2: float, h: float = 1.0) -> dict:
    pc = solve_penalties(c1, c2, h)
    solved, closed = pc.as_array(), closed_form_penalties(c1, c2).as_array()
    return {
        "c1": c1, "c2": c2, "h": h,
        "penalties": asdict(pc),
        "closed_form_deviation": float(np.abs(solved - closed).max()),
        "block_residual": block_discrepancy(c1, c2, h),
        "passed": block_discrepancy(c1, c2, h) <= 1e-12 / h,
    }


def cmd_symbol_dump(c1: float, c2: float, N: int, L: float = 1.0, check: bool = True) -> list:
    """One row per low-band omega with both eigenvalues and eigenvector data."""
    grid = build_grid(N, L)
    params = SchemeParams(c1, c2)
    rows = []
    for mode, dec in zip(mode_pairs(N), decompose_all(N, grid.h, params)):
        if check:
            build_mode_vectors(grid, mode, dec, check=True)
        k = 2 * np.pi * mode.omega / L
        phase = dec.Qhat1 / (-1j * k) - 1 if mode.omega else 0j
        rows.append({
            "omega": mode.omega, "nu": mode.nu,
            "re_Q1": dec.Qhat1.real, "im_Q1": dec.Qhat1.imag,
            "re_Q2": dec.Qhat2.real, "im_Q2": dec.Qhat2.imag,
            "abs_alpha1": abs(dec.alpha1), "abs_beta1": abs(dec.beta1),
            "abs_alpha2": abs(dec.alpha2), "abs_beta2": abs(dec.beta2),
            "cos_theta": dec.cos_theta,
            "phase_error_re": phase.real, "phase_error_im": phase.imag,
        })
    return rows


# -- output -------------------------------------------------------------------

def _plain(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)) and not isinstance(v, bool):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _json_default(v):
    if isinstance(v, np.generic):
        return v.item()
    raise TypeError(f"cannot serialize {type(v).__name__}")


def format_table(rows: list, meta: dict, fmt: str = "csv") -> str:
    """CSV with a '#'-prefixed JSON metadata line, or a JSON document.

    Floats are written with repr, the shortest string that round-trips.
    """
    rows = [{k: _plain(v) for k, v in r.items()} for r in rows]
    if fmt == "json":
        return json.dumps({"meta": meta, "rows": rows}, indent=1, default=_json_default) + "\n"
    buf = io.StringIO()
    buf.write("# " + json.dumps(meta, sort_keys=True, default=_json_default) + "\n")
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(rows[0].keys())
        for r in rows:
            writer.writerow(repr(v) if isinstance(v, float) else v for v in r.values())
    return buf.getvalue()


def write_table(rows: list, meta: dict, path: Optional[str] = None, fmt: str = "csv") -> str:
    text = format_table(rows, meta, fmt)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text
