"""Closed-form lower-bound quantities: M*, ell*, proof constants, and regime tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import ball_volume

_VOL_CACHE = {d: ball_volume(d) for d in range(1, 17)}


def _vol(dim: int) -> float:
    return _VOL_CACHE.get(dim) or ball_volume(dim)


@dataclass(frozen=True)
class BranchReport:
    """One max-branch of a bound: its length, count, and proof constants."""

    name: str
    ell_star: float
    m_star: float
    c0: float
    c1: float
    hypothesis_met: bool


@dataclass(frozen=True)
class BoundReport:
    dimension: int
    n: float
    k: float
    d: float
    code_class: str
    mode: str
    m_star: float
    ell_star: float
    c0: float
    c1: float
    regime: str
    hypothesis_met: dict = field(default_factory=dict)
    branches: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "code_class": self.code_class,
            "mode": self.mode,
            "m_star": self.m_star,
            "ell_star": self.ell_star,
            "c0": self.c0,
            "c1": self.c1,
            "regime": self.regime,
            "hypothesis_met": self.hypothesis_met,
            "branches": self.branches,
        }


def _check_domain(n: float, k: float, d: float, dim: int) -> None:
    if dim < 2:
        raise ValueError("bounds require D >= 2")
    if not (1 <= k <= n and 1 <= d <= n):
        raise ValueError(f"parameters out of domain: n={n}, k={k}, d={d}")


def _assemble(
    dim: int,
    n: float,
    k: float,
    d: float,
    code_class: str,
    mode: str,
    dist_branch: BranchReport,
    dim_branch: BranchReport,
    m_star: float | None = None,
) -> BoundReport:
    # tie broken deterministically toward the distance branch
    if dist_branch.ell_star >= dim_branch.ell_star:
        active = dist_branch
    else:
        active = dim_branch
    return BoundReport(
        dimension=dim,
        n=n,
        k=k,
        d=d,
        code_class=code_class,
        mode=mode,
        m_star=active.m_star if m_star is None else m_star,
        ell_star=active.ell_star,
        c0=active.c0,
        c1=active.c1,
        regime=f"{active.name}-branch",
        hypothesis_met={
            "d_regime": dist_branch.hypothesis_met,
            "kd_regime": dim_branch.hypothesis_met,
        },
        branches={
            "distance": dist_branch.__dict__,
            "dimension": dim_branch.__dict__,
        },
    )


def _distance_branch(n: float, d: float, dim: int, mode: str) -> BranchReport:
    """The d >= c1 * n^((D-1)/D) branch, shared by both code classes."""
    expr = d / n ** ((dim - 1) / dim)
    if mode == "asymptotic":
        return BranchReport(
            name="distance",
            ell_star=expr,
            m_star=d,
            c0=1.0,
            c1=1.0,
            hypothesis_met=d >= n ** ((dim - 1) / dim),
        )
    vol = _vol(dim)
    c1 = 2.0 * (6.0**dim * dim / vol) ** (dim / (dim - 1))
    ell = vol * d / (6.0**dim * dim * n ** ((dim - 1) / dim))
    return BranchReport(
        name="distance",
        ell_star=ell,
        m_star=d / 4.0,
        c0=vol / (6.0**dim * dim),
        c1=c1,
        hypothesis_met=d >= c1 * n ** ((dim - 1) / dim),
    )


def subsystem_bounds(
    n: float, k: float, d: float, dim: int, mode: str = "asymptotic"
) -> BoundReport:
    """M* and ell* for subsystem codes.

    Asymptotic mode evaluates the max-expressions with unit constants;
    explicit mode substitutes the proofs' concrete constants so the
    hypothesis flags are decidable on real inputs.
    """
    _check_domain(n, k, d, dim)
    if mode not in ("asymptotic", "explicit"):
        raise ValueError(f"unknown mode {mode!r}")
    dist = _distance_branch(n, d, dim, mode)
    ratio = k * d ** (1.0 / (dim - 1)) / n
    if mode == "asymptotic":
        dim_branch = BranchReport(
            name="dimension",
            ell_star=ratio ** ((dim - 1) / dim),
            m_star=k,
            c0=1.0,
            c1=1.0,
            hypothesis_met=ratio >= 1.0,
        )
        return _assemble(dim, n, k, d, "subsystem", mode, dist, dim_branch, m_star=max(k, d))
    vol = _vol(dim)
    c0 = vol ** (1.0 / dim) / (400.0 * dim)
    c1 = (1.0 / c0) ** (dim / (dim - 1))
    dim_branch = BranchReport(
        name="dimension",
        ell_star=c0 * ratio ** ((dim - 1) / dim),
        m_star=c0 * k,
        c0=c0,
        c1=c1,
        hypothesis_met=k * d ** (1.0 / (dim - 1)) >= c1 * n,
    )
    return _assemble(dim, n, k, d, "subsystem", mode, dist, dim_branch)


def projector_bounds(
    n: float, k: float, d: float, dim: int, mode: str = "asymptotic"
) -> BoundReport:
    """M* and ell* for commuting projector codes (2/(D-1) exponent family)."""
    _check_domain(n, k, d, dim)
    if mode not in ("asymptotic", "explicit"):
        raise ValueError(f"unknown mode {mode!r}")
    dist = _distance_branch(n, d, dim, mode)
    ratio = k * d ** (2.0 / (dim - 1)) / n
    if mode == "asymptotic":
        dim_branch = BranchReport(
            name="dimension",
            ell_star=ratio ** ((dim - 1) / (2.0 * dim)),
            m_star=k,
            c0=1.0,
            c1=1.0,
            hypothesis_met=ratio >= 1.0,
        )
        return _assemble(dim, n, k, d, "projector", mode, dist, dim_branch, m_star=max(k, d))
    vol = _vol(dim)
    c0 = vol ** (1.0 / dim) / (800.0 * dim**2)
    c1 = (1.0 / c0) ** (2.0 * dim / (dim - 1))
    dim_branch = BranchReport(
        name="dimension",
        ell_star=c0 * ratio ** ((dim - 1) / (2.0 * dim)),
        m_star=c0 * max(k, d),
        c0=c0,
        c1=c1,
        hypothesis_met=k * d ** (2.0 / (dim - 1)) >= c1 * n,
    )
    return _assemble(dim, n, k, d, "projector", mode, dist, dim_branch)


@dataclass(frozen=True)
class RegimeReport:
    family: str
    bravyi_ratio: float
    bpt_ratio: float
    d_ratio: float
    local_regime: bool

    def to_json(self) -> dict:
        return self.__dict__.copy()


def regime_check(n: float, k: float, d: float, dim: int, family: str) -> RegimeReport:
    """Bravyi (subsystem) / BPT (projector) local-regime membership.

    Reports the ratios k*d^(1/(D-1))/n, k*d^(2/(D-1))/n and d/n^((D-1)/D);
    the local regime requires the family's count ratio and the distance
    ratio to both be at most 1.
    """
    _check_domain(n, k, d, dim)
    if family not in ("bravyi", "bpt"):
        raise ValueError(f"unknown family {family!r}")
    bravyi = k * d ** (1.0 / (dim - 1)) / n
    bpt = k * d ** (2.0 / (dim - 1)) / n
    d_ratio = d / n ** ((dim - 1) / dim)
    count_ratio = bravyi if family == "bravyi" else bpt
    return RegimeReport(
        family=family,
        bravyi_ratio=bravyi,
        bpt_ratio=bpt,
        d_ratio=d_ratio,
        local_regime=count_ratio <= 1.0 and d_ratio <= 1.0,
    )


@dataclass(frozen=True)
class ProofConstants:
    """w0 and the three claims accompanying it.

    ineq1 is an exact identity (checked to 1e-9 relative error); ineq2 is
    only claimed under the hypothesis ell <= c * d^(1/D), reported via
    ``hypothesis_met``; ineq3 holds for all D >= 2.
    """

    dimension: int
    d: float
    ell: float
    alpha: float
    w0: float
    c: float
    hypothesis_met: bool
    ineq1: bool
    ineq2: bool
    ineq3: bool

    def to_json(self) -> dict:
        return self.__dict__.copy()


def proof_constants(d: float, ell: float, dim: int, alpha: float = 1.0) -> ProofConstants:
    if dim < 2:
        raise ValueError("constants require D >= 2")
    if d <= 0 or ell <= 0:
        raise ValueError("d and ell must be positive")
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    vol = _vol(dim)
    w0 = (vol / (2.0 * 4.0 ** (dim + 1) * dim) * d / ell) ** (1.0 / (dim - 1))
    c = vol ** (1.0 / dim) / (400.0 * alpha * dim)
    lhs = 2.0**dim / vol * (2.0 * w0) ** (dim - 1) * ell
    rhs = d / (16.0 * dim)
    ineq1 = math.isclose(lhs, rhs, rel_tol=1e-9)
    hypothesis = ell <= c * d ** (1.0 / dim)
    ineq2 = w0 >= 100.0 * alpha * dim * ell
    ineq3 = w0 >= (d / ell) ** (1.0 / (dim - 1)) / (90.0 * math.sqrt(dim))
    return ProofConstants(
        dimension=dim,
        d=d,
        ell=ell,
        alpha=alpha,
        w0=w0,
        c=c,
        hypothesis_met=hypothesis,
        ineq1=ineq1,
        ineq2=ineq2,
        ineq3=ineq3,
    )


def holographic_box_width(d: float, ell: float, dim: int) -> float:
    """Maximum box side for the holographic correctability certificate."""
    return proof_constants(d, ell, dim).w0


def holographic_base_width(d: float, dim: int) -> float:
    """Base-case cube side: packing already keeps the count below d."""
    return (_vol(dim) / (2.0 * 4.0**dim) * d) ** (1.0 / dim)
