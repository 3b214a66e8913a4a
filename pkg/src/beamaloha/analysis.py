"""Closed-form throughput bound and density-evolution analysis.

The non-cooperative bound is ``z * exp(-z)`` with
``z = G * lambda_bs * r^2 * theta / 2`` (the mean station degree), maximized
at ``z = 1``. Cooperative decoding is analyzed with the and-or-tree
recursion over the asymptotic Poisson degree ensemble; two conventions of
the recursion are provided (see ``density_evolution``).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

from .geometry import TWO_PI

DE_VARIANTS = ("paper", "standard")


@dataclass(frozen=True)
class SystemParams:
    """Normalized load plus infrastructure density and beam geometry.

    Derived quantities: ``lambda_ue = g * lambda_bs`` (activity already
    folded into the load), mean user degree ``dbar_ue = lambda_bs r^2
    theta/2``, mean station degree ``dbar_bs = g * dbar_ue``.
    """

    g: float
    lambda_bs: float
    r: float
    theta: float

    def __post_init__(self) -> None:
        if self.g < 0:
            raise ValueError(f"load must be non-negative, got {self.g}")
        if self.lambda_bs < 0:
            raise ValueError(f"lambda_bs must be non-negative, got {self.lambda_bs}")
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r}")
        if not 0 < self.theta <= TWO_PI:
            raise ValueError(f"theta must lie in (0, 2*pi], got {self.theta}")

    @property
    def lambda_ue(self) -> float:
        return self.g * self.lambda_bs

    @property
    def dbar_ue(self) -> float:
        return self.lambda_bs * self.r**2 * self.theta / 2.0

    @property
    def dbar_bs(self) -> float:
        return self.lambda_ue * self.r**2 * self.theta / 2.0

    @property
    def z(self) -> float:
        return self.dbar_bs


@dataclass(frozen=True)
class DeTrace:
    """Iterate sequence of the density-evolution recursion.

    ``q[l]`` is the user-side edge survival probability after iteration
    ``l`` (``q[0]`` is the initialization), ``r_seq[l-1]`` the station-side
    probability produced in iteration ``l``, and ``collect_prob[l] == 1 -
    q[l]`` the implied probability a user is collected by then.
    """

    variant: str
    q: list[float]
    r_seq: list[float]
    collect_prob: list[float]
    converged: bool
    residual: float


class BeamSolution(NamedTuple):
    value: float
    feasible: bool


def noncoop_bound(params: SystemParams) -> float:
    """Upper bound on non-cooperative normalized throughput: ``z * exp(-z)``."""
    z = params.z
    return z * math.exp(-z)


def optimal_beam_params(lambda_ue: float, fix: str, fixed_value: float) -> BeamSolution:
    """Solve ``lambda_ue * r^2 * theta / 2 = 1`` for the free beam parameter.

    At that operating point each station hears one active user on average,
    which maximizes the non-cooperative bound. ``fix`` names the parameter
    held at ``fixed_value`` ("r" or "theta"); the other one is returned.
    A required beam-width above ``2*pi`` is infeasible: the solution is
    clamped to ``2*pi`` and flagged.
    """
    if lambda_ue <= 0:
        raise ValueError(f"lambda_ue must be positive, got {lambda_ue}")
    if fixed_value <= 0:
        raise ValueError(f"fixed_value must be positive, got {fixed_value}")
    if fix == "r":
        theta_star = 2.0 / (lambda_ue * fixed_value**2)
        if theta_star > TWO_PI:
            return BeamSolution(value=TWO_PI, feasible=False)
        return BeamSolution(value=theta_star, feasible=True)
    if fix == "theta":
        if fixed_value > TWO_PI:
            raise ValueError(f"theta must lie in (0, 2*pi], got {fixed_value}")
        return BeamSolution(value=math.sqrt(2.0 / (lambda_ue * fixed_value)), feasible=True)
    raise ValueError(f"fix must be 'r' or 'theta', got {fix!r}")


def density_evolution(
    g: float,
    dbar_bs: float,
    variant: str = "standard",
    max_iter: int = 10_000,
    tol: float = 1e-10,
) -> DeTrace:
    """Iterate the and-or-tree recursion until the user survival settles.

    variant="standard" is the textbook recursion for the bipartite Poisson
    ensemble: ``q_0 = 1``, ``r_l = 1 - exp(-dbar_bs * q_{l-1})``,
    ``q_l = exp(-dbar_ue * (1 - r_l))`` with mean user degree
    ``dbar_ue = dbar_bs / g``; both sequences provably stay in [0, 1].

    variant="paper" is the as-printed convention with a ``(1 - g)`` factor
    in the station update and ``q_0 = 0``:
    ``r_l = 1 - exp(-(1 - g) * dbar_bs * (1 - q_{l-1}))``,
    ``q_l = exp(-g * dbar_bs * (1 - r_l))``. For ``g >= 1`` that station
    update turns non-positive, so ``r_l`` is clamped into [0, 1] (with a
    RuntimeWarning) before the user update.

    The iteration stops when ``|q_l - q_{l-1}| < tol`` or after
    ``max_iter`` steps, in which case ``converged`` is False.
    """
    if variant not in DE_VARIANTS:
        raise ValueError(f"variant must be one of {DE_VARIANTS}, got {variant!r}")
    if g < 0 or dbar_bs < 0:
        raise ValueError("g and dbar_bs must be non-negative")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")

    dbar_ue = 0.0
    if variant == "standard" and dbar_bs > 0.0:
        dbar_ue = math.inf if g == 0.0 else dbar_bs / g
    clamped = False
    q = 0.0 if variant == "paper" else 1.0
    qs = [q]
    rs: list[float] = []
    collect = [1.0 - q]
    converged = False
    residual = math.inf
    for _ in range(max_iter):
        if variant == "paper":
            r = 1.0 - math.exp(-(1.0 - g) * dbar_bs * (1.0 - q))
            if r < 0.0 or r > 1.0:
                clamped = True
                r = min(max(r, 0.0), 1.0)
            q_next = math.exp(-g * dbar_bs * (1.0 - r))
        else:
            # exp(-dbar_bs * q) == 1 - r, kept unexpanded to avoid cancellation
            resolve_bs = math.exp(-dbar_bs * q)
            r = 1.0 - resolve_bs
            if dbar_ue == math.inf:
                q_next = 0.0 if resolve_bs > 0.0 else 1.0
            else:
                q_next = math.exp(-dbar_ue * resolve_bs)
        residual = abs(q_next - q)
        q = q_next
        qs.append(q)
        rs.append(r)
        collect.append(1.0 - q)
        if residual < tol:
            converged = True
            break
    if clamped:
        warnings.warn(
            "station-side update left [0, 1] and was clamped (load >= 1 with the "
            "'paper' variant)",
            RuntimeWarning,
            stacklevel=2,
        )
    return DeTrace(
        variant=variant,
        q=qs,
        r_seq=rs,
        collect_prob=collect,
        converged=converged,
        residual=residual,
    )


def de_throughput_upper(
    g: float,
    dbar_bs: float,
    variant: str = "standard",
    max_iter: int = 10_000,
    tol: float = 1e-10,
) -> float:
    """Cooperative throughput upper estimate ``G * (1 - q_inf)``.

    Warns (and still returns the last iterate) if the recursion did not
    converge within ``max_iter``.
    """
    if g == 0.0:
        return 0.0
    trace = density_evolution(g, dbar_bs, variant=variant, max_iter=max_iter, tol=tol)
    if not trace.converged:
        warnings.warn(
            f"density evolution did not converge within {max_iter} iterations "
            f"(residual {trace.residual:.3e})",
            RuntimeWarning,
            stacklevel=2,
        )
    return g * (1.0 - trace.q[-1])
