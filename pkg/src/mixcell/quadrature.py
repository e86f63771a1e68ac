"""Deterministic adaptive quadrature over finite and semi-infinite intervals.

The scheme is Gauss-Kronrod (7, 15) with global bisection refinement: every
round, all panels whose error exceeds an equal share of the tolerance budget
are split, and the new panels are evaluated in one batched call.  Identical
inputs always produce bit-identical outputs.

`integrate` is the scalar entry point; `integrate_many` evaluates a family of
integrands on a shared panel set (the integrand returns one column per family
member), refining until every column meets tolerance.  Semi-infinite domains
are mapped onto [0, 1) with x = a + t / (1 - t), which is smooth for
algebraically decaying tails with exponent above 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence, NonFiniteIntegrand

__all__ = ["QuadratureSpec", "integrate", "integrate_many", "truncation_radius"]

# 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1).
_NODES = np.array(
    [
        -0.991455371120813,
        -0.949107912342759,
        -0.864864423359769,
        -0.741531185599394,
        -0.586087235467691,
        -0.405845151377397,
        -0.207784955007898,
        0.0,
        0.207784955007898,
        0.405845151377397,
        0.586087235467691,
        0.741531185599394,
        0.864864423359769,
        0.949107912342759,
        0.991455371120813,
    ]
)
_KRONROD_W = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
        0.204432940075298,
        0.190350578064785,
        0.169004726639267,
        0.140653259715525,
        0.104790010322250,
        0.063092092629979,
        0.022935322010529,
    ]
)
# Gauss weights aligned with the Kronrod nodes (zero at Kronrod-only nodes).
_GAUSS_W = np.array(
    [
        0.0,
        0.129484966168870,
        0.0,
        0.279705391489277,
        0.0,
        0.381830050505119,
        0.0,
        0.417959183673469,
        0.0,
        0.381830050505119,
        0.0,
        0.279705391489277,
        0.0,
        0.129484966168870,
        0.0,
    ]
)

_INITIAL_PANELS = 8


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budgets for adaptive integration.

    tail_mass_cutoff bounds the probability mass that may be discarded when a
    semi-infinite radial domain is truncated (see `truncation_radius`).
    """

    rel_tol: float = 1e-6
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000
    tail_mass_cutoff: float = 1e-9

    def __post_init__(self):
        if not self.rel_tol > 0.0:
            raise ValueError(f"rel_tol must be > 0, got {self.rel_tol}")
        if not self.abs_tol > 0.0:
            raise ValueError(f"abs_tol must be > 0, got {self.abs_tol}")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not 0.0 < self.tail_mass_cutoff <= 1e-6:
            raise ValueError(
                f"tail_mass_cutoff must lie in (0, 1e-6], got {self.tail_mass_cutoff}"
            )

    def inner(self) -> "QuadratureSpec":
        """Tightened spec for integrals nested inside another integrand."""
        return QuadratureSpec(
            rel_tol=self.rel_tol / 10.0,
            abs_tol=self.abs_tol,
            max_subdivisions=self.max_subdivisions,
            tail_mass_cutoff=self.tail_mass_cutoff,
        )


def truncation_radius(density: float, nu: float, spec: QuadratureSpec) -> float:
    """Radius beyond which the nearest-transmitter law leaves <= tail_mass_cutoff."""
    return math.sqrt(math.log(1.0 / spec.tail_mass_cutoff) / (math.pi * nu * density))


def _eval_columns(fn, x, label):
    """Evaluate fn on node array x, expecting an (n, m) result; validate finiteness."""
    y = np.asarray(fn(x), dtype=float)
    if y.ndim == 1:
        y = y[:, None]
    if y.shape[0] != x.shape[0]:
        raise ValueError(
            f"{label}: integrand returned shape {y.shape} for {x.shape[0]} nodes"
        )
    if not np.isfinite(y).all():
        raise NonFiniteIntegrand(f"{label}: integrand returned non-finite values")
    return y


def _panel_estimates(fn, lefts, rights, label):
    """Kronrod value and |Kronrod - Gauss| error for each panel, batched."""
    mid = 0.5 * (lefts + rights)
    half = 0.5 * (rights - lefts)
    x = (mid[:, None] + half[:, None] * _NODES[None, :]).ravel()
    y = _eval_columns(fn, x, label)
    y = y.reshape(lefts.size, _NODES.size, y.shape[1])
    vals = half[:, None] * np.tensordot(y, _KRONROD_W, axes=([1], [0]))
    gauss = half[:, None] * np.tensordot(y, _GAUSS_W, axes=([1], [0]))
    return vals, np.abs(vals - gauss)


def _adaptive(fn, a, b, spec, label):
    """Shared-panel adaptive integration; fn maps (n,) nodes -> (n, m) columns."""
    edges = np.linspace(a, b, _INITIAL_PANELS + 1)
    lefts, rights = edges[:-1].copy(), edges[1:].copy()
    vals, errs = _panel_estimates(fn, lefts, rights, label)
    splits_used = 0
    while True:
        order = np.argsort(lefts, kind="stable")
        lefts, rights = lefts[order], rights[order]
        vals, errs = vals[order], errs[order]
        total = np.sum(vals, axis=0)
        total_err = np.sum(errs, axis=0)
        budget = np.maximum(spec.abs_tol, spec.rel_tol * np.abs(total))
        failing = total_err > budget
        if not failing.any():
            return total
        remaining = spec.max_subdivisions - splits_used
        if remaining <= 0:
            worst = float(np.max(total_err[failing] / budget[failing]))
            raise NonConvergence(
                f"{label}: subdivision budget {spec.max_subdivisions} exhausted "
                f"(worst error {worst:.3g}x tolerance)"
            )
        # split every panel holding more than an equal share of a failing
        # column's budget; always split at least the worst panel
        share = errs[:, failing] / budget[None, failing]
        panel_score = np.max(share, axis=1)
        split = panel_score > 1.0 / (2.0 * lefts.size)
        if not split.any():
            split[np.argmax(panel_score)] = True
        idx = np.flatnonzero(split)
        if idx.size > remaining:
            keep = np.argsort(panel_score[idx], kind="stable")[::-1][:remaining]
            idx = np.sort(idx[keep])
        splits_used += idx.size
        mids = 0.5 * (lefts[idx] + rights[idx])
        new_lefts = np.concatenate([lefts[idx], mids])
        new_rights = np.concatenate([mids, rights[idx]])
        new_vals, new_errs = _panel_estimates(fn, new_lefts, new_rights, label)
        keep_mask = np.ones(lefts.size, dtype=bool)
        keep_mask[idx] = False
        lefts = np.concatenate([lefts[keep_mask], new_lefts])
        rights = np.concatenate([rights[keep_mask], new_rights])
        vals = np.concatenate([vals[keep_mask], new_vals])
        errs = np.concatenate([errs[keep_mask], new_errs])


def _wrap_semi_infinite(fn, a):
    """Map [a, inf) onto t in [0, 1) via x = a + t / (1 - t)."""

    def wrapped(t):
        u = 1.0 - t
        x = a + t / u
        with np.errstate(over="ignore", under="ignore"):
            y = np.asarray(fn(x), dtype=float)
            jac = 1.0 / np.square(u)
            return y * (jac[:, None] if y.ndim == 2 else jac)

    return wrapped


def _scalar_capable(f, label):
    """Adapt a scalar-only callable to batched node evaluation when needed."""

    def fn(x):
        try:
            y = np.asarray(f(x), dtype=float)
        except (TypeError, ValueError):
            y = np.array([float(f(xi)) for xi in x], dtype=float)
        if y.shape != x.shape:
            y = np.array([float(f(xi)) for xi in x], dtype=float)
        return y

    return fn


def integrate(f, a: float, b: float, spec: QuadratureSpec | None = None, label: str = "integral") -> float:
    """Integrate f over [a, b], b may be math.inf; returns a float estimate.

    The estimated error is driven below max(abs_tol, rel_tol * |I|); the
    callable may be scalar-only or vectorised over node arrays.
    """
    spec = spec or QuadratureSpec()
    if math.isinf(a):
        raise ValueError("lower limit must be finite")
    if b < a:
        raise ValueError(f"upper limit {b} below lower limit {a}")
    if a == b:
        return 0.0
    fn = _scalar_capable(f, label)
    if math.isinf(b):
        out = _adaptive(_wrap_semi_infinite(fn, a), 0.0, 1.0, spec, label)
    else:
        out = _adaptive(fn, a, b, spec, label)
    return float(out[0])


def integrate_many(
    f, a: float, b: float, spec: QuadratureSpec | None = None, label: str = "integral"
) -> np.ndarray:
    """Integrate a family of integrands sharing one domain and panel set.

    f maps an (n,) node array to an (n, m) array, one column per family
    member; all columns are refined together until each meets tolerance.
    Returns the (m,) vector of integrals.
    """
    spec = spec or QuadratureSpec()
    if math.isinf(a):
        raise ValueError("lower limit must be finite")
    if b < a:
        raise ValueError(f"upper limit {b} below lower limit {a}")
    if math.isinf(b):
        return _adaptive(_wrap_semi_infinite(f, a), 0.0, 1.0, spec, label)
    if a == b:
        probe = np.asarray(f(np.array([a])), dtype=float)
        return np.zeros(probe.shape[1] if probe.ndim == 2 else 1)
    return _adaptive(f, a, b, spec, label)
