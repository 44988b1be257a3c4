"""The dimension-halving map to the Kepler side and its pullback identities.

ks sends (q, p) in R^8 with q != 0 to (x, y) with x != 0, collapsing
each circle orbit to a point.  Restricted to the zero level of the
circle momentum it pulls the angular momentum, eccentricity, and inner
product on the Kepler side back to the generators L, K, and -U1, and it
is a Poisson map up to a factor 2 in the target structure matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .invariants import PhasePoint8, eval_generators


@dataclass(frozen=True)
class PhasePoint6:
    """A point (x, y) of the Kepler-side phase space, x != 0 on the image."""

    x: tuple
    y: tuple

    def __post_init__(self):
        if len(self.x) != 3 or len(self.y) != 3:
            raise ValueError("x and y must each have 3 components")
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "y", tuple(self.y))

    def as_arrays(self):
        return np.asarray(self.x, dtype=float), np.asarray(self.y, dtype=float)


def _flat(z) -> tuple:
    return z.z if isinstance(z, PhasePoint8) else tuple(z)


def _dot(a, b):
    total = 0
    for x, y in zip(a, b):
        total = total + x * y
    return total


def _cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def norm3(v):
    """Euclidean norm, exact for rational input with a square norm."""
    s = _dot(v, v)
    if isinstance(s, (int, Fraction)):
        f = Fraction(s)
        rn, rd = math.isqrt(f.numerator), math.isqrt(f.denominator)
        if rn * rn == f.numerator and rd * rd == f.denominator:
            root = Fraction(rn, rd)
            return int(root) if root.denominator == 1 else root
    return math.sqrt(s)


def _agree(a, b, context: str):
    if abs(a - b) > 1e-9 * (1 + abs(a) + abs(b)):
        raise AssertionError(f"internal agreement check failed for {context}")


def ks(z) -> PhasePoint6:
    """Map (q, p) to (x, y).

    x is quadratic in q, y is bilinear over <q,q>.  The generator-form
    right-hand sides x = (U2-K1, U3-K2, U4-K3) and
    y = (V2, V3, V4)/(H2+V1) are computed alongside and must agree.

    Args:
      z: PhasePoint8 or flat 8-sequence with q != 0.

    Returns:
      PhasePoint6 with |x| = <q,q>.

    Raises:
      ValueError: q = 0 (the collision set, outside the domain).
    """
    flat = _flat(z)
    q, p = flat[:4], flat[4:]
    rho = _dot(q, q)
    if rho == 0:
        raise ValueError("q = 0 is outside the domain of the map")
    x = (
        2 * (q[0] * q[2] + q[1] * q[3]),
        2 * (q[0] * q[3] - q[1] * q[2]),
        q[0] * q[0] + q[1] * q[1] - q[2] * q[2] - q[3] * q[3],
    )
    n = (
        q[2] * p[0] + q[3] * p[1] + q[0] * p[2] + q[1] * p[3],
        q[3] * p[0] - q[2] * p[1] - q[1] * p[2] + q[0] * p[3],
        q[0] * p[0] + q[1] * p[1] - q[2] * p[2] - q[3] * p[3],
    )
    y = tuple(v / rho for v in n)

    g = eval_generators(flat)
    x_gen = (g.U[1] - g.K[0], g.U[2] - g.K[1], g.U[3] - g.K[2])
    denom = g.H2 + g.V[0]
    y_gen = tuple(v / denom for v in (g.V[1], g.V[2], g.V[3]))
    for a, b in zip(x, x_gen):
        _agree(a, b, "x")
    for a, b in zip(y, y_gen):
        _agree(a, b, "y")
    return PhasePoint6(x=x, y=y)


def KS(z, tol: float = 1e-9) -> PhasePoint6:
    """ks restricted to the zero level of the circle momentum.

    Same formula, smaller domain: inputs with |Xi| > tol are rejected.
    """
    g = eval_generators(_flat(z))
    if abs(g.Xi) > tol:
        raise ValueError(f"Xi = {g.Xi} is off the zero level beyond tol = {tol}")
    return ks(z)


def ks_fiber_action(z, s: float) -> PhasePoint8:
    """Flow of the circle action: rotation by s in the four 2-planes.

    Orientation: d/ds q1 = -q2, d/ds q2 = q1, and the same pattern in
    (q3,q4), (p1,p2), (p3,p4).  ks is constant along this flow.
    """
    flat = _flat(z)
    c, sn = math.cos(s), math.sin(s)
    out = [0.0] * 8
    for i in (0, 2, 4, 6):
        out[i] = flat[i] * c - flat[i + 1] * sn
        out[i + 1] = flat[i] * sn + flat[i + 1] * c
    return PhasePoint8(tuple(out[:4]), tuple(out[4:]))


def pullback_kepler_hamiltonian(z):
    """Both sides of the Hamiltonian pullback identity.

    lhs = (1/2)|x|(|y|^2 + 1) at ks(z); rhs = H2 - (1/2)Xi^2/(H2+V1).
    The identity holds on the whole domain, not only on the zero level.
    """
    pt = ks(z)
    g = eval_generators(_flat(z))
    lhs = norm3(pt.x) * (_dot(pt.y, pt.y) + 1) / 2
    rhs = g.H2 - Fraction(1, 2) * g.Xi * g.Xi / (g.H2 + g.V[0])
    return lhs, rhs


def _require_level_set(g, tol: float):
    if abs(g.H2 - 1) > tol or abs(g.Xi) > tol:
        raise ValueError(
            f"point is off the (H2, Xi) = (1, 0) level set beyond tol = {tol}: "
            f"H2 = {float(g.H2)}, Xi = {float(g.Xi)}"
        )


def pullback_angular_momentum(z, tol: float = 1e-9):
    """(x cross y at ks(z), L(z)) on the (1, 0) level set."""
    g = eval_generators(_flat(z))
    _require_level_set(g, tol)
    pt = ks(z)
    return _cross(pt.x, pt.y), g.L


def pullback_eccentricity(z, tol: float = 1e-9):
    """(-x/|x| + y cross (x cross y) at ks(z), K(z)) on the level set."""
    g = eval_generators(_flat(z))
    _require_level_set(g, tol)
    pt = ks(z)
    r = norm3(pt.x)
    yxy = _cross(pt.y, _cross(pt.x, pt.y))
    e = tuple(-xi / r + w for xi, w in zip(pt.x, yxy))
    return e, g.K


def pullback_inner_product(z, tol: float = 1e-9):
    """(<x, y> at ks(z), -U1(z)) on the level set."""
    g = eval_generators(_flat(z))
    _require_level_set(g, tol)
    pt = ks(z)
    return _dot(pt.x, pt.y), -g.U[0]


def ks_gradients(z) -> np.ndarray:
    """Analytic gradients of the six components of ks, shape (6, 8).

    Rows are (x1, x2, x3, y1, y2, y3), columns (q1..q4, p1..p4).  The x
    rows have zero p-derivatives; the y rows carry the quotient rule
    for the division by <q,q>.
    """
    flat = tuple(float(v) for v in _flat(z))
    q, p = flat[:4], flat[4:]
    rho = _dot(q, q)
    if rho == 0:
        raise ValueError("q = 0 is outside the domain of the map")
    grads = np.zeros((6, 8))
    grads[0, 0:4] = 2 * np.array([q[2], q[3], q[0], q[1]])
    grads[1, 0:4] = 2 * np.array([q[3], -q[2], -q[1], q[0]])
    grads[2, 0:4] = 2 * np.array([q[0], q[1], -q[2], -q[3]])
    n = (
        q[2] * p[0] + q[3] * p[1] + q[0] * p[2] + q[1] * p[3],
        q[3] * p[0] - q[2] * p[1] - q[1] * p[2] + q[0] * p[3],
        q[0] * p[0] + q[1] * p[1] - q[2] * p[2] - q[3] * p[3],
    )
    n_q = np.array([
        [p[2], p[3], p[0], p[1]],
        [p[3], -p[2], -p[1], p[0]],
        [p[0], p[1], -p[2], -p[3]],
    ])
    n_p = np.array([
        [q[2], q[3], q[0], q[1]],
        [q[3], -q[2], -q[1], q[0]],
        [q[0], q[1], -q[2], -q[3]],
    ])
    qv = np.array(q)
    for i in range(3):
        grads[3 + i, 0:4] = n_q[i] / rho - n[i] * 2 * qv / rho**2
        grads[3 + i, 4:8] = n_p[i] / rho
    return grads


def poisson_property_residual(z) -> np.ndarray:
    """Deviation of the pulled-back bracket table from [[0, 2I], [-2I, 0]].

    Entry (a, b) is {f_a, f_b}(z) minus the target, for f running over
    the six components of ks, evaluated with the analytic gradients.
    The x-x block vanishes identically; the rest vanishes on the zero
    level of Xi.
    """
    grads = ks_gradients(z)
    gq, gp = grads[:, 0:4], grads[:, 4:8]
    brackets = gq @ gp.T - gp @ gq.T
    target = np.zeros((6, 6))
    for i in range(3):
        target[i, 3 + i] = 2.0
        target[3 + i, i] = -2.0
    return brackets - target


def poisson_residual_xi_sweep(z, offsets) -> list:
    """Largest y-y bracket residual as the circle momentum varies.

    Each offset t shifts p by t times the rotated q, moving Xi by
    t<q,q> while keeping q fixed.  Returns [(Xi, residual), ...] rows
    measured at each shifted point; no claim is asserted about them.
    """
    flat = tuple(float(v) for v in _flat(z))
    q, p = flat[:4], flat[4:]
    rq = (-q[1], q[0], -q[3], q[2])
    rows = []
    for t in offsets:
        shifted = q + tuple(pi + t * ri for pi, ri in zip(p, rq))
        xi = float(eval_generators(shifted).Xi)
        res = poisson_property_residual(shifted)
        rows.append((xi, float(np.abs(res[3:, 3:]).max())))
    return rows
