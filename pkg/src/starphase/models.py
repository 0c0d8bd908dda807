"""Model families for the planar system x' = y - x, y' = a(x) y - b(x) y^2.

Each family fixes a pair of coefficient functions (a, b) together with
their derivatives and primitives.  The four built-in families all come
from integrated-density reductions of self-gravitating matter:

* ``nonrel``   -- a(x) = 2 - x, b = 0 (isothermal Newtonian cloud)
* ``stiff``    -- a(x) = (2 - 3x)/(1 - x), b(x) = 1/(1 - x) (p = c^2 rho)
* ``scaled``   -- the stiff pair rescaled by sigma: a = (2 - 3 s x)/(1 - s x),
  b = s/(1 - s x); the phase portrait is the stiff one shrunk by 1/sigma
* ``kappa``    -- a(x) = 2 - (1+k)/(2k) x/(1-x), b(x) = (1+k)/2 / (1-x)
  (p = k c^2 rho, 0 < k <= 1; k = 1 reproduces the stiff pair)

Primitives are stored pre-shifted so A(z) = B(z) = 0 at the interior
stationary point z, which normalises the Lyapunov function to vanish at
(z, z).  All coefficient callables accept scalars or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import DomainError, HypothesisError
from .rootfind import solve_bracketed

#: evaluation rejects x >= x_max - DOMAIN_GUARD to avoid pole overflow
DOMAIN_GUARD = 1e-12

#: |x - z| below this: r_factor switches to its derivative limit
SINGULARITY_GUARD = 1e-7

#: agreement demanded between closed-form constants and the numeric root
VERIFY_TOL = 1e-9


class Family(str, Enum):
    NONRELATIVISTIC = "nonrel"
    STIFF_RELATIVISTIC = "stiff"
    SCALED_RELATIVISTIC = "scaled"
    KAPPA_FAMILY = "kappa"


@dataclass(frozen=True)
class ModelSpec:
    """Validated request for one member of the model family.

    Parameters
    ----------
    family : Family or str
        One of the four built-in families.
    kappa : float, optional
        Equation-of-state ratio, required for ``kappa`` and restricted to
        (0, 1]; values above 1 are untested and rejected.
    scale : float, optional
        Positive rescaling sigma for ``scaled`` (default 8 pi).
    """

    family: Family
    kappa: float | None = None
    scale: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.family is Family.KAPPA_FAMILY:
            if self.kappa is None:
                raise ValueError("kappa family requires a kappa value")
            if not 0.0 < self.kappa <= 1.0:
                raise ValueError(f"kappa must lie in (0, 1], got {self.kappa}")
        elif self.kappa is not None:
            raise ValueError("kappa is only meaningful for the kappa family")
        if self.family is Family.SCALED_RELATIVISTIC:
            if self.scale is None:
                object.__setattr__(self, "scale", 8.0 * math.pi)
            if self.scale <= 0.0:
                raise ValueError(f"scale must be positive, got {self.scale}")
        elif self.scale is not None:
            raise ValueError("scale is only meaningful for the scaled family")


@dataclass(frozen=True)
class SystemModel:
    """One member of the family, with coefficients, derivatives and
    normalised primitives.

    Immutable after construction; every callable is pure, so instances
    are safe for unrestricted concurrent use.

    Attributes
    ----------
    a, b : callable
        Coefficient functions of x.
    a_prime, b_prime : callable
        Their derivatives.
    A, B : callable
        Primitives of a and b, shifted so ``A(z) = B(z) = 0``.
    x_max : float
        Right end of the admissible x interval (pole of a, b or +inf).
    a0 : float
        ``a(0)``; positive for every built-in family.
    z, w, x0 : float
        Closed-form structural constants: interior stationary abscissa,
        unstable-line/isocline intersection, zero of a.
    b_is_zero : bool
        True for the degenerate b = 0 family.
    """

    spec: ModelSpec
    a: Callable
    b: Callable
    a_prime: Callable
    b_prime: Callable
    A: Callable
    B: Callable
    x_max: float
    a0: float
    z: float
    w: float
    x0: float
    b_is_zero: bool = False

    @property
    def family(self) -> Family:
        return self.spec.family

    def check_x(self, x) -> None:
        """Reject x outside [0, x_max - DOMAIN_GUARD)."""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0) or np.any(x >= self.x_max - DOMAIN_GUARD):
            raise DomainError(
                f"x outside [0, {self.x_max}) for family '{self.family.value}'")

    def check_xy(self, x, y, y_positive: bool = False) -> None:
        self.check_x(x)
        y = np.asarray(y, dtype=float)
        lo = 0.0
        if (np.any(y < lo) if not y_positive else np.any(y <= lo)):
            raise DomainError("y must be " +
                              ("positive" if y_positive else "nonnegative"))


def make_model(spec: ModelSpec) -> SystemModel:
    """Construct the requested family member.

    Raises
    ------
    ValueError
        If the requested parameters violate the ModelSpec invariants.
    """
    fam = spec.family
    if fam is Family.NONRELATIVISTIC:
        z, w, x0 = 2.0, 2.0, 2.0
        a = lambda x: 2.0 - np.asarray(x, dtype=float)
        b = lambda x: np.asarray(x, dtype=float) * 0.0
        a_prime = lambda x: np.asarray(x, dtype=float) * 0.0 - 1.0
        b_prime = lambda x: np.asarray(x, dtype=float) * 0.0
        A_raw = lambda x: 2.0 * x - np.square(x) / 2.0
        B_raw = lambda x: np.asarray(x, dtype=float) * 0.0
        x_max = math.inf
        b_is_zero = True
    elif fam is Family.STIFF_RELATIVISTIC:
        z, w, x0 = 0.5, 1.0 / 3.0, 2.0 / 3.0
        a = lambda x: (2.0 - 3.0 * x) / (1.0 - x)
        b = lambda x: 1.0 / (1.0 - np.asarray(x, dtype=float))
        a_prime = lambda x: -1.0 / np.square(1.0 - x)
        b_prime = lambda x: 1.0 / np.square(1.0 - x)
        A_raw = lambda x: 3.0 * x + np.log1p(-x)
        B_raw = lambda x: -np.log1p(-x)
        x_max = 1.0
        b_is_zero = False
    elif fam is Family.SCALED_RELATIVISTIC:
        s = spec.scale
        z, w, x0 = 1.0 / (2.0 * s), 1.0 / (3.0 * s), 2.0 / (3.0 * s)
        a = lambda x: (2.0 - 3.0 * s * x) / (1.0 - s * x)
        b = lambda x: s / (1.0 - s * np.asarray(x, dtype=float))
        a_prime = lambda x: -s / np.square(1.0 - s * x)
        b_prime = lambda x: s * s / np.square(1.0 - s * x)
        A_raw = lambda x: 3.0 * x + np.log1p(-s * x) / s
        B_raw = lambda x: -np.log1p(-s * x)
        x_max = 1.0 / s
        b_is_zero = False
    elif fam is Family.KAPPA_FAMILY:
        k = spec.kappa
        beta = (1.0 + k) / (2.0 * k)     # a(x) = 2 - beta x/(1-x)
        gamma = (1.0 + k) / 2.0          # b(x) = gamma/(1-x)
        z = 4.0 * k / ((k + 1.0) ** 2 + 4.0 * k)
        w = 4.0 * k / (3.0 * k * k + 8.0 * k + 1.0)
        x0 = 4.0 * k / (1.0 + 5.0 * k)
        a = lambda x: 2.0 - beta * x / (1.0 - x)
        b = lambda x: gamma / (1.0 - np.asarray(x, dtype=float))
        a_prime = lambda x: -beta / np.square(1.0 - x)
        b_prime = lambda x: gamma / np.square(1.0 - x)
        A_raw = lambda x: (2.0 + beta) * x + beta * np.log1p(-x)
        B_raw = lambda x: -gamma * np.log1p(-x)
        x_max = 1.0
        b_is_zero = False
    else:  # pragma: no cover - exhaustive enum
        raise ValueError(f"unknown family {fam}")

    # shift the primitives so that A(z) = B(z) = 0 exactly (same float
    # expression is subtracted, so the residue at z is identically zero)
    A_shift = float(A_raw(z))
    B_shift = float(B_raw(z))
    A = lambda x: A_raw(x) - A_shift
    B = lambda x: B_raw(x) - B_shift

    return SystemModel(spec=spec, a=a, b=b, a_prime=a_prime, b_prime=b_prime,
                       A=A, B=B, x_max=x_max, a0=float(a(0.0)),
                       z=z, w=w, x0=x0, b_is_zero=b_is_zero)


def model(family: Family | str, kappa: float | None = None,
          scale: float | None = None) -> SystemModel:
    """Shorthand: ``model("stiff")`` instead of ``make_model(ModelSpec(...))``."""
    return make_model(ModelSpec(Family(family), kappa=kappa, scale=scale))


def eval_field(m: SystemModel, x, y):
    """Vector field (dx, dy) = (y - x, a(x) y - b(x) y^2).

    Accepts scalars or arrays; y = 0 is admissible and yields dy = 0.
    """
    m.check_xy(x, y)
    dx = np.asarray(y, dtype=float) - x
    dy = m.a(x) * y - m.b(x) * np.square(y)
    return dx, dy


def find_z(m: SystemModel) -> float:
    """Interior stationary abscissa: the positive root of a(z) = z b(z).

    The closed-form family value is verified against a bracketed root
    search before being returned.
    """
    g = lambda x: float(m.a(x) - x * m.b(x))
    root = solve_bracketed(g, 1e-9 * min(1.0, m.x_max), m.x_max)
    if abs(root - m.z) > VERIFY_TOL * max(1.0, abs(m.z)):
        raise HypothesisError(
            f"numeric z={root!r} disagrees with closed form {m.z!r}")
    return m.z


def find_w(m: SystemModel) -> float:
    """Abscissa where the unstable tangent line meets the y' = 0 isocline,
    i.e. the root of (a0 + 1) w b(w) = a(w).

    For b = 0 the condition degenerates to a(w) = 0 and w = z is returned.
    Verifies the closed form and the ordering (a0 + 1) w > z >= w > 0
    (equality z = w only in the degenerate family).
    """
    if m.b_is_zero:
        w = m.z
    else:
        g = lambda x: float((m.a0 + 1.0) * x * m.b(x) - m.a(x))
        root = solve_bracketed(g, 1e-9 * min(1.0, m.x_max), m.x_max)
        if abs(root - m.w) > VERIFY_TOL * max(1.0, abs(m.w)):
            raise HypothesisError(
                f"numeric w={root!r} disagrees with closed form {m.w!r}")
        w = m.w
    if not ((m.a0 + 1.0) * w > m.z >= w - 1e-15 and w > 0.0):
        raise HypothesisError(
            f"ordering (a0+1)w > z >= w > 0 violated: w={w}, z={m.z}",
            point=(w, m.z))
    return w


def find_x0(m: SystemModel) -> float:
    """Positive zero of a.  Verified against the bracketed root search."""
    g = lambda x: float(m.a(x))
    root = solve_bracketed(g, 1e-9 * min(1.0, m.x_max), m.x_max)
    if abs(root - m.x0) > VERIFY_TOL * max(1.0, abs(m.x0)):
        raise HypothesisError(
            f"numeric x0={root!r} disagrees with closed form {m.x0!r}")
    return m.x0


def r_factor(m: SystemModel, x):
    """Structural factor r(x) = (z b(x) - a(x)) / (x - z).

    The quotient has a removable singularity at x = z; inside the
    SINGULARITY_GUARD band the derivative limit z b'(z) - a'(z) is used
    instead.  Vectorised over x.
    """
    m.check_x(x)
    x = np.asarray(x, dtype=float)
    limit = r_at_z(m)
    near = np.abs(x - m.z) < SINGULARITY_GUARD
    denom = np.where(near, 1.0, x - m.z)
    quotient = (m.z * m.b(x) - m.a(x)) / denom
    out = np.where(near, limit, quotient)
    return out if out.ndim else float(out)


def r_at_z(m: SystemModel) -> float:
    """Limit value r(z) = z b'(z) - a'(z)."""
    return float(m.z * m.b_prime(m.z) - m.a_prime(m.z))


@dataclass(frozen=True)
class EquilibriumData:
    """Structural constants of one family member, numerically verified."""

    z: float
    w: float
    x0: float
    r_at_z: float


def equilibrium(m: SystemModel) -> EquilibriumData:
    """Locate and verify z, w, x0 and the limit r(z) for the model."""
    z = find_z(m)
    w = find_w(m)
    x0 = find_x0(m)
    r = r_at_z(m)
    if r < 0.0:
        raise HypothesisError(f"r(z) = {r} is negative", point=(z, z))
    return EquilibriumData(z=z, w=w, x0=x0, r_at_z=r)
