"""Test functions with simple poles and exact derivatives of every order.

Each function is a sum of vector-residue pole terms, an optional vector
polynomial, and an optional entire part, so values and derivatives are
closed-form.  These drive the sampling side of the pipeline and the
independent ground-truth formulas.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EvalAtPoleError


@dataclass(frozen=True)
class EntirePart:
    """Entire component: ``amplitude * kind(z)`` with kind exp or sin."""

    kind: str
    amplitude: tuple

    def __post_init__(self):
        if self.kind not in ("exp", "sin"):
            raise ValueError(f"unknown entire kind {self.kind!r}")

    def derivative(self, z, order: int) -> np.ndarray:
        amp = np.asarray(self.amplitude, dtype=complex)
        if self.kind == "exp":
            return amp * cmath.exp(z)
        # derivatives of sin cycle with period 4
        cycle = (cmath.sin(z), cmath.cos(z), -cmath.sin(z), -cmath.cos(z))
        return amp * cycle[order % 4]


@dataclass(frozen=True)
class MeromorphicTestFunction:
    """``F(z) = sum_s v_s/(z - z_s) + u(z) + theta(z)``.

    ``poles`` are pairwise distinct, ``residues`` nonzero vectors of a
    common dimension.  ``poly`` holds ascending vector coefficients of u;
    ``entire`` an optional EntirePart theta.
    """

    poles: tuple = ()
    residues: tuple = ()
    poly: tuple = ()
    entire: EntirePart | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.poles) != len(self.residues):
            raise ValueError("poles and residues must pair up")
        for i, a in enumerate(self.poles):
            for b in self.poles[:i]:
                if complex(a) == complex(b):
                    raise ValueError(f"pole {a} repeated")
        dims = {len(v) for v in self.residues}
        dims |= {len(c) for c in self.poly}
        if self.entire is not None:
            dims.add(len(self.entire.amplitude))
        if len(dims) > 1:
            raise ValueError(f"mixed component dimensions {sorted(dims)}")

    @property
    def dim(self) -> int:
        if self.residues:
            return len(self.residues[0])
        if self.poly:
            return len(self.poly[0])
        if self.entire is not None:
            return len(self.entire.amplitude)
        raise ValueError("empty function has no dimension")

    @property
    def poly_degree(self) -> int:
        """Degree of the polynomial part; -1 when absent or zero."""
        for t in range(len(self.poly) - 1, -1, -1):
            if np.any(np.asarray(self.poly[t], dtype=complex) != 0):
                return t
        return -1

    def _check_not_pole(self, z) -> None:
        for a in self.poles:
            if complex(z) == complex(a):
                raise EvalAtPoleError(f"evaluation at pole {a}")

    def rational_derivative(self, z, order: int) -> np.ndarray:
        """Exact order-th derivative of the pole-sum part alone."""
        self._check_not_pole(z)
        out = np.zeros(self.dim, dtype=complex)
        sign_fact = (-1) ** order * math.factorial(order)
        for a, v in zip(self.poles, self.residues):
            out += np.asarray(v, dtype=complex) * (
                sign_fact / (z - a) ** (order + 1)
            )
        return out

    def smooth_derivative(self, z, order: int) -> np.ndarray:
        """Derivative of the non-pole part (polynomial plus entire)."""
        out = np.zeros(self.dim, dtype=complex)
        for t in range(order, len(self.poly)):
            coeff = np.asarray(self.poly[t], dtype=complex)
            out += coeff * (
                math.factorial(t) // math.factorial(t - order)
            ) * z ** (t - order)
        if self.entire is not None:
            out += self.entire.derivative(z, order)
        return out

    def derivative(self, z, order: int) -> np.ndarray:
        return self.rational_derivative(z, order) + self.smooth_derivative(z, order)

    def value(self, z) -> np.ndarray:
        return self.derivative(z, 0)

    def __call__(self, z, order: int = 0) -> np.ndarray:
        # sampling interface: func(point, order)
        return self.derivative(z, order)

    def rational_only(self) -> "MeromorphicTestFunction":
        """Drop the entire part, keeping poles, residues and polynomial."""
        return MeromorphicTestFunction(
            poles=self.poles, residues=self.residues, poly=self.poly,
            name=self.name + "_rational" if self.name else "",
        )

    def theta_only(self):
        """Callable sampling the entire part alone, or None if absent."""
        if self.entire is None:
            return None
        ent = self.entire
        return lambda z, order=0: ent.derivative(z, order)


def _vec(*components) -> tuple:
    return tuple(complex(c) for c in components)


def single_pole() -> MeromorphicTestFunction:
    """F(z) = (1,1)/(z-3); the worked k=1 instance."""
    return MeromorphicTestFunction(
        poles=(3.0 + 0.0j,), residues=(_vec(1, 1),), name="single_pole"
    )


def two_pole() -> MeromorphicTestFunction:
    """F(z) = (1,0)/(z-2) + (0,1)/(z+3); the rate-study instance."""
    return MeromorphicTestFunction(
        poles=(2.0 + 0.0j, -3.0 + 0.0j),
        residues=(_vec(1, 0), _vec(0, 1)),
        name="two_pole",
    )


def meromorphic_exp() -> MeromorphicTestFunction:
    """two_pole plus the entire part (e^z, e^z)."""
    return MeromorphicTestFunction(
        poles=(2.0 + 0.0j, -3.0 + 0.0j),
        residues=(_vec(1, 0), _vec(0, 1)),
        entire=EntirePart("exp", _vec(1, 1)),
        name="meromorphic_exp",
    )


def interval_two_pole() -> MeromorphicTestFunction:
    """Two poles off [-1,1], for interval-geometry studies."""
    return MeromorphicTestFunction(
        poles=(1.5 + 0.0j, 0.0 + 2.0j),
        residues=(_vec(1, 0), _vec(0, 1)),
        name="interval_two_pole",
    )


CATALOG = {
    f().name: f
    for f in (single_pole, two_pole, meromorphic_exp, interval_two_pole)
}


def from_catalog(name: str) -> MeromorphicTestFunction:
    try:
        return CATALOG[name]()
    except KeyError:
        raise KeyError(
            f"unknown catalog function {name!r}; known: {sorted(CATALOG)}"
        ) from None


def random_rational(rng: np.random.Generator, dim: int, mu: int,
                    poly_degree: int = -1, pole_min_sep: float = 0.35,
                    pole_band: tuple = (1.3, 3.0)) -> MeromorphicTestFunction:
    """Random simple-pole function for property tests.

    Poles land in an annulus outside the unit disk with pairwise
    separation at least ``pole_min_sep``; residues are O(1) complex
    vectors bounded away from zero.
    """
    poles: list[complex] = []
    while len(poles) < mu:
        r = rng.uniform(*pole_band)
        th = rng.uniform(0, 2 * math.pi)
        cand = r * cmath.exp(1j * th)
        if all(abs(cand - a) >= pole_min_sep for a in poles):
            poles.append(cand)
    residues = []
    for _ in range(mu):
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        v += 0.3 * v / max(np.linalg.norm(v), 1e-3)
        residues.append(tuple(v))
    poly = ()
    if poly_degree >= 0:
        poly = tuple(
            tuple(rng.normal(size=dim) + 1j * rng.normal(size=dim))
            for _ in range(poly_degree + 1)
        )
    return MeromorphicTestFunction(
        poles=tuple(poles), residues=tuple(residues), poly=poly
    )
