"""Vector-field models, finite-difference Jacobians, contraction-rate
functions, and the catalog of built-in test systems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CatalogError, DimensionError, EvaluationError
from .linalg import as_matrix, as_vector

CATALOG_NAMES = ("linear_stable", "scalar_decay", "rotation_decay", "quad_nonsmooth", "ltv_cosine")


@dataclass(frozen=True, eq=False)
class VectorFieldModel:
    """Evaluatable vector field x' = rhs(t, x) with optional analytic Jacobian.

    ``sample_box`` declares the region certification samples from: one
    (lower, upper) row per coordinate. Models must be pure functions of
    (t, x); they may be evaluated concurrently.
    """

    dim: int
    rhs: Callable[[float, np.ndarray], np.ndarray]
    sample_box: np.ndarray
    jacobian: Callable[[float, np.ndarray], np.ndarray] | None = None
    time_invariant: bool = False
    name: str = ""


@dataclass(frozen=True, eq=False)
class LTVSystem:
    """Linear time-varying system x' = A(t) x."""

    dim: int
    A_of_t: Callable[[float], np.ndarray]
    sample_box: np.ndarray
    name: str = ""


def _check_box(box, dim: int) -> np.ndarray:
    b = np.asarray(box, dtype=np.float64)
    if b.shape != (dim, 2):
        raise DimensionError(f"sample_box must have shape ({dim}, 2), got {b.shape}")
    if not np.all(np.isfinite(b)) or not np.all(b[:, 0] < b[:, 1]):
        raise ValueError("sample_box rows must be finite (lower, upper) pairs with lower < upper")
    return b


def vector_field(dim, rhs, sample_box, jacobian=None, time_invariant=False, name="") -> VectorFieldModel:
    return VectorFieldModel(int(dim), rhs, _check_box(sample_box, int(dim)), jacobian, bool(time_invariant), name)


def ltv_system(dim, A_of_t, sample_box, name="") -> LTVSystem:
    return LTVSystem(int(dim), A_of_t, _check_box(sample_box, int(dim)), name)


def ltv_to_model(sys: LTVSystem) -> VectorFieldModel:
    """View an LTV system as a vector-field model with Jacobian A(t)."""
    A_of_t = sys.A_of_t
    return VectorFieldModel(
        dim=sys.dim,
        rhs=lambda t, x: A_of_t(t) @ x,
        sample_box=sys.sample_box,
        jacobian=lambda t, x: A_of_t(t),
        time_invariant=False,
        name=sys.name,
    )


@dataclass(frozen=True, eq=False)
class RateFunction:
    """Contraction rate c(t) > 0: either constant or tabulated with linear interpolation."""

    kind: str
    value: float | None = None
    times: np.ndarray | None = None
    values: np.ndarray | None = None

    def at(self, t):
        if self.kind == "constant":
            return self.value if np.isscalar(t) else np.full(np.shape(t), self.value)
        return np.interp(t, self.times, self.values)

    def min_value(self) -> float:
        return self.value if self.kind == "constant" else float(self.values.min())

    def to_dict(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "value": self.value}
        return {"kind": "tabulated", "times": self.times.tolist(), "values": self.values.tolist()}


def constant_rate(c) -> RateFunction:
    c = float(c)
    if not (np.isfinite(c) and c > 0.0):
        raise ValueError(f"contraction rate must be a finite positive number, got {c}")
    return RateFunction("constant", value=c)


def tabulated_rate(times, values) -> RateFunction:
    ts = as_vector(times)
    cs = as_vector(values)
    if ts.size != cs.size or ts.size < 2:
        raise ValueError("tabulated rate needs matching time/value arrays of length >= 2")
    if not np.all(np.diff(ts) > 0.0):
        raise ValueError("tabulated rate times must be strictly increasing")
    if not np.all(cs > 0.0):
        raise ValueError("tabulated rate values must all be strictly positive")
    return RateFunction("tabulated", times=ts, values=cs)


def as_rate(rate) -> RateFunction:
    if isinstance(rate, RateFunction):
        return rate
    return constant_rate(rate)


def default_fd_step(x) -> float:
    """Central-difference step balancing truncation against rounding."""
    return 1e-6 * (1.0 + float(np.abs(x).max(initial=0.0)))


def jacobian_fd(model: VectorFieldModel, t: float, x, h: float | None = None) -> np.ndarray:
    """Central-difference Jacobian of the model at (t, x)."""
    x = as_vector(x)
    if x.size != model.dim:
        raise DimensionError(f"state has length {x.size}, model dimension is {model.dim}")
    if h is None:
        h = default_fd_step(x)
    if not h > 0.0:
        raise ValueError(f"step h must be > 0, got {h}")
    J = np.empty((model.dim, model.dim))
    for j in range(model.dim):
        e = np.zeros(model.dim)
        e[j] = h
        fp = np.asarray(model.rhs(t, x + e), dtype=np.float64)
        fm = np.asarray(model.rhs(t, x - e), dtype=np.float64)
        col = (fp - fm) / (2.0 * h)
        if not np.all(np.isfinite(col)):
            bad = np.nonzero(~np.isfinite(col))[0].tolist()
            raise EvaluationError(f"non-finite field evaluation near x={x.tolist()} (coordinates {bad})")
        J[:, j] = col
    return J


def jacobian_of(model: VectorFieldModel) -> Callable[[float, np.ndarray], np.ndarray]:
    """The analytic Jacobian when present, otherwise a finite-difference fallback."""
    if model.jacobian is not None:
        return model.jacobian
    return lambda t, x: jacobian_fd(model, t, x)


def _linear_model(A, name: str) -> VectorFieldModel:
    A = as_matrix(A, square=True)
    n = A.shape[0]
    return vector_field(
        n,
        lambda t, x: A @ x,
        np.tile([-2.0, 2.0], (n, 1)),
        jacobian=lambda t, x: A,
        time_invariant=True,
        name=name,
    )


def builtin_system(name: str, matrix=None):
    """Return a catalog system by name.

    linear_stable   x' = A x for a caller-supplied matrix A
    scalar_decay    x' = -x (dim 1)
    rotation_decay  x' = (-x1 + x2, -x1 - x2)
    quad_nonsmooth  x' = -x - clip(x, -1, 1), continuous but not C^1
    ltv_cosine      x' = (-2 + cos t) x (dim 1, time varying)
    """
    if name == "linear_stable":
        if matrix is None:
            raise CatalogError("linear_stable requires a matrix")
        return _linear_model(matrix, "linear_stable")
    if name == "scalar_decay":
        return _linear_model(np.array([[-1.0]]), "scalar_decay")
    if name == "rotation_decay":
        return _linear_model(np.array([[-1.0, 1.0], [-1.0, -1.0]]), "rotation_decay")
    if name == "quad_nonsmooth":
        return vector_field(
            2,
            lambda t, x: -x - np.clip(x, -1.0, 1.0),
            [[-2.0, 2.0], [-2.0, 2.0]],
            jacobian=None,
            time_invariant=True,
            name="quad_nonsmooth",
        )
    if name == "ltv_cosine":
        return ltv_system(1, lambda t: np.array([[-2.0 + np.cos(t)]]), [[-2.0, 2.0]], name="ltv_cosine")
    raise CatalogError(f"unknown system {name!r}; valid names: {', '.join(CATALOG_NAMES)}")
