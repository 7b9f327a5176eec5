"""Dense linear algebra: induced operator norms, matrix measures (logarithmic
norms), pseudoinverses of full-row-rank maps, and the seminorms and
semi-measures induced by a surjective linear map.

Measures are evaluated in closed form for the one/two/inf/weighted-two norms;
``matrix_measure_limit`` evaluates the defining one-sided difference quotient
and serves as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidWeightError, RankDeficiencyError

# Relative singular-value cutoff below which a map is treated as rank deficient.
RANK_RATIO_TOL = 1e-10
WEIGHT_SYM_TOL = 1e-10
MAP_IDENTITY_TOL = 1e-9


def as_matrix(a, square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D float64 array."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return m


def as_vector(x) -> np.ndarray:
    """Coerce ``x`` to a finite 1-D float64 array."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionError(f"expected a 1-D vector, got ndim={v.ndim}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector contains non-finite entries")
    return v


@dataclass(frozen=True, eq=False)
class Norm:
    """Norm selector: ``one``, ``two``, ``inf``, or ``weighted-two``.

    For weighted-two the symmetric square root of the SPD weight and its
    inverse are precomputed once; measures and operator norms are then
    evaluated on the similarity transform  P^{1/2} A P^{-1/2}.
    """

    kind: str
    weight: np.ndarray | None = None
    weight_sqrt: np.ndarray | None = None
    weight_sqrt_inv: np.ndarray | None = None

    @property
    def is_inner_product(self) -> bool:
        return self.kind in ("two", "weighted-two")


ONE = Norm("one")
TWO = Norm("two")
INF = Norm("inf")


def weighted_two(P) -> Norm:
    """Norm of the inner product <x, y>_P = x^T P y with P symmetric positive definite."""
    P = as_matrix(P, square=True)
    if np.max(np.abs(P - P.T)) > WEIGHT_SYM_TOL * (1.0 + np.max(np.abs(P))):
        raise InvalidWeightError("weight matrix is not symmetric")
    evals, vecs = np.linalg.eigh((P + P.T) / 2.0)
    if evals[0] <= 0.0:
        raise InvalidWeightError(
            f"weight matrix is not positive definite (min eigenvalue {evals[0]:.3e})"
        )
    root = np.sqrt(evals)
    sqrt = (vecs * root) @ vecs.T
    sqrt_inv = (vecs / root) @ vecs.T
    return Norm("weighted-two", P, sqrt, sqrt_inv)


def as_norm(norm) -> Norm:
    """Accept a Norm or one of the strings 'one', 'two', 'inf'."""
    if isinstance(norm, Norm):
        return norm
    try:
        return {"one": ONE, "two": TWO, "inf": INF}[norm]
    except (KeyError, TypeError):
        raise ValueError(f"unknown norm {norm!r}; expected 'one', 'two', 'inf' or a Norm") from None


def _weight_dim_check(norm: Norm, n: int) -> None:
    if norm.weight is not None and norm.weight.shape[0] != n:
        raise DimensionError(
            f"weight matrix is {norm.weight.shape[0]}x{norm.weight.shape[0]}, operand has dimension {n}"
        )


def vector_norm(x, norm="two") -> float:
    nk = as_norm(norm)
    x = as_vector(x)
    if nk.kind == "one":
        return float(np.abs(x).sum())
    if nk.kind == "inf":
        return float(np.abs(x).max())
    if nk.kind == "two":
        return float(np.linalg.norm(x))
    _weight_dim_check(nk, x.size)
    return float(np.linalg.norm(nk.weight_sqrt @ x))


def inner(x, y, norm="two") -> float:
    """Inner product associated with an inner-product norm."""
    nk = as_norm(norm)
    if not nk.is_inner_product:
        raise ValueError(f"norm {nk.kind!r} is not induced by an inner product")
    x = as_vector(x)
    y = as_vector(y)
    if x.size != y.size:
        raise DimensionError(f"vector lengths differ: {x.size} vs {y.size}")
    if nk.kind == "two":
        return float(x @ y)
    _weight_dim_check(nk, x.size)
    return float(x @ (nk.weight @ y))


def operator_norm(A, norm="two") -> float:
    """Induced operator norm of A."""
    nk = as_norm(norm)
    A = as_matrix(A)
    if nk.kind == "one":
        return float(np.abs(A).sum(axis=0).max())
    if nk.kind == "inf":
        return float(np.abs(A).sum(axis=1).max())
    if nk.kind == "two":
        return float(np.linalg.svd(A, compute_uv=False)[0])
    A = as_matrix(A, square=True)
    _weight_dim_check(nk, A.shape[0])
    return float(np.linalg.svd(nk.weight_sqrt @ A @ nk.weight_sqrt_inv, compute_uv=False)[0])


def matrix_measure(A, norm="two") -> float:
    """Matrix measure mu(A) = lim_{h->0+} (||I + hA|| - 1)/h, in closed form.

    one: max over columns of a_jj + sum_{i!=j} |a_ij|
    inf: max over rows of a_ii + sum_{j!=i} |a_ij|
    two: largest eigenvalue of (A + A^T)/2
    weighted-two: two-norm measure of P^{1/2} A P^{-1/2}
    """
    nk = as_norm(norm)
    A = as_matrix(A, square=True)
    d = np.diag(A)
    if nk.kind == "one":
        return float(np.max(d + (np.abs(A).sum(axis=0) - np.abs(d))))
    if nk.kind == "inf":
        return float(np.max(d + (np.abs(A).sum(axis=1) - np.abs(d))))
    if nk.kind == "two":
        return float(np.linalg.eigvalsh((A + A.T) / 2.0)[-1])
    _weight_dim_check(nk, A.shape[0])
    return matrix_measure(nk.weight_sqrt @ A @ nk.weight_sqrt_inv, TWO)


def matrix_measure_limit(A, norm="two", h: float = 1e-7) -> float:
    """One-sided difference quotient (||I + hA|| - 1)/h at a concrete h > 0."""
    if not h > 0.0:
        raise ValueError(f"h must be > 0, got {h}")
    A = as_matrix(A, square=True)
    eye = np.eye(A.shape[0])
    return (operator_norm(eye + h * A, norm) - 1.0) / h


def pseudoinverse(T) -> np.ndarray:
    """Moore-Penrose pseudoinverse T^T (T T^T)^{-1} of a full-row-rank m x n map, m <= n."""
    T = as_matrix(T)
    m, n = T.shape
    if m > n:
        raise DimensionError(f"map must have at least as many columns as rows, got {m}x{n}")
    s = np.linalg.svd(T, compute_uv=False)
    ratio = s[-1] / s[0] if s[0] > 0.0 else 0.0
    if ratio <= RANK_RATIO_TOL:
        raise RankDeficiencyError(
            f"map is rank deficient: singular-value ratio {ratio:.3e} <= {RANK_RATIO_TOL:.0e}"
        )
    return np.linalg.solve(T @ T.T, T).T


@dataclass(frozen=True, eq=False)
class SurjectiveMap:
    """Full-row-rank map T with its pseudoinverse and kernel projector I - T^+ T."""

    T: np.ndarray
    Tdagger: np.ndarray
    projector_ker: np.ndarray

    @property
    def dim_in(self) -> int:
        return self.T.shape[1]

    @property
    def dim_out(self) -> int:
        return self.T.shape[0]


def surjective_map(T) -> SurjectiveMap:
    """Build a SurjectiveMap from a full-row-rank matrix, validating T T^+ = I."""
    T = as_matrix(T)
    Td = pseudoinverse(T)
    m, n = T.shape
    err = np.max(np.abs(T @ Td - np.eye(m)))
    if err > MAP_IDENTITY_TOL:
        raise RankDeficiencyError(f"T T^+ deviates from identity by {err:.3e}; map is too ill conditioned")
    proj = np.eye(n) - Td @ T
    return SurjectiveMap(T, Td, proj)


def identity_map(n: int) -> SurjectiveMap:
    eye = np.eye(n)
    return SurjectiveMap(eye, eye.copy(), np.zeros((n, n)))


def seminorm(x, smap: SurjectiveMap, norm="two") -> float:
    """Seminorm ||T x|| under an inner-product norm on the image space."""
    nk = as_norm(norm)
    if not nk.is_inner_product:
        raise ValueError(f"seminorm requires an inner-product norm, got {nk.kind!r}")
    x = as_vector(x)
    if x.size != smap.dim_in:
        raise DimensionError(f"vector has length {x.size}, map expects {smap.dim_in}")
    return vector_norm(smap.T @ x, nk)


def semi_inner(x, y, smap: SurjectiveMap, norm="two") -> float:
    """Bilinear form <T x, T y> associated with the seminorm."""
    return inner(smap.T @ as_vector(x), smap.T @ as_vector(y), norm)


def semi_measure(A, smap: SurjectiveMap, norm="two") -> float:
    """Semi-measure of A with respect to the map: mu(T A T^+) on the image space."""
    A = as_matrix(A, square=True)
    if A.shape[0] != smap.dim_in:
        raise DimensionError(f"matrix is {A.shape[0]}x{A.shape[0]}, map expects {smap.dim_in}")
    return matrix_measure(smap.T @ A @ smap.Tdagger, norm)


def inner_product_bound_check(A, x, norm="two") -> float:
    """Margin mu(A) <x, x> - <x, A x>; nonnegative for inner-product norms."""
    nk = as_norm(norm)
    A = as_matrix(A, square=True)
    x = as_vector(x)
    if A.shape[0] != x.size:
        raise DimensionError(f"matrix is {A.shape[0]}x{A.shape[0]}, vector has length {x.size}")
    return matrix_measure(A, nk) * inner(x, x, nk) - inner(x, A @ x, nk)
