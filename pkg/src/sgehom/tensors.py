"""Dense symmetric tensor algebra for plane (n=2) and 3D (n=3) gradient elasticity.

Four tensor families cover everything the library needs:

* ``Tensor2Sym``      -- symmetric second-order tensors (strain, stress, Euler
  tensors of inertia).
* ``Tensor3PairSym``  -- third-order tensors symmetric in one index pair:
  curvature/double-stress tensors are symmetric in the first two indices,
  quadratic boundary-displacement coefficients in the last two.
* ``Tensor4Elastic``  -- classical stiffness tensors with minor and major
  symmetries.
* ``Tensor6SGE``      -- sixth-order gradient-stiffness tensors of Mindlin's
  second-gradient elasticity (SGE), symmetric in the first pair, in the
  fourth/fifth indices, and under the swap of index triples.

Storage is full dense float64 with canonicalizing constructors: every
component of a symmetry orbit is assigned the *same* float (the orbit mean),
so index-permutation invariance holds bit-exactly, not merely to roundoff.
All instances are immutable after construction and all module functions are
pure, so everything here is safe to share across threads.

Operators restricted to the physically symmetric subspaces (symmetric
second-order tensors for ``Tensor4Elastic``, first-pair-symmetric third-order
tensors for ``Tensor6SGE``) are represented on orthonormal Mandel-style bases
(off-diagonal elements scaled by 1/sqrt(2)); the restricted matrices are then
genuinely self-adjoint and their eigenvalues real by construction.

Norms are Frobenius norms over all components; tolerances are relative to
input norms.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

VALID_DIMS = (2, 3)

__all__ = [
    "VALID_DIMS",
    "SymmetryError",
    "NotPositiveDefiniteError",
    "Tensor2Sym",
    "Tensor3PairSym",
    "Tensor4Elastic",
    "Tensor6SGE",
    "isotropic_stiffness",
    "isotropic_gradient_stiffness",
    "isotropic_stiffness_is_pd",
    "mindlin_eshel_conditions",
    "stress_from_strain",
    "double_stress_from_curvature",
    "invert_stiffness",
    "invert_gradient_stiffness",
    "min_eigenvalue",
    "stiffness_matrix",
    "gradient_stiffness_matrix",
    "sym2_basis",
    "chi_basis",
    "beta_basis",
    "beta_to_vector",
    "beta_from_vector",
]


class SymmetryError(ValueError):
    """Raised when raw components violate a required index symmetry."""


class NotPositiveDefiniteError(ValueError):
    """Raised when an operator that must be positive definite is not."""


def _check_dim(n: int) -> int:
    if n not in VALID_DIMS:
        raise ValueError(f"spatial dimension must be 2 or 3, got {n}")
    return n


# ---------------------------------------------------------------------------
# Symmetry groups and canonicalization
# ---------------------------------------------------------------------------

def _closure(generators):
    """All index permutations generated by `generators` (transpose semantics)."""
    group = {tuple(range(len(generators[0])))}
    frontier = list(group)
    while frontier:
        p = frontier.pop()
        for g in generators:
            # composition rule: arr.transpose(p).transpose(g) == arr.transpose(q)
            q = tuple(p[k] for k in g)
            if q not in group:
                group.add(q)
                frontier.append(q)
    return tuple(sorted(group))


_GROUPS = {
    "sym2": _closure([(1, 0)]),
    "pair_first": _closure([(1, 0, 2)]),
    "pair_last": _closure([(0, 2, 1)]),
    "elastic": _closure([(1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)]),
    "sge": _closure([(1, 0, 2, 3, 4, 5), (0, 1, 2, 4, 3, 5), (3, 4, 5, 0, 1, 2)]),
}


@lru_cache(maxsize=None)
def _orbit_structure(n: int, group_key: str):
    """Precompute orbit bookkeeping for exact symmetrization.

    Returns (orbit_id, order, starts): `orbit_id[flat]` labels each flat index
    with its symmetry orbit, `order` sorts flat indices by orbit and `starts`
    delimits the sorted runs (for np.add.reduceat).
    """
    perms = _GROUPS[group_key]
    rank = len(perms[0])
    shape = (n,) * rank
    orbit_id = np.empty(n**rank, dtype=np.int64)
    first_seen: dict = {}
    for flat, idx in enumerate(np.ndindex(shape)):
        key = min(tuple(idx[p[k]] for k in range(rank)) for p in perms)
        orbit_id[flat] = first_seen.setdefault(key, len(first_seen))
    order = np.argsort(orbit_id, kind="stable")
    starts = np.searchsorted(orbit_id[order], np.arange(len(first_seen)))
    return orbit_id, order, starts


def _canonicalize(arr: np.ndarray, group_key: str) -> np.ndarray:
    """Replace every component by its symmetry-orbit mean.

    All members of an orbit receive the identical float, so the result is
    bit-exactly invariant under the whole symmetry group.
    """
    n = arr.shape[0]
    orbit_id, order, starts = _orbit_structure(n, group_key)
    flat = arr.ravel()[order]
    counts = np.diff(np.append(starts, flat.size))
    means = np.add.reduceat(flat, starts) / counts
    return means[orbit_id].reshape(arr.shape)


def _symmetry_defect(arr: np.ndarray, generators):
    """Worst asymmetry over the generating permutations: (value, idx, idx_perm)."""
    worst = (0.0, None, None)
    for g in generators:
        diff = np.abs(arr - arr.transpose(g))
        flat = int(np.argmax(diff))
        val = float(diff.flat[flat])
        if val > worst[0]:
            idx = tuple(int(v) for v in np.unravel_index(flat, arr.shape))
            pidx = tuple(idx[g[k]] for k in range(len(g)))
            worst = (val, idx, pidx)
    return worst


_GENERATORS = {
    "sym2": [(1, 0)],
    "pair_first": [(1, 0, 2)],
    "pair_last": [(0, 2, 1)],
    "elastic": [(1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)],
    "sge": [(1, 0, 2, 3, 4, 5), (0, 1, 2, 4, 3, 5), (3, 4, 5, 0, 1, 2)],
}


def _as_array(components, rank: int, name: str) -> np.ndarray:
    arr = np.asarray(components, dtype=float)
    if arr.ndim != rank:
        raise ValueError(f"{name} must have {rank} indices, got shape {arr.shape}")
    n = arr.shape[0]
    _check_dim(n)
    if arr.shape != (n,) * rank:
        raise ValueError(f"{name} must be square in every index, got shape {arr.shape}")
    return arr


class _Dense:
    """Shared plumbing: canonical storage, immutability, norms."""

    _rank: int
    _group: str

    __slots__ = ("components",)

    def __init__(self, components):
        arr = _as_array(components, self._rank, type(self).__name__)
        arr = _canonicalize(arr, self._group)
        arr.setflags(write=False)
        object.__setattr__(self, "components", arr)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def dim(self) -> int:
        return self.components.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    @classmethod
    def zero(cls, dim: int):
        _check_dim(dim)
        return cls(np.zeros((dim,) * cls._rank))

    @classmethod
    def validated(cls, components, tol: float = 1e-12):
        """Construct, but reject raw components whose asymmetry exceeds
        `tol` relative to the largest component; the offending index tuple
        is named in the error."""
        arr = _as_array(components, cls._rank, cls.__name__)
        scale = float(np.abs(arr).max())
        defect, idx, pidx = _symmetry_defect(arr, _GENERATORS[cls._group])
        if defect > tol * max(scale, 1e-300):
            raise SymmetryError(
                f"{cls.__name__} components break symmetry at indices {idx} vs {pidx}: "
                f"{arr[idx]:.17g} != {arr[pidx]:.17g} (defect {defect:.3e})"
            )
        return cls(arr)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, norm={self.norm():.6g})"


class Tensor2Sym(_Dense):
    """Symmetric second-order tensor (strain, stress, Euler tensor, ...)."""

    _rank = 2
    _group = "sym2"

    @classmethod
    def identity(cls, dim: int) -> "Tensor2Sym":
        _check_dim(dim)
        return cls(np.eye(dim))

    def trace(self) -> float:
        return float(np.trace(self.components))


class Tensor3PairSym(_Dense):
    """Third-order tensor symmetric in one index pair.

    ``sym_pair='first'`` holds curvature/double-stress tensors (symmetric in
    the first two indices); ``sym_pair='last'`` holds quadratic
    boundary-displacement coefficients (symmetric in the last two).
    """

    _rank = 3
    _group = "pair_first"  # default; __init__ selects the group per sym_pair

    __slots__ = ("sym_pair",)

    def __init__(self, components, sym_pair: str = "first"):
        if sym_pair not in ("first", "last"):
            raise ValueError(f"sym_pair must be 'first' or 'last', got {sym_pair!r}")
        arr = _as_array(components, 3, type(self).__name__)
        group = "pair_first" if sym_pair == "first" else "pair_last"
        arr = _canonicalize(arr, group)
        arr.setflags(write=False)
        object.__setattr__(self, "components", arr)
        object.__setattr__(self, "sym_pair", sym_pair)

    @classmethod
    def zero(cls, dim: int, sym_pair: str = "first"):
        _check_dim(dim)
        return cls(np.zeros((dim,) * 3), sym_pair)

    @classmethod
    def validated(cls, components, sym_pair: str = "first", tol: float = 1e-12):
        arr = _as_array(components, 3, cls.__name__)
        group = "pair_first" if sym_pair == "first" else "pair_last"
        scale = float(np.abs(arr).max())
        defect, idx, pidx = _symmetry_defect(arr, _GENERATORS[group])
        if defect > tol * max(scale, 1e-300):
            raise SymmetryError(
                f"{cls.__name__} components break {sym_pair}-pair symmetry at "
                f"indices {idx} vs {pidx} (defect {defect:.3e})"
            )
        return cls(arr, sym_pair)

    def __repr__(self):
        return f"Tensor3PairSym(dim={self.dim}, sym_pair={self.sym_pair!r}, norm={self.norm():.6g})"


class Tensor4Elastic(_Dense):
    """Fourth-order stiffness tensor with minor and major symmetries."""

    _rank = 4
    _group = "elastic"


class Tensor6SGE(_Dense):
    """Sixth-order gradient-stiffness tensor of second-gradient elasticity.

    Symmetric in the first index pair, in the fourth/fifth indices, and under
    exchange of the leading and trailing index triples.
    """

    _rank = 6
    _group = "sge"


# ---------------------------------------------------------------------------
# Isotropic constructors
# ---------------------------------------------------------------------------

def isotropic_stiffness(lam: float, mu: float, dim: int) -> Tensor4Elastic:
    """Isotropic stiffness  C_ijhk = lam d_ij d_hk + mu (d_ih d_jk + d_ik d_jh).

    `lam`, `mu` are the Lame constants; any real values are accepted
    (positive definiteness is checked elsewhere).
    """
    _check_dim(dim)
    eye = np.eye(dim)
    C = (
        lam * np.einsum("ij,hk->ijhk", eye, eye)
        + mu * (np.einsum("ih,jk->ijhk", eye, eye) + np.einsum("ik,jh->ijhk", eye, eye))
    )
    return Tensor4Elastic(C)


@lru_cache(maxsize=None)
def _iso_gradient_basis(dim: int) -> np.ndarray:
    """The five structural tensors multiplying a_1..a_5: shape (5,) + (n,)*6."""
    n = dim
    d = np.eye(n)
    t = np.empty((5,) + (n,) * 6)
    t[0] = 0.5 * (
        np.einsum("ij,hl,mn->ijhlmn", d, d, d) + np.einsum("ij,hm,ln->ijhlmn", d, d, d)
        + np.einsum("lm,in,jh->ijhlmn", d, d, d) + np.einsum("lm,ih,jn->ijhlmn", d, d, d)
    )
    t[1] = 0.5 * (
        np.einsum("ih,jl,mn->ijhlmn", d, d, d) + np.einsum("ih,jm,ln->ijhlmn", d, d, d)
        + np.einsum("jh,il,mn->ijhlmn", d, d, d) + np.einsum("jh,im,ln->ijhlmn", d, d, d)
    )
    t[2] = 2.0 * np.einsum("ij,hn,lm->ijhlmn", d, d, d)
    t[3] = np.einsum("il,jm,hn->ijhlmn", d, d, d) + np.einsum("im,jl,hn->ijhlmn", d, d, d)
    t[4] = 0.5 * (
        np.einsum("in,jl,hm->ijhlmn", d, d, d) + np.einsum("in,jm,hl->ijhlmn", d, d, d)
        + np.einsum("jn,il,hm->ijhlmn", d, d, d) + np.einsum("jn,im,hl->ijhlmn", d, d, d)
    )
    t.setflags(write=False)
    return t


def isotropic_gradient_stiffness(a, dim: int) -> Tensor6SGE:
    """Five-parameter isotropic sixth-order gradient stiffness.

    `a` are the five material constants (dimension of a force) of the
    isotropic nonlocal energy.
    """
    a = np.asarray(a, dtype=float)
    if a.shape != (5,):
        raise ValueError(f"expected exactly 5 coefficients, got shape {a.shape}")
    _check_dim(dim)
    return Tensor6SGE(np.tensordot(a, _iso_gradient_basis(dim), axes=1))


def isotropic_stiffness_is_pd(lam: float, mu: float, dim: int) -> bool:
    """Positive definiteness of the isotropic stiffness on symmetric tensors.

    Equivalent to min(2 mu, n lam + 2 mu) > 0; for n=3 this is the familiar
    pair 3 lam + 2 mu > 0, mu > 0.
    """
    _check_dim(dim)
    return mu > 0.0 and dim * lam + 2.0 * mu > 0.0


def mindlin_eshel_conditions(a):
    """Closed-form positive-definiteness test for the isotropic nonlocal
    energy in 3D (Mindlin-Eshel inequalities).

    Returns (is_pd, diagnostics) with the intermediate combinations e1, e2,
    e3 exposed for reporting.
    """
    a1, a2, a3, a4, a5 = (float(x) for x in np.asarray(a, dtype=float))
    e1 = -4.0 * a1 + 2.0 * a2 + 8.0 * a3 + 6.0 * a4 - 3.0 * a5
    e2 = 5.0 * (a1 + a2 + a3) + 3.0 * (a4 + a5)
    e3 = a1 - 2.0 * a2 + 4.0 * a3
    ok = (-a4 < a5 < 2.0 * a4) and e1 > 0.0 and e2 > 0.0 and 5.0 * e3**2 < 2.0 * e1 * e2
    return ok, {"e1": e1, "e2": e2, "e3": e3}


# ---------------------------------------------------------------------------
# Contractions
# ---------------------------------------------------------------------------

def _require_same_dim(a, b):
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def stress_from_strain(C: Tensor4Elastic, eps: Tensor2Sym) -> Tensor2Sym:
    """sigma_ij = C_ijhk eps_hk."""
    _require_same_dim(C, eps)
    return Tensor2Sym(np.einsum("ijhk,hk->ij", C.components, eps.components))


def double_stress_from_curvature(A: Tensor6SGE, chi: Tensor3PairSym) -> Tensor3PairSym:
    """tau_ijk = A_ijklmn chi_lmn (curvature must be first-pair symmetric)."""
    _require_same_dim(A, chi)
    if chi.sym_pair != "first":
        raise ValueError("curvature tensor must be symmetric in its first index pair")
    tau = np.einsum("ijklmn,lmn->ijk", A.components, chi.components)
    return Tensor3PairSym(tau, "first")


# ---------------------------------------------------------------------------
# Orthonormal bases of the physically symmetric subspaces
# ---------------------------------------------------------------------------

_SQRT_HALF = math.sqrt(0.5)


@lru_cache(maxsize=None)
def sym2_basis(dim: int) -> np.ndarray:
    """Orthonormal (Mandel) basis of symmetric second-order tensors: (m, n, n)."""
    _check_dim(dim)
    out = []
    for i in range(dim):
        for j in range(i, dim):
            B = np.zeros((dim, dim))
            if i == j:
                B[i, i] = 1.0
            else:
                B[i, j] = B[j, i] = _SQRT_HALF
            out.append(B)
    arr = np.stack(out)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def chi_basis(dim: int) -> np.ndarray:
    """Orthonormal basis of first-pair-symmetric third-order tensors."""
    _check_dim(dim)
    out = []
    for B2 in sym2_basis(dim):
        for k in range(dim):
            B = np.zeros((dim,) * 3)
            B[:, :, k] = B2
            out.append(B)
    arr = np.stack(out)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def beta_basis(dim: int) -> np.ndarray:
    """Orthonormal basis of last-pair-symmetric third-order tensors."""
    _check_dim(dim)
    out = []
    for i in range(dim):
        for B2 in sym2_basis(dim):
            B = np.zeros((dim,) * 3)
            B[i, :, :] = B2
            out.append(B)
    arr = np.stack(out)
    arr.setflags(write=False)
    return arr


def beta_to_vector(beta: Tensor3PairSym) -> np.ndarray:
    """Coordinates of a last-pair-symmetric tensor on `beta_basis`."""
    if beta.sym_pair != "last":
        raise ValueError("expected a last-pair-symmetric tensor")
    return np.einsum("aijk,ijk->a", beta_basis(beta.dim), beta.components)


def beta_from_vector(vec, dim: int) -> Tensor3PairSym:
    vec = np.asarray(vec, dtype=float)
    basis = beta_basis(dim)
    if vec.shape != (basis.shape[0],):
        raise ValueError(f"expected {basis.shape[0]} coordinates, got shape {vec.shape}")
    return Tensor3PairSym(np.einsum("a,aijk->ijk", vec, basis), "last")


# ---------------------------------------------------------------------------
# Restricted matrix representations, inversion, eigenvalues
# ---------------------------------------------------------------------------

def stiffness_matrix(C: Tensor4Elastic) -> np.ndarray:
    """Self-adjoint matrix of C on the orthonormal symmetric-tensor basis."""
    B = sym2_basis(C.dim)
    return np.einsum("aij,ijhk,bhk->ab", B, C.components, B)


def gradient_stiffness_matrix(A: Tensor6SGE) -> np.ndarray:
    """Self-adjoint matrix of A on the orthonormal curvature basis."""
    B = chi_basis(A.dim)
    return np.einsum("aijk,ijklmn,blmn->ab", B, A.components, B)


def _inverse_matrix(M: np.ndarray, what: str, tol: float) -> np.ndarray:
    M = 0.5 * (M + M.T)
    w = np.linalg.eigvalsh(M)
    scale = float(np.abs(w).max())
    if scale == 0.0 or w.min() <= tol * scale:
        raise NotPositiveDefiniteError(
            f"{what} is singular or indefinite on its symmetric subspace "
            f"(min eigenvalue {w.min():.3e}, max magnitude {scale:.3e})"
        )
    return np.linalg.inv(M)


def invert_stiffness(C: Tensor4Elastic, tol: float = 1e-12) -> Tensor4Elastic:
    """Inverse of C restricted to symmetric second-order tensors.

    Raises NotPositiveDefiniteError for singular or indefinite input.
    """
    Minv = _inverse_matrix(stiffness_matrix(C), "stiffness tensor", tol)
    B = sym2_basis(C.dim)
    return Tensor4Elastic(np.einsum("ab,aij,bhk->ijhk", Minv, B, B))


def invert_gradient_stiffness(A: Tensor6SGE, tol: float = 1e-12) -> Tensor6SGE:
    """Inverse of A restricted to first-pair-symmetric third-order tensors."""
    Minv = _inverse_matrix(gradient_stiffness_matrix(A), "gradient stiffness tensor", tol)
    B = chi_basis(A.dim)
    return Tensor6SGE(np.einsum("ab,aijk,blmn->ijklmn", Minv, B, B))


def min_eigenvalue(T) -> float:
    """Smallest eigenvalue of a stiffness operator on its symmetric subspace."""
    if isinstance(T, Tensor4Elastic):
        M = stiffness_matrix(T)
    elif isinstance(T, Tensor6SGE):
        M = gradient_stiffness_matrix(T)
    else:
        raise TypeError(f"expected Tensor4Elastic or Tensor6SGE, got {type(T).__name__}")
    return float(np.linalg.eigvalsh(0.5 * (M + M.T)).min())
