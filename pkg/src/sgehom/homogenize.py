"""Closed-form effective gradient stiffness of a dilute two-phase cell.

Standard first-order homogenization under linear displacement boundary data
supplies the effective local stiffness C_eq of the composite; this module
takes that as given and produces the sixth-order gradient stiffness A_eq of
the energetically equivalent second-gradient (Mindlin) solid.

With the per-volume-fraction stiffness contrast

    Ct = (C_eq - C1) / f,

the first-order-in-f result is

    A_eq[ijhlmn] = -f rho^2/4 ( Ct[ihln] d[jm] + Ct[ihmn] d[jl]
                              + Ct[jhln] d[im] + Ct[jhmn] d[il] ),

where rho is the inertia radius of the cell and the o(f) remainder is
dropped (the energy module quantifies it instead).  Two consequences worth
noting:

* A_eq inherits the full sixth-order symmetry set, including the major
  (triple-swap) symmetry, which is not apparent from the written form and
  relies on the major symmetry of Ct;
* A_eq is positive definite exactly when Ct is negative definite (softening
  inclusions), and is linear in Ct and proportional to f rho^2.

The module also handles the quadratic boundary-displacement coefficients
b[ijk] = b[ikj]: a constant-curvature displacement field is equilibrated in
a homogeneous material of stiffness C iff C[ijhk] b[hkj] = 0, an n-row
linear constraint whose kernel ("admissible" coefficients) is sampled here
for the energy certificates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import null_space

from .tensors import (
    NotPositiveDefiniteError,
    Tensor3PairSym,
    Tensor4Elastic,
    Tensor6SGE,
    beta_basis,
    beta_from_vector,
    min_eigenvalue,
)

__all__ = [
    "PD_TOLERANCE",
    "HomogenizationProblem",
    "HomogenizationResult",
    "stiffness_contrast",
    "effective_gradient_stiffness",
    "gradient_stiffness_from_contrast",
    "isotropic_gradient_coefficients",
    "project_isotropic_coefficients",
    "isotropic_moduli",
    "equilibrium_constraint_matrix",
    "equilibrium_kernel_basis",
    "sample_admissible_beta",
    "pd_verdict",
]

# Eigenvalues within this relative band of zero are reported as borderline
# rather than silently classified.
PD_TOLERANCE = 1e-10


def pd_verdict(eig_min: float, scale: float, tol: float = PD_TOLERANCE) -> Tuple[bool, bool]:
    """(is_positive_definite, is_borderline) at relative tolerance `tol`."""
    band = tol * max(scale, 1e-300)
    return eig_min > band, abs(eig_min) <= band


@dataclass(frozen=True)
class HomogenizationProblem:
    """Inputs of the dilute homogenization step.

    `C1` is the matrix stiffness (must be positive definite), `C_eq` the
    effective local stiffness from first-order homogenization, `f` the
    inclusion volume fraction and `rho2` the squared inertia radius of the
    cell.  `C2` (inclusion stiffness) is optional and used only for
    reporting and the dilution bounds.
    """

    C1: Tensor4Elastic
    C_eq: Tensor4Elastic
    f: float
    rho2: float
    C2: Optional[Tensor4Elastic] = None

    def __post_init__(self):
        if not 0.0 < self.f < 1.0:
            raise ValueError(f"volume fraction must lie in (0, 1), got {self.f}")
        if not self.rho2 > 0.0:
            raise ValueError(f"squared inertia radius must be positive, got {self.rho2}")
        if self.C1.dim != self.C_eq.dim:
            raise ValueError(f"dimension mismatch: C1 {self.C1.dim} vs C_eq {self.C_eq.dim}")
        if self.C2 is not None and self.C2.dim != self.C1.dim:
            raise ValueError(f"dimension mismatch: C1 {self.C1.dim} vs C2 {self.C2.dim}")
        eig1 = min_eigenvalue(self.C1)
        ok, _ = pd_verdict(eig1, self.C1.norm())
        if not ok:
            raise NotPositiveDefiniteError(
                f"matrix stiffness must be positive definite (min eigenvalue {eig1:.3e})"
            )

    @property
    def dim(self) -> int:
        return self.C1.dim

    @property
    def C_tilde(self) -> Tensor4Elastic:
        return stiffness_contrast(self.C1, self.C_eq, self.f)

    @classmethod
    def from_contrast(cls, C1, C_tilde, f, rho2, C2=None) -> "HomogenizationProblem":
        C_eq = Tensor4Elastic(C1.components + f * C_tilde.components)
        return cls(C1=C1, C_eq=C_eq, f=f, rho2=rho2, C2=C2)


@dataclass(frozen=True)
class HomogenizationResult:
    """Effective gradient stiffness plus positive-definiteness diagnostics.

    `isotropic_a` holds the five isotropic coefficients when the contrast
    tensor is isotropic, else None.  `pd_A` uses the eigenvalue criterion at
    relative tolerance PD_TOLERANCE; `pd_borderline` flags eigenvalues
    within the tolerance band.
    """

    A_eq: Tensor6SGE
    C_tilde: Tensor4Elastic
    pd_A: bool
    pd_borderline: bool
    eig_min_A: float
    eig_min_neg_C_tilde: float
    isotropic_a: Optional[Tuple[float, ...]]


def stiffness_contrast(C1: Tensor4Elastic, C_eq: Tensor4Elastic, f: float) -> Tensor4Elastic:
    """Per-volume-fraction contrast Ct = (C_eq - C1) / f."""
    if f == 0.0:
        raise ValueError("volume fraction must be nonzero")
    if C1.dim != C_eq.dim:
        raise ValueError(f"dimension mismatch: {C1.dim} vs {C_eq.dim}")
    return Tensor4Elastic((C_eq.components - C1.components) / f)


def gradient_stiffness_from_contrast(C_tilde: Tensor4Elastic, f: float, rho2: float) -> Tensor6SGE:
    """The closed-form sixth-order tensor, first order in f, o(f) dropped."""
    Ct = C_tilde.components
    eye = np.eye(C_tilde.dim)
    raw = (
        np.einsum("ihln,jm->ijhlmn", Ct, eye)
        + np.einsum("ihmn,jl->ijhlmn", Ct, eye)
        + np.einsum("jhln,im->ijhlmn", Ct, eye)
        + np.einsum("jhmn,il->ijhlmn", Ct, eye)
    )
    return Tensor6SGE(-(f * rho2 / 4.0) * raw)


def effective_gradient_stiffness(problem: HomogenizationProblem) -> HomogenizationResult:
    """Evaluate the closed-form A_eq and its definiteness diagnostics."""
    Ct = problem.C_tilde
    A_eq = gradient_stiffness_from_contrast(Ct, problem.f, problem.rho2)
    eig_A = min_eigenvalue(A_eq)
    eig_negC = -max_eigenvalue_stiffness(Ct)
    pd_A, borderline = pd_verdict(eig_A, A_eq.norm())
    iso = isotropic_moduli(Ct)
    iso_a = None
    if iso is not None:
        lam_t, mu_t = iso
        iso_a = tuple(
            float(x)
            for x in isotropic_gradient_coefficients(
                lam_t, mu_t, problem.f, problem.rho2, problem.dim
            )
        )
    return HomogenizationResult(
        A_eq=A_eq,
        C_tilde=Ct,
        pd_A=pd_A,
        pd_borderline=borderline,
        eig_min_A=eig_A,
        eig_min_neg_C_tilde=eig_negC,
        isotropic_a=iso_a,
    )


def max_eigenvalue_stiffness(C: Tensor4Elastic) -> float:
    """Largest eigenvalue of C on symmetric tensors (so -C has min = -max)."""
    return -min_eigenvalue(Tensor4Elastic(-C.components))


def isotropic_gradient_coefficients(
    lam_t: float, mu_t: float, f: float, rho2: float, dim: int
) -> np.ndarray:
    """Isotropic coefficients a1..a5 reproducing the closed form exactly.

    For an isotropic contrast (lam_t, mu_t) the effective gradient stiffness
    is isotropic with a = -(f rho2 / 2) * (0, lam_t, 0, mu_t, mu_t); the map
    is linear homogeneous in f*rho2 and in (lam_t, mu_t).  In 2D the five
    structural tensors are rank-deficient, so these coefficients are one
    valid representative (the reconstruction is exact in both dimensions; in
    3D they are the unique choice).
    """
    if dim not in (2, 3):
        raise ValueError(f"spatial dimension must be 2 or 3, got {dim}")
    s = -0.5 * f * rho2
    return np.array([0.0, s * lam_t, 0.0, s * mu_t, s * mu_t])


@lru_cache(maxsize=None)
def _iso_gradient_design(dim: int):
    from .tensors import _iso_gradient_basis  # structural tensors, stacked

    basis = _iso_gradient_basis(dim)
    return basis.reshape(5, -1).T


def project_isotropic_coefficients(A: Tensor6SGE):
    """Least-squares coordinates of A on the isotropic structural tensors.

    Returns (a, relative_residual); the residual is ~0 exactly when A is
    isotropic.  Minimal-norm solution when the basis is rank-deficient (2D).
    """
    design = _iso_gradient_design(A.dim)
    a, *_ = np.linalg.lstsq(design, A.components.ravel(), rcond=None)
    resid = np.linalg.norm(design @ a - A.components.ravel())
    scale = max(A.norm(), 1e-300)
    return a, float(resid / scale)


def isotropic_moduli(C: Tensor4Elastic, tol: float = 1e-10):
    """(lam, mu) if C is isotropic within `tol` relative, else None."""
    n = C.dim
    eye = np.eye(n)
    b1 = np.einsum("ij,hk->ijhk", eye, eye).ravel()
    b2 = (np.einsum("ih,jk->ijhk", eye, eye) + np.einsum("ik,jh->ijhk", eye, eye)).ravel()
    design = np.stack([b1, b2], axis=1)
    coef, *_ = np.linalg.lstsq(design, C.components.ravel(), rcond=None)
    resid = np.linalg.norm(design @ coef - C.components.ravel())
    if resid > tol * max(C.norm(), 1e-300):
        return None
    return float(coef[0]), float(coef[1])


# ---------------------------------------------------------------------------
# Equilibrated quadratic boundary-displacement coefficients
# ---------------------------------------------------------------------------

def equilibrium_constraint_matrix(C: Tensor4Elastic) -> np.ndarray:
    """Matrix of b -> (C[ijhk] b[hkj])_i on the orthonormal coefficient basis.

    Shape (n, n^2(n+1)/2); its kernel is the admissible coefficient set.
    """
    basis = beta_basis(C.dim)
    return np.einsum("ijhk,ahkj->ia", C.components, basis)


def equilibrium_kernel_basis(C: Tensor4Elastic, rcond: float = 1e-12) -> np.ndarray:
    """Orthonormal basis (columns) of the admissible-coefficient kernel."""
    M = equilibrium_constraint_matrix(C)
    N = null_space(M, rcond=rcond)
    if N.shape[1] == 0:
        # cannot happen for n >= 2 (n constraint rows vs n^2(n+1)/2 unknowns)
        raise ValueError("equilibrium constraint admits no nonzero coefficients")
    return N


def sample_admissible_beta(C: Tensor4Elastic, seed: int) -> Tensor3PairSym:
    """Seeded random equilibrated coefficients, unit Frobenius norm.

    A random last-pair-symmetric tensor is projected orthogonally onto the
    kernel of the equilibrium constraint; the same seed always returns the
    identical tensor.
    """
    N = equilibrium_kernel_basis(C)
    rng = np.random.default_rng(seed)
    for _ in range(100):
        vec = N @ (N.T @ rng.standard_normal(N.shape[0]))
        norm = np.linalg.norm(vec)
        if norm > 1e-12:
            return beta_from_vector(vec / norm, C.dim)
    raise ValueError("failed to draw a nonzero admissible coefficient tensor")


def constraint_residual(C: Tensor4Elastic, beta: Tensor3PairSym) -> float:
    """Norm of C[ijhk] beta[hkj], zero for admissible coefficients."""
    r = np.einsum("ijhk,hkj->i", C.components, beta.components)
    return float(np.linalg.norm(r))
