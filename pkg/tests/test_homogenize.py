"""Homogenization kernel: contrast, closed form, definiteness, admissibility."""

import numpy as np
import pytest

from sgehom import (
    HomogenizationProblem,
    NotPositiveDefiniteError,
    Tensor3PairSym,
    Tensor4Elastic,
    effective_gradient_stiffness,
    equilibrium_constraint_matrix,
    equilibrium_kernel_basis,
    gradient_stiffness_from_contrast,
    isotropic_gradient_coefficients,
    isotropic_gradient_stiffness,
    isotropic_stiffness,
    min_eigenvalue,
    project_isotropic_coefficients,
    sample_admissible_beta,
    stiffness_contrast,
)
from sgehom.homogenize import constraint_residual, isotropic_moduli
from sgehom.tensors import beta_basis, beta_to_vector

from conftest import random_elastic, random_nd_elastic, random_pd_elastic


# ---------------------------------------------------------------------------
# Contrast tensor
# ---------------------------------------------------------------------------

def test_contrast_trivial_cases(rng):
    C1 = random_pd_elastic(rng, 3)
    assert stiffness_contrast(C1, C1, 0.2).norm() == 0.0
    X = random_elastic(rng, 3)
    C_eq = Tensor4Elastic(C1.components + 0.05 * X.components)
    Ct = stiffness_contrast(C1, C_eq, 0.05)
    np.testing.assert_allclose(Ct.components, X.components, rtol=1e-12, atol=1e-13)
    with pytest.raises(ValueError):
        stiffness_contrast(C1, C_eq, 0.0)


def test_contrast_isotropic_linearity():
    lam1, mu1, lam_t, mu_t, f = 1.1, 0.8, -0.4, -0.25, 0.07
    C1 = isotropic_stiffness(lam1, mu1, 3)
    C_eq = isotropic_stiffness(lam1 + f * lam_t, mu1 + f * mu_t, 3)
    Ct = stiffness_contrast(C1, C_eq, f)
    np.testing.assert_allclose(
        Ct.components, isotropic_stiffness(lam_t, mu_t, 3).components, rtol=1e-10, atol=1e-12
    )


# ---------------------------------------------------------------------------
# Closed-form gradient stiffness
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3])
def test_effective_gradient_symmetries_and_linearity(rng, n):
    f, rho2 = 0.05, 1.9
    for _ in range(10):
        Ct = random_elastic(rng, n)
        A = gradient_stiffness_from_contrast(Ct, f, rho2).components
        # bit-exact symmetry, including the non-obvious triple swap
        assert np.array_equal(A, A.transpose(1, 0, 2, 3, 4, 5))
        assert np.array_equal(A, A.transpose(0, 1, 2, 4, 3, 5))
        assert np.array_equal(A, A.transpose(3, 4, 5, 0, 1, 2))
        # linear in the contrast, proportional to f*rho2
        A2 = gradient_stiffness_from_contrast(
            Tensor4Elastic(2.5 * Ct.components), f, rho2
        ).components
        np.testing.assert_allclose(A2, 2.5 * A, rtol=1e-14)
        A3 = gradient_stiffness_from_contrast(Ct, 2 * f, 3 * rho2).components
        np.testing.assert_allclose(A3, 6.0 * A, rtol=1e-14)


def test_effective_gradient_zero_contrast():
    A = gradient_stiffness_from_contrast(Tensor4Elastic.zero(3), 0.05, 1.0)
    assert A.norm() == 0.0


@pytest.mark.parametrize("n", [2, 3])
def test_pd_equivalence_sample(rng, n):
    # positive definite exactly when the contrast is negative definite
    f, rho2 = 0.03, 0.8
    for _ in range(40):
        kind = rng.integers(3)
        if kind == 0:
            Ct = random_nd_elastic(rng, n)
        elif kind == 1:
            Ct = random_pd_elastic(rng, n)
        else:
            Ct = random_elastic(rng, n)
        A = gradient_stiffness_from_contrast(Ct, f, rho2)
        pd_A = min_eigenvalue(A) > 0
        nd_C = min_eigenvalue(Tensor4Elastic(-Ct.components)) > 0
        assert pd_A == nd_C


@pytest.mark.parametrize("n", [2, 3])
def test_isotropic_contrast_projects_exactly(rng, n):
    f, rho2 = 0.04, 2.2
    lam_t, mu_t = -0.7, -0.35
    A = gradient_stiffness_from_contrast(isotropic_stiffness(lam_t, mu_t, n), f, rho2)
    a, resid = project_isotropic_coefficients(A)
    assert resid <= 1e-12
    rebuilt = isotropic_gradient_stiffness(a, n)
    np.testing.assert_allclose(rebuilt.components, A.components, rtol=0, atol=1e-13 * A.norm())
    # the canonical coefficients reproduce the tensor exactly too
    a_canon = isotropic_gradient_coefficients(lam_t, mu_t, f, rho2, n)
    rebuilt2 = isotropic_gradient_stiffness(a_canon, n)
    np.testing.assert_allclose(rebuilt2.components, A.components, rtol=0, atol=1e-14 * A.norm())
    if n == 3:
        # unique in 3D: projection recovers the canonical coefficients
        np.testing.assert_allclose(a, a_canon, rtol=1e-10, atol=1e-12)


def test_isotropic_coefficients_regression():
    # frozen from the least-squares projection oracle (n=3)
    a = isotropic_gradient_coefficients(1.0, 0.0, 1.0, 4.0, 3)
    np.testing.assert_allclose(a, [0.0, -2.0, 0.0, 0.0, 0.0], atol=1e-15)
    # homogeneity and scaling
    np.testing.assert_allclose(
        isotropic_gradient_coefficients(2.0, 0.6, 0.05, 1.5, 3),
        2.0 * isotropic_gradient_coefficients(1.0, 0.3, 0.05, 1.5, 3),
        rtol=1e-15,
    )
    assert np.all(isotropic_gradient_coefficients(0.0, 0.0, 0.1, 1.0, 3) == 0.0)


def test_isotropic_moduli_detection(rng):
    C = isotropic_stiffness(1.3, 0.6, 3)
    lam, mu = isotropic_moduli(C)
    assert (lam, mu) == (pytest.approx(1.3, rel=1e-12), pytest.approx(0.6, rel=1e-12))
    assert isotropic_moduli(random_elastic(rng, 3)) is None


def test_closed_form_gradient_invertible_iff_contrast_negative(rng):
    # softening contrast: the gradient stiffness is invertible on curvatures
    from sgehom import invert_gradient_stiffness
    from sgehom.tensors import NotPositiveDefiniteError as NPD

    A_soft = gradient_stiffness_from_contrast(random_nd_elastic(rng, 3), 0.05, 1.0)
    invert_gradient_stiffness(A_soft)  # must not raise
    A_stiff = gradient_stiffness_from_contrast(random_pd_elastic(rng, 3), 0.05, 1.0)
    with pytest.raises(NPD):
        invert_gradient_stiffness(A_stiff)


def test_isotropic_closure_inequalities_match_eigen_verdict(rng):
    # for isotropic contrast (n=3) the closed-form inequality set on the
    # resulting coefficients agrees with the eigenvalue verdict on A_eq
    from sgehom import mindlin_eshel_conditions

    for _ in range(200):
        lam_t, mu_t = rng.normal(size=2)
        prob = HomogenizationProblem.from_contrast(
            isotropic_stiffness(2.0, 1.0, 3),
            isotropic_stiffness(lam_t, mu_t, 3),
            0.05,
            1.0,
        )
        res = effective_gradient_stiffness(prob)
        assert res.isotropic_a is not None
        ok_ineq, _ = mindlin_eshel_conditions(res.isotropic_a)
        assert ok_ineq == res.pd_A


# ---------------------------------------------------------------------------
# Problem/result containers
# ---------------------------------------------------------------------------

def test_problem_validation(rng):
    C1 = isotropic_stiffness(1.0, 1.0, 3)
    C_eq = isotropic_stiffness(0.95, 0.97, 3)
    HomogenizationProblem(C1=C1, C_eq=C_eq, f=0.05, rho2=1.0)
    with pytest.raises(ValueError):
        HomogenizationProblem(C1=C1, C_eq=C_eq, f=0.0, rho2=1.0)
    with pytest.raises(ValueError):
        HomogenizationProblem(C1=C1, C_eq=C_eq, f=1.0, rho2=1.0)
    with pytest.raises(ValueError):
        HomogenizationProblem(C1=C1, C_eq=C_eq, f=0.05, rho2=-1.0)
    with pytest.raises(NotPositiveDefiniteError):
        HomogenizationProblem(
            C1=isotropic_stiffness(1.0, -0.1, 3), C_eq=C_eq, f=0.05, rho2=1.0
        )
    with pytest.raises(ValueError, match="dimension mismatch"):
        HomogenizationProblem(C1=C1, C_eq=isotropic_stiffness(1, 1, 2), f=0.05, rho2=1.0)


def test_effective_result_fields(rng):
    C1 = isotropic_stiffness(1.2, 0.9, 3)
    prob = HomogenizationProblem.from_contrast(
        C1, isotropic_stiffness(-0.5, -0.4, 3), 0.05, 1.3
    )
    res = effective_gradient_stiffness(prob)
    assert res.pd_A and not res.pd_borderline
    assert res.eig_min_A > 0
    assert res.eig_min_neg_C_tilde == pytest.approx(0.8, rel=1e-10)  # 2*mu_t sign-flipped
    assert res.isotropic_a is not None
    np.testing.assert_allclose(
        res.isotropic_a,
        isotropic_gradient_coefficients(-0.5, -0.4, 0.05, 1.3, 3),
        rtol=1e-9,
        atol=1e-14,
    )
    # stiffening inclusions: not positive definite
    prob2 = HomogenizationProblem.from_contrast(
        C1, isotropic_stiffness(0.5, 0.4, 3), 0.05, 1.3
    )
    assert not effective_gradient_stiffness(prob2).pd_A


# ---------------------------------------------------------------------------
# Equilibrium constraint on quadratic coefficients
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3])
def test_constraint_matrix_shape_and_kernel_dim(rng, n):
    dim_beta = n * n * (n + 1) // 2
    for _ in range(10):
        C = random_pd_elastic(rng, n)
        M = equilibrium_constraint_matrix(C)
        assert M.shape == (n, dim_beta)
        assert np.linalg.matrix_rank(M) == n  # generically independent rows
        N = equilibrium_kernel_basis(C)
        assert N.shape == (dim_beta, dim_beta - n)


def test_constraint_isotropic_reduces_to_trace_condition(rng):
    # for isotropic C the constraint couples the two coefficient traces via
    # the Poisson ratio: b[jji] = -(1 - 2 nu) b[ikk]
    for n in (2, 3):
        lam, mu = 1.4, 0.9
        nu = lam / (2.0 * (lam + mu))
        C = isotropic_stiffness(lam, mu, n)
        for seed in range(5):
            b = sample_admissible_beta(C, seed).components
            lhs = np.einsum("jji->i", b)
            rhs = -(1.0 - 2.0 * nu) * np.einsum("ikk->i", b)
            np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-12)
            # and conversely the constraint operator annihilates such b
            r = np.einsum("ijhk,hkj->i", C.components, b)
            np.testing.assert_allclose(r, 0.0, atol=1e-12)


def test_constraint_incompressible_direction():
    # as nu -> 1/2 the admissible set forces the first trace to vanish
    lam, mu = 1e8, 1.0  # nu ~ 0.5
    C = isotropic_stiffness(lam, mu, 3)
    b = sample_admissible_beta(C, 0).components
    assert abs(np.einsum("jji->i", b)).max() <= 1e-7


@pytest.mark.parametrize("n", [2, 3])
def test_sample_admissible_beta_contract(rng, n):
    C = random_pd_elastic(rng, n)
    b = sample_admissible_beta(C, seed=42)
    assert b.sym_pair == "last"
    assert np.array_equal(b.components, b.components.transpose(0, 2, 1))
    assert b.norm() == pytest.approx(1.0, rel=1e-12)
    assert constraint_residual(C, b) <= 1e-12
    # determinism
    again = sample_admissible_beta(C, seed=42)
    np.testing.assert_array_equal(b.components, again.components)
    other = sample_admissible_beta(C, seed=43)
    assert np.abs(b.components - other.components).max() > 1e-3


def test_constraint_matrix_action_matches_packing(rng):
    # the matrix acting on packed coordinates equals the tensor contraction
    for n in (2, 3):
        C = random_elastic(rng, n)
        M = equilibrium_constraint_matrix(C)
        from conftest import random_beta

        b = random_beta(rng, n)
        via_matrix = M @ beta_to_vector(b)
        direct = np.einsum("ijhk,hkj->i", C.components, b.components)
        np.testing.assert_allclose(via_matrix, direct, rtol=1e-12, atol=1e-13)
