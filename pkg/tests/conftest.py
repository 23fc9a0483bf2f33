"""Shared test helpers: random tensor factories and independent oracles.

The oracles here deliberately avoid the library's vectorized code paths
(plain nested loops, quasi-Monte Carlo integration, finite differences) so
they stay independent of what they check.
"""

import itertools

import numpy as np
import pytest

from sgehom import (
    Tensor2Sym,
    Tensor3PairSym,
    Tensor4Elastic,
    Tensor6SGE,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240211)


def random_sym2(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) * scale
    return Tensor2Sym(a + a.T)


def random_chi(rng, n, scale=1.0):
    a = rng.normal(size=(n, n, n)) * scale
    return Tensor3PairSym(a + a.transpose(1, 0, 2), "first")


def random_beta(rng, n, scale=1.0):
    a = rng.normal(size=(n, n, n)) * scale
    return Tensor3PairSym(a + a.transpose(0, 2, 1), "last")


def random_elastic(rng, n, scale=1.0):
    """Random tensor with the full minor+major symmetry set."""
    a = rng.normal(size=(n,) * 4) * scale
    a = a + a.transpose(1, 0, 2, 3)
    a = a + a.transpose(0, 1, 3, 2)
    a = a + a.transpose(2, 3, 0, 1)
    return Tensor4Elastic(a)


def random_pd_elastic(rng, n, scale=1.0):
    """Random positive definite stiffness: Gram tensor of a random map."""
    m = n * (n + 1) // 2
    from sgehom.tensors import sym2_basis

    B = sym2_basis(n)
    G = rng.normal(size=(m, m))
    M = G @ G.T + 0.1 * np.eye(m)
    C = np.einsum("ab,aij,bhk->ijhk", M, B, B) * scale
    return Tensor4Elastic(C)


def random_nd_elastic(rng, n, scale=1.0):
    """Random negative definite stiffness."""
    return Tensor4Elastic(-random_pd_elastic(rng, n, scale).components)


def random_sge(rng, n, scale=1.0):
    a = rng.normal(size=(n,) * 6) * scale
    a = a + a.transpose(1, 0, 2, 3, 4, 5)
    a = a + a.transpose(0, 1, 2, 4, 3, 5)
    a = a + a.transpose(3, 4, 5, 0, 1, 2)
    return Tensor6SGE(a)


def random_pd_sge(rng, n, scale=1.0):
    from sgehom.tensors import chi_basis

    B = chi_basis(n)
    m = len(B)
    G = rng.normal(size=(m, m))
    M = G @ G.T + 0.1 * np.eye(m)
    A = np.einsum("ab,aijk,blmn->ijklmn", M, B, B) * scale
    return Tensor6SGE(A)


# ---------------------------------------------------------------------------
# Naive loop oracles
# ---------------------------------------------------------------------------

def loop_stress(C, eps):
    n = C.shape[0]
    out = np.zeros((n, n))
    for i, j in itertools.product(range(n), repeat=2):
        s = 0.0
        for h, k in itertools.product(range(n), repeat=2):
            s += C[i, j, h, k] * eps[h, k]
        out[i, j] = s
    return out


def loop_double_stress(A, chi):
    n = A.shape[0]
    out = np.zeros((n, n, n))
    for i, j, k in itertools.product(range(n), repeat=3):
        s = 0.0
        for l, m, p in itertools.product(range(n), repeat=3):
            s += A[i, j, k, l, m, p] * chi[l, m, p]
        out[i, j, k] = s
    return out


def loop_quadratic_form4(C, b):
    """C[ijhk] b[ijl] b[hkl] by explicit summation."""
    n = C.shape[0]
    total = 0.0
    for i, j, h, k, l in itertools.product(range(n), repeat=5):
        total += C[i, j, h, k] * b[i, j, l] * b[h, k, l]
    return total


def loop_sge_form(A, b):
    """A[jlikmh] b[ijl] b[hkm] by explicit summation."""
    n = A.shape[0]
    total = 0.0
    for i, j, l, h, k, m in itertools.product(range(n), repeat=6):
        total += A[j, l, i, k, m, h] * b[i, j, l] * b[h, k, m]
    return total


def explicit_isotropic_double_stress(a, chi):
    """Constitutive double stress for the isotropic five-constant law."""
    a1, a2, a3, a4, a5 = a
    n = chi.shape[0]
    out = np.zeros((n, n, n))
    d = np.eye(n)
    for i, j, k in itertools.product(range(n), repeat=3):
        t = a1 / 2.0 * (
            sum(chi[l, l, i] for l in range(n)) * d[j, k]
            + 2.0 * sum(chi[k, l, l] for l in range(n)) * d[i, j]
            + sum(chi[l, l, j] for l in range(n)) * d[i, k]
        )
        t += a2 * (
            sum(chi[i, l, l] for l in range(n)) * d[j, k]
            + sum(chi[j, l, l] for l in range(n)) * d[i, k]
        )
        t += 2.0 * a3 * sum(chi[l, l, k] for l in range(n)) * d[i, j]
        t += 2.0 * a4 * chi[i, j, k] + a5 * (chi[k, j, i] + chi[k, i, j])
        out[i, j, k] = t
    return out


def invariant_form_energy(lam, mu, a, eps, chi):
    """Isotropic energy density from the invariant expansion."""
    tr = np.trace(eps)
    local = lam / 2.0 * tr * tr + mu * np.einsum("ij,ij->", eps, eps)
    inv = np.array(
        [
            np.einsum("iik,jkj->", chi, chi),
            np.einsum("iki,jkj->", chi, chi),
            np.einsum("iik,jjk->", chi, chi),
            np.einsum("ijk,ijk->", chi, chi),
            np.einsum("ijk,kji->", chi, chi),
        ]
    )
    return float(local + np.dot(a, inv))


# ---------------------------------------------------------------------------
# Quasi-Monte Carlo integration over a centered ball
# ---------------------------------------------------------------------------

def qmc_ball_points(n, radius, m=17, seed=9):
    """Low-discrepancy points filling a centered ball, with equal weights."""
    from scipy.stats import qmc

    u = qmc.Sobol(n, scramble=True, seed=seed).random_base2(m)
    if n == 2:
        r = radius * np.sqrt(u[:, 0])
        th = 2.0 * np.pi * u[:, 1]
        pts = np.c_[r * np.cos(th), r * np.sin(th)]
        volume = np.pi * radius**2
    else:
        r = radius * u[:, 0] ** (1.0 / 3.0)
        z = 1.0 - 2.0 * u[:, 1]
        s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        th = 2.0 * np.pi * u[:, 2]
        pts = np.c_[r * s * np.cos(th), r * s * np.sin(th), r * z]
        volume = 4.0 * np.pi / 3.0 * radius**3
    return pts, volume / len(pts)
