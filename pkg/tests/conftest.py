import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_real_poly(rng, n, deg, n_terms=6):
    """Random real-valued mixed polynomial: each term plus its conjugate partner."""
    from squeezelab.polyalg import MixedPolynomial

    terms = {}
    for _ in range(n_terms):
        k = rng.integers(0, deg + 1)
        idx = rng.integers(0, 2 * n, size=k)
        a = tuple(int((idx == j).sum()) for j in range(n))
        b = tuple(int((idx == n + j).sum()) for j in range(n))
        c = complex(rng.standard_normal(), rng.standard_normal())
        terms[(a, b)] = terms.get((a, b), 0) + c
        terms[(b, a)] = terms.get((b, a), 0) + np.conj(c)
    return MixedPolynomial(n, terms)


def fd_complex_hessian(f, z, h=1e-4):
    """Central-difference d^2 f / dz_j dzbar_k of a real function."""
    z = np.asarray(z, dtype=np.complex128)
    n = len(z)
    E = np.eye(n)
    H = np.zeros((n, n), dtype=np.complex128)

    def d2(u, v):
        return (f(z + h * u + h * v) - f(z + h * u - h * v) - f(z - h * u + h * v) + f(z - h * u - h * v)) / (4 * h * h)

    for j in range(n):
        for k in range(n):
            H[j, k] = 0.25 * (d2(E[j], E[k]) + d2(1j * E[j], 1j * E[k])
                              + 1j * (d2(E[j], 1j * E[k]) - d2(1j * E[j], E[k])))
    return H


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
