import numpy as np
import pytest

from qngm import classical, divergence
from qngm.errors import DegenerateSupportError, ShapeMismatchError

# frozen with a 40-digit mpmath evaluation of the defining sums
KL_3QUARTER_HALF = 0.13081203594113695913
KL_NEARPURE_HALF = 0.69313236504988734531


def test_fisher_examples():
    np.testing.assert_allclose(classical.fisher([0.5, 0.5]), [[4.0]])
    np.testing.assert_allclose(classical.fisher([0.25, 0.75]), [[16.0 / 3.0]])
    np.testing.assert_allclose(
        classical.fisher([1 / 3, 1 / 3, 1 / 3]), [[6.0, 3.0], [3.0, 6.0]]
    )


def test_kl_values():
    assert classical.kl([0.3, 0.7], [0.3, 0.7]) == pytest.approx(0.0, abs=1e-15)
    assert classical.kl([0.75, 0.25], [0.5, 0.5]) == pytest.approx(KL_3QUARTER_HALF, abs=1e-15)
    assert classical.kl([0.999999, 1e-6], [0.5, 0.5]) == pytest.approx(
        KL_NEARPURE_HALF, abs=1e-15
    )
    assert abs(classical.kl([0.999999, 1e-6], [0.5, 0.5]) - np.log(2)) < 2e-5


def test_renyi_zero_at_coincidence():
    p = np.array([0.2, 0.3, 0.5])
    for alpha in (-1.0, 0.3, 0.5, 2.0):
        assert classical.renyi(p, p, alpha) == pytest.approx(0.0, abs=1e-14)


def test_renyi_kl_limit():
    p, q = np.array([0.6, 0.4]), np.array([0.25, 0.75])
    assert abs(classical.renyi(p, q, 0.999999) - classical.kl(p, q)) < 1e-5
    # inside the crossover window the dispatch is exact
    assert classical.renyi(p, q, 1.0 + 1e-9) == classical.kl(p, q)


def test_renyi_hessian_alpha_independent():
    rng = np.random.default_rng(11)
    for n in (2, 3, 5):
        for _ in range(4):
            p = 0.9 * rng.dirichlet(np.ones(n) * 3.0) + 0.1 / n
            ref = classical.fisher(p)
            for alpha in (-1.0, 0.3, 0.5, 2.0):
                hess = divergence.fd_hessian(
                    lambda q: classical.renyi(classical.probs_from_free(q), p, alpha),
                    classical.free_from_probs(p),
                    h=1e-4,
                )
                rel = np.abs(hess - ref).max() / np.abs(ref).max()
                assert rel < 1e-4, (n, alpha, rel)


def test_nonnegativity_random_pairs():
    rng = np.random.default_rng(12)
    for _ in range(1000):
        n = int(rng.integers(2, 6))
        p = 0.95 * rng.dirichlet(np.ones(n)) + 0.05 / n
        q = 0.95 * rng.dirichlet(np.ones(n)) + 0.05 / n
        assert classical.kl(p, q) >= -1e-12
        alpha = float(rng.choice([-1.0, 0.3, 0.5, 2.0]))
        assert classical.renyi(p, q, alpha) >= -1e-12


def test_free_coordinate_round_trip():
    p = np.array([0.1, 0.2, 0.7])
    np.testing.assert_allclose(classical.probs_from_free(classical.free_from_probs(p)), p)
    with pytest.raises(DegenerateSupportError):
        classical.probs_from_free([0.6, 0.7])


def test_errors():
    with pytest.raises(DegenerateSupportError):
        classical.kl([1.0, 0.0], [0.5, 0.5])
    with pytest.raises(DegenerateSupportError):
        classical.check_distribution([0.5, 0.4])
    with pytest.raises(ShapeMismatchError):
        classical.kl([0.5, 0.5], [0.2, 0.3, 0.5])
