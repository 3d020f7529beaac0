import numpy as np
import pytest

from qngm import classical, divergence, petz, qfim, states
from qngm.errors import MetricUndefinedError, NumericalError, ShapeMismatchError

FAMILIES = [
    petz.SLD,
    petz.BKM,
    petz.RRLD,
    petz.HALF,
    petz.sandwiched(0.1),
    petz.sandwiched(2.0),
    petz.sandwiched(-1.0),
    petz.standard(0.5),
]


def experiment_circuit():
    return states.CircuitState(1, states.bloch_state(0.5, 0, 0), states.r3_gates(0, 0), 3)


def test_maximally_mixed_closed_form():
    rng = np.random.default_rng(0)
    xs = [qfim.random_tangent(rng, 2) for _ in range(3)]
    g = qfim.metric(np.eye(2, dtype=complex) / 2, xs, petz.sandwiched(0.3))
    expected = 2.0 * np.array([[np.trace(a @ b).real for b in xs] for a in xs])
    np.testing.assert_allclose(g, expected, atol=1e-12)


def test_metric_matches_divergence_hessian():
    rng = np.random.default_rng(1)
    for dim in (2, 4):
        for f in FAMILIES:
            rho = qfim.random_density(rng, dim, floor=0.2)
            tangents = [qfim.random_tangent(rng, dim) for _ in range(2)]
            family = states.linear_family(rho, tangents)
            div = divergence.paired_divergence(f)
            hess = divergence.fd_hessian(lambda u: div(family(u), rho), np.zeros(2), h=1e-3)
            g = qfim.metric(rho, tangents, f)
            rel = np.linalg.norm(hess - g) / np.linalg.norm(g)
            assert rel < 1e-3, (dim, str(f), rel)


def test_experiment_state_sld_vs_sandwiched_half_hessian():
    circ = experiment_circuit()
    theta0 = np.array([np.pi / 2, np.pi / 2, np.pi / 4])
    rho = states.evaluate(circ, theta0)
    g = qfim.metric(rho, states.derivatives(circ, theta0), petz.SLD)
    hess = divergence.fd_hessian(
        divergence.circuit_divergence(("sw", 0.5), circ, theta0), theta0, h=1e-3
    )
    assert np.linalg.norm(hess - g) / np.linalg.norm(g) < 1e-3


def test_metric_order_transfer():
    ordered = []
    for f in FAMILIES:
        for g in FAMILIES:
            if f is not g and petz.compare(f, g) is petz.Order.LESS:
                ordered.append((f, g))
    assert ordered
    rng = np.random.default_rng(2)
    for _ in range(25):
        for dim in (2, 4):
            rho = qfim.random_density(rng, dim, floor=0.1)
            tangents = [qfim.random_tangent(rng, dim) for _ in range(2)]
            mats = {str(f): qfim.metric(rho, tangents, f) for f in FAMILIES}
            for f, g in ordered:
                delta = mats[str(f)] - mats[str(g)]
                assert np.linalg.eigvalsh(delta).min() >= -1e-9
                delta_diag = qfim.diagonal(mats[str(f)]) - qfim.diagonal(mats[str(g)])
                assert np.linalg.eigvalsh(delta_diag).min() >= -1e-9


def test_classical_reduction():
    p = np.array([0.2, 0.3, 0.5])
    rho = np.diag(p).astype(complex)
    # coordinate tangents of the free-probability parameterization
    tangents = [np.diag([1.0, 0.0, -1.0]).astype(complex), np.diag([0.0, 1.0, -1.0]).astype(complex)]
    expected = classical.fisher(p)
    for f in FAMILIES:
        np.testing.assert_allclose(qfim.metric(rho, tangents, f), expected, atol=1e-10)


def test_metric_realness_and_symmetry():
    rng = np.random.default_rng(3)
    for _ in range(20):
        rho = qfim.random_density(rng, 4, floor=0.05)
        tangents = [qfim.random_tangent(rng, 4) for _ in range(3)]
        g = qfim.metric(rho, tangents, petz.sandwiched(-0.5))
        assert g.dtype == np.float64
        np.testing.assert_allclose(g, g.T, atol=1e-12)
        assert np.linalg.eigvalsh(g).min() >= -1e-8


def test_metric_pure_factors():
    rng = np.random.default_rng(4)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    dpsi = [rng.normal(size=4) + 1j * rng.normal(size=4) for _ in range(3)]
    d = np.column_stack(dpsi)
    a = psi.conj() @ d
    qgt = (d.conj().T @ d).real - np.outer(a, a.conj()).real

    g_sld = qfim.metric_pure(psi, dpsi, petz.SLD)
    np.testing.assert_allclose(g_sld, 4.0 * 0.5 * (qgt + qgt.T), atol=1e-12)
    np.testing.assert_allclose(
        qfim.metric_pure(psi, dpsi, petz.ZERO_PLUS), 0.5 * g_sld, atol=1e-12
    )
    # proportionality f2(0)/f1(0) for admissible pairs
    admissible = [petz.SLD, petz.ZERO_PLUS, petz.sandwiched(0.25), petz.standard(0.5)]
    mats = {str(f): (qfim.metric_pure(psi, dpsi, f), petz.eval_zero(f)) for f in admissible}
    for f1 in admissible:
        for f2 in admissible:
            g1, z1 = mats[str(f1)]
            g2, z2 = mats[str(f2)]
            np.testing.assert_allclose(g1 * z1, g2 * z2, atol=1e-10)


def test_metric_pure_gauge_direction():
    psi = np.array([1.0, 1j]) / np.sqrt(2)
    g = qfim.metric_pure(psi, [1j * psi], petz.SLD)
    assert abs(g[0, 0]) < 1e-14


def test_metric_pure_agrees_with_rank_deficient_metric():
    rng = np.random.default_rng(5)
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    psi /= np.linalg.norm(psi)
    dpsi = [rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(2)]
    # project out the norm-changing component so the family stays normalized
    dpsi = [d - psi * (psi.conj() @ d).real for d in dpsi]
    rho = np.outer(psi, psi.conj())
    tangents = [np.outer(d, psi.conj()) + np.outer(psi, d.conj()) for d in dpsi]
    for f in (petz.SLD, petz.sandwiched(0.3), petz.ZERO_PLUS):
        g_mixed = qfim.metric(rho, tangents, f)
        g_pure = qfim.metric_pure(psi, dpsi, f)
        np.testing.assert_allclose(g_mixed, g_pure, atol=1e-9)


def test_metric_undefined_and_kernel_checks():
    pure = states.bloch_state(0.0, 0.0, 1.0)
    x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)  # valid pure-state tangent
    assert qfim.metric(pure, [x], petz.SLD)[0, 0] > 0
    with pytest.raises(MetricUndefinedError):
        qfim.metric(pure, [x], petz.BKM)
    bad = np.diag([1.0, -1.0]).astype(complex)  # nonzero kernel/kernel block
    with pytest.raises(NumericalError):
        qfim.metric(pure, [bad], petz.SLD)


def test_diagonal_and_regularize():
    g = np.array([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(qfim.diagonal(g), [[2.0, 0.0], [0.0, 2.0]])
    np.testing.assert_allclose(qfim.regularize_metric(g, 0.0), g)
    np.testing.assert_allclose(qfim.regularize_metric(g, 1.0), np.eye(2))
    w = np.linalg.eigvalsh(qfim.regularize_metric(g, 0.25))
    np.testing.assert_allclose(w, 0.75 * np.linalg.eigvalsh(g) + 0.25)


def test_apply_channel():
    rng = np.random.default_rng(6)
    rho = qfim.random_density(rng, 2)
    xs = [qfim.random_tangent(rng, 2) for _ in range(2)]
    out, pushed = qfim.apply_channel([np.eye(2, dtype=complex)], rho, xs)
    np.testing.assert_allclose(out, rho)
    for a, b in zip(pushed, xs):
        np.testing.assert_allclose(a, b)

    out, pushed = qfim.apply_channel(qfim.depolarizing_kraus(1.0), rho, xs)
    np.testing.assert_allclose(out, np.eye(2) / 2, atol=1e-12)
    for x in pushed:
        assert np.abs(x).max() < 1e-12

    kraus = qfim.haar_random_kraus(rng, 4, n_kraus=3)
    out, pushed = qfim.apply_channel(kraus, qfim.random_density(rng, 4), [qfim.random_tangent(rng, 4)])
    states.check_density(out)
    assert abs(np.trace(pushed[0])) < 1e-12


def test_check_kraus_rejects_incomplete():
    with pytest.raises(ShapeMismatchError):
        qfim.check_kraus([0.5 * np.eye(2, dtype=complex)])


def test_monotone_probe_contracts():
    for f in (petz.SLD, petz.RRLD):
        result = qfim.monotonicity_probe(f, 200, seed=12345)
        assert result.max_violation <= 1e-9
        assert result.witness is None


def test_non_monotone_witness_found():
    result = qfim.monotonicity_probe(petz.sandwiched(0.25), 200, seed=12345)
    assert result.witness is not None
    assert result.witness.violation > 1e-6
    w = result.witness
    # the witness replays: rebuild both metric values from the stored triple
    before = qfim.metric(w.rho, [w.tangent], petz.sandwiched(0.25))[0, 0]
    rho_out, pushed = qfim.apply_channel(w.kraus, w.rho, [w.tangent])
    after = qfim.metric(rho_out, pushed, petz.sandwiched(0.25))[0, 0]
    assert after - before == pytest.approx(w.violation, rel=1e-12)
