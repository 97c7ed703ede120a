import math

import pytest

import weighted_approx as wa


def test_kernel_values():
    assert wa.kernel_1d(0.0) == 0.25
    assert wa.kernel_1d(math.pi) == pytest.approx(1 / math.pi**2)
    assert wa.kernel_taylor_coeff(2) == pytest.approx(-1 / 48)
    assert abs(wa.kernel_normalization(1) - math.pi / 2) < 1e-8
    assert wa.taylor_remainder_bound(3, 2, 1.0) == pytest.approx(1 / 12)


def test_conjugate_and_lemma():
    g = wa.SampledFunction.sample(lambda y: y * y, 10.0, 50001)
    assert wa.young_conjugate(g, 2.0) == pytest.approx(1.0)
    assert abs(wa.lemma_gap(g, 4.0)) < 1e-6
    with pytest.raises(wa.DomainError, match="representable slope"):
        wa.young_conjugate(g, 50.0)


def test_weights_and_norms():
    w = wa.Weight.exp_power(1, 1.0, 2.0)
    assert wa.weighted_norm_estimate(wa.TargetFunction.named("one", 1), w, 5.0, 101) == 1.0
    custom = wa.Weight(1, lambda x: x[0] ** 2, "square", True)
    assert custom.log_value([3.0]) == 9.0
    assert wa.membership_check(w, [1.0, 2.0, 4.0]).consistent
    assert not wa.membership_check(wa.Weight.exp_linear(1, 1.0), [1.0, 2.0, 4.0]).consistent
    with pytest.raises(wa.InputError):
        w.log_value([1.0, 2.0])


def test_approximant_matches_mollification_trend():
    stage = wa.CutoffStage(wa.TargetFunction.named("sin", 1), 1)
    v = wa.build_approximant(stage, 2.0, 12)
    assert v.degree <= 12
    assert wa.MultiPoly.from_text(v.to_text(), 1) == v
    assert abs(v([0.3]) - wa.mollify(stage, 2.0, [0.3])) < 1e-2


def test_bounds():
    w = wa.Weight.exp_power(1, 1.0, 2.0)
    r = (math.sqrt(5) - 1) / 2
    assert wa.sup_ratio(w, 1) == pytest.approx(math.exp(2 * math.log1p(r) - r * r))
    assert wa.conjugate_form_bound(w, 1) == pytest.approx(4.0)
    assert wa.limit_diagnostic(w, [5.0, 10.0, 20.0]).consistent
    report = wa.limit_diagnostic(wa.Weight.exp_linear(1, 1.0), [5.0, 10.0])
    assert not report.consistent and report.failure


def test_drivers():
    c = wa.ExperimentConfig()
    c.target = "zero"
    c.nu_schedule = [1]
    c.lambda_schedule = [3.0]
    c.n_max = 3
    out = wa.run_convergence(c)
    assert out["target_reached"]
    assert out["csv"].count("\n1,3,") == 4
    with pytest.raises(wa.ConfigError):
        c.set("bogus", "1", 7)
    assert wa.run_lemma_suite(5)["min_gap"] >= -1e-6
