"""Weight families, classification gates, and the summability means."""

import math

import numpy as np
import pytest

from vilenkin.group import make_group
from vilenkin.kernels import norlund_kernel
from vilenkin.means import (
    WeightSequence,
    abel_weight_residual,
    binomial_sequence,
    classify,
    named_mean,
    norlund_mean,
    parse_weights,
    passes_gate,
    t_mean,
    t_mean_reports,
    weights,
)
from vilenkin.transform import GridFunction, convolve, norm, partial_sum

ALL_FAMILIES = (
    "constant",
    "cesaro:0.5",
    "icesaro:0.5",
    "power:0.5",
    "riesz",
    "nlog",
    "logpow:0.5",
)
T_FAMILIES = ("constant", "icesaro:0.5", "power:0.5", "riesz", "logpow:0.5")


def test_binomial_sequence_values():
    got = binomial_sequence(0.5, 4)
    assert got[0] == 0.0
    assert got[1] == pytest.approx(1.5)
    assert got[2] == pytest.approx(1.875)
    assert got[3] == pytest.approx(1.875 * 3.5 / 3)
    with pytest.raises(ValueError):
        binomial_sequence(0.5, 0)


def test_weight_values():
    const = weights("constant")
    assert const.Q(7) == 7.0 and const.q(0) == 1.0
    riesz = parse_weights("riesz")
    assert riesz.q(0) == 0.0
    assert riesz.q(3) == pytest.approx(1 / 3)
    assert riesz.Q(4) == pytest.approx(11 / 6, abs=1e-15)
    power = parse_weights("power:0.5")
    assert power.q(4) == pytest.approx(4 ** (-0.5))
    logpow = parse_weights("logpow:0.5")
    assert logpow.q(0) == 0.0
    assert logpow.q(3) == pytest.approx(math.log(4) ** 0.5)
    ces = parse_weights("cesaro:0.5")
    alpha = 0.5
    assert ces.q(1) == pytest.approx(alpha)
    assert ces.q(2) == pytest.approx(alpha * (alpha + 1) / 2)
    # cumulative sum telescopes to the binomial of one order up, minus the
    # dropped k=0 term
    for n in (2, 5, 30):
        want = binomial_sequence(alpha, n)[n - 1] - 1
        assert ces.Q(n) == pytest.approx(want, rel=1e-13)


def test_weight_validation():
    with pytest.raises(ValueError):
        weights("mystery")
    with pytest.raises(ValueError):
        weights("cesaro")  # alpha required
    with pytest.raises(ValueError):
        weights("cesaro", 1.5)
    with pytest.raises(ValueError):
        weights("constant", 0.5)
    with pytest.raises(ValueError):
        parse_weights("logpow")
    with pytest.raises(ValueError):
        parse_weights("riesz:0.5")
    with pytest.raises(ValueError):
        parse_weights("cesaro:x")


def test_parse_weights_labels_round_trip():
    for text in ALL_FAMILIES:
        w = parse_weights(text)
        assert w.label() == text
        assert parse_weights(w.label()) == w


def test_n0():
    assert parse_weights("constant").n0 == 1
    for fam in ("riesz", "cesaro:0.5", "power:0.5", "logpow:0.5"):
        assert parse_weights(fam).n0 == 2


def test_classify_reference_families():
    c = classify(parse_weights("constant"), 2000)
    assert c.monotonicity == "both" and c.gate == "a+b"
    assert c.fn01_sup == pytest.approx(1.0)
    assert c.fn011_sup == pytest.approx(1.0)
    assert c.regular

    r = classify(parse_weights("riesz"), 2000)
    assert r.monotonicity == "non-increasing" and r.gate == "a"
    assert r.fn011_sup == 0.0
    assert math.isfinite(r.fn01_sup)
    assert r.regular

    b = classify(parse_weights("logpow:0.5"), 2000)
    assert b.monotonicity == "non-decreasing" and b.gate == "b"
    assert math.isfinite(b.fn01_sup)
    assert b.regular

    for fam in ("cesaro:0.5", "icesaro:0.5", "power:0.5", "nlog"):
        c = classify(parse_weights(fam), 2000)
        assert c.monotonicity == "non-increasing"
        assert passes_gate(c)


def test_classify_validation():
    with pytest.raises(ValueError):
        classify(parse_weights("riesz"), 2)


def test_t_mean_constant_weights_value():
    spec = make_group([2, 3, 2, 3])
    one = GridFunction.constant(spec)
    got = t_mean(one, weights("constant"), 4)
    assert np.max(np.abs(got.values - 0.75)) < 1e-13


def test_t_mean_route_agreement():
    spec = make_group([2, 3, 2, 3])
    f = GridFunction.random(spec, seed=21)
    for fam in T_FAMILIES:
        w = parse_weights(fam)
        for n in (w.n0, 5, 12, 36):
            reports = t_mean_reports(f, w, n)
            assert [r.method for r in reports] == ["direct", "abel", "convolution"]
            base = reports[0].result.values
            for rep in reports[1:]:
                assert np.max(np.abs(rep.result.values - base)) < 1e-10


def test_t_mean_constant_frame_link():
    # with unit weights the forward frame is a shrunk Fejer mean
    spec = make_group([2, 3, 2, 3])
    f = GridFunction.random(spec, seed=22)
    w = weights("constant")
    for n in (2, 5, 12):
        lhs = t_mean(f, w, n).values
        rhs = (n - 1) / n * norlund_mean(f, w, n - 1).values
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_norlund_mean_matches_kernel_convolution():
    spec = make_group([2, 3, 2, 3])
    f = GridFunction.random(spec, seed=23)
    for fam in ALL_FAMILIES:
        w = parse_weights(fam)
        for n in (w.n0, 7, 36):
            via_kernel = convolve(f, norlund_kernel(w, n, spec))
            assert np.max(np.abs(norlund_mean(f, w, n).values - via_kernel.values)) < 1e-10


def test_norlund_mean_matches_partial_sum_expansion():
    spec = make_group([2, 3, 2])
    f = GridFunction.random(spec, seed=24)
    for fam in ("constant", "cesaro:0.5", "nlog"):
        w = parse_weights(fam)
        for n in (2, 5, 12):
            q = w.q_array(n)
            want = np.zeros(spec.size, dtype=complex)
            for k in range(1, n + 1):
                want += q[n - k] * partial_sum(f, k).values
            want /= w.Q(n)
            assert np.max(np.abs(norlund_mean(f, w, n).values - want)) < 1e-12


def test_constant_reproduction():
    spec = make_group([2, 3, 2, 3])
    one = GridFunction.constant(spec)
    for fam in ALL_FAMILIES:
        w = parse_weights(fam)
        for n in (w.n0, 7, 36):
            assert np.max(np.abs(norlund_mean(one, w, n).values - 1)) < 1e-12
            want = (w.Q(n) - w.q(0)) / w.Q(n)
            assert np.max(np.abs(t_mean(one, w, n).values - want)) < 1e-12


def test_named_mean_fejer_fixes_constant_character():
    spec = make_group([2, 3, 2, 3])
    chi0 = GridFunction.character(spec, 0)
    for n in (1, 5, 36):
        got = named_mean("fejer", chi0, n)
        assert np.max(np.abs(got.values - 1)) < 1e-13


def test_named_mean_riesz_expansion():
    # R_4 f = (S_1 f + S_2 f / 2 + S_3 f / 3) / (1 + 1/2 + 1/3)
    spec = make_group([2, 3, 2])
    f = GridFunction.random(spec, seed=25)
    want = (
        partial_sum(f, 1).values
        + partial_sum(f, 2).values / 2
        + partial_sum(f, 3).values / 3
    ) / (11 / 6)
    got = named_mean("riesz", f, 4)
    assert np.max(np.abs(got.values - want)) < 1e-12


def test_named_mean_cesaro_expansion():
    # reversed frame with binomial weights, normalized by their plain sum
    spec = make_group([2, 3, 2])
    f = GridFunction.random(spec, seed=26)
    alpha = 0.5
    n = 6
    a = binomial_sequence(alpha - 1.0, n)
    want = np.zeros(spec.size, dtype=complex)
    for k in range(1, n + 1):
        want += a[n - k] * partial_sum(f, k).values
    want /= a.sum()
    got = named_mean("cesaro", f, n, alpha=alpha)
    assert np.max(np.abs(got.values - want)) < 1e-12


def test_named_mean_dispatch_matches_frames():
    spec = make_group([2, 3, 2, 3])
    f = GridFunction.random(spec, seed=27)
    n = 9
    pairs = [
        ("inverse-cesaro", t_mean(f, parse_weights("icesaro:0.5"), n)),
        ("v-alpha", t_mean(f, parse_weights("power:0.5"), n)),
        ("b-alpha", t_mean(f, parse_weights("logpow:0.5"), n)),
        ("norlund-log", norlund_mean(f, parse_weights("nlog"), n)),
    ]
    for name, want in pairs:
        alpha = 0.5 if name in ("inverse-cesaro", "v-alpha", "b-alpha") else None
        got = named_mean(name, f, n, alpha=alpha)
        assert np.max(np.abs(got.values - want.values)) == 0


def test_named_mean_validation():
    spec = make_group([2, 2])
    f = GridFunction.constant(spec)
    with pytest.raises(ValueError):
        named_mean("mystery", f, 2)
    with pytest.raises(ValueError):
        named_mean("cesaro", f, 2)  # alpha required
    with pytest.raises(ValueError):
        named_mean("fejer", f, 2, alpha=0.5)


def test_mean_order_validation():
    spec = make_group([2, 3, 2])
    f = GridFunction.constant(spec)
    w = parse_weights("riesz")
    with pytest.raises(ValueError):
        t_mean(f, w, 0)
    with pytest.raises(ValueError):
        t_mean(f, w, 1)  # Q(1) = 0
    with pytest.raises(ValueError):
        t_mean(f, w, spec.size + 1)
    with pytest.raises(ValueError):
        t_mean(f, w, 5, method="mystery")
    with pytest.raises(ValueError):
        norlund_mean(f, w, spec.size + 1)


def test_abel_weight_identity():
    for fam in ALL_FAMILIES:
        w = parse_weights(fam)
        # absolute at the desk orders, relative to Q_n once sums grow large
        for n in range(1, 40):
            assert abel_weight_residual(w, n) < 1e-12
        for n in (100, 1000):
            assert abel_weight_residual(w, n) < 1e-12 * max(1.0, w.Q(n))


def test_step_function_error_collapses_past_rank():
    # for a rank-r step and n >= M_r only the first M_r partial sums differ
    # from f, so the T error shrinks exactly by the Q ratio
    spec = make_group([2], 6)
    rank = 2
    block = spec.M[rank]
    for fam in T_FAMILIES:
        w = parse_weights(fam)
        for seed in (0, 1):
            f = GridFunction.random(spec, seed=seed, rank=rank)
            worst = max(norm(partial_sum(f, k) - f, 1) for k in range(block))
            for n in (block, spec.size):
                err = norm(t_mean(f, w, n) - f, 1)
                assert err <= w.Q(block) / w.Q(n) * worst + 1e-10


def test_weight_sequence_is_hashable_and_frozen():
    w = WeightSequence("power", 0.5)
    assert hash(w) == hash(WeightSequence("power", 0.5))
    with pytest.raises(AttributeError):
        w.alpha = 0.7
    arr = w.q_array(5)
    with pytest.raises(ValueError):
        arr[0] = 9.9
