import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lackwalk import (
    Branch,
    CoinKind,
    SearchInstance,
    Speedup,
    WalkKind,
    angles,
    asymptotic_prediction,
    build_operator,
    classify_regime,
    eigen_system,
    make_instance,
    predict,
)
from lackwalk.analytics import flip_peak_probability

from .helpers import grid


# --- angles -----------------------------------------------------------------


def test_loopless_sin_theta():
    a = angles(make_instance(1024))
    assert a.sin_theta == pytest.approx(2 * math.sqrt(1022) / 1023, abs=1e-15)
    assert a.cos_theta == pytest.approx(1021 / 1023, abs=1e-15)


def test_smallest_flip_instance():
    a = angles(make_instance(3, 1, 1, "flip"))
    assert a.cos_theta == pytest.approx(1 / 3, abs=1e-15)
    assert a.cos_phi == pytest.approx(1 / 3, abs=1e-15)


@pytest.mark.parametrize("inst", grid([3, 10, 1024], [0, 1, 7, 2048], [1, 2, 9], ["flip", "skw"]))
def test_angle_pairs_on_unit_circle(inst):
    for c, s in angles(inst).pairs().values():
        assert abs(c * c + s * s - 1) <= 1e-12
        assert s >= 0


@pytest.mark.parametrize("inst", grid([5, 64, 1024], [0, 1, 3, 500], [1, 3], ["skw"]) + [make_instance(1024)])
def test_eigenphase_rational_form(inst):
    a = angles(inst)
    c = a.cos_theta
    assert a.cos_phi == pytest.approx((1 + c) / 2, abs=1e-14)
    assert a.sin_phi == pytest.approx(math.sqrt((1 - c) * (3 + c)) / 2, abs=1e-14)


@pytest.mark.parametrize("inst", grid([4, 64, 1024], [1, 2, 40], [1, 2, 5], ["flip"]))
def test_alpha_is_average_of_block_angles(inst):
    a = angles(inst)
    assert a.cos_alpha == pytest.approx((a.cos_theta + a.cos_phi) / 2, abs=1e-14)
    s = a.cos_theta + a.cos_phi
    assert a.sin_alpha == pytest.approx(math.sqrt((2 + s) * (2 - s)) / 2, abs=1e-13)


@pytest.mark.parametrize("N,l", [(64, 1), (1024, 2), (1024, 33)])
def test_single_marked_sin_alpha(N, l):
    a = angles(make_instance(N, l, 1, "flip"))
    assert a.sin_alpha == pytest.approx(math.sqrt((2 * N + l - 3) * (l + 1)) / (N + l - 1), abs=1e-15)


# --- predictions ------------------------------------------------------------


@pytest.mark.parametrize("l,t,p", [(1, 50, 1.0), (2, 41, 0.889), (3, 36, 0.75)])
def test_flip_predictions_with_few_loops(l, t, p):
    pred = predict(make_instance(1024, l, 1, "flip"))
    assert abs(pred.runtime - t) <= 0.6
    assert abs(pred.peak_probability - p) <= 1e-3


def test_skw_many_loops_runtime():
    assert round(predict(make_instance(1024, 2048, 1, "skw")).runtime) == 62


def test_many_marked_flip_prediction():
    inst = make_instance(1024, 32, 16, "flip")
    pred = predict(inst)
    assert round(pred.runtime) == 9
    # exact finite-N value; 0.758 is the large-N limit
    assert pred.peak_probability == pytest.approx(0.75036, abs=1e-4)
    asym = asymptotic_prediction(inst, Branch.SUBLINEAR)
    assert asym.peak_probability == pytest.approx(0.758, abs=1e-3)
    assert asym.peak_probability == pytest.approx(3008 / 3969, abs=1e-15)


@pytest.mark.parametrize("inst", grid([16, 256, 1024, 5000], [1, 2, 3, 17, 900], [1, 2, 7], ["flip"]))
def test_angle_form_of_flip_probability(inst):
    a = angles(inst)
    ct, st_, cp, sp, ca = a.cos_theta, a.sin_theta, a.cos_phi, a.sin_phi, a.cos_alpha
    p = (1 - cp) ** 2 / (16 * (1 - ca) ** 2) * (16 * st_**2 + (2 - 3 * ct + cp) ** 2) / sp**2
    assert flip_peak_probability(inst) == pytest.approx(p, rel=1e-11)


def test_single_marked_flip_probability_closed_form():
    for N, l in [(64, 2), (1024, 3), (999, 40)]:
        expected = (16 * l * (N - 1) + (3 * l - 1) ** 2) / (4 * (l + 1) ** 2 * (N + l - 2))
        assert flip_peak_probability(make_instance(N, l, 1, "flip")) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("N", [256, 1024, 4096, 65536])
def test_one_loop_reduces_to_grover(N):
    pred = predict(make_instance(N, 1, 1, "flip"))
    assert pred.peak_probability == 1.0
    # the leading-order formula overshoots by 1/(4(N-1)) before clamping
    assert flip_peak_probability(make_instance(N, 1, 1, "flip")) == pytest.approx(1 + 1 / (4 * (N - 1)), rel=1e-14)
    assert abs(pred.runtime - math.pi * math.sqrt(N) / 2) <= 0.01 * math.pi * math.sqrt(N) / 2


@pytest.mark.parametrize("N", [3, 64, 1024, 2048])
def test_many_marked_skw_form_matches_loopless_runtime(N):
    c = (N - 3) / (N - 1)
    t3 = math.pi / (2 * math.acos((1 + c) / 2))
    t_skw = math.pi / (2 * math.asin(math.sqrt((1 - c) * (3 + c)) / 2))
    pred = predict(make_instance(N, 0, 1, "skw"))
    assert pred.runtime == pytest.approx(t3, rel=1e-12)
    assert pred.runtime == pytest.approx(t_skw, rel=1e-12)


def test_loopless_coins_share_prediction():
    assert predict(make_instance(1024, 0, 1, "flip")) == predict(make_instance(1024, 0, 1, "skw"))


def test_skw_loop_probability_reported_separately():
    pred = predict(make_instance(1024, 32, 2, "skw"))
    assert pred.peak_probability == 0.5
    assert pred.initial_loop_probability == pytest.approx(2 * 33 / (1024 * 1055))


@pytest.mark.parametrize("N,t", [(1024, 50.265), (2048, 71.086)])
def test_ctqw_prediction(N, t):
    pred = predict(make_instance(N), walk=WalkKind.CONTINUOUS_SUBSPACE)
    assert abs(pred.runtime - t) <= 5e-3
    assert pred.peak_probability == pytest.approx(1.0, abs=1e-12)


# --- asymptotic branches ----------------------------------------------------


def test_asymptotic_one_loop():
    pred = asymptotic_prediction(make_instance(1024, 1, 1, "flip"), Branch.SUBLINEAR)
    assert pred.peak_probability == 1.0
    assert pred.asymptotic


def test_asymptotic_superlinear_flip():
    pred = asymptotic_prediction(make_instance(64, 10**6, 1, "flip"), Branch.SUPERLINEAR)
    assert pred.runtime == 2.0
    assert pred.peak_probability == pytest.approx(9 / (4 * 10**6))


def test_asymptotic_skw_many_marked():
    N, k = 4096, 9
    pred = asymptotic_prediction(make_instance(N, 3, k, "skw"), Branch.SUBLINEAR)
    assert pred.runtime == pytest.approx(math.pi * math.sqrt(N) / (2 * math.sqrt(2 * k)))


def test_asymptotic_proportional_flip():
    c = 2.0
    pred = asymptotic_prediction(make_instance(1024, 2048, 1, "flip"), Branch.PROPORTIONAL)
    assert pred.runtime == pytest.approx(math.pi / math.asin(math.sqrt(c * (c + 2)) / (c + 1)))
    assert pred.peak_probability == pytest.approx((16 + 9 * c) / (4 * c * (c + 1)) / 1024)


def test_asymptotic_skw_superlinear_tracks_loops():
    pred = asymptotic_prediction(make_instance(1024, 32768, 1, "skw"), Branch.SUPERLINEAR)
    assert round(pred.runtime) == 201


# --- eigen-systems ----------------------------------------------------------


def test_flip_eigenvalues():
    es = eigen_system(make_instance(1024, 2, 1, "flip"))
    a = angles(make_instance(1024, 2, 1, "flip"))
    lams = [lam for lam, _ in es.pairs]
    assert lams[0] == -1 and lams[1] == 1
    assert lams[2] == pytest.approx(complex(a.cos_alpha, -a.sin_alpha))
    assert lams[3] == pytest.approx(complex(a.cos_alpha, a.sin_alpha))
    assert a.cos_alpha == pytest.approx(1022 / 1025, abs=1e-15)
    assert es.source == "closed-form"


@pytest.mark.parametrize(
    "inst",
    grid([8, 64, 1024], [1, 2, 5], [1], ["flip", "skw"]) + grid([8, 64, 1024], [0], [1], ["flip"]),
)
def test_closed_form_residuals(inst):
    es = eigen_system(inst)
    assert es.source == "closed-form"
    for lam, _ in es.pairs:
        assert abs(abs(lam) - 1) <= 1e-12
    assert max(es.residuals(build_operator(inst))) <= 1e-10


@pytest.mark.parametrize("inst", grid([5, 40], [0, 3], [2, 4], ["flip", "skw"]) + [make_instance(4, 0, 3)])
def test_many_marked_residuals(inst):
    es = eigen_system(inst)
    assert max(es.residuals(build_operator(inst))) <= 1e-10


# --- regimes ----------------------------------------------------------------


@pytest.mark.parametrize("l", range(6))
def test_bounded_loops_keep_grover_flip(l):
    assert classify_regime(make_instance(1024, l, 1, "flip")).speedup is Speedup.GROVER


def test_proportional_loops_keep_grover_skw():
    r = classify_regime(make_instance(1024, 1024, 1, "skw"))
    assert r.branch is Branch.PROPORTIONAL and r.c == 1.0
    assert r.speedup is Speedup.GROVER


def test_quadratic_loops_lose_speedup_flip():
    r = classify_regime(make_instance(1024, 1024**2, 1, "flip"))
    assert r.branch is Branch.SUPERLINEAR
    assert r.speedup is Speedup.NONE


def test_regime_is_labelled_heuristic():
    r = classify_regime(make_instance(1024, 100, 1, "flip"))
    assert r.heuristic and "heuristic" in r.rule
    assert classify_regime(make_instance(1024, 100), c_hint=0.5).branch is Branch.PROPORTIONAL


def test_skw_superlinear_tiers():
    assert classify_regime(make_instance(1024, 32768, 1, "skw")).speedup is Speedup.SUB_CLASSICAL
    assert classify_regime(make_instance(1024, 1024**3, 1, "skw")).speedup is Speedup.NONE


def test_continuous_walk_is_always_grover():
    inst = make_instance(1024, 10**9, 1)
    assert classify_regime(inst, walk=WalkKind.CONTINUOUS_SUBSPACE).speedup is Speedup.GROVER


# --- properties -------------------------------------------------------------

instances = st.builds(
    lambda N, l, kf, coin: SearchInstance(N, l, 1 + int(kf * (N - 2)), coin),
    st.integers(3, 10**6),
    st.integers(0, 10**7),
    st.floats(0, 1),
    st.sampled_from(list(CoinKind)),
)


@settings(max_examples=200, deadline=None)
@given(instances, st.sampled_from([WalkKind.DISCRETE_SUBSPACE, WalkKind.CONTINUOUS_SUBSPACE]))
def test_prediction_invariants(inst, walk):
    pred = predict(inst, walk)
    assert pred.runtime > 0 and math.isfinite(pred.runtime)
    assert 0.0 <= pred.peak_probability <= 1.0
    assert pred.phase_gap == pytest.approx(math.pi / pred.runtime, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(instances)
def test_angle_pairs_property(inst):
    for c, s in angles(inst).pairs().values():
        assert abs(c * c + s * s - 1) <= 1e-12 and s >= 0
