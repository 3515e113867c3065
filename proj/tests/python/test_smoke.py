import json
import math

import pytest

import hocpoles

G11 = ([1.0, -0.5], [1.0, -0.95])
G21 = ([1.0, -0.5], [1.0, -1.85, 0.855])


def test_simulate_is_seeded():
    a = hocpoles.simulate(*G11, count=500, seed=3)
    b = hocpoles.simulate(*G11, count=500, seed=3)
    c = hocpoles.simulate(*G11, count=500, seed=4)
    assert len(a) == 500
    assert a == b
    assert a != c


def test_unstable_model_needs_force():
    with pytest.raises(hocpoles.UnstableModel):
        hocpoles.simulate([1.0], [1.0, -1.5], count=10)
    assert len(hocpoles.simulate([1.0], [1.0, -1.5], count=10, force=True)) == 10


def test_estimate_g11_pole():
    y = hocpoles.simulate(*G11, count=10000, seed=1)
    report = hocpoles.estimate(y, 1, 1)
    assert report["samples"] == 10000
    assert abs(report["poles"][0]["re"] - 0.95) <= 0.02
    batch = hocpoles.estimate(y, 1, 1, batch=True)
    assert abs(batch["poles"][0]["re"] - report["poles"][0]["re"]) <= 0.02


def test_report_fields():
    y = hocpoles.simulate(*G21, count=5000, seed=2)
    report = hocpoles.estimate(y, 2, 1)
    assert set(report) == {"samples", "hoc", "d_tilde", "acf", "acf_clamped", "a_hat", "cond", "poles",
                           "damping", "flags", "rmse"}
    assert report["flags"]["ill_conditioned"]


def test_state_round_trip():
    y = hocpoles.simulate(*G21, count=3000, seed=5)
    whole = hocpoles.HocState(levels=3)
    whole.ingest_many(y)
    head = hocpoles.HocState(levels=3)
    head.ingest_many(y[:1200])
    restored = hocpoles.HocState.from_json(head.to_json("x"), levels=3, context="x")
    restored.ingest_many(y[1200:])
    assert restored == whole
    assert restored.counts()["d"] == whole.counts()["d"]
    with pytest.raises(hocpoles.InvalidArgument):
        hocpoles.HocState.from_json(head.to_json("x"), levels=3, context="y")
    assert json.loads(head.to_json())["levels"] == 3


def test_non_finite_sample():
    s = hocpoles.HocState(levels=2)
    with pytest.raises(hocpoles.DataError):
        s.ingest(float("nan"))
    assert s.samples == 0


def test_acf_round_trip():
    rho = hocpoles.analytic_acf(*G21, max_lag=3)
    back = hocpoles.acf_from_hoc(hocpoles.hoc_from_acf(rho, 3), 3)
    assert all(abs(a - b) < 1e-12 for a, b in zip(rho, back["rho"]))
    assert hocpoles.psi_phi(1, [1.0, 0.3]) == pytest.approx((2 - 0.6, -1 + 0.6))


def test_yule_walker_and_roots():
    r1 = 1.5 / 1.56
    est = hocpoles.solve_myw([1.0, r1, 1.5 * r1 - 0.56], 2, 0)
    assert est["a"] == pytest.approx([-1.5, 0.56], abs=1e-10)
    roots = sorted(hocpoles.find_roots([1.0, -1.85, 0.855]), key=lambda z: -z.real)
    assert roots[0] == pytest.approx(0.95)
    assert roots[1] == pytest.approx(0.9)


def test_closed_loop_damping():
    num, den = hocpoles.closed_loop(alpha=0.9, delay=2, kc=0.05)
    assert num == [1.0, -1.0]
    pole = max(hocpoles.find_roots(den), key=lambda z: z.imag)
    assert pole == pytest.approx(complex(0.95, 0.05))
    zeta = hocpoles.damping_conjugate(hocpoles.to_continuous(pole))
    assert zeta == pytest.approx(0.6885, abs=1e-3)
    assert hocpoles.damping_real_pair(-0.1, -0.1) == pytest.approx(1.0)
    assert math.isclose(hocpoles.to_continuous(math.exp(-0.1)).real, -0.1)


def test_batch_acf_constant_series():
    with pytest.raises(hocpoles.DataError):
        hocpoles.batch_acf([2.0] * 10, 2)
    assert hocpoles.batch_acf([1.0, -1.0, 1.0, -1.0], 1)[1] == pytest.approx(-0.75)
