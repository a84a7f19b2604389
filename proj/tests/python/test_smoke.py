import math

import pytest

import infcartel as ic


def test_analytics():
    assert ic.equilibrium_threshold(0.5) == math.atan(0.5)
    assert ic.social_optimum_threshold() == math.pi / 4
    assert ic.optimal_lambda(0.5) == pytest.approx(math.sqrt(2) - 1, abs=1e-9)
    assert ic.gamma_inc() == pytest.approx(0.3444, abs=1e-4)
    assert abs(ic.gamma_inc_quartic(ic.gamma_inc())) < 1e-10
    assert ic.welfare_W(1.0, 0.3) == pytest.approx(0.0, abs=1e-12)
    kind, r_bar = ic.entry_equilibrium(ic.CartelAgreement.from_lambda(0.5), 0.1)
    assert kind == "threshold_join"
    assert r_bar == pytest.approx(3.5)
    assert ic.entry_equilibrium(ic.CartelAgreement.from_lambda(0.3), 0.5) == ("all_join", None)
    assert 0.9 < ic.price_natural(0.5) < 1.0
    assert ic.tightening_gain_sign(0.5, 0.3)["epsilon_star"] < 0.5
    general = ic.CartelAgreement.from_degrees(180.0)
    assert general.requirement == pytest.approx(math.pi)
    assert math.isfinite(ic.min_v_for_sustained_cartel(general, 0.5, 0.3, 2.0))


def test_simulation_is_deterministic():
    c = ic.SimConfig()
    c.n_players = 20000
    c.replications = 5
    c.seed = 3
    a, b = ic.simulate_natural(c), ic.simulate_natural(c)
    assert repr(a) == repr(b)
    p = math.atan(0.5) / math.pi
    assert abs(a["engagement_rate"]["mean"] - p) < 4 * a["engagement_rate"]["std_error"]
    c.gamma = 0.3
    c.agreement = ic.CartelAgreement.from_lambda(0.6)
    r = ic.simulate_cartel_entry(c)["fixed_point_r_bar"]
    assert abs(r["mean"] - 1.1 / 0.3) < 4 * r["std_error"] + 1e-3


def test_pod():
    log = [(f"m{i}", f"p{i}", 10 * i) for i in range(1, 7)]
    ob = ic.derive_obligations(log, 5)
    assert ob[0] == []
    assert ob[5] == ["p5", "p4", "p3", "p2", "p1"]
    assert ic.direct_engagement_count(log)["p1"] == 5
    events = [(log[i][0], p, log[i][2] - 1, k) for i in range(6) for p in ob[i] for k in ("like", "comment")]
    deleted, kept = ic.validate(log, events[:-1])
    assert deleted == [5]
    assert kept == log[:5]
    with pytest.raises(ic.MalformedLog):
        ic.derive_obligations([("a", "p", 2), ("b", "q", 1)])


def test_empirics():
    assert ic.extract_hashtags("Hello #Beach_Day #x #2024 #sun") == ["beach day", "sun"]
    assert ic.cosine_similarity([1, 0], [0, 2]) == pytest.approx(0.0, abs=1e-15)
    fit = ic.fe_regression(ic.synth_panel(authors=500, seed=4))
    coef = fit["coefficients"]
    assert coef["general"] < coef["topic"] < 0
    assert ic.normalized_value(0.65, 0.8, 0.6) == pytest.approx(0.25)
    with pytest.raises(ic.RankDeficiency):
        ic.fe_regression([("a", "1", "natural", 0.1), ("a", "2", "natural", 0.2),
                          ("b", "3", "natural", 0.3), ("b", "4", "natural", 0.5)])


def test_lda():
    docs = [(f"d{i}", [f"t{i % 2}w{j % 7}" for j in range(40)]) for i in range(20)]
    m = ic.lda_fit(docs, k=2, iterations=200, burn_in=50, prune=False)
    assert len(m["doc_topic"]) == 20
    assert all(abs(sum(row) - 1) < 1e-12 for row in m["doc_topic"])
    assert m == ic.lda_fit(docs, k=2, iterations=200, burn_in=50, prune=False)
    with pytest.raises(ic.EmptyCorpus):
        ic.lda_fit(docs, k=2, iterations=10, burn_in=0)
