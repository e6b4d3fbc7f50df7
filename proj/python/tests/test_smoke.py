import json
import math

import numpy as np
import pytest

import gsmooth


def k2():
    return gsmooth.Graph(np.array([[0.0, 1.0], [1.0, 0.0]]))


def random_graph(rng, n):
    a = np.zeros((n, n))
    order = rng.permutation(n)
    for i in range(n - 1):
        a[order[i], order[i + 1]] = a[order[i + 1], order[i]] = 0.5 + rng.random()
    extra = np.triu(rng.random((n, n)) < 0.3, 1)
    a = np.where(extra & (a == 0), 0.5 + rng.random((n, n)), a)
    a = np.triu(a, 1)
    return gsmooth.Graph(a + a.T)


def test_version():
    assert gsmooth.__version__ == "0.1.0"


def test_k2_closed_forms():
    d = gsmooth.psd_decompose(gsmooth.combinatorial_laplacian(k2()))
    f = np.array([1.0, 0.0])
    assert gsmooth.modulus(d, 1, 1.0, f) == pytest.approx(math.sqrt(2) * math.sin(1 / math.sqrt(2)), rel=1e-12)
    assert gsmooth.k_functional(d, 1, 1.0, f) == pytest.approx(0.5, abs=1e-9)


def test_errors_carry_codes():
    with pytest.raises(gsmooth.GsmoothError) as info:
        gsmooth.Graph(np.array([[0.0, 1.0], [0.5, 0.0]]))
    assert info.value.code == "AsymmetricInput"
    with pytest.raises(ValueError):
        gsmooth.config("decay", trials=0)


def test_spectrum_matches_numpy():
    rng = np.random.default_rng(3)
    for n in range(3, 15):
        g = random_graph(rng, n)
        lap = gsmooth.combinatorial_laplacian(g)
        d = gsmooth.psd_decompose(lap)
        assert np.allclose(d.eigenvalues, np.linalg.eigvalsh(lap), atol=1e-9)
        f = rng.standard_normal(n)
        assert np.linalg.norm(gsmooth.gft(d, f)) == pytest.approx(np.linalg.norm(f))
        w, v = np.linalg.eigh(lap)
        # Difference norm against an explicit matrix exponential.
        s = 0.7
        t = v @ np.diag(np.exp(1j * s * np.sqrt(np.clip(w, 0, None)))) @ v.T
        direct = np.linalg.norm((t - np.eye(n)) @ ((t - np.eye(n)) @ f))
        assert gsmooth.difference_norm(d, s, 2, f) == pytest.approx(direct, rel=1e-9)


def test_k_functional_agrees_with_oracle():
    rng = np.random.default_rng(5)
    for trial in range(6):
        d = gsmooth.psd_decompose(gsmooth.combinatorial_laplacian(random_graph(rng, 6)))
        f = rng.standard_normal(6)
        r = trial % 3 + 1
        k = gsmooth.k_functional(d, r, 0.8, f)
        assert k == pytest.approx(gsmooth.k_functional_oracle(d, r, 0.8, f), rel=1e-6)
        assert gsmooth.modulus(d, r, 0.8, f) <= 2**r * k * (1 + 1e-9)


def test_filters_and_forward():
    g = gsmooth.sample_sbm(40, seed=2)
    assert g.num_nodes == 40
    h = gsmooth.filter_gcn(g)
    assert h.eigenvalues[0] == pytest.approx(1.0)
    assert -1 < h.eigenvalues.min()
    x = np.random.default_rng(1).standard_normal((40, 5))
    trace = gsmooth.forward(h, x, depth=10, weight_frobenius=1.0, seed=4)
    eh = np.array(trace["eh_per_layer"])
    bound = h.mu_high ** (2 * np.arange(11)) * trace["input_energy"]
    assert np.all(eh <= bound * (1 + 1e-9) + 1e-300)
    report = gsmooth.report(gsmooth.check_filter_spectrum(g, gsmooth.filter_rw(g, 0.75)))
    assert report["violated"] is False


def test_config_round_trip_and_reports():
    cfg = gsmooth.config("decay")
    assert (cfg["num_nodes"], cfg["trials"], cfg["p_intra"], cfg["q_inter"]) == (1000, 1000, 0.8, 0.3)
    assert gsmooth.config("decay", desk=True)["num_nodes"] == 200
    reports = gsmooth.verify(instances=2, max_nodes=8)
    assert len(reports) == 10
    assert not any(r["violated"] for r in reports)
    assert json.loads(json.dumps(reports[0]))["name"] == "modulus_properties"


def test_small_experiments():
    curves = gsmooth.decay(num_nodes=30, trials=2, depth=8)
    assert set(curves) == {"gcn", "sym", "rw"}
    assert curves["gcn"]["mean_ln"][-1] < curves["gcn"]["mean_ln"][0]
    table = gsmooth.skip(num_nodes=20, trials=1, table_depths=[1, 2], depth=2)
    assert table["variants"] == ["resgcn", "appnp", "gcnii"]
    assert len(table["median_ln_eh"][0]) == 2
