import math
import random

import pytest

import spavg


def test_version_string():
    parts = spavg.__version__.split(".")
    assert len(parts) == 3
    assert all(p.isdigit() for p in parts)


def test_kernels():
    assert spavg.heat_kernel(1.0, 0.0) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi))
    assert spavg.wave_kernel(1.0, 0.5) == 0.5
    assert spavg.wave_kernel(1.0, 1.5) == 0.0
    # closed form at (tau=1, delta=0, beta=1/2) is 4*sqrt(2)/3
    assert spavg.wave_colored_overlap(1.0, 0.0, 0.5) == pytest.approx(
        4.0 * math.sqrt(2.0) / 3.0, rel=1e-12
    )


def test_oracle_values():
    # white-noise heat: pointwise variance is sqrt(t/pi)
    assert spavg.pointwise_cov("heat", "white", 0.5, 0.5, 0.0) == pytest.approx(
        math.sqrt(0.5 / math.pi), rel=1e-10
    )
    # white-noise wave: pointwise variance is t^2/4
    assert spavg.pointwise_cov("wave", "white", 0.5, 1.0, 0.0) == pytest.approx(0.25, rel=1e-10)
    # sigma_R grows like sqrt(R) for white noise
    ratio = spavg.sigma_r_exact("heat", "white", 0.5, 0.5, 64.0) / spavg.sigma_r_exact(
        "heat", "white", 0.5, 0.5, 16.0
    )
    assert 1.9 < ratio < 2.1
    # correlation with the fixed point decays with R
    c_small = spavg.joint_correlation("wave", "white", 0.5, 1.0, 4.0, 0.5)
    c_large = spavg.joint_correlation("wave", "white", 0.5, 1.0, 64.0, 0.5)
    assert 0.0 < c_large < c_small < 1.0


def test_stats():
    rng = random.Random(7)
    xs = [rng.gauss(0.0, 1.0) for _ in range(2000)]
    assert spavg.w1_to_std_normal(xs) < 0.08
    ys = [x + 0.05 * rng.gauss(0.0, 1.0) for x in xs[:200]]
    stat, p = spavg.independence_test(xs[:200], ys, permutations=199, seed=11)
    assert stat > 0.0
    assert p <= 0.01


def test_run_ensemble_deterministic():
    kwargs = dict(
        equation="wave",
        noise="white",
        t=1.0,
        dx=0.125,
        x0=0.5,
        radii=[2.0],
        replicas=64,
        master_seed=99,
        threads=1,
    )
    first = spavg.run_ensemble(**kwargs)
    second = spavg.run_ensemble(**{**kwargs, "threads": 4})
    assert list(first.keys()) == [2.0]
    a = first[2.0]["spatial_average"]
    u = first[2.0]["point_deviation"]
    assert len(a) == len(u) == 64
    assert all(math.isfinite(v) for v in a + u)
    assert first == second
    # sample variance of the normalized average should be near 1
    sig = spavg.sigma_r_exact("wave", "white", 0.5, 1.0, 2.0)
    var = sum((v / sig) ** 2 for v in a) / (len(a) - 1)
    assert 0.5 < var < 2.0


def test_config_hash_stable():
    h1 = spavg.config_hash("heat", radii=[4.0, 8.0], replicas=100)
    h2 = spavg.config_hash("heat", radii=[4.0, 8.0], replicas=100)
    h3 = spavg.config_hash("heat", radii=[4.0, 8.0], replicas=101)
    assert h1 == h2
    assert h1 != h3
    assert h1.startswith("0x") and len(h1) == 18


def test_errors_are_python_exceptions():
    with pytest.raises(spavg.SpavgError):
        spavg.sigma_r_exact("heat", "riesz", 1.5, 0.5, 4.0)
    with pytest.raises(spavg.SpavgError):
        spavg.run_ensemble("heat", radii=[3.1], replicas=8, dx=0.125)
