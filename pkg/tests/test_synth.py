import numpy as np
import pytest

from mobcover import (
    GenSpec,
    Manifold,
    Metric,
    fit_effective_dimension,
    generate,
)
from mobcover.errors import InfeasibleEtaError
from mobcover.oracle import reference_coupling


def spec(**kw):
    base = dict(
        n_v=120, n_p=14, ambient_d=10, manifold=Manifold.GRID2D,
        eta_target=8.0, seed=11,
    )
    base.update(kw)
    return GenSpec(**base)


class TestGenerate:
    def test_same_seed_bit_identical(self):
        v1, p1, e1 = generate(spec())
        v2, p2, e2 = generate(spec())
        assert (v1.data == v2.data).all()
        assert (p1.data == p2.data).all()
        assert e1 == e2

    def test_different_seed_differs(self):
        v1, _, _ = generate(spec())
        v2, _, _ = generate(spec(seed=12))
        assert not (v1.data == v2.data).all()

    def test_zero_eta_subset(self):
        v, p, eta = generate(spec(n_v=36, n_p=36, eta_target=0.0))
        assert eta == 0.0
        assert (v.data == p.data).all()

    def test_zero_eta_infeasible_with_fewer_prompts(self):
        with pytest.raises(InfeasibleEtaError):
            generate(spec(n_v=36, n_p=6, eta_target=0.0))

    def test_tiny_eta_infeasible(self):
        with pytest.raises(InfeasibleEtaError):
            generate(spec(n_v=400, n_p=3, eta_target=1e-3))

    def test_eta_within_tolerance_across_specs(self):
        rng = np.random.default_rng(99)
        checked = 0
        for _ in range(30):
            manifold = [Manifold.GRID2D, Manifold.CIRCLE, Manifold.GAUSSIAN_CLUSTERS][
                int(rng.integers(3))
            ]
            n_v = int(rng.integers(60, 200))
            n_p = int(rng.integers(10, 25))
            scale = {"grid2d": 10.0, "circle": 0.9, "clusters": 4.0}[manifold.value]
            target = float(rng.uniform(0.7, 1.3)) * scale
            s = GenSpec(
                n_v=n_v,
                n_p=n_p,
                ambient_d=12,
                manifold=manifold,
                eta_target=target,
                seed=int(rng.integers(1 << 62)),
            )
            v, p, measured = generate(s)
            assert abs(measured - target) <= 0.15 * target
            ref = reference_coupling(v, p, Metric.RAW_EUCLIDEAN).eta
            assert measured == pytest.approx(ref, rel=1e-9)
            checked += 1
        assert checked == 30

    def test_manifold_dimensions(self):
        g, _, _ = generate(spec(n_v=1024, n_p=32, ambient_d=16, eta_target=20.0, seed=7))
        c, _, _ = generate(
            spec(manifold=Manifold.CIRCLE, n_v=256, n_p=16, ambient_d=8,
                 eta_target=0.8, seed=3)
        )
        assert 1.7 <= fit_effective_dimension(g).d_eff_hat <= 2.3
        assert 0.8 <= fit_effective_dimension(c).d_eff_hat <= 1.2

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            GenSpec(n_v=5, n_p=6, ambient_d=8, manifold=Manifold.CIRCLE,
                    eta_target=1.0, seed=0)
        with pytest.raises(ValueError):
            GenSpec(n_v=9, n_p=2, ambient_d=1, manifold=Manifold.CIRCLE,
                    eta_target=1.0, seed=0)
