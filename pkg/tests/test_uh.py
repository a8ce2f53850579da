import math

import numpy as np
import pytest

from cocycle_lab import Mat2, make_builtin, one_step
from cocycle_lab.errors import DegenerateSingularGap, NotIrreducible, NotOneStep
from cocycle_lab.lyapunov import gap_scan
from cocycle_lab.sl2 import HALF_PI, ProjectiveArc, angle_dist, rotation
from cocycle_lab.symbolic import SymbolSequence, shift, validate_sft
from cocycle_lab.uh import (
    certify,
    cone_certify,
    equivariance_residual,
    extract_directions,
    norm_growth_probe,
    probe_samples,
)

from corpus import CAT, FULL2, cat_spec, diag_spec, mixed_rotation_spec, random_point, rotation_spec, uh_spec, window_spec

LOG2 = math.log(2.0)
Q = SymbolSequence((0,), (1,), (0,), 0)


class TestProbe:
    def test_diag_inconclusive(self):
        v = norm_growth_probe(diag_spec(), n_max=60)
        assert v.status == "inconclusive" and v.witness is None and v.horizon == 60

    def test_rotation_witness(self):
        # a growth bound with tau = 0.7 already fails at n = 1: |A| = 1 <= e^0.7 / 2
        v = norm_growth_probe(rotation_spec(), tau_probe=0.7)
        assert v.status == "falsified"
        assert v.witness.n == 1 and v.witness.norm == pytest.approx(1.0)
        assert v.witness.norm <= math.exp(0.7 * v.witness.n) / 2

    def test_rotation_default_tau(self):
        v = norm_growth_probe(rotation_spec())
        assert v.status == "falsified" and v.witness.n == math.ceil(math.log(2) / 0.1)

    def test_builtin_homoclinic(self):
        spec = make_builtin("diag-rotation")
        v = norm_growth_probe(spec, [shift(Q, -15)], n_max=31, max_period=0)
        assert v.status == "falsified"
        assert v.witness.norm <= math.exp(0.1 * v.witness.n) / 2
        # the closed form gives norm 1 at n = 30; the scan stops at the first slow horizon
        assert v.witness.n <= 30

    def test_builtin_probe_points(self):
        spec = make_builtin("diag-rotation")
        for tau in (0.05, 0.1, 0.3):
            v = norm_growth_probe(spec, spec.probe_points(40), n_max=40, tau_probe=tau)
            assert v.status == "falsified"

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            norm_growth_probe(diag_spec(), tau_probe=0.0)
        with pytest.raises(ValueError):
            norm_growth_probe(diag_spec(), max_period=0)

    def test_samples_include_periodic_points(self):
        pts = probe_samples(diag_spec(), [Q], 3)
        assert pts[-1] == Q and len(pts) == 2 + 2 + 6 + 1


class TestCones:
    def test_diag(self):
        v = cone_certify(diag_spec())
        assert v.status == "certified"
        cert = v.certificate
        assert cert.c == pytest.approx(1.0)
        assert cert.tau == pytest.approx(LOG2, abs=1e-9)
        for arc in cert.unstable.arcs.values():
            assert angle_dist(arc.center, 0.0) < 1e-9
        for arc in cert.stable.arcs.values():
            assert angle_dist(arc.center, HALF_PI) < 1e-9
        assert cert.revalidate()

    def test_rotation(self):
        assert cone_certify(rotation_spec()).status == "inconclusive"
        assert certify(rotation_spec()).status == "falsified"

    def test_mixed(self):
        v = cone_certify(uh_spec(0))
        assert v.status == "certified"
        assert v.certificate.unstable.word_length <= 4
        assert v.certificate.revalidate()

    def test_word_growth_matches_exhaustive_products(self):
        from itertools import product as words
        from cocycle_lab.sl2 import min_growth_on_arc

        spec = uh_spec(0)
        cert = cone_certify(spec).certificate
        arcs = cert.unstable.arcs
        for r in range(1, 5):
            lowest = math.inf
            for w in words((0, 1), repeat=r):
                m = Mat2.identity()
                for s in w:
                    m = spec.table[(s,)] @ m
                lowest = min(lowest, min_growth_on_arc(m, arcs[w[0]]))
            if r < len(cert.unstable.growth):
                assert cert.unstable.growth[r] == pytest.approx(lowest, rel=1e-12)

    def test_corrupted_certificate_fails_revalidation(self):
        from dataclasses import replace

        cert = cone_certify(uh_spec(0)).certificate
        # revalidation recomputes everything from the arcs, so stored numbers cannot fake a pass
        turned = {s: ProjectiveArc(a.center + HALF_PI, a.half_width) for s, a in cert.unstable.arcs.items()}
        assert not replace(cert, unstable=replace(cert.unstable, arcs=turned)).revalidate()
        assert not replace(cert, threshold=1e6).revalidate()

    def test_not_one_step(self):
        with pytest.raises(NotOneStep):
            cone_certify(window_spec(np.random.default_rng(0)))

    def test_reducible(self):
        spec = one_step(validate_sft([[1, 0], [0, 1]]), {1: Mat2.diag(2, .5), 2: Mat2.diag(2, .5)})
        with pytest.raises(NotIrreducible):
            cone_certify(spec)

    def test_recoded(self):
        from cocycle_lab.cocycle import LocallyConstantCocycle

        d = Mat2.diag(3, 1 / 3)
        table = {w: d @ rotation(0.05 * (w[0] - w[1])) for w in [(0, 0), (0, 1), (1, 0), (1, 1)]}
        spec = LocallyConstantCocycle(FULL2, (0, 1), table)
        v = certify(spec)
        assert v.status == "certified" and v.certificate.recoded

    def test_deterministic(self):
        a = certify(uh_spec(2))
        b = certify(uh_spec(2))
        assert a.status == b.status and a.certificate.unstable.arcs == b.certificate.unstable.arcs


class TestSoundness:
    def test_certified_passes_gap_scan(self):
        for i in range(5):
            v = certify(uh_spec(i))
            assert v.status == "certified"
            assert gap_scan(uh_spec(i), 10, v.certificate.tau / 2).holds

    def test_falsified_has_slow_point(self):
        rng = np.random.default_rng(31)
        for _ in range(5):
            spec = mixed_rotation_spec(rng)
            v = certify(spec)
            assert v.status == "falsified"
            assert v.witness.norm <= math.exp(v.tau_probe * v.witness.n) / 2


class TestDirections:
    def test_diag(self):
        for n in (1, 5, 30):
            es, eu = extract_directions(diag_spec(), Q, n)
            assert es == pytest.approx(HALF_PI) and eu == pytest.approx(0.0)

    def test_cat(self):
        es, eu = extract_directions(cat_spec(), Q, 30)
        vals, vecs = np.linalg.eig(np.array([[2.0, 1.0], [1.0, 1.0]]))
        contracting = math.atan2(vecs[1, np.argmin(vals)], vecs[0, np.argmin(vals)])
        expanding = math.atan2(vecs[1, np.argmax(vals)], vecs[0, np.argmax(vals)])
        assert angle_dist(es, contracting) <= 1e-9
        assert angle_dist(eu, expanding) <= 1e-9

    def test_rotation(self):
        with pytest.raises(DegenerateSingularGap):
            extract_directions(rotation_spec(), Q, 10)

    def test_equivariance_decays(self):
        rng = np.random.default_rng(32)
        spec = uh_spec(0)
        for _ in range(5):
            x = random_point(rng)
            res = [equivariance_residual(spec, x, n) for n in (5, 10, 20, 40)]
            assert res[-1] <= 1e-12
            assert all(b <= max(a, 1e-13) for a, b in zip(res, res[1:]))
