"""Backend equivalence tests: jitted loops vs vectorized NumPy.

Both implementations of every hot kernel must agree to near machine
precision on data that exercises all evaluation branches of the profile
function (series, large-argument expansion, quadrature window, Bessel fit,
asymptotic closed form).
"""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from cramerwold import HAS_NUMBA, cw2_sample_normal, set_threads
from cramerwold import _vectorized
from cramerwold._loops import MODE_ASYMPTOTIC, MODE_BESSEL2, MODE_EXACT
from cramerwold.oracle import l2_smoothed_1d
from cramerwold.phi import PhiMode

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba backend unavailable")

if HAS_NUMBA:
    from cramerwold import _loops


def branch_cases(rng):
    """(x, y, scale, mode, label) tuples spanning every phi branch."""
    return [
        # small-argument Kummer series
        (rng.standard_normal((25, 5)), rng.standard_normal((30, 5)) + 0.5,
         0.5, MODE_EXACT, "series"),
        # large-argument expansion (s >> 40 at dim 5)
        (rng.standard_normal((25, 5)) * 6.0, rng.standard_normal((30, 5)) * 6.0 + 2.0,
         0.5, MODE_EXACT, "expansion"),
        # quadrature window 40 < s < dim at dim 64
        (rng.standard_normal((20, 64)), rng.standard_normal((20, 64)) + 0.2,
         0.4, MODE_EXACT, "quadrature"),
        (rng.standard_normal((25, 2)), rng.standard_normal((30, 2)) * 2.0,
         0.5, MODE_BESSEL2, "bessel"),
        (rng.standard_normal((25, 20)), rng.standard_normal((30, 20)) + 0.3,
         0.5, MODE_ASYMPTOTIC, "asymptotic"),
    ]


def pair_s_values(x, y, scale):
    d2 = ((x[:, None, :] - y[None, :, :]) ** 2).sum(axis=2)
    return d2.ravel() * scale


@needs_numba
class TestBackendEquivalence:
    def test_branch_cases_actually_cover_their_branches(self, rng):
        labels = {}
        for x, y, scale, mode, label in branch_cases(rng):
            labels[label] = pair_s_values(x, y, scale)
        assert labels["series"].max() <= 40.0
        assert (labels["expansion"] > 40.0).mean() > 0.9
        window = (labels["quadrature"] > 40.0) & (labels["quadrature"] < 64.0)
        assert window.any()

    def test_sum_phi_cross(self, rng):
        for x, y, scale, mode, label in branch_cases(rng):
            a = _loops.sum_phi_cross(x, y, scale, mode)
            b = _vectorized.sum_phi_cross(x, y, scale, mode)
            assert a == pytest.approx(b, rel=1e-12), label

    def test_sum_phi_norms(self, rng):
        for x, _, scale, mode, label in branch_cases(rng):
            a = _loops.sum_phi_norms(x, scale, mode)
            b = _vectorized.sum_phi_norms(x, scale, mode)
            assert a == pytest.approx(b, rel=1e-12), label

    def test_cw_normal_asym_grad(self, rng):
        z = rng.standard_normal((40, 8))
        a = _loops.cw_normal_asym_grad(z, 0.3)
        b = _vectorized.cw_normal_asym_grad(z, 0.3)
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-16)

    def test_mardia_sums(self, rng):
        x = rng.standard_normal((60, 7)) * 1.3
        a_cube, a_norm4 = _loops.mardia_sums(x)
        b_cube, b_norm4 = _vectorized.mardia_sums(x)
        assert a_cube == pytest.approx(b_cube, rel=1e-12)
        assert a_norm4 == pytest.approx(b_norm4, rel=1e-12)

    def test_jitted_kernels_are_deterministic(self, rng):
        x = rng.standard_normal((30, 5)) * 4.0
        first = _loops.sum_phi_cross(x, x, 0.5, MODE_EXACT)
        second = _loops.sum_phi_cross(x, x, 0.5, MODE_EXACT)
        assert first == second


class TestGradientKernel:
    def test_matches_finite_differences_of_the_distance(self, rng):
        # the kernel returns d(cw^2)/dz for the asymptotic closed form
        z = rng.standard_normal((12, 4))
        gamma = 0.4
        grad = _vectorized.cw_normal_asym_grad(z, gamma)
        h = 1e-6
        for i, j in ((0, 0), (3, 2), (11, 3)):
            zp = z.copy()
            zp[i, j] += h
            zm = z.copy()
            zm[i, j] -= h
            fd = (
                cw2_sample_normal(zp, gamma=gamma, mode=PhiMode.ASYMPTOTIC).squared_distance
                - cw2_sample_normal(zm, gamma=gamma, mode=PhiMode.ASYMPTOTIC).squared_distance
            ) / (2.0 * h)
            assert grad[i, j] == pytest.approx(fd, rel=1e-5)


class TestMcKernels:
    def test_pair_rows_match_single_direction_calls(self, rng):
        px = rng.standard_normal((6, 15))
        py = rng.standard_normal((6, 11)) + 0.4
        vals = _vectorized.mc_pair_values(px, py, 0.5)
        for d in range(6):
            assert vals[d] == pytest.approx(l2_smoothed_1d(px[d], py[d], 0.5), rel=1e-12)

    def test_normal_values_match_gaussian_algebra(self, rng):
        # mixture of N(a_i, g) vs N(0, 1 + g): all three L2 cross terms are
        # centered Gaussian densities evaluated at the pairwise offsets
        a = rng.standard_normal(9)
        g = 0.6
        n = a.size

        def centered(d2, var):
            return np.exp(-d2 / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)

        self_term = centered((a[:, None] - a[None, :]) ** 2, 2.0 * g).sum() / n**2
        prior_term = centered(0.0, 2.0 + 2.0 * g)
        cross_term = centered(a**2, 1.0 + 2.0 * g).sum() / n
        expected = self_term + prior_term - 2.0 * cross_term
        got = _vectorized.mc_normal_values(a[None, :], g)[0]
        assert got == pytest.approx(expected, rel=1e-12)


class TestBackendSelection:
    def test_active_backend_matches_numba_presence(self):
        from cramerwold import BACKEND

        assert BACKEND == ("numba" if HAS_NUMBA else "numpy")

    @needs_numba
    def test_disable_flag_switches_to_numpy(self, rng, tmp_path):
        x = rng.standard_normal((30, 5))
        data_path = tmp_path / "x.npy"
        np.save(data_path, x)
        script = (
            "import numpy as np\n"
            "from cramerwold import BACKEND, cw2_sample_normal\n"
            f"x = np.load({str(data_path)!r})\n"
            "rep = cw2_sample_normal(x, gamma=0.5, mode='exact')\n"
            "print(BACKEND)\n"
            "print(repr(rep.squared_distance))\n"
        )
        env = dict(os.environ, CRAMERWOLD_DISABLE_NUMBA="1")
        proc = subprocess.run(
            [sys.executable, "-c", script], env=env, capture_output=True, text=True
        )
        assert proc.returncode == 0, proc.stderr
        backend_line, value_line = proc.stdout.strip().splitlines()
        assert backend_line == "numpy"
        local = cw2_sample_normal(x, gamma=0.5, mode="exact").squared_distance
        assert float(value_line) == pytest.approx(local, rel=1e-12)

    def test_set_threads_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            set_threads(0)

    def test_set_threads_accepts_one(self):
        set_threads(1)
