"""Theta/sigma/wp/v-function identities against independent oracles."""

import cmath
import math
import random

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laxkit.dual import Dual, extract, value
from laxkit.fields import PoleError
from laxkit.special import (EllipticParams, ModulusError, dual_couplings,
                            dual_params, eta1, sigma, sigma_dz, sigma_r,
                            sigma_trig, theta, theta_deriv, trig_ab, u_fun,
                            ut_fun, v_func, v_func_dz, vt_fun, v_fun, wp)

TAU = 0.3 + 0.8j
RNG = random.Random(2024)


def rand_z(rng, re=0.45, im=0.1):
    return complex(rng.uniform(-re, re), rng.uniform(-im, im))


def kahan_theta1(z, tau, terms=64):
    """Independent oracle: direct 64-term series with Kahan compensation."""
    q = cmath.exp(1j * cmath.pi * tau)
    total = 0j
    comp = 0j
    for k in range(terms):
        term = 2 * ((-1) ** k) * q ** ((k + 0.5) ** 2) * cmath.sin((2 * k + 1) * cmath.pi * z)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def test_theta1_oracle_kahan():
    val = theta(1, 0.3, 0.5j)
    assert abs(val - kahan_theta1(0.3, 0.5j)) < 1e-14


def test_theta_vs_mpmath():
    mp.mp.dps = 30
    q = mp.exp(1j * mp.pi * mp.mpc(TAU))
    for r in (1, 2, 3, 4):
        for z in (0.21 + 0.04j, -0.37 + 0.09j):
            ours = theta(r, z, TAU)
            ref = complex(mp.jtheta(r, mp.pi * mp.mpc(z), q))
            assert abs(ours - ref) < 1e-13


def test_theta1_odd_and_zero():
    assert abs(theta(1, 0j, TAU)) < 1e-15
    z = rand_z(RNG)
    assert abs(theta(1, -z, TAU) + theta(1, z, TAU)) < 1e-14


def test_theta1_quasi_periodicity():
    z, tau = 0.3 + 0.1j, 0.8j
    assert abs(theta(1, z + 1, tau) + theta(1, z, tau)) < 1e-12
    lhs = theta(1, z + tau, tau)
    rhs = -cmath.exp(-1j * cmath.pi * tau - 2j * cmath.pi * z) * theta(1, z, tau)
    assert abs(lhs - rhs) < 1e-12


def test_modulus_guard():
    with pytest.raises(ModulusError):
        EllipticParams(0.5 + 0.01j)
    with pytest.raises(ModulusError):
        theta(1, 0.3, 0.3 + 0.01j)


def test_sigma_pole_guard_names_factor():
    with pytest.raises(PoleError, match="theta1"):
        sigma(0.3, 1e-9, TAU)


def test_sigma_periodicity_and_oddness():
    rng = random.Random(7)
    for _ in range(10):
        z, mu = rand_z(rng), rand_z(rng)
        if abs(z) < 0.05 or abs(mu) < 0.05 or abs(z - mu) < 0.05:
            continue
        assert abs(sigma(mu + 1, z, TAU) - sigma(mu, z, TAU)) < 1e-10
        lhs = sigma(mu + TAU, z, TAU)
        rhs = cmath.exp(2j * cmath.pi * z) * sigma(mu, z, TAU)
        assert abs(lhs - rhs) / (1 + abs(rhs)) < 1e-10
        assert abs(sigma(-mu, -z, TAU) + sigma(mu, z, TAU)) < 1e-10


def test_sigma_product_is_wp_difference():
    rng = random.Random(8)
    for _ in range(10):
        z, mu = rand_z(rng), rand_z(rng)
        if min(abs(z), abs(mu), abs(z - mu), abs(z + mu)) < 0.05:
            continue
        lhs = sigma(mu, z, TAU) * sigma(mu, -z, TAU)
        rhs = wp(mu, TAU) - wp(z, TAU)
        assert abs(lhs - rhs) / (1 + abs(rhs)) < 1e-10


def test_wp_even_laurent_and_derivative():
    z = rand_z(RNG)
    assert abs(wp(z, TAU) - wp(-z, TAU)) < 1e-10
    zl = 1e-3
    assert abs(zl ** 2 * wp(zl, TAU) - 1) < 1e-4
    # derivative through the dual layer matches a finite difference
    h = 1e-6
    fd = (wp(z + h, TAU) - wp(z - h, TAU)) / (2 * h)
    jet = wp(Dual(z, 1.0 + 0j), TAU)
    assert abs(extract(jet) - fd) < 1e-5


def test_sigma_dz_limit_is_minus_wp_minus_2eta1():
    z = 0.27 + 0.06j
    target = -wp(z, TAU) - 2 * eta1(TAU)
    r1 = abs(sigma_dz(1e-2, z, TAU) - target)
    r2 = abs(sigma_dz(1e-3, z, TAU) - target)
    assert r2 < 0.2 * r1          # linear convergence in mu
    assert r2 < 1e-2 * (1 + abs(target))


G = (0.7 + 0.2j, -0.3 + 0.5j, 0.9 - 0.1j, 0.4 + 0.3j)


def test_v_oddness_product_and_symmetry():
    rng = random.Random(9)
    gv = dual_couplings(G)
    om = (0j, 0.5 + 0j, (1 + TAU) / 2, TAU / 2)
    for _ in range(10):
        z, mu = rand_z(rng, 0.4, 0.08), rand_z(rng, 0.4, 0.08)
        if min(abs(z), abs(mu), abs(z - 2 * mu)) < 0.06:
            continue
        assert abs(v_func(-mu, -z, G, TAU) + v_func(mu, z, G, TAU)) < 1e-10
        lhs = v_func(mu, z, G, TAU) * v_func(mu, -z, G, TAU)
        rhs = sum(gv[r] ** 2 * wp(mu + om[r], TAU) - G[r] ** 2 * wp(z + om[r], TAU)
                  for r in range(4))
        assert abs(lhs - rhs) / (1 + abs(rhs)) < 1e-10
        sym = -v_func(z, mu, gv, TAU)
        assert abs(v_func(mu, z, G, TAU) - sym) / (1 + abs(sym)) < 1e-10


def test_dual_couplings_row_sums():
    assert dual_couplings((1, 1, 1, 1)) == (2, 0, 0, 0)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False,
                                   allow_infinity=False), min_size=4, max_size=4))
def test_dual_couplings_involution(g):
    twice = dual_couplings(dual_couplings(tuple(g)))
    assert all(abs(a - b) < 1e-12 for a, b in zip(twice, g))


def test_dual_params_newton():
    nu = 0.31 - 0.02j
    nuv, gv = dual_params(nu, G, TAU)
    assert abs(v_func(nu, nuv, G, TAU)) < 1e-12
    assert gv == dual_couplings(G)


def test_trig_ab_sum_and_limit():
    tau_h = 1.4 + 0.2j
    z = 0.7 + 0.1j
    a, b = trig_ab(z, tau_h)
    assert abs(a + b - tau_h) < 1e-14
    a_inf, _ = trig_ab(30.0, tau_h)
    assert abs(a_inf - tau_h) < 1e-10


def test_uv_complements():
    taun, taunv, tau0, tau0v = 1.5 + 0.2j, 0.7 + 0.1j, 1.2 + 0.1j, 0.8 - 0.05j
    q = cmath.exp(0.23 + 0.07j)
    rng = random.Random(10)
    for _ in range(10):
        z = rand_z(rng)
        if abs(z) < 0.05:
            continue
        assert abs(v_fun(z, taun, taunv) - (taun - u_fun(z, taun, taunv))) < 1e-14
        assert abs(vt_fun(z, tau0, tau0v, q) - (tau0 - ut_fun(z, tau0, tau0v, q))) < 1e-14
        # the Hecke-closure identity behind the quadratic relations
        assert abs(u_fun(z, taun, taunv) + u_fun(-z, taun, taunv)
                   - taun - 1 / taun) < 1e-12


def test_reduced_kernel_complement():
    from laxkit.special import c_reduced
    tau_h = 1.3 - 0.15j
    z = 0.4 + 0.05j
    # c_alpha + (tau - c_alpha) = tau identically; at e^z -> infinity c -> tau
    assert abs(c_reduced(40.0, tau_h) - tau_h) < 1e-12
    assert abs(c_reduced(z, tau_h) + (tau_h - c_reduced(z, tau_h)) - tau_h) < 1e-15


def test_trig_degeneration_cot_form():
    # Im tau -> infinity: sigma_{mu/pi}(z/pi)/pi -> cot z - cot mu
    tau_big = 40j
    for (z, mu) in ((0.61, 0.23), (0.9 + 0.1j, 0.4 - 0.05j)):
        lhs = sigma(mu / math.pi, z / math.pi, tau_big) / math.pi
        rhs = (cmath.cos(z) / cmath.sin(z)) - (cmath.cos(mu) / cmath.sin(mu))
        assert abs(lhs - rhs) < 1e-8


def test_sigma_r_matches_sigma_for_r0():
    z, mu = 0.31 + 0.02j, 0.22 - 0.04j
    assert abs(sigma_r(0, mu, z, TAU) - sigma(mu, z, TAU)) < 1e-14


def test_v_derivative_consistency():
    z, mu = 0.33 + 0.03j, 0.21 + 0.02j
    h = 1e-6
    fd = (v_func(mu, z + h, G, TAU) - v_func(mu, z - h, G, TAU)) / (2 * h)
    assert abs(v_func_dz(mu, z, G, TAU) - fd) < 1e-5


def test_cfun_branch_dispatch():
    """The c-function classifier: reduced kernel for difference roots,
    u for even doubled levels, u~ (with one q^(1/2)) for odd levels."""
    from laxkit.special import c_reduced, cfun, u_fun, ut_fun
    c = 0.23 + 0.07j
    params = {"tau": 1.3 - 0.15j, "tau0": 1.2 + 0.1j, "tau0v": 0.8 - 0.05j,
              "taun": 1.5 + 0.2j, "taunv": 0.7 + 0.1j, "c": c,
              "q": cmath.exp(c)}
    x = (0.31 + 0.02j, -0.24 + 0.04j)
    # difference root (e1 - e2) at level 1: reduced kernel of the full value
    z = x[0] - x[1] + c
    val, tau_a = cfun(params, (1, -1), 1, z)
    assert tau_a == params["tau"]
    assert abs(val - c_reduced(z, params["tau"])) < 1e-14
    # even doubled root 2 e_1: u(z/2)
    z = 2 * x[0]
    val, tau_a = cfun(params, (2, 0), 0, z)
    assert tau_a == params["taun"]
    assert abs(val - u_fun(x[0], params["taun"], params["taunv"])) < 1e-14
    # odd level delta + 2 e_1: u~((z - c)/2)
    z = 2 * x[0] + c
    val, tau_a = cfun(params, (2, 0), 1, z)
    assert tau_a == params["tau0"]
    assert abs(val - ut_fun(x[0], params["tau0"], params["tau0v"], params["q"])) < 1e-14


def test_coupling_set_validation():
    from laxkit.special import CouplingSet
    cs = CouplingSet("trig", {"tau": 1.3, "c": 0.2})
    assert cs["tau"] == 1.3
    with pytest.raises(ValueError):
        CouplingSet("nope", {})
    with pytest.raises(ValueError):
        CouplingSet("trig", {"tau": 1.3, "c": 0.0})
    with pytest.raises(ValueError):
        CouplingSet("rational", {"c": float("inf")})
