"""Smoke tests for the warpregge extension module."""

import math

import warpregge as wr


def approx(a, b, tol=1e-9):
    return abs(a - b) <= tol * (1.0 + abs(b))


def test_model():
    spec = wr.WarpSpec(n=3, lam=1.0, a=1.0, p=1,
                       breakpoints=[0.0, 1.0],
                       coefficients=[[0.0, 0.5, -1.0, 0.5]])
    pot = wr.build_potential(spec, 128)
    assert pot.jump_order == 1
    assert pot.qf(2.0) == 0.0
    assert len(pot.grid) == 129
    assert pot.f0 == 1.0

    sph = wr.sphere_spectrum(3, 2)
    assert sph[1] == (2.0, 3)
    sp = wr.shifted_momenta([0.0, 2.0], 3)
    assert approx(sp.z[0], 0.5) and approx(sp.z[1], 1.5)


def test_special():
    assert approx(wr.gamma(5.0 + 0j).real, 24.0, 1e-12)
    target = math.sqrt(2.0 / math.pi) * math.sin(1.0)
    assert approx(wr.bessel_j(0.5 + 0j, 1.0).real, target, 1e-12)


def test_jost_and_poles():
    spec = wr.WarpSpec(n=3, lam=1.0, a=1.0, p=1,
                       breakpoints=[0.0, 1.0], coefficients=[[0.0]])
    pot = wr.build_potential(spec, 128)
    assert pot.degenerate
    ker = wr.solve_kernel(pot, 1.0, 128, 1e-10)
    assert ker.iterations == 1
    psi_half = wr.psi(0.5 + 0j, ker, 1.0)
    assert approx(psi_half.real, 0.6713967071418031, 1e-10)
    m, is_pole = wr.weyl_m(0.5 + 0j, ker, 1.0)
    assert not is_pole

    res = wr.locate_poles((-3.5, -0.5, -1.0, 1.0), ker, 1.0)
    assert len(res.poles) == 3
    assert all(p.family == wr.Family.alpha for p in res.poles)
    assert res.uncovered == []

    wron, refl, wscale, rscale = wr.identity_checks(0.3 + 0j, ker, 1.0)
    assert wron < 1e-10 and refl < 1e-10


def test_count_zeros_with_python_callable():
    import cmath

    n = wr.count_zeros(lambda z: cmath.sin(math.pi * z), (-5.5, -0.5, -1.0, 1.0))
    assert n == 5


def test_predictor():
    beta = wr.predict_beta(10, 10, 2.0, 1.0, 1)[0]
    assert approx(beta.real, -3.1007, 1e-3)
    assert approx(beta.imag, 34.5575, 1e-4)


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok {name}")
    print("smoke tests passed")
