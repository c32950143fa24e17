"""Smoke test for the Python bindings.

Build and install first:
    pip install --no-build-isolation -e crates/py
then run:
    python3 python/smoke_test.py
"""

import math

import mpmath

import meinardus


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    table = meinardus.count("ones", 100)
    assert table[10] == 42
    assert table[100] == 190569292
    assert meinardus.count("plane", 3)[1:] == [1, 3, 6]
    assert meinardus.count("so5", 50) == meinardus.count("so5", 50, method="oracle")
    assert meinardus.cauchy_count("su3", 60) == meinardus.count("su3", 60)[60]

    ones = meinardus.AsymptoticModel.from_preset("ones")
    assert close(ones.exp_terms[0][0], math.pi * math.sqrt(2.0 / 3.0), 1e-14)
    assert close(ones.C, 1.0 / (4.0 * math.sqrt(3.0)), 1e-14)
    assert ones.b == 1.0
    ratio = math.exp(math.log(meinardus.count("ones", 1000)[1000]) - ones.log_estimate(1000))
    assert 0.98 < ratio < 1.0

    plane = meinardus.AsymptoticModel.from_preset("plane")
    a1 = 3 * float(mpmath.zeta(3)) ** (1 / 3) / 2 ** (2 / 3)
    assert close(plane.exp_terms[0][0], a1, 1e-13)
    assert meinardus.exponents("polygonal:3") == [(1, 3), (0, 1)]

    rho, residual, _ = meinardus.saddle("ones", 1000.0)
    assert residual <= 1e-9 * 1000 and 0.04 < rho < 0.041

    pk = meinardus.zeta_pk(1.3, 4)
    assert close(pk.value.real, float(mpmath.zeta(2.6)), 1e-12)
    direct = meinardus.zeta_so5(2.0, method="direct")
    assert direct.method == "DirectSum" and abs(direct.value.imag) < 1e-12
    mt = meinardus.zeta_mt2(2.0, 2.0, 2.0)
    assert close(mt.value.real, float(mpmath.zeta(6)) / 3, 1e-10)
    g = meinardus.gamma(0.5 + 0j)
    assert close(g.real, math.sqrt(math.pi), 1e-14)
    z = meinardus.zeta(complex(0.5, 14.134725141734693))
    assert abs(z) < 1e-12

    try:
        meinardus.zeta_so5(0.5, method="direct")
    except ArithmeticError:
        pass
    else:
        raise AssertionError("pole at 1/2 not reported")
    try:
        meinardus.count("nope", 3)
    except ValueError:
        pass
    else:
        raise AssertionError("bad preset accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
