"""Smoke test for the pyhorospectral extension module."""

import math

import pyhorospectral as hs


def main():
    k, l = hs.interpolation_weights(1, complex(0.75, 0.0), 5.0, 0.05)
    assert math.isfinite(abs(k)) and math.isfinite(abs(l))
    assert hs.interpolation_residual(1, complex(0.5, 3.0), 1 + 1j, 0.5j, 7.0, 0.1) < 1e-10

    ref = hs.hyperbolic_average()
    m = hs.horocycle_average(1e4)
    assert abs(m - ref) < 1e-3, (m, ref)

    folded, unfolded = hs.thickened_averages(5.0, 0.05)
    assert abs(folded - unfolded) <= 1e-6 * abs(unfolded)

    nu = (0.2 + 0j, 0.35 + 0j)
    orbit = hs.nu_orbit(*hs.lambda_from_nu(*nu))
    assert len(orbit) == 6
    assert min(abs(a - nu[0]) + abs(b - nu[1]) for a, b in orbit) < 1e-9

    assert hs.b_table(3) == [[1, 2], [2, 1]]
    assert abs(hs.i_cont(3, [7.0, 11.0]) - 77.0) < 1e-12
    assert hs.weyl_orbit_size(4) == 24
    assert hs.casimir_n4_monomial(3, [2, 0, 0]) == 42

    eps, thick, spec = hs.epsilon_optimizer_sln(4, [5.0, 6.0, 7.0], 1.0, 2.0)
    assert abs(thick - spec) <= 1e-12 * thick

    rows, ok = hs.run_experiment("kind = sln-tables\nt_min = 2\nt_max = 20\nt_points = 3\n")
    assert ok and len(rows) == 15

    try:
        hs.b_table(1)
    except ValueError:
        pass
    else:
        raise AssertionError("b_table(1) should raise")

    print("pyhorospectral smoke test passed")


if __name__ == "__main__":
    main()
