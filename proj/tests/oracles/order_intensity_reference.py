"""Extended-precision reference values frozen into the C++ unit tests.

Direct transliteration of the order-intensity law and the de Broglie relation,
evaluated with 50 significant digits. Run: python3 order_intensity_reference.py
"""
from mpmath import mp, mpf, sin, sinh, exp, pi, asin

mp.dps = 50

h = mpf("6.62607015e-34")
m_he = mpf("6.6465e-27")


def order_intensity(n, s_eff, delta, sigma, d, amplitude=1):
    a = n * pi * s_eff / d
    b = n * pi * delta / d
    damping = exp(-(2 * pi * n * sigma / d) ** 2)
    return amplitude * damping * (sin(a) ** 2 + sinh(b) ** 2) / (a ** 2 + b ** 2)


def envelope(n, ratio):
    x = n * pi * ratio
    return (sin(x) / x) ** 2


if __name__ == "__main__":
    nm = mpf("1e-9")
    print("wavelength He @1000 m/s:", mp.nstr(h / (m_he * 1000), 20))
    print("asin(1e-3):", mp.nstr(asin(mpf("1e-3")), 20))
    print("envelope(1, 0.712):", mp.nstr(envelope(1, mpf("0.712")), 20))
    for n in (1, 2, 3, 7, -3):
        v = order_intensity(n, 60 * nm, 5 * nm, 3 * nm, 100 * nm)
        print(f"I_{n}(60, 5, 3; d=100):", mp.nstr(v, 20))
    # contrast term filling an envelope zero: s_eff/d = 0.5, n = 2
    print("I_2(50, 2, 0; d=100):", mp.nstr(order_intensity(2, 50 * nm, 2 * nm, 0, 100 * nm), 20))
    # large contrast argument, log-domain branch: n = 10, delta = 90 nm -> b ~ 28.3
    print("I_10(60, 90, 20; d=100):", mp.nstr(order_intensity(10, 60 * nm, 90 * nm, 20 * nm, 100 * nm), 20))
