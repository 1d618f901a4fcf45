"""Independent reference values built only on mpmath special functions."""

import mpmath as mp
import pytest

# reference arithmetic in the tests runs well above every precision under test
mp.mp.prec = 320


def _dps(t):
    # I_n and L_n both grow like e^t; the difference is O(1/t)
    return 90 + int(float(t) * 0.9)


def struve_c1(t):
    with mp.workdps(_dps(t)):
        t = mp.mpf(t)
        return +(mp.pi / 2 * (mp.besseli(0, t) - mp.struvel(0, t)))


def struve_c3(t):
    with mp.workdps(_dps(t)):
        t = mp.mpf(t)
        if t == 0:
            return mp.pi / 4
        return +(mp.pi / 2 * (mp.besseli(1, t) - mp.struvel(1, t)) / t)


def closed_c2(t):
    t = mp.mpf(t)
    return mp.mpf(1) if t == 0 else -mp.expm1(-t) / t


def closed_c4(t):
    t = mp.mpf(t)
    return (2 * (t + 1) * mp.exp(-t) + t * t - 2) / t ** 3


@pytest.fixture
def oracles():
    return {"c1": struve_c1, "c3": struve_c3, "c2": closed_c2, "c4": closed_c4}
