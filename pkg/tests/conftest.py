import warnings

import pytest

from mvif.code import BaseFieldWarning, build_code
from mvif.field import make_field
from mvif.representations import build_gelp_coefficients, build_unknown_syndrome_rep


def gf2_mul(a, b, poly):
    """Carry-less multiply then reduce; independent of the field tables."""
    deg = poly.bit_length() - 1
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> deg & 1:
            a ^= poly
    return out


def gf2_pow(a, k, poly):
    out = 1
    for _ in range(k):
        out = gf2_mul(out, a, poly)
    return out


@pytest.fixture(scope="session")
def gf32():
    return make_field(2, 5, 0x25)


@pytest.fixture(scope="session")
def gf16():
    return make_field(2, 4, 0x13)


@pytest.fixture(scope="session")
def gf8():
    return make_field(2, 3, 0xB)


@pytest.fixture(scope="session")
def gf27():
    return make_field(3, 3, [1, 2, 0, 1])


@pytest.fixture(scope="session")
def qr31(gf32):
    return build_code(gf32, 31, 2, [1, 5, 7], 3)


@pytest.fixture(scope="session")
def rs15(gf16):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BaseFieldWarning)
        return build_code(gf16, 15, 16, [1, 2, 3, 4], 2)


@pytest.fixture(scope="session")
def golay23():
    return build_code(make_field(2, 11, 0x805), 23, 2, [1], 3)


@pytest.fixture(scope="session")
def bch15(gf16):
    """Binary BCH(15,5,7): base set {1, 3, 5}, t = 3."""
    return build_code(gf16, 15, 2, [1, 3, 5], 3)


@pytest.fixture(scope="session")
def bch15_2(gf16):
    """Binary BCH(15,7,5): base set {1, 3}, t = 2."""
    return build_code(gf16, 15, 2, [1, 3], 2)


@pytest.fixture(scope="session")
def code7(gf8):
    """Binary (7,3,4) code generated by (x + 1)(x^3 + x + 1): base set {0, 1}."""
    return build_code(gf8, 7, 2, [0, 1], 1)


@pytest.fixture(scope="session")
def qr31_s3(qr31):
    return build_unknown_syndrome_rep(qr31, 3)


@pytest.fixture(scope="session")
def qr31_gelp(qr31):
    return build_gelp_coefficients(qr31)


@pytest.fixture(scope="session")
def rs15_gelp(rs15):
    return build_gelp_coefficients(rs15)


def pytest_terminal_summary(terminalreporter):
    reports = [
        r for key in ("passed", "failed")
        for r in terminalreporter.stats.get(key, [])
        if r.when == "call" and "test_acceptance" in r.nodeid
    ]
    if not reports:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(reports, key=lambda r: r.nodeid):
        name = r.nodeid.split("::")[-1]
        terminalreporter.write_line(f"{'PASS' if r.passed else 'FAIL'}  {name}")
