import functools

import pytest

from circleperm.fields import field_create, quad_extension

# moduli the worked examples fix explicitly, least degree first
MOD_2_6 = [1, 1, 0, 1, 1, 0, 1]  # X^6+X^4+X^3+X+1
MOD_5_6 = [2, 0, 1, 1, 1, 0, 1]  # X^6+X^4+X^3+X^2+2
MOD_3_8 = [2, 2, 2, 0, 1, 2, 0, 0, 1]  # X^8+2X^5+X^4+2X^2+2X+2
MOD_3_4 = [2, 0, 0, 2, 1]  # X^4+2X^3+2
MOD_2_12 = [1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1]  # X^12+X^7+X^6+X^5+X^3+X+1
MOD_2_16 = [1, 0, 1, 1, 0, 1] + [0] * 10 + [1]  # X^16+X^5+X^3+X^2+1


@functools.lru_cache(maxsize=None)
def get_ext(p, m, modulus=None):
    return quad_extension(p, m, list(modulus) if modulus else None)


@functools.lru_cache(maxsize=None)
def get_field(p, n, modulus=None):
    from circleperm.fields import canonical_modulus

    mod = list(modulus) if modulus else canonical_modulus(p, n)
    return field_create(p, mod)


@pytest.fixture(scope="session")
def ext25():
    return get_ext(5, 1)


@pytest.fixture(scope="session")
def ext9():
    return get_ext(3, 1)


@pytest.fixture(scope="session")
def ext16():
    return get_ext(2, 2)


@pytest.fixture(scope="session")
def ext64():
    return get_ext(2, 3, tuple(MOD_2_6))


@pytest.fixture(scope="session")
def ext81():
    return get_ext(3, 2, tuple(MOD_3_4))
