"""Exact arithmetic in GF(p^n) with an explicit modulus and primitive element.

Elements are encoded as integers: the coordinate vector (c0, ..., c_{n-1})
over Z_p, read as digits base p, gives enc = sum(c_i * p**i).  For p = 2 the
encoding coincides with the usual bitmask representation of GF(2)[x] and
multiplication runs on shift/xor; for odd p coordinate tuples are used.

Fields of order up to LOG_TABLE_MAX get discrete log/antilog tables at
creation time, making multiplicative arithmetic O(1).  Larger fields (the
cap is p^{2m} <= 2^20) fall back to generic polynomial arithmetic.

The quadratic-extension view GF(q^2)/GF(q) lives in QuadExtension, which
exposes the subfield and the unit circle, i.e. the order-(q+1) subgroup
{x : x^(q+1) = 1}.
"""

from __future__ import annotations

import itertools

from .errors import (
    CtxMismatch,
    DivisionByZero,
    NotIrreducible,
    NotMonic,
    NotPrime,
    ZeroInput,
)

LOG_TABLE_MAX = 1 << 16


# ---------------------------------------------------------------------------
# integer helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of n, ascending (trial division; desk scale)."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def least_primitive_root(p: int) -> int:
    order = p - 1
    facs = prime_factors(order)
    for g in range(2, p):
        if all(pow(g, order // f, p) != 1 for f in facs):
            return g
    return 1  # p == 2


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over Z_p (coefficient lists, least degree first)
# -- only used for modulus validation and generator search, never in the hot
#    per-element paths.


def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mulmod(a, b, mod, p):
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_rem(prod, mod, p)


def _poly_rem(a, mod, p):
    a = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        _trim(a)
        if len(a) - 1 < dm:
            break
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for j, mj in enumerate(mod):
            a[shift + j] = (a[shift + j] - coef * mj) % p
        _trim(a)
    return a


def _poly_powmod(base, e, mod, p):
    result = [1]
    acc = _poly_rem(base, mod, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, acc, mod, p)
        acc = _poly_mulmod(acc, acc, mod, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    _trim(a)
    _trim(b)
    while b:
        a = _poly_rem(a, b, p)
        a, b = b, a
        _trim(b)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def is_irreducible(modulus, p) -> bool:
    """Monic modulus irreducible over Z_p.

    Degree <= 3 uses the no-root scan; above that, f is irreducible iff
    gcd(f, X^{p^d} - X) = 1 for every d <= deg(f)/2.
    """
    deg = len(modulus) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    if deg <= 3:
        return all(_poly_eval_int(modulus, x, p) != 0 for x in range(p))
    xp = [0, 1]
    for _ in range(deg // 2):
        xp = _poly_powmod(xp, p, modulus, p)
        probe = list(xp)
        while len(probe) < 2:
            probe.append(0)
        probe[1] = (probe[1] - 1) % p  # X^{p^d} - X
        if len(_poly_gcd(modulus, probe, p)) > 1:
            return False
    return True


def _poly_eval_int(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _find_factor(modulus, p):
    """A proper monic divisor of a reducible monic modulus (desk scale)."""
    deg = len(modulus) - 1
    for x in range(p):
        if _poly_eval_int(modulus, x, p) == 0:
            return [(-x) % p, 1]
    # no linear factor: search low-degree divisors directly
    for d in range(2, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            cand = list(tail) + [1]
            if not _poly_rem(modulus, cand, p):
                return cand
    return None


# ---------------------------------------------------------------------------


class FieldElement:
    """An element of a FieldCtx; immutable, hashable, operator-overloaded."""

    __slots__ = ("ctx", "enc")

    def __init__(self, ctx: "FieldCtx", enc: int):
        self.ctx = ctx
        self.enc = enc

    # -- representation ----------------------------------------------------

    def coords(self) -> tuple[int, ...]:
        return self.ctx.enc_to_coords(self.enc)

    def dlog(self):
        """Discrete log base the field generator, or None for zero."""
        if self.enc == 0:
            return None
        return self.ctx.log_enc(self.enc)

    def __str__(self):
        if self.enc == 0:
            return "0"
        return f"g^{self.dlog()}"

    def __repr__(self):
        return f"<{self} of GF({self.ctx.p}^{self.ctx.n})>"

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx is other.ctx and self.enc == other.enc
        if isinstance(other, int):
            return self.enc == self.ctx.from_int(other).enc
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ctx), self.enc))

    def __bool__(self):
        return self.enc != 0

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx:
                raise CtxMismatch("operands belong to different field contexts")
            return other
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.add_enc(self.enc, other.enc))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.sub_enc(self.enc, other.enc))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg_enc(self.enc))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.mul_enc(self.enc, other.enc))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.pow_enc(self.enc, e))

    def inverse(self) -> "FieldElement":
        if self.enc == 0:
            raise DivisionByZero("inverse of zero")
        return FieldElement(self.ctx, self.ctx.pow_enc(self.enc, -1))

    def frobenius(self, k: int = 1) -> "FieldElement":
        """x^(p^k)."""
        return self ** (self.ctx.p**k)

    def multiplicative_order(self) -> int:
        if self.enc == 0:
            raise ZeroInput("zero has no multiplicative order")
        order = self.ctx.order - 1
        for f in prime_factors(order):
            while order % f == 0 and self.ctx.pow_enc(self.enc, order // f) == 1:
                order //= f
        return order


class FieldCtx:
    """GF(p^n) = Z_p[X]/(modulus), with a distinguished primitive element.

    The generator is the modulus root when that root is primitive
    (generator_is_root records which); otherwise the smallest primitive
    element in encoding order is used.
    """

    def __init__(self, p: int, modulus, generator=None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        modulus = [c % p for c in modulus]
        if len(modulus) < 2:
            raise NotMonic("modulus must have degree >= 1")
        if modulus[-1] != 1:
            raise NotMonic("modulus must be monic")
        if not is_irreducible(modulus, p):
            factor = _find_factor(modulus, p)
            raise NotIrreducible(
                f"modulus {modulus} is reducible over GF({p})", factor=factor
            )
        self.p = p
        self.n = len(modulus) - 1
        self.modulus = tuple(modulus)
        self.order = p**self.n
        self._pn_powers = [p**i for i in range(self.n + 1)]
        if p == 2:
            self._modmask = sum(c << i for i, c in enumerate(modulus))
        else:
            # X^n == -(c_{n-1} X^{n-1} + ... + c_0)
            self._head = tuple((-c) % p for c in modulus[:-1])
        gen_enc, is_root = self._pick_generator(generator)
        self.generator_is_root = is_root
        self._exp = None
        self._log = None
        self._coords_cache = None
        if self.order <= LOG_TABLE_MAX:
            self._build_tables(gen_enc)
        self.generator = FieldElement(self, gen_enc)

    # -- encoding -----------------------------------------------------------

    def enc_to_coords(self, enc: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.n):
            enc, r = divmod(enc, p)
            out.append(r)
        return tuple(out)

    def coords_to_enc(self, coords) -> int:
        if len(coords) > self.n:
            raise ValueError("coordinate vector longer than extension degree")
        p = self.p
        enc = 0
        for c in reversed(list(coords)):
            enc = enc * p + c % p
        return enc

    def element(self, coords) -> FieldElement:
        return FieldElement(self, self.coords_to_enc(coords))

    def from_int(self, k: int) -> FieldElement:
        """Embed an integer through the prime subfield."""
        return FieldElement(self, k % self.p)

    def from_enc(self, enc: int) -> FieldElement:
        return FieldElement(self, enc)

    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def gen_pow(self, k: int) -> FieldElement:
        return self.generator**k

    def elements(self):
        """All field elements: zero first, then ascending generator powers."""
        yield self.zero()
        g = self.generator
        x = self.one()
        for _ in range(self.order - 1):
            yield x
            x = x * g

    # -- raw encoded arithmetic ----------------------------------------------

    def add_enc(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p = self.p
        enc = 0
        for w in reversed(self._pn_powers[:-1]):
            da, a = divmod(a, w) if w > 1 else (a, 0)
            db, b = divmod(b, w) if w > 1 else (b, 0)
            enc += (da + db) % p * w
        return enc

    def sub_enc(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self.add_enc(a, self.neg_enc(b))

    def neg_enc(self, a: int) -> int:
        if self.p == 2:
            return a
        p = self.p
        enc = 0
        for w in reversed(self._pn_powers[:-1]):
            d, a = divmod(a, w) if w > 1 else (a, 0)
            enc += (-d) % p * w
        return enc

    def mul_enc(self, a: int, b: int) -> int:
        if self._log is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]
        return self._mul_generic(a, b)

    def _mul_generic(self, a: int, b: int) -> int:
        if self.p == 2:
            n = self.n
            mask = self._modmask
            top = 1 << n
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= mask
            return r
        p = self.p
        n = self.n
        ca = self.enc_to_coords(a)
        cb = self.enc_to_coords(b)
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(ca):
            if ai:
                for j, bj in enumerate(cb):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        head = self._head
        for i in range(2 * n - 2, n - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                base = i - n
                for j, hj in enumerate(head):
                    prod[base + j] = (prod[base + j] + c * hj) % p
        return self.coords_to_enc(prod[: n])

    def pow_enc(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("inverse of zero")
            return 0
        m = self.order - 1
        e %= m
        if self._log is not None:
            return self._exp[self._log[a] * e % m]
        r = 1
        while e:
            if e & 1:
                r = self._mul_generic(r, a)
            a = self._mul_generic(a, a)
            e >>= 1
        return r

    def log_enc(self, a: int) -> int:
        if a == 0:
            raise ZeroInput("discrete log of zero")
        if self._log is not None:
            return self._log[a]
        # generic fallback: walk the generator orbit (large fields only)
        g = self.generator.enc
        x = 1
        for k in range(self.order - 1):
            if x == a:
                return k
            x = self._mul_generic(x, g)
        raise ZeroInput("element not in the generator orbit (corrupt ctx)")

    def exp_enc(self, k: int) -> int:
        if self._exp is not None:
            return self._exp[k % (self.order - 1)]
        return self.pow_enc(self.generator.enc, k)

    # -- construction internals ----------------------------------------------

    def _enc_order_is_max(self, enc: int) -> bool:
        m = self.order - 1
        return all(self.pow_enc(enc, m // f) != 1 for f in prime_factors(m))

    def _root_enc(self) -> int:
        if self.n == 1:
            return (-self.modulus[0]) % self.p
        return self.p  # coords (0, 1, 0, ...)

    def _pick_generator(self, generator):
        # bootstrap: pow_enc works table-free through _mul_generic
        self._log = None
        self._exp = None
        if generator is not None:
            enc = generator.enc if isinstance(generator, FieldElement) else (
                self.coords_to_enc(generator)
            )
            if not self._enc_order_is_max(enc):
                raise ZeroInput("supplied generator is not primitive")
            return enc, enc == self._root_enc()
        root = self._root_enc()
        if root and self._enc_order_is_max(root):
            return root, True
        for enc in range(1, self.order):
            if self._enc_order_is_max(enc):
                return enc, False
        raise AssertionError("no primitive element found (unreachable)")

    def _build_tables(self, gen_enc: int):
        m = self.order - 1
        exp = [0] * m
        log = [-1] * self.order
        x = 1
        for k in range(m):
            exp[k] = x
            log[x] = k
            x = self._mul_generic(x, gen_enc)
        if x != 1 or any(v < 0 for v in log[1:]):
            raise AssertionError("generator orbit does not cover the field")
        self._exp = exp
        self._log = log
        if self.p != 2:
            self._coords_cache = [self.enc_to_coords(e) for e in range(self.order)]

    # -- predicates ----------------------------------------------------------

    def is_square(self, x: FieldElement) -> bool:
        """x != 0 a square: x^((order-1)/2) == 1 for odd p, always for p=2."""
        self._own(x)
        if x.enc == 0:
            raise ZeroInput("square test needs a nonzero input")
        if self.p == 2:
            return True
        return self.pow_enc(x.enc, (self.order - 1) // 2) == 1

    def is_cube(self, x: FieldElement) -> bool:
        self._own(x)
        if x.enc == 0:
            raise ZeroInput("cube test needs a nonzero input")
        if (self.order - 1) % 3 != 0:
            return True
        return self.pow_enc(x.enc, (self.order - 1) // 3) == 1

    def abs_trace(self, x: FieldElement) -> int:
        """Absolute trace to GF(2): sum of x^(2^i) for i < n.  Requires p=2."""
        self._own(x)
        if self.p != 2:
            raise ZeroInput("absolute binary trace requires characteristic 2")
        acc = 0
        t = x.enc
        for _ in range(self.n):
            acc ^= t
            t = self.mul_enc(t, t)
        if acc not in (0, 1):
            raise AssertionError("trace escaped GF(2)")
        return acc

    def _own(self, x: FieldElement):
        if not isinstance(x, FieldElement) or x.ctx is not self:
            raise CtxMismatch("element does not belong to this field context")

    def describe(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "order": self.order,
            "modulus": list(self.modulus),
            "generator": list(self.generator.coords()),
            "generator_is_root": self.generator_is_root,
        }

    def __repr__(self):
        return f"FieldCtx(GF({self.p}^{self.n}), modulus={list(self.modulus)})"


# ---------------------------------------------------------------------------


def field_create(p: int, modulus, generator=None) -> FieldCtx:
    """Create GF(p^n) from a monic irreducible modulus (least degree first)."""
    return FieldCtx(p, modulus, generator=generator)


def canonical_modulus(p: int, n: int) -> list[int]:
    """Deterministic default modulus for GF(p^n).

    The minimal primitive polynomial under the signed-word order (compare
    ((-1)^(n-i) a_i mod p) for i = n-1 .. 0, lexicographically), with the
    constant coefficient pinned so the root's norm to GF(p) is the least
    primitive root mod p.  This matches the generators the worked examples
    are expressed in for the small fields that ship without a modulus.
    """
    r = least_primitive_root(p)
    a0 = (-1) ** n * r % p
    for word in itertools.product(range(p), repeat=n - 1):
        coeffs = [a0]
        # word is (w_{n-1}, ..., w_1) ascending lexicographically
        for i in range(1, n):
            w = word[n - 1 - i]
            coeffs.append((-1) ** (n - i) * w % p)
        coeffs.append(1)
        if not is_irreducible(coeffs, p):
            continue
        root_order = _root_multiplicative_order(coeffs, p)
        if root_order == p**n - 1:
            return coeffs
    raise AssertionError(f"no primitive polynomial of degree {n} over GF({p})")


def _root_multiplicative_order(modulus, p):
    group_order = p ** (len(modulus) - 1) - 1
    x = [0, 1]
    if len(modulus) == 2:
        x = [(-modulus[0]) % p]
        _trim(x)
    order = group_order
    for f in prime_factors(group_order):
        while order % f == 0 and _poly_powmod(x, order // f, modulus, p) == [1]:
            order //= f
    return order


class QuadExtension:
    """GF(q^2) over GF(q) with q = p^m: subfield and unit-circle structure."""

    def __init__(self, p: int, m: int, modulus=None, generator=None):
        if modulus is None:
            modulus = canonical_modulus(p, 2 * m)
        if len(modulus) - 1 != 2 * m:
            raise NotMonic(f"modulus degree {len(modulus) - 1} != 2m = {2 * m}")
        self.big = field_create(p, modulus, generator=generator)
        self.m = m
        self.q = p**m
        self._mu = None
        self._sub = None

    # -- membership ----------------------------------------------------------

    def in_subfield(self, x: FieldElement) -> bool:
        """x in GF(q), i.e. x^q == x."""
        self.big._own(x)
        if x.enc == 0:
            return True
        if self.big._log is not None:
            return self.big._log[x.enc] % (self.q + 1) == 0
        return self.big.pow_enc(x.enc, self.q) == x.enc

    def on_circle(self, x: FieldElement) -> bool:
        """x in the unit circle, i.e. x^(q+1) == 1."""
        self.big._own(x)
        if x.enc == 0:
            return False
        if self.big._log is not None:
            return self.big._log[x.enc] % (self.q - 1) == 0
        return self.big.pow_enc(x.enc, self.q + 1) == 1

    def frob_q(self, x: FieldElement) -> FieldElement:
        return x**self.q

    # -- enumerations ----------------------------------------------------------

    def circle_members(self) -> list[FieldElement]:
        """[g^(k(q-1)) for k = 0..q]; each satisfies x^(q+1) = 1."""
        if self._mu is None:
            g_step = self.big.gen_pow(self.q - 1)
            x = self.big.one()
            out = []
            for _ in range(self.q + 1):
                out.append(x)
                x = x * g_step
            if x != self.big.one():
                raise AssertionError("circle enumeration did not close")
            self._mu = out
        return list(self._mu)

    def subfield_members(self) -> list[FieldElement]:
        """[0, gq^0, gq^1, ...] with gq = g^(q+1) generating GF(q)*."""
        if self._sub is None:
            gq = self.big.gen_pow(self.q + 1)
            out = [self.big.zero()]
            x = self.big.one()
            for _ in range(self.q - 1):
                out.append(x)
                x = x * gq
            self._sub = out
        return list(self._sub)

    def nonsubfield_members(self) -> list[FieldElement]:
        """Elements of GF(q^2) \\ GF(q), ascending generator power."""
        q1 = self.q + 1
        big = self.big
        return [
            FieldElement(big, big.exp_enc(k))
            for k in range(big.order - 1)
            if k % q1 != 0
        ]

    # -- subfield-relative predicates -----------------------------------------

    def is_square_sub(self, x: FieldElement) -> bool:
        """x a square inside GF(q) (x must lie in the subfield, nonzero)."""
        if not self.in_subfield(x):
            raise CtxMismatch("element is not in the subfield")
        if x.enc == 0:
            raise ZeroInput("square test needs a nonzero input")
        if self.big.p == 2:
            return True
        return self.big.pow_enc(x.enc, (self.q - 1) // 2) == 1

    def is_cube_sub(self, x: FieldElement) -> bool:
        if not self.in_subfield(x):
            raise CtxMismatch("element is not in the subfield")
        if x.enc == 0:
            raise ZeroInput("cube test needs a nonzero input")
        if (self.q - 1) % 3 != 0:
            return True
        return self.big.pow_enc(x.enc, (self.q - 1) // 3) == 1

    def __repr__(self):
        return f"QuadExtension(GF({self.q}^2)/GF({self.q}))"


def quad_extension(p: int, m: int, modulus=None, generator=None) -> QuadExtension:
    return QuadExtension(p, m, modulus=modulus, generator=generator)
