"""Prime-order elliptic curve group used by every credential operation.

The group is NIST P-224 (secp224r1): a short-Weierstrass curve y^2 =
x^3 + ax + b over F_p with a prime group order q that fits in 28 bytes.
Every scalar in the protocol (trapdoor components, blinding values,
signature nonces) lives in Z_q, and every 28-byte wire field maps onto
one curve coordinate or one scalar, which is why this particular curve
is load-bearing: the message-size budget assumes l_q = 224 bits.

Points are affine ``(x, y)`` tuples with ``None`` as the identity O.
Internally the hot paths run in Jacobian coordinates so that a full
scalar multiplication needs a single field inversion.

Two multiplication routines are exposed on purpose:

* ``scalar_mul`` is a fixed-iteration Montgomery ladder and is the only
  routine fed long-term secrets (trapdoor x, k, blinding alpha).  Python
  big integers are not constant-time, so this is side-channel hygiene,
  not a guarantee.
* ``msm2`` computes ``m*P + gamma*A`` with a shared doubling chain and
  window-NAF tables.  It is variable-time and is only ever given values
  that travel in cleartext anyway (verification inputs).
"""

from __future__ import annotations

from dataclasses import dataclass

Point = "tuple[int, int] | None"  # affine point, None is the identity O

# --- NIST P-224 domain parameters -------------------------------------------

P = 2**224 - 2**96 + 1
A = -3 % P
B = 0xB4050A850C04B3ABF54132565044B0B7D7BFD8BA270B39432355FFB4
GX = 0xB70E0CBD6BB4BF7F321390B94A03C1D356C21122343280D6115C1D21
GY = 0xBD376388B5F723FB4C22DFE6CD4375A05A07476444D5819985007E34
Q = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFF16A2E0B8F03E13DD29455C5C2A3D
GEN = (GX, GY)

SCALAR_BYTES = 28
COORD_BYTES = 28
SECURITY_BITS = 160  # hash/tag output width used throughout the protocol


@dataclass(frozen=True)
class CurveParams:
    """Public description of the group, as published in the system parameters."""

    p: int
    a: int
    b: int
    generator: "tuple[int, int]"
    q: int
    security_bits: int

    @property
    def name(self) -> str:
        return "secp224r1"


P224 = CurveParams(p=P, a=A, b=B, generator=GEN, q=Q, security_bits=SECURITY_BITS)


def is_on_curve(pt) -> bool:
    """True for the identity and for affine points satisfying the curve equation."""
    if pt is None:
        return True
    x, y = pt
    if not (0 <= x < P and 0 <= y < P):
        return False
    return (y * y - (x * x * x + A * x + B)) % P == 0


def point_neg(pt):
    if pt is None:
        return None
    x, y = pt
    return (x, (-y) % P)


def point_add(p1, p2):
    """Affine group addition. Correct for all inputs including O and inverses."""
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if (y1 + y2) % P == 0:
            return None
        # doubling
        lam = (3 * x1 * x1 + A) * pow(2 * y1, -1, P) % P
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, P) % P
    x3 = (lam * lam - x1 - x2) % P
    y3 = (lam * (x1 - x3) - y1) % P
    return (x3, y3)


# --- Jacobian internals ------------------------------------------------------
# A Jacobian triple (X, Y, Z) represents the affine point (X/Z^2, Y/Z^3);
# Z == 0 encodes the identity.

_JAC_O = (0, 1, 0)


def _jac_double(X1, Y1, Z1):
    # dbl-2001-b, specialised for a = -3
    if not Z1 or not Y1:
        return _JAC_O
    delta = Z1 * Z1 % P
    gamma = Y1 * Y1 % P
    beta = X1 * gamma % P
    alpha = 3 * ((X1 - delta) * (X1 + delta)) % P
    X3 = (alpha * alpha - 8 * beta) % P
    Z3 = ((Y1 + Z1) * (Y1 + Z1) - gamma - delta) % P
    Y3 = (alpha * (4 * beta - X3) - 8 * gamma * gamma) % P
    return (X3, Y3, Z3)


def _jac_add(X1, Y1, Z1, X2, Y2, Z2):
    # add-2007-bl; handles all degenerate cases
    if not Z1:
        return (X2, Y2, Z2)
    if not Z2:
        return (X1, Y1, Z1)
    Z1Z1 = Z1 * Z1 % P
    Z2Z2 = Z2 * Z2 % P
    U1 = X1 * Z2Z2 % P
    U2 = X2 * Z1Z1 % P
    S1 = Y1 * Z2 % P * Z2Z2 % P
    S2 = Y2 * Z1 % P * Z1Z1 % P
    H = (U2 - U1) % P
    if not H:
        if S1 == S2:
            return _jac_double(X1, Y1, Z1)
        return _JAC_O
    I = 4 * H * H % P
    J = H * I % P
    r = 2 * (S2 - S1) % P
    V = U1 * I % P
    X3 = (r * r - J - 2 * V) % P
    Y3 = (r * (V - X3) - 2 * S1 * J) % P
    Z3 = ((Z1 + Z2) * (Z1 + Z2) - Z1Z1 - Z2Z2) % P * H % P
    return (X3, Y3, Z3)


def _jac_add_affine(X1, Y1, Z1, x2, y2):
    # mixed addition, second operand affine (Z2 = 1)
    if not Z1:
        return (x2, y2, 1)
    Z1Z1 = Z1 * Z1 % P
    U2 = x2 * Z1Z1 % P
    S2 = y2 * Z1 % P * Z1Z1 % P
    H = (U2 - X1) % P
    if not H:
        if S2 == Y1:
            return _jac_double(X1, Y1, Z1)
        return _JAC_O
    HH = H * H % P
    I = 4 * HH % P
    J = H * I % P
    r = 2 * (S2 - Y1) % P
    V = X1 * I % P
    X3 = (r * r - J - 2 * V) % P
    Y3 = (r * (V - X3) - 2 * Y1 * J) % P
    Z3 = ((Z1 + H) * (Z1 + H) - Z1Z1 - HH) % P
    return (X3, Y3, Z3)


def _jac_to_affine(X, Y, Z):
    if not Z:
        return None
    zi = pow(Z, -1, P)
    zi2 = zi * zi % P
    return (X * zi2 % P, Y * zi2 % P * zi % P)


def _batch_to_affine(triples):
    """Convert many Jacobian points with one shared inversion (Montgomery trick)."""
    zs = [t[2] for t in triples]
    n = len(zs)
    prefix = [1] * (n + 1)
    for i, z in enumerate(zs):
        prefix[i + 1] = prefix[i] * z % P
    inv_all = pow(prefix[n], -1, P)
    out = [None] * n
    for i in range(n - 1, -1, -1):
        zi = prefix[i] * inv_all % P
        inv_all = inv_all * zs[i] % P
        zi2 = zi * zi % P
        X, Y, _ = triples[i]
        out[i] = (X * zi2 % P, Y * zi2 % P * zi % P)
    return out


# --- Scalar multiplication ---------------------------------------------------


def scalar_mul(pt, s: int):
    """Multiply ``pt`` by ``s`` with a fixed-length Montgomery ladder.

    Always runs 225 ladder steps regardless of ``s`` (the exponent is
    lifted to s + q so its top bit is fixed), giving a uniform operation
    sequence for secret scalars. Accepts s = 0 and the identity.
    """
    if pt is None:
        return None
    s %= Q
    k = s + Q  # in [q, 2q): bit 224 is always set, no leading-zero branch
    r0 = _JAC_O
    r1 = (pt[0], pt[1], 1)
    for i in range(224, -1, -1):
        if (k >> i) & 1:
            r0 = _jac_add(*r0, *r1)
            r1 = _jac_double(*r1)
        else:
            r1 = _jac_add(*r0, *r1)
            r0 = _jac_double(*r0)
    return _jac_to_affine(*r0)


def _wnaf(k: int, w: int):
    digits = []
    while k:
        if k & 1:
            d = k & ((1 << w) - 1)
            if d >= 1 << (w - 1):
                d -= 1 << w
            digits.append(d)
            k -= d
        else:
            digits.append(0)
        k >>= 1
    return digits


def _odd_multiples(pt, w: int):
    """Affine table [1*pt, 3*pt, ..., (2^(w-1)-1)*pt]."""
    count = 1 << (w - 2)
    jac = [(pt[0], pt[1], 1)]
    twice = _jac_double(pt[0], pt[1], 1)
    for _ in range(count - 1):
        jac.append(_jac_add(*jac[-1], *twice))
    return _batch_to_affine(jac)


_WINDOW = 5
_GEN_TABLE = _odd_multiples(GEN, _WINDOW)


def msm2(m: int, gamma: int, a_pt):
    """Return ``m*GEN + gamma*a_pt`` (variable-time, shared doubling chain).

    This is the verifier's workhorse; both scalars and the point are
    public by the time it runs. The window-NAF loop is inlined: at
    roughly 450 doublings-plus-additions per call, attribute lookups
    and tuple packing would otherwise be a measurable slice of the
    per-request verification budget.
    """
    m %= Q
    gamma %= Q
    if a_pt is None or gamma == 0:
        if m == 0:
            return None
        gamma = 0

    nm = _wnaf(m, _WINDOW) if m else []
    ng = _wnaf(gamma, _WINDOW) if gamma else []
    a_table = _odd_multiples(a_pt, _WINDOW) if gamma else ()
    if len(nm) < len(ng):
        nm += [0] * (len(ng) - len(nm))
    else:
        ng += [0] * (len(nm) - len(ng))

    p = P
    gen_table = _GEN_TABLE
    X, Y, Z = 0, 1, 0
    for i in range(len(nm) - 1, -1, -1):
        if Z:
            # inline a=-3 Jacobian doubling (dbl-2001-b)
            delta = Z * Z % p
            g = Y * Y % p
            beta = X * g % p
            alpha = 3 * ((X - delta) * (X + delta)) % p
            X3 = (alpha * alpha - 8 * beta) % p
            Z = ((Y + Z) * (Y + Z) - g - delta) % p
            Y = (alpha * (4 * beta - X3) - 8 * g * g) % p
            X = X3
        for d, table in ((nm[i], gen_table), (ng[i], a_table)):
            if d:
                if d > 0:
                    px, py = table[d >> 1]
                else:
                    px, py = table[(-d) >> 1]
                    py = p - py
                if not Z:
                    X, Y, Z = px, py, 1
                    continue
                # inline mixed addition (add-2007-bl, Z2 = 1)
                Z1Z1 = Z * Z % p
                U2 = px * Z1Z1 % p
                S2 = py * Z % p * Z1Z1 % p
                H = (U2 - X) % p
                if not H:
                    if S2 == Y:
                        delta = Z * Z % p
                        g = Y * Y % p
                        beta = X * g % p
                        alpha = 3 * ((X - delta) * (X + delta)) % p
                        X3 = (alpha * alpha - 8 * beta) % p
                        Z = ((Y + Z) * (Y + Z) - g - delta) % p
                        Y = (alpha * (4 * beta - X3) - 8 * g * g) % p
                        X = X3
                    else:
                        X, Y, Z = 0, 1, 0
                    continue
                HH = H * H % p
                I = 4 * HH % p
                J = H * I % p
                r = 2 * (S2 - Y) % p
                V = X * I % p
                X3 = (r * r - J - 2 * V) % p
                Y = (r * (V - X3) - 2 * Y * J) % p
                Z = ((Z + H) * (Z + H) - Z1Z1 - HH) % p
                X = X3
    return _jac_to_affine(X, Y, Z)


# --- Field square roots and point encoding -----------------------------------


def sqrt_mod_p(n: int):
    """Tonelli-Shanks square root mod P, or None when n is a non-residue.

    P = 1 mod 4, so the cheap exponent shortcut does not apply here.
    """
    n %= P
    if n == 0:
        return 0
    if pow(n, (P - 1) // 2, P) != 1:
        return None
    # write P - 1 = t * 2^s with t odd
    s = 96  # 2-adic valuation of P - 1 for this prime
    t = (P - 1) >> s
    # 11 is the smallest quadratic non-residue for this field
    z = pow(11, t, P)
    m = s
    c = z
    u = pow(n, t, P)
    r = pow(n, (t + 1) // 2, P)
    while u != 1:
        d = u
        i = 0
        while d != 1:
            d = d * d % P
            i += 1
        b = pow(c, 1 << (m - i - 1), P)
        m = i
        c = b * b % P
        u = u * c % P
        r = r * b % P
    return r


def solve_y(x: int):
    """Even-y point with abscissa x, or None when x is not on the curve."""
    y = sqrt_mod_p((x * x * x + A * x + B) % P)
    if y is None:
        return None
    if y & 1:
        y = P - y
    return (x, y)


def has_even_y(pt) -> bool:
    return pt is not None and pt[1] % 2 == 0


def point_compress(pt) -> bytes:
    """29-byte encoding: parity prefix (0x02 even / 0x03 odd) + big-endian x.

    The identity encodes as 29 zero bytes. Used for ledger records, hash
    inputs and key material; the 28-byte x-only wire form lives in ``wire``.
    """
    if pt is None:
        return bytes(29)
    x, y = pt
    return bytes([2 + (y & 1)]) + x.to_bytes(COORD_BYTES, "big")


def point_decompress(data: bytes):
    if len(data) != 29:
        raise ValueError("compressed point must be 29 bytes")
    if data == bytes(29):
        return None
    prefix = data[0]
    if prefix not in (2, 3):
        raise ValueError("bad point prefix")
    x = int.from_bytes(data[1:], "big")
    if x >= P:
        raise ValueError("x out of range")
    pt = solve_y(x)
    if pt is None:
        raise ValueError("x not on curve")
    if (pt[1] & 1) != (prefix & 1):
        pt = (pt[0], P - pt[1])
    return pt


# --- Scalar helpers -----------------------------------------------------------


def scalar_to_bytes(s: int) -> bytes:
    return (s % Q).to_bytes(SCALAR_BYTES, "big")


def scalar_from_bytes(data: bytes) -> int:
    if len(data) != SCALAR_BYTES:
        raise ValueError("scalar must be 28 bytes")
    return int.from_bytes(data, "big")


def rand_scalar(rng) -> int:
    """Uniform element of Z_q via rejection sampling (q is close to 2^224)."""
    while True:
        v = int.from_bytes(rng.randbytes(SCALAR_BYTES), "big")
        if v < Q:
            return v


def rand_nonzero_scalar(rng) -> int:
    while True:
        v = rand_scalar(rng)
        if v:
            return v
