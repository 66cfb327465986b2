"""Truncated power series with arbitrary-precision integer coefficients.

A series is a plain list of Python ints, index = exponent.  ``mul`` packs both
operands into single GMP integers (Kronecker substitution), so one
FFT-backed big-integer product replaces the O(n^2) convolution.  Signed
coefficients are handled by splitting each operand into its positive and
negative parts, which keeps packing and unpacking carry-free.
"""

from __future__ import annotations

from operator import mul as _mul

from gmpy2 import mpz


def _slot_bits(a: list[int], b: list[int], n: int) -> int:
    ma = max((abs(c) for c in a[:n]), default=0)
    mb = max((abs(c) for c in b[:n]), default=0)
    terms = min(len(a), len(b), n)
    bits = ma.bit_length() + mb.bit_length() + max(terms, 1).bit_length() + 1
    return (bits + 7) // 8 * 8


def _pack(coeffs: list[int], nbytes: int) -> mpz:
    buf = b"".join(c.to_bytes(nbytes, "little") for c in coeffs)
    return mpz(int.from_bytes(buf, "little"))


def _unpack(value: mpz, nbytes: int, n: int) -> list[int]:
    v = int(value)
    raw = v.to_bytes(max(1, (v.bit_length() + 7) // 8), "little")
    frm = int.from_bytes
    return [frm(raw[i * nbytes : (i + 1) * nbytes], "little") for i in range(n)]


def mul(a: list[int], b: list[int], n: int) -> list[int]:
    """First ``n`` coefficients of ``a * b``."""
    a = [int(c) for c in a[:n]]
    b = [int(c) for c in b[:n]]
    if not a or not b:
        return [0] * n
    nbytes = _slot_bits(a, b, n) // 8
    a_pos = _pack([c if c > 0 else 0 for c in a], nbytes)
    a_neg = _pack([-c if c < 0 else 0 for c in a], nbytes)
    b_pos = _pack([c if c > 0 else 0 for c in b], nbytes)
    b_neg = _pack([-c if c < 0 else 0 for c in b], nbytes)
    plus = _unpack(a_pos * b_pos + a_neg * b_neg, nbytes, n)
    minus = _unpack(a_pos * b_neg + a_neg * b_pos, nbytes, n)
    return [p - q for p, q in zip(plus, minus)]


def mul_schoolbook(a: list[int], b: list[int], n: int) -> list[int]:
    """Reference O(n^2) product, first ``n`` coefficients."""
    a = list(a[:n]) + [0] * max(0, n - len(a))
    b = list(b[:n]) + [0] * max(0, n - len(b))
    return [sum(map(_mul, a[: k + 1], b[k::-1])) for k in range(n)]


def power(a: list[int], e: int, n: int) -> list[int]:
    result = [1] + [0] * (n - 1)
    base = list(a[:n])
    while e:
        if e & 1:
            result = mul(result, base, n)
        e >>= 1
        if e:
            base = mul(base, base, n)
    return result


def scale_shift(a: list[int], scalar: int = 1, shift: int = 0, n: int | None = None) -> list[int]:
    """``scalar * q**shift * a`` truncated to ``n`` terms."""
    n = len(a) + shift if n is None else n
    out = [0] * shift + [scalar * c for c in a]
    out = out[:n]
    return out + [0] * (n - len(out))
