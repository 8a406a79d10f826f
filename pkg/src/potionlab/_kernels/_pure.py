"""Pure-Python implementations of the hot kernels.

Fallback when the compiled extension is missing (or when ``POTIONLAB_PURE``
forces it). Must stay bit-for-bit equivalent to ``_speedups``: same counter
stream, same double arithmetic, same substitution rule.
"""

BACKEND = "pure"

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def rand_unit(seed: int, index: int) -> float:
    """Element ``index`` of the counter-based stream for ``seed``, in [0, 1)."""
    h = _mix64((seed + (index + 1) * _GOLDEN) & _MASK64)
    return (h >> 11) * _INV_2_53


def distort_text(text: str, seed: int, severity: float, table: dict) -> str:
    """Replace table-mapped characters of ``text`` with probability ``severity``.

    The per-character decision depends only on (seed, character index), so the
    result is a pure function of its arguments. Table keys must be single
    ASCII characters; values single characters. Everything else passes through.
    """
    n = len(text)
    if severity <= 0.0 or n == 0:
        return text
    repl = [None] * 128
    for key, value in table.items():
        k = ord(key)
        if k < 128:
            repl[k] = value
    seed &= _MASK64
    out = []
    for i, ch in enumerate(text):
        c = ord(ch)
        if c < 128 and repl[c] is not None:
            h = _mix64((seed + (i + 1) * _GOLDEN) & _MASK64)
            if (h >> 11) * _INV_2_53 < severity:
                ch = repl[c]
        out.append(ch)
    return "".join(out)


def signed_rank_counts(n: int) -> list:
    """Number of subsets of {1..n} per sum: counts[w] over w in 0..n(n+1)/2.

    This is the unnormalized null distribution of the signed-rank sum for n
    tie-free pairs; summing all entries gives 2**n.
    """
    if n < 0 or n > 62:
        raise ValueError(f"n out of range for exact counts: {n}")
    total = n * (n + 1) // 2
    counts = [0] * (total + 1)
    counts[0] = 1
    upper = 0
    for r in range(1, n + 1):
        upper += r
        for w in range(upper, r - 1, -1):
            counts[w] += counts[w - r]
    return counts
