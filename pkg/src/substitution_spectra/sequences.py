"""Digit-defined +-1 sequences, recoding of letter sequences, partial sums."""
from __future__ import annotations

import math
from typing import Callable, Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .substitution import Substitution, fixed_point_indices, load_substitution

__all__ = [
    "inv2",
    "rsl_direct",
    "rs_direct",
    "rsl_array",
    "rs_array",
    "recode",
    "RSL_RECODING",
    "check_equivalence",
    "PartialSumRow",
    "partial_sums",
    "GENERATORS",
    "generate",
]

RSL_RECODING = {"0": 1, "1": 1, "2": -1, "3": -1}
RS_RECODING = {"a": 1, "b": 1, "c": -1, "d": -1}


def inv2(n: int) -> int:
    """Number of scattered ``10`` subwords in the binary expansion of ``n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    ones = total = 0
    for bit in bin(n)[2:]:
        if bit == "1":
            ones += 1
        else:
            total += ones
    return total


def rsl_direct(n: int) -> int:
    return -1 if inv2(n) & 1 else 1


def rs_direct(n: int) -> int:
    """Rudin-Shapiro: ``(-1)`` to the number of (overlapping) ``11`` blocks in ``n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return -1 if bin(n & (n >> 1)).count("1") & 1 else 1


def _bit_length(n_max: int) -> int:
    return max(1, int(n_max - 1).bit_length())


def rsl_array(n: int, start: int = 0) -> np.ndarray:
    """``rsl_direct`` for ``start <= m < start + n`` as an int8 array."""
    idx = np.arange(start, start + n, dtype=np.int64)
    parity = np.zeros(n, dtype=np.int64)
    # a zero at bit i pairs with every one above it
    for i in range(_bit_length(start + n)):
        zero = ((idx >> i) & 1) == 0
        above = idx >> (i + 1)
        parity ^= np.where(zero, _popcount_parity(above), 0)
    return np.where(parity & 1, -1, 1).astype(np.int8)


def _popcount_parity(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        x ^= x >> shift
    return x & 1


def rs_array(n: int, start: int = 0) -> np.ndarray:
    idx = np.arange(start, start + n, dtype=np.int64)
    return np.where(_popcount_parity(idx & (idx >> 1)), -1, 1).astype(np.int8)


def recode(word: Iterable[str], mapping: Mapping[str, int] = None) -> List[int]:
    """Letterwise map to +-1 (default: ``0, 1 -> +1`` and ``2, 3 -> -1``)."""
    mapping = RSL_RECODING if mapping is None else mapping
    out = []
    for letter in word:
        try:
            out.append(mapping[letter])
        except KeyError:
            raise ValueError(f"no recoding for letter {letter!r}") from None
    return out


def _bundled(name: str) -> Substitution:
    from importlib.resources import files

    return load_substitution(files("substitution_spectra") / "data" / f"{name}.json")


def recoded_fixed_point(s: Substitution, seed: Optional[str], n: int,
                        mapping: Mapping[str, int]) -> np.ndarray:
    table = np.array([mapping[a] for a in s.alphabet], dtype=np.int8)
    return table[fixed_point_indices(s, seed, n)]


def check_equivalence(n_max: int, which: str = "rsl") -> Tuple[bool, Optional[int]]:
    """Compare the digit definition with the recoded substitution fixed point.

    Returns ``(True, None)`` or ``(False, first_mismatch)``.
    """
    if which == "rsl":
        direct = rsl_array(n_max)
        fixed = recoded_fixed_point(_bundled("rsl"), "0", n_max, RSL_RECODING)
    elif which == "rs":
        direct = rs_array(n_max)
        fixed = recoded_fixed_point(_bundled("rs"), "a", n_max, RS_RECODING)
    else:
        raise ValueError(f"unknown sequence {which!r}")
    bad = np.flatnonzero(direct != fixed)
    return (True, None) if bad.size == 0 else (False, int(bad[0]))


GENERATORS: Dict[str, Callable[[int], np.ndarray]] = {
    "rsl": rsl_array,
    "rs": rs_array,
    "ones": lambda n: np.ones(n, dtype=np.int8),
}


def generate(name: str, n: int) -> np.ndarray:
    try:
        return GENERATORS[name](n)
    except KeyError:
        raise ValueError(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}") from None


class PartialSumRow(NamedTuple):
    N: int
    total: int
    ratio: float
    log4N: float


def partial_sums(seq: Sequence[int], n_list: Sequence[int]) -> List[PartialSumRow]:
    """``Sigma(N) = sum_{0 <= n <= N} a_n`` at each requested ``N``.

    ``seq`` is either an array covering ``0..max(n_list)`` or a generator name.
    """
    n_list = list(n_list)
    if any(b < a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("N values must be ascending")
    if not n_list:
        return []
    if isinstance(seq, str):
        seq = generate(seq, n_list[-1] + 1)
    cums = np.cumsum(np.asarray(seq[:n_list[-1] + 1], dtype=np.int64))
    rows = []
    for n in n_list:
        total = int(cums[n])
        ratio = total / math.sqrt(n) if n > 0 else float("nan")
        rows.append(PartialSumRow(n, total, ratio, math.log(n, 4) if n > 0 else float("-inf")))
    return rows
