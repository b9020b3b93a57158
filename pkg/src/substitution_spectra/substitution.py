"""Constant-length substitutions: parsing, digit matrices, and basic dynamics.

Index convention used throughout the package: for letters with declared
positions ``a`` and ``g``, ``R_j[a, g] = 1`` iff the ``j``-th letter of the
image of ``g`` is ``a``, and ``M[a, g]`` counts occurrences of ``a`` in the
image of ``g``. Letters are opaque labels; only their declared order matters.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np

from . import _linalg as la

__all__ = [
    "Substitution",
    "SubstitutionError",
    "NotPrimitiveError",
    "NotInjectiveError",
    "NoFixedPointError",
    "parse_substitution",
    "load_substitution",
    "serialize_substitution",
    "instruction_matrices",
    "substitution_matrix",
    "power_maps",
    "power_instruction_matrices",
    "is_primitive",
    "letter_frequencies",
    "legal_words",
    "is_aperiodic_pansiot",
    "height",
    "fixed_point_prefix",
    "fixed_point_indices",
]


class SubstitutionError(ValueError):
    """Malformed or inconsistent substitution description."""


class NotPrimitiveError(ValueError):
    """The substitution matrix has no strictly positive power."""


class NotInjectiveError(ValueError):
    """Two letters share the same image, so Pansiot's criterion does not apply."""


class NoFixedPointError(ValueError):
    """No letter starts its own image."""


Weight = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Substitution:
    """A substitution of constant length on an ordered alphabet.

    Parameters
    ----------
    alphabet : tuple of str
        Distinct letter labels; their order fixes every matrix and vector index.
    rules : tuple of tuple of str
        ``rules[i]`` is the image of ``alphabet[i]``; all images have equal length.
    weights : tuple of (Fraction, Fraction), optional
        Complex letter weights as ``(real, imag)`` pairs, in alphabet order.
    """

    alphabet: Tuple[str, ...]
    rules: Tuple[Tuple[str, ...], ...]
    weights: Optional[Tuple[Weight, ...]] = None

    def __post_init__(self):
        if len(self.alphabet) < 2:
            raise SubstitutionError("alphabet needs at least two letters")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise SubstitutionError("duplicate letter in alphabet")
        if len(self.rules) != len(self.alphabet):
            raise SubstitutionError("need exactly one rule per letter")
        q = len(self.rules[0])
        if q < 2:
            raise SubstitutionError("substitution length must be at least 2")
        known = set(self.alphabet)
        for letter, image in zip(self.alphabet, self.rules):
            if len(image) != q:
                raise SubstitutionError(
                    f"rule for {letter!r} has length {len(image)}, expected {q}"
                )
            unknown = [x for x in image if x not in known]
            if unknown:
                raise SubstitutionError(f"rule for {letter!r} uses unknown letter {unknown[0]!r}")
        if self.weights is not None and len(self.weights) != len(self.alphabet):
            raise SubstitutionError("need one weight per letter")

    @classmethod
    def from_rules(cls, rules: Mapping[str, Sequence[str]], alphabet=None, weights=None):
        """Build from a ``letter -> image`` mapping (images may be strings)."""
        alphabet = tuple(str(a) for a in (alphabet if alphabet is not None else rules))
        missing = [a for a in alphabet if a not in rules]
        if missing:
            raise SubstitutionError(f"no rule for letter {missing[0]!r}")
        extra = [a for a in rules if a not in alphabet]
        if extra:
            raise SubstitutionError(f"rule for unknown letter {extra[0]!r}")
        images = tuple(tuple(str(x) for x in rules[a]) for a in alphabet)
        w = None
        if weights is not None:
            bad = [a for a in weights if a not in alphabet]
            if bad:
                raise SubstitutionError(f"weight for unknown letter {bad[0]!r}")
            w = tuple(_parse_weight(weights.get(a, 0)) for a in alphabet)
        return cls(alphabet, images, w)

    @property
    def size(self) -> int:
        return len(self.alphabet)

    @property
    def length(self) -> int:
        return len(self.rules[0])

    @cached_property
    def index(self) -> Dict[str, int]:
        return {a: i for i, a in enumerate(self.alphabet)}

    @cached_property
    def images(self) -> Tuple[Tuple[int, ...], ...]:
        """Rule images as letter indices: ``images[g][j]``."""
        return tuple(tuple(self.index[x] for x in image) for image in self.rules)

    @cached_property
    def maps(self) -> Tuple[Tuple[int, ...], ...]:
        """Instruction maps: ``maps[j][g]`` is the ``j``-th letter of the image of ``g``."""
        return tuple(
            tuple(self.images[g][j] for g in range(self.size)) for j in range(self.length)
        )

    def rule(self, letter: str) -> Tuple[str, ...]:
        return self.rules[self.index[letter]]

    def with_weights(self, weights: Mapping[str, object]) -> "Substitution":
        return Substitution.from_rules(dict(zip(self.alphabet, self.rules)), self.alphabet, weights)

    def power(self, p: int) -> "Substitution":
        """The ``p``-fold iterate as a substitution of length ``q**p``."""
        out = [(g,) for g in range(self.size)]
        for _ in range(p):
            out = [tuple(x for a in word for x in self.images[a]) for word in out]
        return Substitution(
            self.alphabet,
            tuple(tuple(self.alphabet[x] for x in word) for word in out),
            self.weights,
        )


def _parse_weight(value) -> Weight:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise SubstitutionError(f"complex weight must be a [re, im] pair, got {value!r}")
        re, im = value
    elif isinstance(value, complex):
        re, im = value.real, value.imag
    else:
        re, im = value, 0
    try:
        return Fraction(re), Fraction(im)
    except (TypeError, ValueError) as exc:
        raise SubstitutionError(f"bad weight {value!r}") from exc


def _dump_number(x: Fraction):
    if x.denominator == 1:
        return int(x)
    if Fraction(float(x)) == x:
        return float(x)
    return str(x)


def parse_substitution(document) -> Substitution:
    """Parse a substitution document (JSON text or an already-decoded mapping).

    The document has keys ``alphabet`` (list of str), ``length`` (int), ``rules``
    (letter -> list of letters) and optionally ``weights`` (letter -> number or
    ``[re, im]``).
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SubstitutionError(f"malformed document: {exc}") from exc
    if not isinstance(document, Mapping):
        raise SubstitutionError("document must be a mapping")
    for key in ("alphabet", "length", "rules"):
        if key not in document:
            raise SubstitutionError(f"missing field {key!r}")
    unknown = set(document) - {"alphabet", "length", "rules", "weights", "name"}
    if unknown:
        raise SubstitutionError(f"unknown field(s) {sorted(unknown)}")
    alphabet = document["alphabet"]
    if not isinstance(alphabet, list) or not all(isinstance(a, str) for a in alphabet):
        raise SubstitutionError("alphabet must be a list of strings")
    length = document["length"]
    if not isinstance(length, int) or isinstance(length, bool):
        raise SubstitutionError("length must be an integer")
    if length < 2:
        raise SubstitutionError("substitution length must be at least 2")
    rules = document["rules"]
    if not isinstance(rules, Mapping):
        raise SubstitutionError("rules must be a mapping")
    for letter, image in rules.items():
        if isinstance(image, str) or not isinstance(image, list):
            raise SubstitutionError(f"rule for {letter!r} must be a list of letters")
        if len(image) != length:
            raise SubstitutionError(
                f"rule for {letter!r} has length {len(image)}, declared length is {length}"
            )
    if len(set(alphabet)) != len(alphabet):
        raise SubstitutionError("duplicate letter in alphabet")
    weights = document.get("weights")
    if weights is not None and not isinstance(weights, Mapping):
        raise SubstitutionError("weights must be a mapping")
    return Substitution.from_rules(rules, alphabet, weights)


def load_substitution(path) -> Substitution:
    with open(path, encoding="utf-8") as fh:
        return parse_substitution(fh.read())


def serialize_substitution(s: Substitution) -> str:
    doc = {
        "alphabet": list(s.alphabet),
        "length": s.length,
        "rules": {a: list(image) for a, image in zip(s.alphabet, s.rules)},
    }
    if s.weights is not None:
        doc["weights"] = {
            a: _dump_number(re) if im == 0 else [_dump_number(re), _dump_number(im)]
            for a, (re, im) in zip(s.alphabet, s.weights)
        }
    return json.dumps(doc, indent=2)


def instruction_matrices(s: Substitution) -> List[np.ndarray]:
    """The 0/1 digit matrices ``R_0, ..., R_{q-1}``."""
    return [_map_matrix(m, s.size) for m in s.maps]


def _map_matrix(letter_map: Sequence[int], n: int) -> np.ndarray:
    r = np.zeros((n, n), dtype=np.int64)
    r[list(letter_map), np.arange(n)] = 1
    return r


def substitution_matrix(s: Substitution) -> np.ndarray:
    m = np.zeros((s.size, s.size), dtype=np.int64)
    for g, image in enumerate(s.images):
        for a in image:
            m[a, g] += 1
    return m


def power_maps(s: Substitution, p: int) -> List[Tuple[int, ...]]:
    """Instruction maps of the ``p``-th iterate, positions in reading order.

    Position ``j = j_0 q^{p-1} + ... + j_{p-1}`` applies ``j_0`` first, so the
    matrix is ``R_{j_{p-1}} ... R_{j_1} R_{j_0}``.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if p * math.log2(s.length) > 24:
        raise OverflowError(f"q**p = {s.length}**{p} exceeds the index budget")
    maps = [tuple(range(s.size))]
    for _ in range(p):
        maps = [tuple(m[g] for g in prev) for prev in maps for m in s.maps]
    return maps


def power_instruction_matrices(s: Substitution, p: int) -> List[np.ndarray]:
    """Digit matrices of ``S^p`` (``q**p`` of them)."""
    return [_map_matrix(m, s.size) for m in power_maps(s, p)]


def is_primitive(s: Substitution) -> Tuple[bool, Optional[int]]:
    """Primitivity test with the least exponent ``n`` such that ``M^n > 0``.

    Powers are searched up to the Wielandt bound ``A^2 - 2A + 2``.
    """
    m = substitution_matrix(s) > 0
    bound = s.size**2 - 2 * s.size + 2
    power = m.copy()
    for n in range(1, bound + 1):
        if power.all():
            return True, n
        power = (power.astype(np.int64) @ m.astype(np.int64)) > 0
    return False, None


def letter_frequencies(s: Substitution) -> Tuple[Fraction, ...]:
    """Exact normalized Perron eigenvector ``u`` of ``M`` (eigenvalue ``q``)."""
    if not is_primitive(s)[0]:
        raise NotPrimitiveError("letter frequencies need a primitive substitution")
    m = substitution_matrix(s)
    shifted = [[Fraction(int(m[i, j]) - (s.length if i == j else 0)) for j in range(s.size)]
               for i in range(s.size)]
    kernel = la.nullspace(shifted)
    # primitive => one-dimensional
    (u,) = kernel
    total = sum(u)
    return tuple(x / total for x in u)


def _factors(word: Sequence[int], n: int) -> Set[Tuple[int, ...]]:
    return {tuple(word[i:i + n]) for i in range(len(word) - n + 1)}


def legal_words(s: Substitution, n: int) -> Set[Tuple[str, ...]]:
    """All length-``n`` factors of the substitution language (primitive ``s``)."""
    return {tuple(s.alphabet[x] for x in w) for w in _legal_index_words(s, n)}


def _legal_index_words(s: Substitution, n: int) -> Set[Tuple[int, ...]]:
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return {(g,) for g in range(s.size)}
    q = s.length
    # every legal n-word sits inside S(w) for a legal word w of length m
    m = -(-(n - 1) // q) + 1
    seeds = set()
    for g in range(s.size):
        word = [g]
        while len(word) < n:
            word = [x for a in word for x in s.images[a]]
        seeds |= _factors(word, n)
    found = seeds
    while True:
        sources = found if m == n else _legal_index_words(s, m)
        grown = set(found)
        for w in sources:
            image = [x for a in w for x in s.images[a]]
            grown |= _factors(image, n)
        if grown == found:
            return found
        found = grown


class PansiotWitness(NamedTuple):
    aperiodic: bool
    letter: Optional[str]
    neighbourhoods: Tuple[Tuple[str, str], ...]


def is_aperiodic_pansiot(s: Substitution) -> PansiotWitness:
    """Aperiodicity via Pansiot's lemma.

    A letter's neighbourhoods are the (predecessor, successor) pairs around it
    in legal 3-letter words. Returns the first letter (alphabet order) with at
    least two of them.
    """
    if len(set(s.rules)) != len(s.rules):
        raise NotInjectiveError("substitution is not one-to-one on letters")
    if not is_primitive(s)[0]:
        raise NotPrimitiveError("Pansiot's lemma needs a primitive substitution")
    hoods: Dict[int, Set[Tuple[int, int]]] = {g: set() for g in range(s.size)}
    for a, b, c in _legal_index_words(s, 3):
        hoods[b].add((a, c))
    for g in range(s.size):
        if len(hoods[g]) >= 2:
            pairs = tuple(sorted((s.alphabet[a], s.alphabet[c]) for a, c in hoods[g]))
            return PansiotWitness(True, s.alphabet[g], pairs)
    return PansiotWitness(False, None, ())


def _seed_for(s: Substitution, seed: Optional[str]) -> int:
    if seed is None:
        for g in range(s.size):
            if s.images[g][0] == g:
                return g
        raise NoFixedPointError("no letter starts its own image")
    g = s.index[seed]
    if s.images[g][0] != g:
        raise NoFixedPointError(f"letter {seed!r} does not start its own image")
    return g


def fixed_point_indices(s: Substitution, seed: Optional[str], n: int) -> np.ndarray:
    """First ``n`` letters (as indices) of the one-sided fixed point from ``seed``."""
    g = _seed_for(s, seed)
    table = np.asarray(s.images, dtype=np.int8 if s.size < 128 else np.int64)
    word = np.array([g], dtype=table.dtype)
    while word.size < n:
        word = table[word].ravel()
    return word[:n]


def fixed_point_prefix(s: Substitution, seed: Optional[str], n: int) -> Tuple[str, ...]:
    return tuple(s.alphabet[x] for x in fixed_point_indices(s, seed, n))


class HeightResult(NamedTuple):
    height: int
    return_gcd: int
    horizon: int
    seed: str
    power: int


def height(s: Substitution, seed: Optional[str] = None, start: Optional[int] = None,
           max_length: int = 1 << 24) -> HeightResult:
    """Height of a primitive aperiodic substitution.

    ``g`` is the gcd of the return times to the seed letter in the fixed point,
    computed on prefixes of doubling length until unchanged for two doublings;
    the height is the largest divisor of ``g`` coprime to ``q``. When no
    letter starts its own image, the least power of ``S`` with one is used
    (same orbit closure).
    """
    power = 1
    base = s
    if seed is None:
        while not any(base.images[g][0] == g for g in range(base.size)):
            power += 1
            if power > s.size:
                raise NoFixedPointError("no power of the substitution has a fixed point seed")
            base = s.power(power)
    g_seed = _seed_for(base, seed)
    length = start or s.length**6
    previous = []
    g = 0
    while True:
        word = fixed_point_indices(base, base.alphabet[g_seed], length)
        returns = np.flatnonzero(word[1:] == word[0]) + 1
        g = int(np.gcd.reduce(returns)) if returns.size else 0
        previous.append(g)
        if len(previous) >= 3 and previous[-1] == previous[-2] == previous[-3] and g > 0:
            break
        if length >= max_length:
            break
        length *= 2
    h = g
    while math.gcd(h, s.length) != 1:
        h //= math.gcd(h, s.length)
    return HeightResult(max(h, 1), g, length, base.alphabet[g_seed], power)
