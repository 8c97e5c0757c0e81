"""Curves on a genus-g surface and mapping-class actions.

Two levels.  The homology engine is exact and always available: classes
are integer vectors in the symplectic basis (a1, b1, ..., ag, bg) and Dehn
twists act by transvection.  The word level works in the one-relator
surface group at desk scale: Dehn's algorithm for reduction and conjugacy,
plus a geometric intersection oracle that counts linked axis pairs on the
boundary circle of the universal cover.

Curve words are tuples of nonzero signed integers: letter 2i-1 is a_i,
letter 2i is b_i, negation is inversion.  In text form, ``a1 B2`` style
tokens are concatenated with uppercase meaning inverse.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import (
    BadAlpha,
    LengthBudgetExceeded,
    LengthMismatch,
    MalformedMap,
    NotNontrivial,
    ParseError,
    ZeroClass,
)

__all__ = [
    "HomologyClass",
    "CurveWord",
    "MappingClassWord",
    "Certificate",
    "algebraic_intersection",
    "twist_action",
    "mcg_apply",
    "acts_nontrivially",
    "find_second_curve",
    "dehn_reduce",
    "conjugacy_equal",
    "geometric_intersection_oracle",
    "basis_class",
    "word_to_homology",
    "parse_curve_word",
    "format_curve_word",
]

HomologyClass = tuple  # length 2g, integer entries
CurveWord = tuple  # nonzero signed generator indices


class Certificate(enum.Enum):
    CertifiedNontrivial = "CertifiedNontrivial"
    Inconclusive = "Inconclusive"


# -- homology engine ---------------------------------------------------------


def _check_lengths(x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) != len(y) or len(x) % 2 != 0 or not x:
        raise LengthMismatch(f"incompatible vector lengths {len(x)} and {len(y)}")
    return len(x) // 2


def basis_class(letter: int, g: int) -> HomologyClass:
    """Homology class of a single generator (signed letter index)."""
    coords = [0] * (2 * g)
    coords[abs(letter) - 1] = 1 if letter > 0 else -1
    return tuple(coords)


def algebraic_intersection(x: HomologyClass, y: HomologyClass) -> int:
    g = _check_lengths(x, y)
    return sum(x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i] for i in range(g))


def twist_action(alpha: HomologyClass, x: HomologyClass, t: int = 1) -> HomologyClass:
    """Transvection: the homology action of the t-fold Dehn twist about a
    curve of class alpha."""
    _check_lengths(alpha, x)
    k = t * algebraic_intersection(x, alpha)
    return tuple(xi + k * ai for xi, ai in zip(x, alpha))


@dataclass(frozen=True)
class MappingClassWord:
    """Composition of Dehn twists; letters apply right to left."""

    letters: tuple  # ((curve, exponent), ...); curve is a class or a word
    g: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(self.letters))
        for curve, exp in self.letters:
            if exp == 0:
                raise MalformedMap("twist exponents must be nonzero")

    def curve_class(self, curve) -> HomologyClass:
        if isinstance(curve, tuple) and curve and isinstance(curve[0], int) and any(
            abs(x) > 0 for x in curve
        ) and len(curve) != 2 * self.g:
            # A word (signed letters); abelianize.
            return word_to_homology(curve, self.g)
        if len(curve) == 2 * self.g:
            return tuple(curve)
        return word_to_homology(curve, self.g)

    def inverse(self) -> "MappingClassWord":
        return MappingClassWord(
            tuple((curve, -exp) for curve, exp in reversed(self.letters)), self.g
        )


def word_to_homology(w: CurveWord, g: int) -> HomologyClass:
    coords = [0] * (2 * g)
    for letter in w:
        if letter == 0 or abs(letter) > 2 * g:
            raise ParseError(f"letter {letter} outside generator range for genus {g}")
        coords[abs(letter) - 1] += 1 if letter > 0 else -1
    return tuple(coords)


def mcg_apply(phi: MappingClassWord, x: HomologyClass) -> HomologyClass:
    if len(x) != 2 * phi.g:
        raise LengthMismatch(f"class length {len(x)} does not match genus {phi.g}")
    out = tuple(x)
    for curve, exp in reversed(phi.letters):
        out = twist_action(phi.curve_class(curve), out, exp)
    return out


def acts_nontrivially(phi: MappingClassWord, gamma: HomologyClass) -> Certificate:
    if all(v == 0 for v in gamma):
        raise ZeroClass("the zero class carries no curve")
    image = mcg_apply(phi, gamma)
    minus = tuple(-v for v in gamma)
    if image != tuple(gamma) and image != minus:
        return Certificate.CertifiedNontrivial
    return Certificate.Inconclusive


def find_second_curve(
    phi: MappingClassWord, gamma: HomologyClass, alpha: HomologyClass
):
    """A second curve moved by phi: alpha itself when certified, otherwise
    the twist of gamma about alpha, whose pairing with gamma is the square
    of the original pairing and hence nonzero."""
    pairing = algebraic_intersection(gamma, alpha)
    if pairing == 0:
        raise BadAlpha("auxiliary curve must pair nontrivially with gamma")
    if acts_nontrivially(phi, gamma) is not Certificate.CertifiedNontrivial:
        raise NotNontrivial("phi is not certified to move gamma")
    if acts_nontrivially(phi, alpha) is Certificate.CertifiedNontrivial:
        return alpha, "Direct"
    return twist_action(alpha, gamma, 1), "Twisted"


# -- word level: Dehn's algorithm --------------------------------------------


def _free_reduce(w: Iterable[int]) -> list[int]:
    out: list[int] = []
    for letter in w:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return out


def _cyclic_reduce(w: Sequence[int]) -> tuple[int, ...]:
    w = _free_reduce(w)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def _inverse_word(w: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(w))


def surface_relator(g: int) -> tuple[int, ...]:
    r: list[int] = []
    for i in range(g):
        a, b = 2 * i + 1, 2 * i + 2
        r.extend((a, b, -a, -b))
    return tuple(r)


def _relator_pieces(g: int, min_len: int):
    """Map from cyclic relator subwords of length >= min_len to their
    strictly shorter (or equal, for half pieces) replacements."""
    table: dict = {}
    R = surface_relator(g)
    for rel in (R, _inverse_word(R)):
        n = len(rel)
        for start in range(n):
            rot = rel[start:] + rel[:start]
            for length in range(min_len, n + 1):
                piece = rot[:length]
                complement = rot[length:]
                table.setdefault(piece, _inverse_word(complement))
    return table


def dehn_reduce(w: CurveWord, g: int) -> CurveWord:
    """Cyclically reduced form with no subword longer than half the surface
    relator; length-nonincreasing and idempotent."""
    if g < 2:
        raise MalformedMap("surface-group reduction needs genus >= 2")
    for letter in w:
        if letter == 0 or abs(letter) > 2 * g:
            raise ParseError(f"letter {letter} outside generator range for genus {g}")
    table = _relator_pieces(g, 2 * g + 1)
    word = _cyclic_reduce(w)
    changed = True
    while changed and word:
        changed = False
        n = len(word)
        doubled = word + word
        for length in range(min(n, 4 * g), 2 * g, -1):
            for start in range(n):
                piece = doubled[start : start + length]
                if piece in table:
                    rest = doubled[start + length : start + n]
                    word = _cyclic_reduce(tuple(rest) + table[piece])
                    changed = True
                    break
            if changed:
                break
    return word


def _half_swaps(word: tuple, g: int) -> set:
    """Words obtained by replacing one half-relator subword by the inverse
    of the complementary half."""
    halves = {}
    R = surface_relator(g)
    for rel in (R, _inverse_word(R)):
        for start in range(len(rel)):
            rot = rel[start:] + rel[:start]
            halves[rot[: 2 * g]] = _inverse_word(rot[2 * g :])
    out = set()
    n = len(word)
    if n < 2 * g:
        return out
    doubled = word + word
    for start in range(n):
        piece = doubled[start : start + 2 * g]
        if piece in halves:
            rest = doubled[start + 2 * g : start + n]
            out.add(_cyclic_reduce(tuple(rest) + halves[piece]))
    return out


def _conjugacy_class_forms(w: CurveWord, g: int, budget: int) -> frozenset:
    if len(w) > budget:
        raise LengthBudgetExceeded(f"word of length {len(w)} exceeds budget {budget}")
    start = dehn_reduce(w, g)
    seen = {start}
    frontier = [start]
    while frontier:
        word = frontier.pop()
        rotations = {word[i:] + word[:i] for i in range(max(len(word), 1))}
        for rot in rotations:
            if rot not in seen:
                seen.add(rot)
                frontier.append(rot)
        for swapped in _half_swaps(word, g):
            reduced = dehn_reduce(swapped, g)
            if reduced not in seen:
                seen.add(reduced)
                frontier.append(reduced)
    return frozenset(seen)


def conjugacy_equal(
    w1: CurveWord, w2: CurveWord, g: int, budget: int = 64, up_to_inverse: bool = False
) -> bool:
    """Free-homotopy (conjugacy) equality via Dehn-reduced rotation closures."""
    forms1 = _conjugacy_class_forms(tuple(w1), g, budget)
    if min(forms1) == min(_conjugacy_class_forms(tuple(w2), g, budget)):
        return True
    if up_to_inverse:
        inv = _inverse_word(tuple(w2))
        return min(forms1) == min(_conjugacy_class_forms(inv, g, budget))
    return False


# -- geometric intersection oracle -------------------------------------------
#
# The universal cover of the genus-g surface is tiled by 4g-gons, one
# vertex class; the cyclic order of the one-vertex rotation system gives
# the circular order of the directions a ray can leave the base vertex in.
# Two closed geodesics intersect once for every pair of lifted axes whose
# endpoint pairs link on the circle at infinity.  Candidate lifts are the
# axes of the cyclic rotations of the two words; linked candidates that
# differ by deck transformations stabilising both axes (left multiplication
# by a power of one word, right by a power of the other, applied to the
# prefix element connecting the two lifts) are the same surface point and
# are merged before counting.


def _direction_order(g: int) -> dict:
    order = []
    for i in range(g):
        a, b = 2 * i + 1, 2 * i + 2
        order.extend((a, b, -a, -b))
    return {letter: pos for pos, letter in enumerate(order)}


class _Ray:
    """Eventually periodic reduced infinite word: finite prefix, then a
    cyclic word repeated forever."""

    __slots__ = ("prefix", "cycle", "offset")

    def __init__(self, cycle, offset=0, prefix=()):
        self.prefix = tuple(prefix)
        self.cycle = tuple(cycle)
        self.offset = offset

    def first(self) -> int:
        if self.prefix:
            return self.prefix[0]
        return self.cycle[self.offset % len(self.cycle)]

    def shift(self) -> "_Ray":
        if self.prefix:
            return _Ray(self.cycle, self.offset, self.prefix[1:])
        return _Ray(self.cycle, (self.offset + 1) % len(self.cycle))

    def prepend(self, letter: int) -> "_Ray":
        return _Ray(self.cycle, self.offset, (letter,) + self.prefix)

    def letters(self, n: int):
        out = []
        r = self
        for _ in range(n):
            out.append(r.first())
            r = r.shift()
        return out


def _same_ray(r1: _Ray, r2: _Ray) -> bool:
    horizon = 2 * (len(r1.cycle) * len(r2.cycle) + len(r1.prefix) + len(r2.prefix)) + 4
    return r1.letters(horizon) == r2.letters(horizon)


def _orient(r1: _Ray, r2: _Ray, r3: _Ray, pos: dict, budget: int) -> int:
    """Circular orientation (+1/-1) of three distinct boundary rays."""
    n = len(pos)
    for _ in range(budget):
        f1, f2, f3 = r1.first(), r2.first(), r3.first()
        if f1 != f2 and f2 != f3 and f1 != f3:
            d2 = (pos[f2] - pos[f1]) % n
            d3 = (pos[f3] - pos[f1]) % n
            return 1 if d2 < d3 else -1
        if f1 == f2 == f3:
            r1, r2, r3 = r1.shift(), r2.shift(), r3.shift()
        elif f1 == f2:
            r1, r2, r3 = r1.shift(), r2.shift(), r3.prepend(-f1)
        elif f1 == f3:
            r1, r2, r3 = r1.shift(), r2.prepend(-f1), r3.shift()
        else:
            r1, r2, r3 = r1.prepend(-f2), r2.shift(), r3.shift()
    raise LengthBudgetExceeded("ray comparison did not resolve within budget")


def _axes_linked(u: CurveWord, v: CurveWord, pos: dict, budget: int) -> bool:
    a1 = _Ray(u)
    b1 = _Ray(_inverse_word(u))
    a2 = _Ray(v)
    b2 = _Ray(_inverse_word(v))
    for p in (a2, b2):
        if _same_ray(a1, p) or _same_ray(b1, p):
            return False  # shared endpoint: same axis, no transverse crossing
    steps = budget * 8 * (len(u) + len(v) + 4)
    return _orient(a1, a2, b1, pos, steps) != _orient(a1, b2, b1, pos, steps)


def geometric_intersection_oracle(
    w1: CurveWord, w2: CurveWord, g: int, budget: int = 16
) -> int:
    """Minimal transverse intersection number of two simple closed curves
    given as surface-group words (simplicity assumed, not checked)."""
    u = dehn_reduce(tuple(w1), g)
    v = dehn_reduce(tuple(w2), g)
    if len(u) > budget or len(v) > budget:
        raise LengthBudgetExceeded(
            f"words of length {len(u)}, {len(v)} exceed budget {budget}"
        )
    if not u or not v:
        return 0
    if conjugacy_equal(u, v, g, budget=max(64, budget), up_to_inverse=True):
        return 0
    pos = _direction_order(g)
    linked = []
    for i in range(len(u)):
        ui = u[i:] + u[:i]
        for j in range(len(v)):
            vj = v[j:] + v[:j]
            if _axes_linked(ui, vj, pos, budget):
                linked.append((i, j))
    return _count_orbits(linked, u, v, g)


def _is_identity(word: Sequence[int], g: int) -> bool:
    return dehn_reduce(tuple(word), g) == ()


def _count_orbits(linked, u: CurveWord, v: CurveWord, g: int) -> int:
    """Merge linked rotation pairs that name the same surface intersection.

    The pair (i, j) corresponds to the lifts p_i^-1 axis(u) and
    q_j^-1 axis(v), with p_i, q_j the length-i and length-j prefixes.  Two
    pairs coincide on the surface exactly when the connecting elements
    e = p_i q_j^-1 satisfy e' = u^k e v^l in the group for some integers
    k, l (deck transformations preserving both axes).
    """
    elements = {
        (i, j): tuple(_free_reduce(u[:i] + _inverse_word(v[:j]))) for i, j in linked
    }
    ab_u = word_to_homology(u, g)
    ab_v = word_to_homology(v, g)
    parent = {pair: pair for pair in linked}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    K = 4
    for idx, p1 in enumerate(linked):
        for p2 in linked[idx + 1 :]:
            if find(p1) == find(p2):
                continue
            e1, e2 = elements[p1], elements[p2]
            diff = tuple(
                a - b
                for a, b in zip(word_to_homology(e2, g), word_to_homology(e1, g))
            )
            for k in range(-K, K + 1):
                merged = False
                for l in range(-K, K + 1):
                    if any(
                        k * au + l * av != d for au, av, d in zip(ab_u, ab_v, diff)
                    ):
                        continue
                    candidate = (
                        (u if k > 0 else _inverse_word(u)) * abs(k)
                        + e1
                        + (v if l > 0 else _inverse_word(v)) * abs(l)
                    )
                    if _is_identity(candidate + _inverse_word(e2), g):
                        parent[find(p2)] = find(p1)
                        merged = True
                        break
                if merged:
                    break
    return len({find(pair) for pair in linked})


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"([aAbB])(\d+)")


def parse_curve_word(text: str, g: int) -> CurveWord:
    """Parse ``a1B2``-style words; uppercase letters are inverses."""
    stripped = re.sub(r"\s+", "", text)
    out = []
    position = 0
    for match in _TOKEN.finditer(stripped):
        if match.start() != position:
            raise ParseError(f"unexpected text in curve word: {stripped[position:]!r}")
        position = match.end()
        kind, index = match.group(1), int(match.group(2))
        if not (1 <= index <= g):
            raise ParseError(f"handle index {index} out of range for genus {g}")
        letter = 2 * index - 1 if kind.lower() == "a" else 2 * index
        if kind.isupper():
            letter = -letter
        out.append(letter)
    if position != len(stripped):
        raise ParseError(f"unexpected text in curve word: {stripped[position:]!r}")
    return tuple(out)


def format_curve_word(w: CurveWord) -> str:
    parts = []
    for letter in w:
        index = (abs(letter) + 1) // 2
        kind = "a" if abs(letter) % 2 == 1 else "b"
        if letter < 0:
            kind = kind.upper()
        parts.append(f"{kind}{index}")
    return "".join(parts)
