"""
HOMFLY-PT polynomial of braid closures by skein expansion.

Convention: a P(D-) - a^-1 P(D+) = (q - q^-1) P(D0), P(unknot) = 1. The
expansion switches the first crossing met from below while walking the
closure, until every diagram is descending and therefore an unlink.
"""
import threading
from functools import lru_cache
from typing import Dict, List, Optional

from sympy.polys.domains import ZZ
from sympy.polys.fields import field

from config import settings
from knots.braid_model import link_components, parse_braid, strand_permutation
from schemas.braid import BraidLetter, BraidWord
from schemas.homology import HomologyTable
from schemas.knot_polynomial import HomflyPolynomial, LaurentAQ
from services.metrics import skein_subproblems_total
from services.observability import observability_service
from workflows.error_handler import IdentityViolation, SkeinRecursionError

K, _a, _q = field("a,q", ZZ)
_z = _q - 1 / _q
_circle = (_a - 1 / _a) / _z

# normalised braid word -> P as an element of K
_subproblems: Dict[BraidWord, object] = {}
_subproblem_lock = threading.Lock()


def first_undercrossing(word: BraidWord) -> Optional[int]:
    """
    Index of the first letter met as the under strand, or None if descending.

    Components are walked in order of their lowest strand position, each from
    the bottom of that position. At sigma_i the strand entering at position i
    is over; at sigma_i^-1 the one entering at i + 1.
    """
    permutation = strand_permutation(word)
    seen = set()
    visited_positions = set()
    for start in range(1, word.strands + 1):
        if start in visited_positions:
            continue
        position = start
        while True:
            visited_positions.add(position)
            for idx, letter in enumerate(word.letters):
                if position == letter.index:
                    over = letter.sign > 0
                    next_position = position + 1
                elif position == letter.index + 1:
                    over = letter.sign < 0
                    next_position = position - 1
                else:
                    continue
                if idx not in seen:
                    if not over:
                        return idx
                    seen.add(idx)
                position = next_position
            if position == start:
                break
    return None


def _switch(word: BraidWord, idx: int) -> BraidWord:
    letters = list(word.letters)
    letters[idx] = BraidLetter(index=letters[idx].index, sign=-letters[idx].sign)
    return BraidWord(strands=word.strands, letters=tuple(letters))


def _smooth(word: BraidWord, idx: int) -> BraidWord:
    return BraidWord(strands=word.strands, letters=word.letters[:idx] + word.letters[idx + 1:])


def _inverse(first: BraidLetter, second: BraidLetter) -> bool:
    return first.index == second.index and first.sign == -second.sign


def normalise(word: BraidWord) -> BraidWord:
    """Cancel adjacent inverse letters, across the closure too; letters are never rotated."""
    letters: List[BraidLetter] = []
    for letter in word.letters:
        if letters and _inverse(letters[-1], letter):
            letters.pop()
        else:
            letters.append(letter)
    while len(letters) >= 2 and _inverse(letters[0], letters[-1]):
        letters = letters[1:-1]
    if len(letters) == len(word.letters):
        return word
    return BraidWord(strands=word.strands, letters=tuple(letters))


def clear_subproblems():
    with _subproblem_lock:
        _subproblems.clear()


def _expand(word: BraidWord):
    """
    Skein expansion over normalised words, each evaluated once.

    Children are the switched and smoothed words at the first undercrossing;
    a word is combined once both children are known.
    """
    with _subproblem_lock:
        if len(_subproblems) > settings.SKEIN_RECURSION_LIMIT:
            _subproblems.clear()
        root = normalise(word)
        pending: List[BraidWord] = [root]
        evaluated = 0
        while pending:
            current = pending[-1]
            if current in _subproblems:
                pending.pop()
                continue
            idx = first_undercrossing(current)
            if idx is None:
                value = _circle ** (link_components(current) - 1)
            else:
                switched = normalise(_switch(current, idx))
                smoothed = normalise(_smooth(current, idx))
                missing = [w for w in (switched, smoothed) if w not in _subproblems]
                if missing:
                    pending.extend(missing)
                    continue
                if current.letters[idx].sign > 0:
                    # P(D+) = a^2 P(D-) - a z P(D0)
                    value = _a**2 * _subproblems[switched] - _a * _z * _subproblems[smoothed]
                else:
                    # P(D-) = a^-2 P(D+) + a^-1 z P(D0)
                    value = _subproblems[switched] / _a**2 + _z * _subproblems[smoothed] / _a
            _subproblems[current] = value
            pending.pop()
            evaluated += 1
            if evaluated > settings.SKEIN_RECURSION_LIMIT:
                raise SkeinRecursionError(
                    f"skein expansion of {word} exceeded {settings.SKEIN_RECURSION_LIMIT} sub-problems"
                )
        skein_subproblems_total.inc(evaluated)
        return _subproblems[root]


def _to_laurent(value) -> LaurentAQ:
    numer, denom = value.numer, value.denom
    if len(denom.terms()) != 1:
        raise IdentityViolation(f"{value} is not a Laurent polynomial")
    (da, dq), dc = denom.terms()[0]
    terms = []
    for (na, nq), nc in numer.terms():
        if nc % dc:
            raise IdentityViolation(f"{value} has a non-integral coefficient")
        terms.append((na - da, nq - dq, int(nc // dc)))
    return LaurentAQ(terms=tuple(terms))


@lru_cache(maxsize=1024)
def homfly(word: BraidWord) -> HomflyPolynomial:
    """
    HOMFLY-PT polynomial of the braid closure.

    Returns:
        HomflyPolynomial with the smallest power of (q - q^-1) in the
        denominator; that power is 0 for knots.
    """
    value = _expand(word)
    components = link_components(word)
    for power in range(components):
        scaled = value * _z**power
        if len(scaled.denom.terms()) == 1:
            result = HomflyPolynomial(numerator=_to_laurent(scaled), z_power=power)
            observability_service.log_debug(f"P({word}) = {result.to_text()}")
            return result
    raise IdentityViolation(f"P({word}) has a denominator beyond (q - q^-1)^{components - 1}")


def homfly_from_text(text: str, strands: Optional[int] = None) -> HomflyPolynomial:
    return homfly(parse_braid(text, strands))


def euler_characteristic(table: HomologyTable, mode: str = "reduced", sl_rank: Optional[int] = None) -> LaurentAQ:
    """
    Signed generating function sum (-1)^((k-j)/2) a^j q^i rank.

    With sl_rank = n the a-grading is folded in: a^j q^i -> q^(i + n j).
    Torsion is ignored. ``mode`` only labels the table; comparison with P
    differs by the factor -1/(q - q^-1) in the unreduced case.
    """
    if mode not in ("reduced", "unreduced"):
        raise ValueError(f"unknown mode {mode!r}")
    terms = []
    for entry in table.entries:
        if (entry.k - entry.j) % 2:
            raise IdentityViolation(f"odd k - j at {entry.degree}")
        if not entry.rank:
            continue
        sign = -1 if ((entry.k - entry.j) // 2) % 2 else 1
        if sl_rank is None:
            terms.append((entry.j, entry.q, sign * entry.rank))
        else:
            terms.append((0, entry.q + sl_rank * entry.j, sign * entry.rank))
    return LaurentAQ(terms=tuple(terms))


def expected_euler(
    polynomial: HomflyPolynomial, mode: str, q_max: Optional[int] = None, sl_rank: Optional[int] = None
) -> LaurentAQ:
    """
    What the Euler characteristic of a table must equal.

    Reduced: P; unreduced: -P / (q - q^-1). Rational values are expanded as
    power series in q and cut after q^q_max. With sl_rank the reduced value
    is specialised at a = q^n.
    """
    if sl_rank is not None:
        if mode != "reduced":
            raise ValueError("sl(n) comparisons are reduced only")
        return specialize_sln(polynomial, sl_rank)
    target = polynomial if mode == "reduced" else polynomial.divided_by_z(sign=-1)
    if q_max is None:
        if not target.is_laurent:
            raise ValueError("a q cut-off is needed to expand a rational value")
        return target.numerator
    return target.expand_in_q(q_max)


def specialize_sln(polynomial: HomflyPolynomial, n: int) -> LaurentAQ:
    """a -> q^n"""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return polynomial.specialize_sln(n)


def skein_identity_holds(word: BraidWord, idx: int) -> bool:
    """a P(D-) - a^-1 P(D+) = (q - q^-1) P(D0) at letter idx"""
    letter = word.letters[idx]
    original, switched, smoothed = _expand(word), _expand(_switch(word, idx)), _expand(_smooth(word, idx))
    plus, minus = (original, switched) if letter.sign > 0 else (switched, original)
    return _a * minus - plus / _a == _z * smoothed
