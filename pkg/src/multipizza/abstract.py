"""Abstract (multi)pizzas: the combinatorial data left after forgetting arcs.

Two geometric multipizzas are combinatorially equivalent exactly when their
abstract data coincide under some admissible re-indexing of the slices, so
equality of :class:`AbstractMultipizza` objects (plus the search over
rotations, reversal and optional column permutations) decides equivalence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import InputError
from .scalars import AffineMap, Segment, format_ext, parse_ext

A_END, B_END, NONE_END = "a_end", "b_end", "none"
_SIDE_TO_END = {"left": A_END, "right": B_END, "none": NONE_END}
_FLIP_END = {A_END: B_END, B_END: A_END, NONE_END: NONE_END}
SIGN_TEXT = {1: "+", -1: "-", 0: "0"}
TEXT_SIGN = {"+": 1, "-": -1, "0": 0}

MAX_PERMUTED_COLUMNS = 8


@dataclass(frozen=True)
class AbstractColumn:
    Q: Segment
    mu: AffineMap
    sign: int

    def reversed(self) -> "AbstractColumn":
        return AbstractColumn(self.Q.reversed(), self.mu, self.sign)

    def to_json(self):
        return {"Q": self.Q.to_json(), "mu": self.mu.to_json(), "sign": SIGN_TEXT[self.sign]}

    @classmethod
    def from_json(cls, data) -> "AbstractColumn":
        return cls(Segment.from_json(data["Q"]), AffineMap.from_json(data["mu"]), TEXT_SIGN[data["sign"]])

    def __str__(self):
        return f"Q={self.Q} mu={self.mu} sign={SIGN_TEXT[self.sign]}"


@dataclass(frozen=True)
class AbstractSlice:
    beta: Fraction
    support: str
    columns: Tuple[AbstractColumn, ...]

    def reversed(self) -> "AbstractSlice":
        return AbstractSlice(self.beta, _FLIP_END[self.support],
                             tuple(c.reversed() for c in self.columns))

    def permuted(self, perm: Sequence[int]) -> "AbstractSlice":
        return AbstractSlice(self.beta, self.support, tuple(self.columns[p] for p in perm))


@dataclass(frozen=True)
class AbstractMultipizza:
    slices: Tuple[AbstractSlice, ...]
    cyclic: bool = False

    @property
    def betas(self) -> Tuple[Fraction, ...]:
        return tuple(s.beta for s in self.slices)

    @property
    def n(self) -> int:
        return len(self.slices[0].columns) if self.slices else 0

    def reversed(self) -> "AbstractMultipizza":
        return AbstractMultipizza(tuple(s.reversed() for s in reversed(self.slices)), self.cyclic)

    def rotated(self, k: int) -> "AbstractMultipizza":
        return AbstractMultipizza(self.slices[k:] + self.slices[:k], self.cyclic)

    def permuted(self, perm: Sequence[int]) -> "AbstractMultipizza":
        return AbstractMultipizza(tuple(s.permuted(perm) for s in self.slices), self.cyclic)

    def column(self, nu: int) -> "AbstractMultipizza":
        return self.permuted([nu])

    def to_json(self):
        return {
            "betas": [format_ext(b) for b in self.betas],
            "slices": [{"support": s.support, "columns": [c.to_json() for c in s.columns]}
                       for s in self.slices],
            "cyclic": self.cyclic,
        }

    @classmethod
    def from_json(cls, data) -> "AbstractMultipizza":
        betas = [parse_ext(b) for b in data["betas"]]
        if len(betas) != len(data["slices"]):
            raise InputError("betas and slices have different lengths")
        slices = tuple(
            AbstractSlice(b, s["support"], tuple(AbstractColumn.from_json(c) for c in s["columns"]))
            for b, s in zip(betas, data["slices"]))
        return cls(slices, bool(data.get("cyclic", False)))

    def table(self) -> str:
        lines = []
        for i, s in enumerate(self.slices):
            cols = "; ".join(str(c) for c in s.columns)
            lines.append(f"T{i + 1}: beta={format_ext(s.beta)} support={s.support} | {cols}")
        return "\n".join(lines)


AbstractPizza = AbstractMultipizza


# ---------------------------------------------------------------------------
# equivalence


class Verdict(Enum):
    EQUIVALENT = "EQUIVALENT"
    NOT_EQUIVALENT = "NOT_EQUIVALENT"


CLAUSES = ("i", "ii", "iii", "iv")


@dataclass(frozen=True)
class Alignment:
    offset: int = 0
    reversed: bool = False
    permutation: Optional[Tuple[int, ...]] = None
    sign_flips: Optional[Tuple[int, ...]] = None

    def apply(self, B: AbstractMultipizza) -> AbstractMultipizza:
        out = B.reversed() if self.reversed else B
        out = out.rotated(self.offset) if self.offset else out
        return out.permuted(self.permutation) if self.permutation is not None else out

    def to_json(self):
        data = {"offset": self.offset, "reversed": self.reversed}
        if self.permutation is not None:
            data["permutation"] = list(self.permutation)
        if self.sign_flips is not None:
            data["sign_flips"] = list(self.sign_flips)
        return data


@dataclass(frozen=True)
class Failure:
    clause: str
    slice: int
    nu: Optional[int]
    detail: str

    def to_json(self):
        return {"clause": self.clause, "slice": self.slice, "nu": self.nu, "detail": self.detail}

    def rank(self) -> Tuple[int, int, int]:
        """How far an alignment got before failing (larger = better partial match)."""
        return (self.slice, CLAUSES.index(self.clause), -1 if self.nu is None else self.nu)


@dataclass(frozen=True)
class EquivalenceCertificate:
    verdict: Verdict
    alignment: Optional[Alignment] = None
    failure: Optional[Failure] = None
    tried: int = 0
    allow_sign_flip: bool = True

    @property
    def equivalent(self) -> bool:
        return self.verdict is Verdict.EQUIVALENT

    def replay(self, A: AbstractMultipizza, B: AbstractMultipizza) -> bool:
        """Re-check the recorded alignment (or the recorded failure under it)."""
        if self.alignment is None:
            return False
        found = first_failure(A, self.alignment.apply(B), self.allow_sign_flip)
        return found is None if self.equivalent else found == self.failure

    def to_json(self):
        data = {"verdict": self.verdict.value, "alignments_tried": self.tried}
        if self.alignment is not None:
            data["alignment"] = self.alignment.to_json()
        if self.failure is not None:
            data["failure"] = self.failure.to_json()
        return data


def first_failure(A: AbstractMultipizza, B: AbstractMultipizza,
                  allow_sign_flip: bool = True) -> Optional[Failure]:
    """First violated clause walking the slices in order (all four clauses per slice).

    With ``allow_sign_flip`` each function may have all its signs negated at
    once (f and -f are contact equivalent); the flip is fixed by the first
    slice where the signs are nonzero.
    """
    flips: dict = {}
    for i, (s, t) in enumerate(zip(A.slices, B.slices)):
        if s.beta != t.beta:
            return Failure("i", i, None, f"beta {format_ext(s.beta)} vs {format_ext(t.beta)}")
        if s.support != t.support:
            return Failure("ii", i, None, f"supporting side {s.support} vs {t.support}")
        for nu, (c, d) in enumerate(zip(s.columns, t.columns)):
            if c.Q != d.Q:
                return Failure("iii", i, nu, f"segment {c.Q} vs {d.Q}")
            if c.mu != d.mu:
                return Failure("iii", i, nu, f"width {c.mu} vs {d.mu}")
        for nu, (c, d) in enumerate(zip(s.columns, t.columns)):
            if c.sign == d.sign == 0:
                continue
            if allow_sign_flip and c.sign != 0 and d.sign != 0 and nu not in flips:
                flips[nu] = c.sign * d.sign
            if c.sign != flips.get(nu, 1) * d.sign:
                return Failure("iv", i, nu, f"sign {SIGN_TEXT[c.sign]} vs {SIGN_TEXT[d.sign]}")
    if len(A.slices) != len(B.slices):
        return Failure("i", min(len(A.slices), len(B.slices)), None,
                       f"{len(A.slices)} slices vs {len(B.slices)} slices")
    return None


def sign_flips(A: AbstractMultipizza, B: AbstractMultipizza) -> Tuple[int, ...]:
    """Per-function factor (+1 or -1) relating the signs of two aligned multipizzas."""
    out = []
    for nu in range(A.n):
        f = 1
        for s, t in zip(A.slices, B.slices):
            if s.columns[nu].sign and t.columns[nu].sign:
                f = s.columns[nu].sign * t.columns[nu].sign
                break
        out.append(f)
    return tuple(out)


def alignments(A: AbstractMultipizza, B: AbstractMultipizza, allow_reversal: bool,
               permute_columns: bool = False) -> List[Alignment]:
    offsets = range(len(B.slices)) if B.cyclic and B.slices else [0]
    orientations = [False, True] if allow_reversal else [False]
    perms: List[Optional[Tuple[int, ...]]] = [None]
    if permute_columns:
        if B.n > MAX_PERMUTED_COLUMNS:
            raise InputError(f"column permutation search is limited to {MAX_PERMUTED_COLUMNS} functions")
        perms = [tuple(p) for p in itertools.permutations(range(B.n))]
    return [Alignment(o, r, p) for r in orientations for o in offsets for p in perms]


def combinatorial_equiv(A: AbstractMultipizza, B: AbstractMultipizza, allow_reversal: bool = True,
                        permute_columns: bool = False,
                        allow_sign_flip: bool = True) -> EquivalenceCertificate:
    if A.n != B.n:
        raise InputError(f"multipizzas have {A.n} and {B.n} functions")
    if A.cyclic != B.cyclic:
        raise InputError("cannot compare a cyclic multipizza with a linear one")
    best: Optional[Tuple[Failure, Alignment]] = None
    tried = 0
    for al in alignments(A, B, allow_reversal, permute_columns):
        tried += 1
        aligned = al.apply(B)
        fail = first_failure(A, aligned, allow_sign_flip)
        if fail is None:
            flips = sign_flips(A, aligned) if allow_sign_flip else None
            al = Alignment(al.offset, al.reversed, al.permutation, flips)
            return EquivalenceCertificate(Verdict.EQUIVALENT, al, None, tried, allow_sign_flip)
        if best is None or fail.rank() > best[0].rank():
            best = (fail, al)
    return EquivalenceCertificate(Verdict.NOT_EQUIVALENT, best[1], best[0], tried, allow_sign_flip)
