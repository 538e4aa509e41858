"""Exhaustive search for distinct curve classes sharing one character."""

from __future__ import annotations

import itertools
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .traces import fricke_char
from .words import (
    CurveClass,
    SingleGeneratorError,
    canonical_class,
    enumerate_classes,
    exponent_vectors,
    from_exponents,
    reverse_class,
)

MAX_GR_LENGTH = 20


def gr_nonsingular(v: Sequence[int]) -> bool:
    """No entry equals the sum over an index subset other than its own singleton.

    Checks all 2^p subsets, so p is capped at 20.
    """
    p = len(v)
    if any(r == 0 for r in v):
        raise ValueError("entries must be nonzero")
    if p > MAX_GR_LENGTH:
        raise ValueError(f"vector too long for exhaustive subset check (p = {p} > {MAX_GR_LENGTH})")
    entries = set(v)
    for mask in range(1 << p):
        total = 0
        for j in range(p):
            if mask >> j & 1:
                total += v[j]
        if total not in entries:
            continue
        for k in range(p):
            if v[k] == total and mask != 1 << k:
                return False
    return True


def gr_nonsingular_both(c: CurveClass) -> bool:
    try:
        m, n = exponent_vectors(c.canonical)
    except SingleGeneratorError:
        return False
    return gr_nonsingular(m) and gr_nonsingular(n)


@dataclass(frozen=True)
class MemberFlags:
    is_reversal_of_first: bool
    gr_nonsingular_both_vectors: bool
    self_intersection: int | None = None


@dataclass
class TupleReport:
    key: str
    members: list[CurveClass]
    flags: list[MemberFlags] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "members": [str(m) for m in self.members],
            "flags": {
                str(m): {
                    "is_reversal_of_first": f.is_reversal_of_first,
                    "gr_nonsingular_both_vectors": f.gr_nonsingular_both_vectors,
                    "self_intersection": f.self_intersection,
                }
                for m, f in zip(self.members, self.flags)
            },
        }


@dataclass(frozen=True)
class SearchConfig:
    max_len: int
    rank: int = 2
    include_powers: bool = False
    width: int = 1
    seed: int = 0
    annotate_intersections: bool = False

    def __post_init__(self):
        if self.max_len < 2:
            raise ValueError("max_len must be >= 2")
        if self.rank != 2:
            raise ValueError("exact search is implemented for rank 2")


def _keys_for(letters_list: list[tuple[int, ...]]) -> list[str]:
    from .words import CyclicWord

    return [str(fricke_char(CyclicWord(ls, 2))) for ls in letters_list]


def _partitions(classes: list[CurveClass]) -> list[list[CurveClass]]:
    groups: dict[tuple[int, int], list[CurveClass]] = defaultdict(list)
    for c in classes:
        groups[(len(c), c.letters[0])].append(c)
    return [groups[k] for k in sorted(groups)]


def bucket_classes(classes: Iterable[CurveClass], width: int = 1) -> dict[str, list[CurveClass]]:
    """Map canonical polynomial string -> sorted member classes.

    Work is partitioned by (length, leading letter); the merged result does
    not depend on ``width``.
    """
    classes = list(classes)
    parts = _partitions(classes)
    payload = [[c.letters for c in part] for part in parts]
    if width > 1 and len(parts) > 1:
        with ProcessPoolExecutor(max_workers=width) as pool:
            keyed = list(pool.map(_keys_for, payload))
    else:
        keyed = [_keys_for(p) for p in payload]
    buckets: dict[str, list[CurveClass]] = defaultdict(list)
    for part, keys in zip(parts, keyed):
        for c, k in zip(part, keys):
            buckets[k].append(c)
    return {k: sorted(v) for k, v in buckets.items()}


def _flags(members: list[CurveClass], annotate: bool) -> list[MemberFlags]:
    from .intersections import self_intersection

    first = members[0]
    out = []
    for m in members:
        si = None
        if annotate and not m.is_power:
            si = self_intersection(m).count
        out.append(MemberFlags(reverse_class(m) == first, gr_nonsingular_both(m), si))
    return out


def search_tuples(cfg: SearchConfig) -> list[TupleReport]:
    """Every bucket with at least two members, ordered by its least member."""
    classes = enumerate_classes(cfg.max_len, cfg.rank, include_powers=cfg.include_powers)
    buckets = bucket_classes(classes, cfg.width)
    multi = [(members[0], key, members) for key, members in buckets.items() if len(members) >= 2]
    multi.sort(key=lambda t: (len(t[0]), t[0].letters))
    return [TupleReport(key, members, _flags(members, cfg.annotate_intersections)) for _, key, members in multi]


def bucket_histogram(buckets: dict[str, list[CurveClass]]) -> dict[tuple[int, int], int]:
    """(length of least member, bucket size) -> number of buckets."""
    hist: dict[tuple[int, int], int] = defaultdict(int)
    for members in buckets.values():
        hist[(len(members[0]), len(members))] += 1
    return dict(sorted(hist.items()))


# --------------------------------------------------------------------------
# Verdicts


@dataclass
class Verdict:
    name: str
    checked: int
    violations: list[dict]
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "checked": self.checked, "violations": self.violations, **self.details}


def horowitz_primitive_check(m: int, n: int, max_len: int, buckets: dict[str, list[CurveClass]] | None = None) -> Verdict:
    """The bucket of a^m b^n among classes of length <= max_len must be a singleton."""
    if (m, n) == (0, 0):
        raise ValueError("(m, n) must not be (0, 0)")
    if abs(m) + abs(n) > max_len:
        raise ValueError("a^m b^n longer than max_len")
    target = canonical_class(from_exponents((m,), (n,)) if m and n else _single(m, n))
    if buckets is None:
        buckets = bucket_classes(enumerate_classes(max_len, 2))
    key = str(fricke_char(target))
    members = buckets.get(key, [])
    violations = [{"class": str(c), "key": key} for c in members if c != target]
    if target not in members:
        violations.append({"class": str(target), "key": key, "reason": "missing from its own bucket"})
    return Verdict(f"horowitz({m},{n})", len(members), violations, {"bucket": [str(c) for c in members]})


def _single(m: int, n: int):
    from .words import Word, letter

    if n == 0:
        return Word.reduced([letter(0, 1 if m > 0 else -1)] * abs(m))
    return Word.reduced([letter(1, 1 if n > 0 else -1)] * abs(n))


def gr_filter_check(reports: Iterable[TupleReport]) -> Verdict:
    """Members whose exponent vectors are both nonsingular may only share a bucket with their reversal."""
    violations = []
    checked = 0
    for rep in reports:
        for c in rep.members:
            if not gr_nonsingular_both(c):
                continue
            checked += 1
            rev = reverse_class(c)
            bad = [str(o) for o in rep.members if o != c and o != rev]
            if bad:
                violations.append({"member": str(c), "key": rep.key, "mates": bad})
    return Verdict("gr-filter", checked, violations)


def mcshane_character_check(reports: Iterable[TupleReport]) -> Verdict:
    """Simple classes must not share a character with any other class."""
    from .geometry import is_peripheral
    from .intersections import is_simple

    violations = []
    checked = 0
    for rep in reports:
        for c in rep.members:
            if c.is_power or is_peripheral(c):
                continue
            checked += 1
            if is_simple(c):
                violations.append({"member": str(c), "key": rep.key, "mates": [str(o) for o in rep.members if o != c]})
    return Verdict("mcshane-character", checked, violations)


def reversal_closure_violations(reports: Iterable[TupleReport]) -> list[str]:
    """Members whose reversal class lands outside their bucket."""
    bad = []
    for rep in reports:
        members = set(rep.members)
        for c in rep.members:
            if reverse_class(c) not in members:
                bad.append(str(c))
    return bad


def pairs(reports: Iterable[TupleReport]):
    for rep in reports:
        yield from itertools.combinations(rep.members, 2)
