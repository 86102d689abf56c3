"""Number-field record snapshots: ingest, validate, query, persist.

Snapshots are line-delimited JSON with all integers written as decimal
strings (discriminants can exceed 64-bit range).  Ingest is all-or-nothing:
either every line parses and validates, or the whole ingest fails with the
offending line numbers.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

__all__ = [
    "FieldRecord",
    "Snapshot",
    "IngestError",
    "ingest",
    "ingest_lines",
    "query",
    "persist",
    "load",
    "fallback_factor",
]

OCTIC_LABELS = {"8T14", "8T23", "8T24", "8T39", "8T40", "8T44"}


class IngestError(ValueError):
    """Raised when a snapshot fails to parse or validate."""


@dataclass(frozen=True)
class FieldRecord:
    """One number field: defining polynomial, factored discriminant, invariants.

    Analytic invariants (h, reg, w) are carried for quartic records only;
    they are ingested data, never computed here.  The regulator is kept as
    the original decimal string (at least 12 significant digits) alongside
    a binary float cache.
    """

    label: str
    degree: int
    coeffs: tuple[int, ...]
    disc: int
    disc_factors: tuple[tuple[int, int], ...]
    galois: str
    r1: int
    r2: int
    h: Optional[int] = None
    reg: Optional[str] = None
    w: Optional[int] = None
    parent_label: Optional[str] = None

    @property
    def reg_float(self) -> float:
        if self.reg is None:
            raise ValueError(f"{self.label}: no regulator present")
        return float(self.reg)

    @property
    def abs_disc(self) -> int:
        return abs(self.disc)

    def validate(self) -> None:
        if not self.label:
            raise IngestError("empty label")
        if self.degree not in (4, 8):
            raise IngestError(f"{self.label}: degree must be 4 or 8")
        if len(self.coeffs) != self.degree + 1 or self.coeffs[-1] != 1:
            raise IngestError(f"{self.label}: polynomial must be monic of the stated degree")
        if self.disc == 0:
            raise IngestError(f"{self.label}: zero discriminant")
        prod = 1
        last_p = 0
        for p, e in self.disc_factors:
            if p <= last_p or e < 1:
                raise IngestError(f"{self.label}: disc_factors must be sorted primes with e >= 1")
            if not _is_prime(p):
                raise IngestError(f"{self.label}: disc factor {p} is not prime")
            prod *= p ** e
            last_p = p
        if prod != abs(self.disc):
            raise IngestError(
                f"{self.label}: disc_factors product {prod} != |disc| {abs(self.disc)}"
            )
        if self.r1 < 0 or self.r2 < 0 or self.r1 + 2 * self.r2 != self.degree:
            raise IngestError(f"{self.label}: signature r1 + 2 r2 != degree")
        if self.degree == 4:
            if self.galois != "4T5":
                raise IngestError(f"{self.label}: quartic records must be 4T5")
            if self.h is None or self.reg is None or self.w is None:
                raise IngestError(f"{self.label}: quartic records need h, reg, w")
            if self.h < 1 or self.w < 1:
                raise IngestError(f"{self.label}: h and w must be positive")
            if len(self.reg.replace("-", "").replace(".", "").lstrip("0")) < 12:
                raise IngestError(f"{self.label}: regulator needs >= 12 significant digits")
            if float(self.reg) <= 0:
                raise IngestError(f"{self.label}: regulator must be positive")
        else:
            if self.galois not in OCTIC_LABELS:
                raise IngestError(f"{self.label}: unknown octic Galois label {self.galois}")
        if not _is_irreducible(self.coeffs):
            raise IngestError(f"{self.label}: polynomial is reducible over the rationals")


def _is_prime(n: int) -> bool:
    from sympy import isprime

    return bool(isprime(n))


@lru_cache(maxsize=4096)
def _is_irreducible(coeffs: tuple[int, ...]) -> bool:
    """Irreducibility over Q for a monic integer polynomial.

    Prescreen: if the factor-degree patterns mod several primes admit no
    common nontrivial sub-sum, the polynomial is irreducible.  Otherwise
    fall back to an exact factorization.
    """
    degree = len(coeffs) - 1
    if degree == 1:
        return True
    from .analytic import factor_mod_p

    candidates = set(range(1, degree))
    checked = 0
    for p in (5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        try:
            pattern = factor_mod_p(coeffs, p)
        except ValueError:
            continue
        if any(mult > 1 for _, mult in pattern):
            continue  # p ramifies; degree pattern unreliable for subset sums
        checked += 1
        degs = [d for d, mult in pattern for _ in range(mult)]
        sums = {0}
        for d in degs:
            sums |= {s + d for s in sums}
        candidates &= sums
        if not candidates:
            return True
        if checked >= 4:
            break
    from sympy import Poly, Symbol

    x = Symbol("x")
    poly = Poly(list(reversed(coeffs)), x)
    _, factors = poly.factor_list()
    return len(factors) == 1 and factors[0][1] == 1


@dataclass(frozen=True)
class Snapshot:
    """Immutable label-indexed collection of validated field records."""

    records: dict[str, FieldRecord]
    provenance: str = ""
    ingest_time: str = ""

    def __post_init__(self):
        for rec in self.records.values():
            if rec.parent_label is not None:
                parent = self.records.get(rec.parent_label)
                if parent is None:
                    raise IngestError(
                        f"{rec.label}: parent {rec.parent_label!r} not in snapshot"
                    )
                if parent.degree != 4 or parent.galois != "4T5":
                    raise IngestError(
                        f"{rec.label}: parent {parent.label} is not an S4-quartic"
                    )
                if rec.degree == 8:
                    q, r = divmod(abs(rec.disc), parent.disc * parent.disc)
                    if r != 0 or q < 1:
                        raise IngestError(
                            f"{rec.label}: |disc| is not parent disc squared times a positive integer"
                        )

    def __len__(self) -> int:
        return len(self.records)

    def parent_of(self, rec: FieldRecord) -> Optional[FieldRecord]:
        if rec.parent_label is None:
            return None
        return self.records[rec.parent_label]


_INT_FIELDS = ("degree", "r1", "r2", "h", "w")
_REQUIRED = ("label", "degree", "coeffs", "disc", "disc_factors", "galois", "r1", "r2")
_ALL_KEYS = set(_REQUIRED) | {"h", "reg", "w", "parent_label"}


def _record_from_obj(obj: dict) -> FieldRecord:
    if not isinstance(obj, dict):
        raise IngestError("record is not an object")
    unknown = set(obj) - _ALL_KEYS
    if unknown:
        raise IngestError(f"unknown keys {sorted(unknown)}")
    missing = [k for k in _REQUIRED if k not in obj]
    if missing:
        raise IngestError(f"missing keys {missing}")
    try:
        rec = FieldRecord(
            label=str(obj["label"]),
            degree=int(obj["degree"]),
            coeffs=tuple(int(c) for c in obj["coeffs"]),
            disc=int(obj["disc"]),
            disc_factors=tuple((int(p), int(e)) for p, e in obj["disc_factors"]),
            galois=str(obj["galois"]),
            r1=int(obj["r1"]),
            r2=int(obj["r2"]),
            h=int(obj["h"]) if obj.get("h") is not None else None,
            reg=str(obj["reg"]) if obj.get("reg") is not None else None,
            w=int(obj["w"]) if obj.get("w") is not None else None,
            parent_label=(
                str(obj["parent_label"]) if obj.get("parent_label") is not None else None
            ),
        )
    except (TypeError, ValueError) as exc:
        raise IngestError(f"malformed field: {exc}") from exc
    rec.validate()
    return rec


def _record_to_obj(rec: FieldRecord) -> dict:
    obj = {
        "label": rec.label,
        "degree": str(rec.degree),
        "coeffs": [str(c) for c in rec.coeffs],
        "disc": str(rec.disc),
        "disc_factors": [[str(p), str(e)] for p, e in rec.disc_factors],
        "galois": rec.galois,
        "r1": str(rec.r1),
        "r2": str(rec.r2),
    }
    if rec.h is not None:
        obj["h"] = str(rec.h)
    if rec.reg is not None:
        obj["reg"] = rec.reg
    if rec.w is not None:
        obj["w"] = str(rec.w)
    if rec.parent_label is not None:
        obj["parent_label"] = rec.parent_label
    return obj


def ingest_lines(lines: Iterable[str], provenance: str = "", ingest_time: str = "") -> Snapshot:
    records: dict[str, FieldRecord] = {}
    errors: list[str] = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
            rec = _record_from_obj(obj)
        except (json.JSONDecodeError, IngestError) as exc:
            errors.append(f"line {lineno}: {exc}")
            continue
        prev = records.get(rec.label)
        if prev is not None and prev != rec:
            errors.append(f"line {lineno}: conflicting duplicate for label {rec.label!r}")
        records[rec.label] = rec
    if errors:
        raise IngestError("; ".join(errors))
    return Snapshot(records=records, provenance=provenance, ingest_time=ingest_time)


def ingest(path: str, provenance: str = "", ingest_time: str = "") -> Snapshot:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise IngestError(f"{path}: {exc}") from exc
    return ingest_lines(lines, provenance=provenance or path, ingest_time=ingest_time)


def query(
    snapshot: Snapshot,
    degree: Optional[int] = None,
    galois_filter: Optional[Iterable[str]] = None,
    max_abs_disc: Optional[int] = None,
) -> list[FieldRecord]:
    labels = set(galois_filter) if galois_filter is not None else None
    out = [
        rec
        for rec in snapshot.records.values()
        if (degree is None or rec.degree == degree)
        and (labels is None or rec.galois in labels)
        and (max_abs_disc is None or rec.abs_disc <= max_abs_disc)
    ]
    out.sort(key=lambda r: (r.abs_disc, r.label))
    return out


_HEADER_TAG = "octic-snapshot/1"


def persist(snapshot: Snapshot, path: str) -> None:
    """Write the snapshot; deterministic, canonical label order, atomic."""
    header = {
        "format": _HEADER_TAG,
        "provenance": snapshot.provenance,
        "ingest_time": snapshot.ingest_time,
        "count": str(len(snapshot.records)),
    }
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(header, sort_keys=True, separators=(",", ":")) + "\n")
            for label in sorted(snapshot.records):
                obj = _record_to_obj(snapshot.records[label])
                fh.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")
        os.replace(tmp, path)
    except OSError as exc:
        raise IngestError(f"{path}: {exc}") from exc


def load(path: str) -> Snapshot:
    """Read a persisted snapshot; refuses truncated or malformed stores."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise IngestError(f"{path}: {exc}") from exc
    if not lines:
        raise IngestError(f"{path}: empty store")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise IngestError(f"{path}: bad header: {exc}") from exc
    if not isinstance(header, dict) or header.get("format") != _HEADER_TAG:
        raise IngestError(f"{path}: not a snapshot store")
    expected = int(header.get("count", "-1"))
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != expected:
        raise IngestError(
            f"{path}: truncated store ({len(body)} records, header says {expected})"
        )
    snap = ingest_lines(
        body,
        provenance=str(header.get("provenance", "")),
        ingest_time=str(header.get("ingest_time", "")),
    )
    return snap


def fallback_factor(n: int) -> tuple[tuple[int, int], ...]:
    """Factor |n| <= 10^18: trial division to 10^6, then a rho-style method.

    Provided for inputs whose discriminants arrive unfactored; results are
    flagged by callers as derived rather than source data.
    """
    if n == 0:
        raise ValueError("cannot factor zero")
    n = abs(n)
    if n > 10**18:
        raise ValueError("fallback factorizer capped at 10^18")
    from sympy import factorint

    return tuple(sorted(factorint(n).items()))
