"""Serialisable result rows shared by the CLI's JSON and CSV writers."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import Context, Decimal
from fractions import Fraction
from typing import Iterable

__all__ = ["QUANTITIES", "APPROX_DIGITS", "OutputRecord", "decimal_string", "to_json", "to_csv", "from_json"]

QUANTITIES = ("mean", "pmf", "variance", "bounds", "remainder", "exit_time", "simulation", "verify")
APPROX_DIGITS = 15


def decimal_string(x: Fraction, digits: int = APPROX_DIGITS) -> str:
    """``x`` correctly rounded to ``digits`` significant digits."""
    ctx = Context(prec=digits)
    return str(ctx.divide(Decimal(x.numerator), Decimal(x.denominator)))


@dataclass
class OutputRecord:
    n: int
    quantity: str
    exact: Fraction | None = None
    approx: str | None = None
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}")
        if self.exact is not None and self.approx is None:
            self.approx = decimal_string(self.exact)
        self.metadata = {str(k): str(v) for k, v in self.metadata.items()}

    def to_dict(self) -> dict:
        exact = None
        if self.exact is not None:
            exact = {"num": str(self.exact.numerator), "den": str(self.exact.denominator)}
        return {
            "n": self.n,
            "quantity": self.quantity,
            "exact": exact,
            "approx": self.approx,
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "OutputRecord":
        exact = d.get("exact")
        if exact is not None:
            den = int(exact["den"])
            if den <= 0:
                raise ValueError("denominator must be positive")
            exact = Fraction(int(exact["num"]), den)
        return cls(
            n=int(d["n"]),
            quantity=d["quantity"],
            exact=exact,
            approx=d.get("approx"),
            metadata=d.get("metadata") or {},
        )


def to_json(records: Iterable[OutputRecord]) -> str:
    return json.dumps([r.to_dict() for r in records], indent=2)


def from_json(text: str) -> list[OutputRecord]:
    return [OutputRecord.from_dict(d) for d in json.loads(text)]


def to_csv(records: Iterable[OutputRecord]) -> str:
    """One row per record; metadata keys become extra columns."""
    records = list(records)
    meta_keys = sorted({k for r in records for k in r.metadata})
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "quantity", "exact", "approx", *meta_keys])
    for r in records:
        exact = "" if r.exact is None else f"{r.exact.numerator}/{r.exact.denominator}"
        writer.writerow([r.n, r.quantity, exact, r.approx or "", *(r.metadata.get(k, "") for k in meta_keys)])
    return buf.getvalue()
