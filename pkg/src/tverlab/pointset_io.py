"""Point-set text format and machine-readable report records.

Point-set files ("otps" format):

    # optional comments anywhere, blank lines ignored
    otps <dim> <n>
    <d rationals, whitespace separated>   x n rows

Rationals are serialized in lowest terms as ``p/q`` or a bare integer with
the sign on the numerator only; parse(emit(ps)) is the identity and emit
produces a canonical byte-exact form.

Reports are JSON lines, one self-contained record per line: a record that
carries a certificate can be replayed later (by :func:`replay_record`) with
nothing but the exact kernel and the feasibility engine.  Rationals appear
in JSON as their canonical strings.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import InputError, ParseError
from .feasibility import (
    EmptyBlockCertificate,
    FarkasCertificate,
    FeasibilityOutcome,
    SeparationCertificate,
    Witness,
    verify_outcome,
)
from .kernel import Hyperplane, PointSet, Rational, to_rational

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def parse_rational(text: str, line: Optional[int] = None) -> Rational:
    token = text.strip()
    if not _RATIONAL_RE.match(token):
        raise ParseError(f"malformed rational {text!r}", line=line)
    return Rational(token)


def format_rational(value) -> str:
    return str(to_rational(value))


def parse_pointset(text: str) -> PointSet:
    """Parse the otps format; errors carry 1-based line numbers."""
    header = None
    rows: List[Tuple[Rational, ...]] = []
    dim = n = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 3 or parts[0] != "otps":
                raise ParseError(
                    f"expected header 'otps <dim> <n>', got {raw!r}", line=lineno
                )
            try:
                dim, n = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"non-integer header fields in {raw!r}", line=lineno)
            if dim < 1 or n < 0:
                raise ParseError(f"invalid header values dim={dim} n={n}", line=lineno)
            header = (dim, n)
            continue
        tokens = line.split()
        if len(tokens) != dim:
            raise ParseError(
                f"expected {dim} coordinates, got {len(tokens)}", line=lineno
            )
        rows.append(tuple(parse_rational(tok, line=lineno) for tok in tokens))
    if header is None:
        raise ParseError("missing 'otps' header", line=1)
    if len(rows) != n:
        raise ParseError(
            f"header promised {n} rows, found {len(rows)}", line=len(text.splitlines())
        )
    return PointSet(dim, rows)


def emit_pointset(ps: PointSet) -> str:
    """Canonical text form; emit . parse is the identity on it."""
    lines = [f"otps {ps.dim} {len(ps)}"]
    for p in ps.points:
        lines.append(" ".join(format_rational(c) for c in p))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSON encoding of domain values


def jsonable(value):
    """Recursively convert domain values to JSON-encodable structures."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        raise InputError("refusing to serialize a float; everything is rational")
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, PointSet):
        return {
            "dim": value.dim,
            "points": [[format_rational(c) for c in p] for p in value.points],
        }
    if isinstance(value, Hyperplane):
        return {
            "normal": [format_rational(c) for c in value.normal],
            "offset": format_rational(value.offset),
        }
    # rationals (mpq / Fraction) and anything rational-like
    return format_rational(value)


def encode_points(points) -> List[List[str]]:
    return [[format_rational(c) for c in p] for p in points]


def decode_points(data) -> List[Tuple[Rational, ...]]:
    return [tuple(parse_rational(c) for c in row) for row in data]


def outcome_payload(blocks, dim: int, outcome: FeasibilityOutcome) -> Dict:
    """Self-contained, replayable evidence for a feasibility outcome."""
    payload: Dict = {
        "dim": dim,
        "blocks": [encode_points(b) for b in blocks],
        "status": outcome.status,
    }
    if outcome.feasible:
        payload["kind"] = "witness"
        payload["point"] = [format_rational(c) for c in outcome.witness.point]
        payload["coefficients"] = [
            [format_rational(c) for c in coeffs]
            for coeffs in outcome.witness.coefficients
        ]
        return payload
    cert = outcome.certificate
    if isinstance(cert, FarkasCertificate):
        payload["kind"] = "farkas"
        payload["multipliers"] = [format_rational(u) for u in cert.multipliers]
    elif isinstance(cert, SeparationCertificate):
        payload["kind"] = "separating-hyperplane"
        payload["normal"] = [format_rational(c) for c in cert.hyperplane.normal]
        payload["offset"] = format_rational(cert.hyperplane.offset)
        payload["point_side"] = cert.point_side
    elif isinstance(cert, EmptyBlockCertificate):
        payload["kind"] = "empty-block"
        payload["block_index"] = cert.block_index
    else:  # pragma: no cover - no other certificate kinds exist
        raise InputError(f"unknown certificate type {type(cert).__name__}")
    return payload


def payload_outcome(payload: Dict):
    """Decode a payload back into ``(blocks, dim, FeasibilityOutcome)``."""
    blocks = [decode_points(b) for b in payload["blocks"]]
    dim = int(payload["dim"])
    kind = payload["kind"]
    if kind == "witness":
        witness = Witness(
            point=tuple(parse_rational(c) for c in payload["point"]),
            coefficients=tuple(
                tuple(parse_rational(c) for c in coeffs)
                for coeffs in payload["coefficients"]
            ),
        )
        outcome = FeasibilityOutcome("feasible", witness=witness)
    elif kind == "farkas":
        outcome = FeasibilityOutcome(
            "infeasible",
            certificate=FarkasCertificate(
                multipliers=tuple(parse_rational(u) for u in payload["multipliers"])
            ),
        )
    elif kind == "separating-hyperplane":
        outcome = FeasibilityOutcome(
            "infeasible",
            certificate=SeparationCertificate(
                hyperplane=Hyperplane(
                    [parse_rational(c) for c in payload["normal"]],
                    parse_rational(payload["offset"]),
                ),
                point_side=int(payload["point_side"]),
            ),
        )
    elif kind == "empty-block":
        outcome = FeasibilityOutcome(
            "infeasible",
            certificate=EmptyBlockCertificate(block_index=int(payload["block_index"])),
        )
    else:
        raise InputError(f"unknown certificate kind {kind!r}")
    return blocks, dim, outcome


def replay_payload(payload: Dict) -> bool:
    """Re-verify a payload produced by :func:`outcome_payload`.

    Uses only the exact kernel and the feasibility verifiers; no state from
    the original run is needed.
    """
    blocks, dim, outcome = payload_outcome(payload)
    return verify_outcome(blocks, outcome, dim)


# ---------------------------------------------------------------------------
# report records


@dataclass
class ReportRecord:
    """One machine-readable result line tying a command to a claim tag."""

    command: str
    inputs: Dict
    claim: Optional[str]
    outcome: Dict
    certificate: Optional[Dict] = None
    seed: Optional[int] = None
    timing: Optional[float] = None
    persisted: bool = False  # already flushed to --out (checkpointing)

    def to_json_line(self) -> str:
        body = {
            "command": self.command,
            "inputs": jsonable(self.inputs),
            "claim": self.claim,
            "outcome": jsonable(self.outcome),
            "certificate": jsonable(self.certificate),
            "seed": self.seed,
            "timing": self.timing,
        }
        return json.dumps(body, separators=(",", ":"))

    @classmethod
    def from_json_line(cls, line: str) -> "ReportRecord":
        try:
            body = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON record: {exc}") from exc
        return cls(
            command=body.get("command", ""),
            inputs=body.get("inputs", {}),
            claim=body.get("claim"),
            outcome=body.get("outcome", {}),
            certificate=body.get("certificate"),
            seed=body.get("seed"),
            timing=body.get("timing"),
        )


def replay_record(record: ReportRecord) -> Optional[bool]:
    """Replay a record's certificate; None when it carries none."""
    if record.certificate is None:
        return None
    return replay_payload(record.certificate)


def load_records(text: str) -> List[ReportRecord]:
    records = []
    for line in text.splitlines():
        if line.strip():
            records.append(ReportRecord.from_json_line(line))
    return records
