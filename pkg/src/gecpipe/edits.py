"""Character-level edit records that make noising reversible.

Every noise operation reports what it changed as (op_id, pos, before,
after) where `pos` is a character offset into the sentence *as it was at
the moment the edit was applied*. Replaying the records in order over the
clean text reproduces the noised text; unwinding them in reverse order
over the noised text restores the clean text exactly. Both directions
verify the expected substring and fail loudly on any mismatch rather than
silently producing a corrupt pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EditIntegrityError

__all__ = ["EditRecord", "EditLog", "apply_edits", "invert_edits"]


@dataclass(frozen=True, slots=True)
class EditRecord:
    op_id: str
    pos: int
    before: str
    after: str

    def to_list(self) -> list:
        return [self.op_id, self.pos, self.before, self.after]

    @classmethod
    def from_list(cls, raw) -> "EditRecord":
        if len(raw) != 4:
            raise EditIntegrityError(f"edit record needs 4 fields, got {len(raw)}")
        op_id, pos, before, after = raw
        return cls(str(op_id), int(pos), str(before), str(after))


@dataclass(slots=True)
class EditLog:
    sentence_id: str
    records: list[EditRecord] = field(default_factory=list)

    def applied_ops(self) -> list[str]:
        """Operation ids that contributed at least one edit, in first-use order."""
        seen: list[str] = []
        for rec in self.records:
            if rec.op_id not in seen:
                seen.append(rec.op_id)
        return seen

    def to_json_obj(self) -> dict:
        return {"id": self.sentence_id, "edits": [r.to_list() for r in self.records]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "EditLog":
        return cls(str(obj["id"]), [EditRecord.from_list(r) for r in obj.get("edits", [])])


def apply_edits(text: str, records: list[EditRecord]) -> str:
    """Replay records left to right over the clean text → noised text."""
    for i, rec in enumerate(records):
        end = rec.pos + len(rec.before)
        if rec.pos < 0 or end > len(text) or text[rec.pos:end] != rec.before:
            raise EditIntegrityError(
                f"edit {i} ({rec.op_id}) expected {rec.before!r} at {rec.pos}, "
                f"found {text[rec.pos:end]!r}"
            )
        text = text[:rec.pos] + rec.after + text[end:]
    return text


def invert_edits(text: str, records: list[EditRecord]) -> str:
    """Unwind records right to left over the noised text → clean text."""
    for i in range(len(records) - 1, -1, -1):
        rec = records[i]
        end = rec.pos + len(rec.after)
        if rec.pos < 0 or end > len(text) or text[rec.pos:end] != rec.after:
            raise EditIntegrityError(
                f"edit {i} ({rec.op_id}) expected {rec.after!r} at {rec.pos}, "
                f"found {text[rec.pos:end]!r}"
            )
        text = text[:rec.pos] + rec.before + text[end:]
    return text
