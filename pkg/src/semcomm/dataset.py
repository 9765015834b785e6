"""Story corpus loading: manifest, paired text/evidence files, formats.

A corpus directory holds a ``manifest.json`` naming each story's English
text file, its statement-stream file, and optionally the evidence volume
the stream stands in for (``observations``).  Statement files come in
the one-statement-per-line format or as a JSON list of triples; which
one was used is recorded so reports can say how the evidence was read.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import StatementParseError
from .fol import EvidenceSet, parse_evidence, parse_triple_list


@dataclass(frozen=True, slots=True)
class Story:
    """One corpus entry: paths plus the declared evidence volume."""

    story_id: str
    text_path: Path
    evidence_path: Path
    observations: int | None
    index: int

    def read_text(self) -> bytes:
        return self.text_path.read_bytes()


def _statement_from_item(item) -> str:
    """One permissive JSON triple -> statement text."""
    if isinstance(item, str):
        return item
    if isinstance(item, dict):
        pred = item.get("predicate")
        subj = item.get("subject")
        obj = item.get("object")
        positive = item.get("positive", True)
    elif isinstance(item, (list, tuple)) and 2 <= len(item) <= 4:
        pred, subj = item[0], item[1]
        obj = item[2] if len(item) >= 3 else None
        positive = item[3] if len(item) == 4 else True
    else:
        raise StatementParseError(f"unrecognized triple item {item!r}")
    if not isinstance(pred, str) or not isinstance(subj, str):
        raise StatementParseError(f"triple item {item!r} needs string names")
    neg = "" if positive else "!"
    if obj is None:
        return f"{neg}{pred}({subj})"
    if not isinstance(obj, str):
        raise StatementParseError(f"triple item {item!r} has a non-string object")
    return f"{neg}{pred}({subj}, {obj})"


def load_evidence(path: str | Path, observations: int | None = None) -> tuple[EvidenceSet, str]:
    """Read a statement file; returns the evidence and the format used."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        payload = json.loads(path.read_text(encoding="utf-8"))
        if isinstance(payload, dict):
            payload = payload.get("triples", payload.get("statements"))
        if not isinstance(payload, list):
            raise StatementParseError(
                f"{path}: JSON evidence must be a list of triples")
        lines = [_statement_from_item(item) for item in payload]
        ev = parse_triple_list(lines, source_id=path.stem,
                               observations=observations)
        return ev, "json-triples"
    ev = parse_evidence(path, observations=observations)
    return ev, "line"


def load_manifest(directory: str | Path) -> list[Story]:
    """Read a corpus directory's manifest into Story entries, in order."""
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.is_file():
        raise FileNotFoundError(f"no manifest.json in {directory}")
    payload = json.loads(manifest_path.read_text(encoding="utf-8"))
    entries = payload["stories"] if isinstance(payload, dict) else payload
    stories = []
    for i, entry in enumerate(entries):
        story_id = str(entry.get("id", f"story{i + 1}"))
        text_path = directory / entry["text"]
        evidence_path = directory / entry["evidence"]
        for p in (text_path, evidence_path):
            if not p.is_file():
                raise FileNotFoundError(f"manifest entry {story_id}: missing {p}")
        obs = entry.get("observations")
        if obs is not None:
            obs = int(obs)
            if obs < 1:
                raise ValueError(f"manifest entry {story_id}: observations must be positive")
        stories.append(Story(story_id, text_path, evidence_path, obs, i))
    if not stories:
        raise ValueError(f"{manifest_path} lists no stories")
    return stories
