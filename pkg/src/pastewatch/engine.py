"""Live pipeline: paste events go through a delay queue, then validity,
duplicate, feature, and classifier stages before surfacing as
recommendations over the newline-JSON wire protocol.

The engine itself is a plain object driven by `handle_message` and
`tick`; the stdio loop in `serve` wires it to stdin/stdout either with a
virtual clock (scripted sessions) or threads (real time).
"""

from __future__ import annotations

import json
import os
import queue
import sys
import threading
import time
from dataclasses import dataclass, field, replace

from . import clones, extraction, learning
from .candidates import is_extractable
from .metrics import extract_features
from .syntax import CodeFragment, fragment_at, parse_compilation_unit, parse_fragment

CONFIG_ENV_VAR = "PASTEWATCH_CONFIG"


@dataclass(frozen=True)
class EngineConfig:
    delay_ms: int = 10000
    similarity_threshold: float = 0.8
    decision_threshold: float = 0.5
    model_path: str | None = None
    expiry_ms: int = 15000
    virtual_time: bool = False

    def validate(self) -> "EngineConfig":
        if self.delay_ms < 0:
            raise ValueError("delay_ms must be >= 0")
        for name in ("similarity_threshold", "decision_threshold"):
            v = getattr(self, name)
            if not (0.0 < v <= 1.0):
                raise ValueError(f"{name} must be in (0, 1]")
        if self.expiry_ms < 0:
            raise ValueError("expiry_ms must be >= 0")
        return self


_CONFIG_PARSERS = {
    "delay_ms": int,
    "similarity_threshold": float,
    "decision_threshold": float,
    "model_path": str,
    "expiry_ms": int,
    "virtual_time": lambda v: v.strip().lower() in ("1", "true", "yes", "on"),
}


def load_config(path: str | None = None, env: dict | None = None) -> EngineConfig:
    """Read `key = value` lines; unknown keys are an error. When *path* is
    None the PASTEWATCH_CONFIG env var may name the file."""
    env = os.environ if env is None else env
    if path is None:
        path = env.get(CONFIG_ENV_VAR)
    cfg = EngineConfig()
    if path is None:
        return cfg
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, raw = stripped.partition("=")
            key = key.strip()
            if key not in _CONFIG_PARSERS:
                raise ValueError(f"{path}:{lineno}: unknown config key '{key}'")
            values[key] = _CONFIG_PARSERS[key](raw.strip())
    return replace(cfg, **values).validate()


@dataclass
class PasteEvent:
    id: object
    path: str
    text: str
    offset: int
    arrival_ms: int


PENDING = "pending"
ACCEPTED = "accepted"
DISMISSED = "dismissed"
EXPIRED = "expired"


@dataclass
class Recommendation:
    id: str
    paste_id: object
    path: str
    start: int
    end: int
    probability: float
    duplicates: list[clones.DuplicateMatch]
    status: str
    emitted_at: int
    fragment: CodeFragment = field(repr=False)

    def message(self) -> dict:
        return {
            "kind": "recommendation",
            "id": self.id,
            "paste_id": self.paste_id,
            "path": self.path,
            "span": {"start": self.start, "end": self.end},
            "probability": self.probability,
            "duplicates": [
                {"method": d.method, "similarity": d.similarity, "exact": d.exact}
                for d in self.duplicates
            ],
        }


def _error(message: str, rec_id: str | None = None) -> dict:
    msg: dict = {"kind": "error", "message": message}
    if rec_id is not None:
        msg["id"] = rec_id
    return msg


class Engine:
    def __init__(self, config: EngineConfig, model: learning.Model | None = None):
        self.config = config.validate()
        self.model = model
        if model is None and config.model_path:
            self.model = learning.load_model(config.model_path)
        self.documents: dict[str, str] = {}
        self.pending_events: list[PasteEvent] = []
        self.recommendations: dict[str, Recommendation] = {}
        self._next_rec = 1

    # -- intake --------------------------------------------------------------

    def sync_document(self, path: str, text: str) -> None:
        self.documents[path] = text

    def enqueue_paste(self, event: PasteEvent) -> list[dict]:
        if event.path not in self.documents:
            return [_error(f"paste {event.id!r} dropped: no synced document for '{event.path}'")]
        self.pending_events.append(event)
        return []

    # -- analysis ------------------------------------------------------------

    def tick(self, now: int) -> list[dict]:
        out: list[dict] = []
        out.extend(self._expire(now))
        still_queued: list[PasteEvent] = []
        for event in self.pending_events:
            if event.arrival_ms + self.config.delay_ms > now:
                still_queued.append(event)
                continue
            if self.model is None:
                out.append(_error("no model loaded; event retained"))
                still_queued.append(event)
                continue
            out.extend(self._analyze(event, now))
        self.pending_events = still_queued
        return out

    def _expire(self, now: int) -> list[dict]:
        out = []
        for rec in self.recommendations.values():
            if rec.status == PENDING and now >= rec.emitted_at + self.config.expiry_ms:
                rec.status = EXPIRED
                out.append({"kind": "expired", "id": rec.id})
        return out

    def _analyze(self, event: PasteEvent, now: int) -> list[dict]:
        doc = self.documents.get(event.path)
        if doc is None:
            return []
        start = self._relocate(doc, event)
        if start is None:
            return []  # fragment was edited away
        end = start + len(event.text)
        if not parse_fragment(event.text).ok:
            return []  # not Java statements
        try:
            tree = parse_compilation_unit(doc, path=event.path)
        except ValueError as e:
            return [_error(f"cannot parse '{event.path}': {e}")]
        fragment = fragment_at(tree, start, end)
        if fragment is None or fragment.method is None:
            return []  # no enclosing method
        duplicates = clones.find_duplicates(fragment, tree, self.config.similarity_threshold)
        if not duplicates:
            return []
        features = extract_features(fragment, fragment.method)
        probability = learning.predict_proba(self.model, features)
        if probability < self.config.decision_threshold:
            return []
        if not is_extractable(fragment, fragment.method):
            return []
        out: list[dict] = []
        for rec in self.recommendations.values():
            if rec.status == PENDING and rec.path == event.path:
                rec.status = EXPIRED
                out.append({"kind": "expired", "id": rec.id})
        rec = Recommendation(
            id=f"r{self._next_rec}",
            paste_id=event.id,
            path=event.path,
            start=fragment.start,
            end=fragment.end,
            probability=probability,
            duplicates=duplicates,
            status=PENDING,
            emitted_at=now,
            fragment=fragment,
        )
        self._next_rec += 1
        self.recommendations[rec.id] = rec
        out.append(rec.message())
        return out

    @staticmethod
    def _relocate(doc: str, event: PasteEvent) -> int | None:
        """Exact search for the pasted text, preferring the occurrence
        nearest the original paste offset."""
        hits = []
        pos = doc.find(event.text)
        while pos != -1:
            hits.append(pos)
            pos = doc.find(event.text, pos + 1)
        if not hits:
            return None
        return min(hits, key=lambda p: (abs(p - event.offset), p))

    # -- user actions ----------------------------------------------------------

    def accept(self, rec_id: str, name: str) -> list[dict]:
        rec = self.recommendations.get(rec_id)
        if rec is None or rec.status != PENDING:
            return [_error("unknown-or-expired recommendation", rec_id)]
        try:
            plan = extraction.plan_extraction(rec.fragment, rec.fragment.method, name, rec.duplicates)
        except (extraction.PlanError, ValueError) as e:
            return [_error(f"cannot plan extraction: {e}", rec_id)]
        rec.status = ACCEPTED
        return [
            {
                "kind": "edits",
                "id": rec.id,
                "edits": [
                    {"path": e.path, "span": {"start": e.start, "end": e.end}, "new_text": e.new_text}
                    for e in sorted(plan.edits, key=lambda e: e.start)
                ],
            }
        ]

    def dismiss(self, rec_id: str) -> list[dict]:
        rec = self.recommendations.get(rec_id)
        if rec is None or rec.status != PENDING:
            return [_error("unknown-or-expired recommendation", rec_id)]
        rec.status = DISMISSED
        return []

    # -- protocol ----------------------------------------------------------------

    def handle_message(self, msg: dict, now: int) -> list[dict]:
        kind = msg.get("kind")
        if kind == "doc":
            self.sync_document(msg["path"], msg["text"])
            return []
        if kind == "paste":
            return self.enqueue_paste(
                PasteEvent(msg["id"], msg["path"], msg["text"], int(msg.get("offset", 0)), now)
            )
        if kind == "accept":
            return self.accept(msg["id"], msg.get("name", "extracted"))
        if kind == "dismiss":
            return self.dismiss(msg["id"])
        return [_error(f"unknown message kind {kind!r}")]


def serve(config: EngineConfig, stdin=None, stdout=None) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    engine = Engine(config)
    if config.virtual_time:
        return _serve_virtual(engine, stdin, stdout)
    return _serve_realtime(engine, stdin, stdout)


def _write(stdout, messages: list[dict]) -> None:
    for m in messages:
        stdout.write(json.dumps(m, sort_keys=True) + "\n")
    stdout.flush()


def _serve_virtual(engine: Engine, stdin, stdout) -> int:
    now = 0
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as e:
            _write(stdout, [_error(f"bad message: {e}")])
            continue
        if msg.get("kind") == "advance":
            now += int(msg.get("ms", 0))
            _write(stdout, engine.tick(now))
        else:
            _write(stdout, engine.handle_message(msg, now))
    return 0


def _serve_realtime(engine: Engine, stdin, stdout) -> int:
    inbox: queue.Queue = queue.Queue()
    eof = threading.Event()

    def reader() -> None:
        for line in stdin:
            inbox.put(line)
        eof.set()

    t = threading.Thread(target=reader, daemon=True)
    t.start()
    while not (eof.is_set() and inbox.empty()):
        now = int(time.monotonic() * 1000)
        try:
            line = inbox.get(timeout=0.05)
        except queue.Empty:
            line = None
        if line is not None and line.strip():
            try:
                msg = json.loads(line)
            except json.JSONDecodeError as e:
                _write(stdout, [_error(f"bad message: {e}")])
                msg = None
            if msg is not None:
                if msg.get("kind") == "advance":
                    _write(stdout, [_error("advance is only valid with --virtual-time")])
                else:
                    _write(stdout, engine.handle_message(msg, now))
        _write(stdout, engine.tick(int(time.monotonic() * 1000)))
    return 0
