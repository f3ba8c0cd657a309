"""WebSocket front door: one tracker session per connection.

Wire protocol v1, one JSON object per text frame.  Inbound: gaze samples and
double clicks.  Outbound: the layout export on connect, coalesced highlight
deltas (full snapshots every two seconds of sample time), tracker events,
and relocation confirmations.  The service adds no tracking semantics of its
own; for a given inbound sequence the event stream matches the in-process
tracker exactly.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .calibration import CalibrationModel
from .election import Elector
from .errormodels import synth_default_models
from .geometry import LayoutConfig, layout_document, layout_export
from .llm import MockProvider
from .tracker import (
    GazeSample,
    HighlightUpdate,
    OutOfOrderSample,
    RelocationApplied,
    Tracker,
    TrackerConfig,
)

PROTOCOL_VERSION = 1
SNAPSHOT_INTERVAL_MS = 2000


class Session:
    """Tracker state behind one connection; messages processed in order."""

    def __init__(self, layout, range_model, vec_model, provider, tracker_config):
        self.layout = layout
        calibrator = CalibrationModel()
        elector = Elector(
            layout, range_model, vec_model,
            layout.config.pixels_per_cm, provider,
        )
        self.tracker = Tracker(layout, range_model, calibrator, elector, tracker_config)
        self._last_snapshot_ms: int | None = None

    def handle(self, msg: dict) -> list[dict]:
        """One inbound protocol object -> outbound protocol objects."""
        kind = msg.get("type")
        if kind == "gaze":
            return self._handle_gaze(msg)
        if kind == "double_click":
            return self._handle_double_click(msg)
        return [{"v": PROTOCOL_VERSION, "type": "error",
                 "msg": f"unknown message type: {kind!r}"}]

    def _handle_gaze(self, msg: dict) -> list[dict]:
        try:
            sample = GazeSample(
                t_ms=int(msg["t_ms"]),
                x=float(msg["x"]),
                y=float(msg["y"]),
                valid=bool(msg["valid"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            return [{"v": PROTOCOL_VERSION, "type": "error",
                     "msg": f"bad gaze frame: {exc}"}]
        try:
            events = self.tracker.ingest(sample)
        except OutOfOrderSample as exc:
            return [{"v": PROTOCOL_VERSION, "type": "error", "msg": str(exc)}]

        out = []
        delta: dict[int, int] = {}
        for ev in events:
            out.append({"v": PROTOCOL_VERSION, "type": "event", "event": ev.record()})
            if isinstance(ev, HighlightUpdate):
                for wi, count in ev.words:
                    delta[wi] = count
        if delta:
            out.append(self._highlight_frame(delta, snapshot=False))
        if self._snapshot_due(sample.t_ms):
            out.append(
                self._highlight_frame(dict(self.tracker.read_counts), snapshot=True)
            )
            self._last_snapshot_ms = sample.t_ms
        return out

    def _handle_double_click(self, msg: dict) -> list[dict]:
        try:
            x, y = float(msg["x"]), float(msg["y"])
        except (KeyError, TypeError, ValueError) as exc:
            return [{"v": PROTOCOL_VERSION, "type": "error",
                     "msg": f"bad double_click frame: {exc}"}]
        t_ms = self.tracker._last_t or 0
        events, confirm = self.tracker.force_relocate(t_ms, x, y)
        out = [
            {"v": PROTOCOL_VERSION, "type": "event", "event": ev.record()}
            for ev in events
        ]
        word = None
        for ev in events:
            if isinstance(ev, RelocationApplied):
                word = ev.word
        out.append(
            {"v": PROTOCOL_VERSION, "type": "relocated", "word": word, "confirm": confirm}
        )
        return out

    def _snapshot_due(self, t_ms: int) -> bool:
        if self._last_snapshot_ms is None:
            self._last_snapshot_ms = t_ms
            return False
        return t_ms - self._last_snapshot_ms >= SNAPSHOT_INTERVAL_MS

    def _highlight_frame(self, counts: dict[int, int], snapshot: bool) -> dict:
        return {
            "v": PROTOCOL_VERSION,
            "type": "highlight",
            "words": [
                {"index": wi, "count": counts[wi]} for wi in sorted(counts)
            ],
            "snapshot": snapshot,
        }


def create_app(
    document: str,
    layout_config: LayoutConfig | None = None,
    tracker_config: TrackerConfig | None = None,
    provider=None,
    synth_seed: int = 7,
) -> FastAPI:
    layout = layout_document(document, layout_config)
    range_model, vec_model = synth_default_models(synth_seed)
    provider = provider or MockProvider()
    tracker_config = tracker_config or TrackerConfig(
        pixels_per_cm=layout.config.pixels_per_cm
    )
    app = FastAPI(title="readtrack stream service")

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        session = Session(layout, range_model, vec_model, provider, tracker_config)
        await ws.send_text(
            json.dumps({"v": PROTOCOL_VERSION, "type": "layout", **layout_export(layout)})
        )
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError as exc:
                    await ws.send_text(json.dumps(
                        {"v": PROTOCOL_VERSION, "type": "error",
                         "msg": f"malformed frame: {exc}"}
                    ))
                    continue
                if msg.get("v") != PROTOCOL_VERSION:
                    await ws.close(
                        code=1002,
                        reason=f"unsupported protocol version: {msg.get('v')!r}",
                    )
                    return
                for reply in session.handle(msg):
                    await ws.send_text(json.dumps(reply))
        except WebSocketDisconnect:
            pass

    return app


def serve(
    document: str,
    host: str = "127.0.0.1",
    port: int = 8765,
    layout_config: LayoutConfig | None = None,
) -> None:
    import uvicorn

    app = create_app(document, layout_config)
    uvicorn.run(app, host=host, port=port)
