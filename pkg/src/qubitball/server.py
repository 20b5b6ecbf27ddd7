"""WebSocket session endpoint.

One connection is one independent session: a fresh ball at the
configured initial spinor plus a fresh `RandomStream(seed)`.  The client
sends one JSON object per text message:

    {"type": "hello"}            ->  {"type": "hello", "frame": {...},
                                      "config": {...}}
    any script event object      ->  {"type": "frame", ...}  (one frame,
                                      the state after the whole event,
                                      in arrival order)
    anything malformed           ->  {"type": "error", "message": ...},
                                      session keeps going

Frame payloads use the trace wire format; measurement events carry the
record under "measurement", annotate events echo the text under
"annotation".  "hello" may be sent at any time and returns the current
frame without advancing the step counter.
"""

import json

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .measurement import RandomStream
from .path_lift import init
from .session_io import ScriptError, apply_event, frame_from_state, frame_payload, gamma_so_far, parse_event


def _config_payload(config) -> dict:
    return {
        "seed": config.seed,
        "steps_per_degree": config.steps_per_degree,
        "closure_tol": config.closure_tol,
        "initial": {
            "alpha": [config.initial_spinor.alpha.real, config.initial_spinor.alpha.imag],
            "beta": [config.initial_spinor.beta.real, config.initial_spinor.beta.imag],
        },
    }


def create_app(config) -> FastAPI:
    """Build the app; `config` is a cli.SessionConfig."""
    app = FastAPI()

    @app.websocket("/session")
    async def session(ws: WebSocket):
        await ws.accept()
        initial = init(config.initial_spinor)
        state = initial
        stream = RandomStream(config.seed)
        steps = 0

        def current_frame(measurement=None):
            return frame_payload(
                frame_from_state(
                    state,
                    steps,
                    gamma=gamma_so_far(initial, state, config.closure_tol),
                    measurement=measurement,
                )
            )

        while True:
            try:
                text = await ws.receive_text()
            except WebSocketDisconnect:
                break
            try:
                obj = json.loads(text)
            except json.JSONDecodeError as exc:
                await ws.send_json({"type": "error", "message": f"bad JSON: {exc.msg}"})
                continue
            if isinstance(obj, dict) and obj.get("type") == "hello":
                await ws.send_json(
                    {
                        "type": "hello",
                        "frame": current_frame(),
                        "config": _config_payload(config),
                    }
                )
                continue
            try:
                event = parse_event(obj, steps_per_degree=config.steps_per_degree)
                result = apply_event(state, event, stream)
            except (ScriptError, ValueError) as exc:
                await ws.send_json({"type": "error", "message": str(exc)})
                continue
            state = result.state
            steps += 1
            payload = {"type": "frame", **current_frame(measurement=result.record)}
            if result.annotation is not None:
                payload["annotation"] = result.annotation
            await ws.send_json(payload)

    return app
