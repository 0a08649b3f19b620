"""Regenerates the bundled fixture: a small process-network metamodel and its traces.

Usage: python3 generate_fixture.py  (writes next to this script)
"""

import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path
from xml.sax.saxutils import quoteattr

HERE = Path(__file__).resolve().parent

SCHEMA = {
    "id": "procnet",
    "classes": {
        "System": {"name": "attribute", "processes": "reference", "channels": "reference", "processors": "reference"},
        "Process": {"name": "attribute", "priority": "attribute", "criticality": "attribute", "ports": "reference"},
        "Port": {"name": "attribute", "direction": "attribute", "type": "attribute"},
        "Channel": {"name": "attribute", "width": "attribute", "source": "reference", "target": "reference"},
        "Processor": {"name": "attribute", "frequency": "attribute", "cores": "attribute", "mapped": "reference"},
    },
}

DOMAINS = [
    "drone flight controller", "automotive braking unit", "satellite telemetry node", "smart meter gateway",
    "industrial robot arm", "railway interlocking", "medical infusion pump", "wind turbine monitor",
    "avionics display", "elevator dispatcher", "packaging line", "traffic light controller",
    "battery management system", "hydraulic press", "agricultural sprayer", "marine autopilot",
    "warehouse shuttle", "camera gimbal", "hvac zone controller", "pipeline leak detector",
]


def process_block(rng, detailed):
    ev = [("System", "processes", "ADD"), ("Process", "name", "SET")]
    if detailed or rng.random() < 0.5:
        ev.append(("Process", "priority", "SET"))
    if rng.random() < 0.3:
        ev.append(("Process", "criticality", "SET"))
    for _ in range(rng.randint(1, 2)):
        ev.append(("Process", "ports", "ADD"))
        ev.append(("Port", "name", "SET"))
        ev.append(("Port", "direction", "SET"))
        if rng.random() < 0.4:
            ev.append(("Port", "type", "SET"))
    return ev


def channel_block(rng):
    ev = [("System", "channels", "ADD"), ("Channel", "name", "SET"), ("Channel", "source", "SET"),
          ("Channel", "target", "SET")]
    if rng.random() < 0.5:
        ev.append(("Channel", "width", "SET"))
    return ev


def processor_block(rng):
    ev = [("System", "processors", "ADD"), ("Processor", "name", "SET"), ("Processor", "frequency", "SET")]
    if rng.random() < 0.5:
        ev.append(("Processor", "cores", "SET"))
    ev.append(("Processor", "mapped", "ADD_MANY" if rng.random() < 0.3 else "ADD"))
    return ev


def build_trace(rng, style):
    ev = [("System", "name", "SET")]
    hw_first = style == "hw-first"
    if hw_first:
        for _ in range(rng.randint(1, 2)):
            ev += processor_block(rng)
    for _ in range(rng.randint(2, 3)):
        ev += process_block(rng, style == "detailed")
    for _ in range(rng.randint(1, 2)):
        ev += channel_block(rng)
    if not hw_first and rng.random() < 0.7:
        ev += processor_block(rng)
    if rng.random() < 0.3:
        ev.append(("Process", "ports", "MOVE"))
    if rng.random() < 0.25:
        ev += [("System", "channels", "REMOVE"), ("Channel", "width", "UNSET")]
    if rng.random() < 0.2:
        ev.append(("Processor", "mapped", "REMOVE_MANY"))
    return ev


def stamp(start, i):
    return (start + timedelta(seconds=7 * i + (i * i) % 5)).isoformat(timespec="milliseconds")


def write_xes(path, name, traces):
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             '<log xes.version="1.0" xmlns="http://www.xes-standard.org/">',
             f'  <string key="concept:name" value={quoteattr(name)}/>',
             f'  <string key="traceforge:metamodel" value="{SCHEMA["id"]}"/>']
    for tid, start, events in traces:
        lines += ["  <trace>", f'    <string key="concept:name" value="{tid}"/>',
                  f'    <string key="traceforge:model" value="{tid}"/>']
        for i, (cls, feat, typ) in enumerate(events):
            lines += ["    <event>",
                      f'      <string key="class" value="{cls}"/>',
                      f'      <string key="featureName" value="{feat}"/>',
                      f'      <string key="eventType" value="{typ}"/>',
                      f'      <date key="time:timestamp" value="{stamp(start, i)}"/>',
                      "    </event>"]
        lines.append("  </trace>")
    lines.append("</log>")
    path.write_text("\n".join(lines) + "\n")


def render(events):
    return "".join(f"event {c} {f} {t}\n" for c, f, t in events)


def main():
    rng = random.Random(20240611)
    styles = ["plain", "detailed", "hw-first"]
    base = datetime(2024, 3, 1, 9, 0, tzinfo=timezone.utc)
    human, models = [], []
    for i, domain in enumerate(DOMAINS):
        tid = f"h{i + 1:02d}"
        style = styles[i % 3]
        human.append((tid, base + timedelta(days=i), build_trace(rng, style)))
        models.append({"model_id": tid, "metamodel_id": SCHEMA["id"],
                       "description": f"Process network for a {domain} ({style} modeling style)."})

    validation = []
    for i in range(6):
        validation.append((f"v{i + 1:02d}", base + timedelta(days=40 + i), build_trace(rng, styles[i % 3])))

    (HERE / "schema.json").write_text(json.dumps(SCHEMA, indent=2) + "\n")
    write_xes(HERE / "human.xes", "fixture-human", human)
    write_xes(HERE / "validation.xes", "fixture-validation", validation)
    (HERE / "models.json").write_text(json.dumps(models, indent=2) + "\n")
    demos = [{"model": models[i], "trace_text": render(human[i][2])} for i in (0, 1, 2)]
    (HERE / "demos.json").write_text(json.dumps(demos, indent=2) + "\n")
    (HERE / "context.events").write_text(render(human[4][2][:8]))
    (HERE / "grid.json").write_text(json.dumps({"cr_levels": [0.2, 0.4, 0.6], "co_levels": [1, 3, 5],
                                                "neighbors": 5}, indent=2) + "\n")
    config = {
        "schema_path": "schema.json",
        "datasets": {"human": "human.xes", "validation": "validation.xes"},
        "llm": {"endpoint": "https://api.openai.com/v1/chat/completions", "model_name": "gpt-4",
                "temperature": 0.2, "max_tokens": 2048, "json_response_path": "/choices/0/message/content"},
        "mock": {"seed": 7},
        "gate_threshold": 0.99,
        "shots": 2,
        "retries": 2,
        "grid": {"cr_levels": [0.2, 0.4, 0.6], "co_levels": [1, 3, 5]},
        "k_folds": 5,
        "seed": 7,
        "output_dir": "out",
    }
    (HERE / "config.json").write_text(json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
