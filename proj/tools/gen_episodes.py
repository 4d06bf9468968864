#!/usr/bin/env python3
# Copyright 2026 The Sherlock Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the synthetic scenes and episodes under data/."""

import argparse
import copy
import json
import pathlib
import random

COLORS = ["white", "black", "red", "green", "blue", "yellow", "orange", "purple", "pink", "cyan"]
SOURCE = [10, 10, 190, 190]
DESTINATION = [210, 10, 390, 190]
CELL = 36


def write(path, doc):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1) + "\n")


def table_scene(name, objects):
    return {
        "name": name,
        "width": 400,
        "height": 240,
        "mmPerPixel": 5.0,
        "background": {"depthMm": 1000, "color": "brown"},
        "supportingPlanes": [{"label": "table#1", "rect": [0, 0, 400, 240], "depthMm": 1000, "color": "brown"}],
        "objects": objects,
        "semanticRegions": [
            {"label": "source", "kind": "Table", "rect": SOURCE},
            {"label": "destination", "kind": "Table", "rect": DESTINATION},
            {"label": "counter", "kind": "Table", "rect": [0, 195, 400, 240]},
        ],
    }


def cells():
    out = []
    for region in (SOURCE, DESTINATION):
        for gy in range(5):
            for gx in range(5):
                out.append((region[0] + 4 + gx * CELL, region[1] + 4 + gy * CELL))
    return out


def make_object(rng, oid, x, y):
    size = rng.randint(16, 26)
    round_ = rng.random() < 0.5
    return {
        "id": oid,
        "classLabel": "PhysicalObject",
        "shape": "round" if round_ else "box",
        "color": rng.choice(COLORS),
        "ellipse": round_,
        "footprint": [x, y, x + size, y + size],
        "heightMm": rng.randint(40, 150),
    }


def move_to(obj, x, y):
    fp = obj["footprint"]
    w, h = fp[2] - fp[0], fp[3] - fp[1]
    obj["footprint"] = [x, y, x + w, y + h]


def smeared(objects):
    out = []
    for o in objects:
        o = copy.deepcopy(o)
        fp = o["footprint"]
        dx = 60 if fp[0] < 200 else -60
        o["footprint"] = [fp[0] + dx, fp[1], fp[2] + dx, fp[3]]
        o["color"] = "gray"
        out.append(o)
    return out


def identity_episode(name, count, moves, seed):
    rng = random.Random(seed)
    grid = cells()
    rng.shuffle(grid)
    occupied, free = grid[:count], grid[count:]
    objects = [make_object(rng, f"obj{i + 1}", x, y) for i, (x, y) in enumerate(occupied)]
    distractors = [make_object(rng, f"distractor{i + 1}", 40 + 120 * i, 205) for i in range(3)]
    scenes = {"s0": table_scene(f"{name}-s0", objects + distractors)}
    still = [0, 0, 0, 0, 0, 0, 1]
    moving = [0.4, 0, 0, 0, 0, 0, 1]
    frames = []
    tick = 0

    def frame(scene, pose, blur):
        nonlocal tick
        frames.append({"scene": scene, "tick": tick, "cameraPose": pose, "blurScore": blur})
        tick += 1

    for _ in range(4):
        frame("s0", still, 10)
    for k in range(1, moves + 1):
        mover = rng.randrange(len(objects))
        carried = [o for i, o in enumerate(objects) if i != mover]
        scenes[f"b{k}"] = table_scene(f"{name}-b{k}", smeared(carried + distractors))
        x, y = free.pop(rng.randrange(len(free)))
        objects[mover] = copy.deepcopy(objects[mover])
        move_to(objects[mover], x, y)
        scenes[f"s{k}"] = table_scene(f"{name}-s{k}", objects + distractors)
        frame(f"b{k}", moving, 150)
        frame(f"b{k}", moving, 160)
        for _ in range(3):
            frame(f"s{k}", still, 10)
    return {
        "name": name,
        "taskRegions": ["source", "destination"],
        "groundTruthObjects": count,
        "scenes": scenes,
        "frames": frames,
    }


def shelf_scene(name, dy=0, facing=None):
    floors = [[0, 70 + dy, 400, 78 + dy], [0, 150 + dy, 400, 158 + dy], [0, 230 + dy, 400, 238 + dy]]
    planes = [{"label": f"floor#{i + 1}", "rect": r, "depthMm": 1100, "color": "gray"} for i, r in enumerate(floors)]
    planes += [
        {"label": "separator#1", "rect": [130, 0, 136, 240], "depthMm": 1150, "color": "gray"},
        {"label": "separator#2", "rect": [270, 0, 276, 240], "depthMm": 1150, "color": "gray"},
    ]
    objects = []
    for i, (x, w) in enumerate([(150, 30), (200, 40), (290, 30)]):
        objects.append({"id": f"snack_{i + 1}", "classLabel": "SnackProduct", "shape": "box", "color": "red",
                        "footprint": [x, 100 + dy, x + w, 146 + dy], "heightMm": 90})
    if facing:
        width, n = facing
        for i in range(n):
            x = 20 + i * width
            objects.append({"id": f"cereal_{i + 1}", "classLabel": "CerealProduct", "shape": "box",
                            "color": "yellow", "footprint": [x, 20, x + width, 68], "heightMm": 80})
    return {
        "name": name,
        "width": 400,
        "height": 240,
        "mmPerPixel": 5.0,
        "background": {"depthMm": 1300, "color": "white"},
        "supportingPlanes": planes,
        "objects": objects,
        "semanticRegions": [{"label": "shelf#1", "kind": "Shelf", "rect": [0, 0, 400, 240]}],
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=pathlib.Path, default=pathlib.Path(__file__).resolve().parent.parent / "data")
    args = parser.parse_args()

    for i, (count, moves) in enumerate([(9, 3), (15, 4), (20, 5), (25, 6)], start=1):
        write(args.out / "episodes" / f"identity_ep{i}.episode.json",
              identity_episode(f"identity_ep{i}", count, moves, seed=1000 + i))

    write(args.out / "scenes" / "retail_facing_25cm.scene.json", shelf_scene("retail_facing_25cm", facing=(10, 5)))
    write(args.out / "scenes" / "retail_facing_24cm.scene.json", shelf_scene("retail_facing_24cm", facing=(12, 4)))

    scenes, frames = {}, []
    for t, dy in enumerate([0, 1, 2, 1, 0, -1, -2, -1, 0, 1]):
        key = f"dy{dy}"
        scenes.setdefault(key, shelf_scene(f"shelf-{key}", dy=dy))
        frames.append({"scene": key, "tick": t, "cameraPose": [0, 0.001 * dy, 0, 0, 0, 0, 1], "blurScore": 10})
    write(args.out / "episodes" / "shelf_scan.episode.json",
          {"name": "shelf_scan", "taskRegions": [], "groundTruthObjects": 3, "scenes": scenes, "frames": frames})


if __name__ == "__main__":
    main()
