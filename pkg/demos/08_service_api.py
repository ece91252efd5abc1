"""Driving the HTTP API in-process (no port needed)."""

import time

from fastapi.testclient import TestClient

from technicgen.fixtures import grid_sketch
from technicgen.service import create_app

client = TestClient(create_app())

r = client.post("/v1/sketch/validate", json=grid_sketch(1))
print("validate:", r.json())

r = client.post("/v1/jobs", json={"sketch": grid_sketch(1), "preset": "simple",
                                  "seed": 0, "coolingRate": 0.995})
job = r.json()["id"]
print("job:", job)
while True:
    state = client.get(f"/v1/jobs/{job}").json()
    print("  state:", state)
    if state["state"] in ("done", "failed"):
        break
    time.sleep(0.5)
model = client.get(f"/v1/jobs/{job}/model").json()
print("beams:", model["stats"]["beamCount"], "gaps:", model["stats"]["gaps"])
