"""Drive the HTTP service end to end with only the standard library client.

Starts the service on a local port in a background thread, walks the full
artist workflow (upload corpus, train, build a slider, probe, fetch the
point cloud), then exits.

Run:  python3 demos/service_walkthrough.py
"""

import json
import tempfile
import threading
import time
import urllib.request

import numpy as np
import uvicorn

from latentlab.service import create_app

PORT = 8123
BASE = f"http://127.0.0.1:{PORT}"


def call(method: str, path: str, body: dict | None = None) -> dict:
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(
        BASE + path, data=data, method=method,
        headers={"Content-Type": "application/json"},
    )
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


data_dir = tempfile.mkdtemp(prefix="latentlab-demo-")
server = uvicorn.Server(
    uvicorn.Config(create_app(data_dir), host="127.0.0.1", port=PORT,
                   log_level="warning")
)
threading.Thread(target=server.run, daemon=True).start()
while not server.started:
    time.sleep(0.05)
print(f"service on {BASE}, store in {data_dir}")

rng = np.random.default_rng(5)
corpus = "\n".join(
    " ".join(rng.choice(["amber", "gold", "ruby"] if i % 2 == 0
                        else ["slate", "ash", "iron"], size=6))
    for i in range(200)
)

print("\n== upload corpus, train a words model ==")
corpus_id = call("POST", "/corpora", {"text": corpus})["corpus_id"]
job_id = call("POST", "/models/words", {
    "corpus_id": corpus_id,
    "config": {"dim": 16, "epochs": 8, "seed": 1},
})["job_id"]
while True:
    record = call("GET", f"/jobs/{job_id}")
    print(f"  job {job_id}: {record['status']}")
    if record["status"] in ("done", "failed"):
        break
    time.sleep(0.3)
model_id = record["model_id"]

print("\n== build a slider and probe along it ==")
slider_id = call("POST", f"/models/{model_id}/sliders", {
    "pole_a": ["amber", "gold"], "pole_b": ["slate", "ash"],
    "labels": ["warm", "cool"],
})["slider_id"]
for t in (-1.0, 0.0, 1.0):
    body = call("GET", f"/models/{model_id}/sliders/{slider_id}/probe"
                       f"?t={t}&base=ruby&k=3")
    words = ", ".join(a["word"] for a in body["associations"])
    print(f"  t={t:+.1f}: {words}")

print("\n== fetch the annotated point cloud ==")
cloud = call("GET", f"/models/{model_id}/pointcloud?max_points=10"
                    f"&slider={slider_id}")
for p in cloud["points"]:
    print(f"  {p['label']:8s} ({p['x']:+.2f}, {p['y']:+.2f}) "
          f"coord {p['coord']:+.2f}")

server.should_exit = True
print("\ndone")
