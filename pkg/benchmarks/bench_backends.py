"""Compare the numba and numpy kernel backends on the hot paths.

The backend binds at import time, so each measurement runs in a fresh
subprocess with CONTACTLAB_BACKEND set.  Workloads: the three-stage page
transport over a batch of starts, event-detected level-set transfer, and the
transversality scan of the surgered hypersurface.

    python benchmarks/bench_backends.py
"""

from __future__ import annotations

import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
import numpy as np
from contactlab import flows, monodromy as mono, surgery
from contactlab.backend import active_backend
from contactlab.flows import IntegratorConfig
from contactlab.profiles import HandleProfile
from contactlab.surgery import SurgeryConfig

profile = HandleProfile(0.05)
config = SurgeryConfig(epsilon=0.1, delta=0.05)
flow_cfg = IntegratorConfig(step=1e-3, max_time=2.0, event_tol=1e-12)
rng = np.random.default_rng(0)

def timed(fn, repeat=3):
    fn()  # warm-up (includes jit compilation on the numba backend)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best

def transport():
    local = np.random.default_rng(1)
    for _ in range(150):
        start = mono.admissible_start(local, 3, 0.1, 0.05)
        mono.post_surgery_pipeline(start, config, profile, flow_cfg)

def level_transfer():
    local = np.random.default_rng(2)
    fld = surgery.liouville_a_field(0, 2, 50.0)
    ev = flows.level_event(0, 2, 0.05)
    cfg = IntegratorConfig(step=1e-4, max_time=0.5, event_tol=1e-12)
    for _ in range(100):
        start = mono.admissible_start(local, 2, 0.1, 0.05)
        flows.flow_until_event(fld, start.as_array(), ev, 0.0, cfg)

def margin_scan():
    pts = surgery.sample_s1_points(rng, 4000, 1, 2, profile)
    for _ in range(5):
        surgery.transversality_margins(pts, 1, 2, profile)

results = {
    "backend": active_backend(),
    "page_transport_150": timed(transport),
    "level_transfer_100": timed(level_transfer),
    "margin_scan_5x4000": timed(margin_scan),
}
print(json.dumps(results))
"""


def run_backend(name: str) -> dict:
    env = dict(os.environ)
    env["CONTACTLAB_BACKEND"] = name
    proc = subprocess.run([sys.executable, "-c", WORKLOAD], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> None:
    rows = [run_backend("numba"), run_backend("numpy")]
    keys = [k for k in rows[0] if k != "backend"]
    print(f"{'workload':28s} {'numba':>10s} {'numpy':>10s} {'speedup':>9s}")
    for key in keys:
        fast, slow = rows[0][key], rows[1][key]
        print(f"{key:28s} {fast:9.4f}s {slow:9.4f}s {slow / fast:8.1f}x")


if __name__ == "__main__":
    main()
