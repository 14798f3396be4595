# Copyright 2026 The dspt Authors
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

"""End-to-end checks of the dspt command-line runner.

Usage: cli_check.py <dspt binary> <configs dir>
"""

import glob
import json
import os
import subprocess
import sys
import tempfile


def run(binary, *args):
    return subprocess.run([binary, "run", *args], capture_output=True, text=True)


def fail(msg):
    print("FAIL:", msg)
    sys.exit(1)


def main():
    binary, configs = sys.argv[1], sys.argv[2]
    paths = sorted(glob.glob(os.path.join(configs, "*.yaml")))
    if not paths:
        fail("no configs found in " + configs)
    with tempfile.TemporaryDirectory() as tmp:
        for cfg in paths:
            name = os.path.basename(cfg)
            first = os.path.join(tmp, "a")
            second = os.path.join(tmp, "b")
            r = run(binary, cfg, "--out-dir", first, "--n-traj", "10")
            if r.returncode != 0:
                fail(f"{name}: exit {r.returncode}: {r.stderr}")
            sidecars = [p for p in glob.glob(os.path.join(first, "*.json"))]
            sidecar = max(sidecars, key=os.path.getmtime)
            with open(sidecar) as f:
                meta = json.load(f)
            for key in ("schema_version", "results", "files", "model", "experiment"):
                if key not in meta:
                    fail(f"{name}: sidecar lacks '{key}'")
            for out in meta["files"]:
                with open(os.path.join(first, out)) as f:
                    head = f.readline()
                if not head.startswith("# dspt ") or "schema_version=1" not in head:
                    fail(f"{name}: {out} has header {head!r}")
            # Rerunning the resolved config must reproduce every file.
            r = run(binary, sidecar, "--out-dir", second)
            if r.returncode != 0:
                fail(f"{name}: rerun from sidecar exit {r.returncode}: {r.stderr}")
            for out in meta["files"]:
                with open(os.path.join(first, out)) as fa, open(os.path.join(second, out)) as fb:
                    if fa.read() != fb.read():
                        fail(f"{name}: {out} differs after rerun from sidecar")
            print("ok", name)

        traj = os.path.join(configs, "trajectories.yaml")
        outs = []
        for seed in ("1", "2"):
            d = os.path.join(tmp, "seed" + seed)
            if run(binary, traj, "--out-dir", d, "--n-traj", "10", "--seed", seed).returncode != 0:
                fail("seed override run failed")
            csv = [p for p in glob.glob(os.path.join(d, "*.csv")) if not p.endswith("_jumps.csv")][0]
            with open(csv) as f:
                outs.append(f.read())
        if outs[0] == outs[1]:
            fail("different seeds gave identical trajectory output")
        print("ok seed override")

        bad_cases = {
            "unknown_key.yaml": "experiment: steady_space\nmodel: {N: 4, kappa: 1.0, jumps: Y, colour: red}\n",
            "bad_type.yaml": "experiment: steady_space\nmodel: {N: four, kappa: 1.0, jumps: Y}\n",
            "bad_experiment.yaml": "experiment: nonsense\nmodel: {N: 4, kappa: 1.0}\n",
            "too_large.yaml": "experiment: lindblad_evolve\nmodel: {N: 16, kappa: 1.0, jumps: ZIZ}\n",
        }
        for fname, text in bad_cases.items():
            p = os.path.join(tmp, fname)
            with open(p, "w") as f:
                f.write(text)
            r = run(binary, p, "--out-dir", os.path.join(tmp, "bad"))
            if r.returncode != 1:
                fail(f"{fname}: expected exit 1, got {r.returncode}: {r.stderr}")
            if not r.stderr.strip():
                fail(f"{fname}: no error message")
            print("ok", fname, "->", r.stderr.strip().splitlines()[-1])
        r = run(binary, os.path.join(tmp, "missing.yaml"))
        if r.returncode != 1:
            fail(f"missing config: expected exit 1, got {r.returncode}")
        print("ok missing config")


if __name__ == "__main__":
    main()
