# Copyright 2026 The qsilab Authors
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
"""Runs the CLI once per record kind and validates the JSON against the schema."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

RUNS = [
    ["game", "cue", "--trials", "200", "--seed", "1"],
    ["game", "cp_decision", "--trials", "20", "--seed", "2", "--expect", "0:1"],
    ["game", "search", "--adversary", "echo_breidbart", "--trials", "200", "--preset", "paper"],
    ["reduction", "cue-to-rand", "--inner", "honest_decryptor", "--trials", "50"],
    ["check", "twirl", "--qubits", "1", "--instances", "10"],
    ["check", "gl", "--bits", "1", "--instances", "2", "--runs", "100"],
    ["check", "hybrid-decision", "--trials", "5"],
    ["check", "otp-correctness", "--cliffords", "3", "--samples", "10000"],
    ["check", "purified-gap", "--queries", "1", "--instances", "10"],
]


def main() -> int:
    binary, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    failed = 0
    with tempfile.TemporaryDirectory() as tmp:
        for i, args in enumerate(RUNS):
            out = Path(tmp) / f"run{i}.json"
            proc = subprocess.run([binary, *args, "--out", str(out)], capture_output=True, text=True)
            record = json.loads(out.read_text())
            try:
                jsonschema.validate(record, schema)
                ok = proc.returncode == 0
            except jsonschema.ValidationError as e:
                print(e.message)
                ok = False
            print(("ok   " if ok else "FAIL ") + " ".join(args))
            failed += not ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
