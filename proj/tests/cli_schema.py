"""Runs the qmo binary end to end and validates every report against the schema."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

qmo, schema_path = sys.argv[1], sys.argv[2]
schema = json.loads(pathlib.Path(schema_path).read_text())
failures = []


def expect(cond, what):
    if not cond:
        failures.append(what)


with tempfile.TemporaryDirectory() as tmp:
    out = pathlib.Path(tmp) / "all"
    proc = subprocess.run([qmo, "run", "--scenario", "all", "--out", str(out)], capture_output=True, text=True)
    # werner fails its q claim at r = 0.3, so the run as a whole fails.
    expect(proc.returncode == 1, f"run all exited {proc.returncode}")
    expect("failed: werner/qcmi_equals_q" in proc.stdout, "missing failure line")
    reports = [p for p in out.glob("*.json") if p.name.count(".") == 1]
    expect(len(reports) == 6, f"{len(reports)} reports")
    for p in reports:
        doc = json.loads(p.read_text())
        try:
            jsonschema.validate(doc, schema)
        except jsonschema.ValidationError as e:
            failures.append(f"{p.name}: {e.message}")
        for a in doc["artifacts"]:
            art = out / a["file"]
            expect(art.exists(), f"missing artifact {a['file']}")
            if art.exists():
                expect(json.loads(art.read_text())["kind"] == a["kind"], f"artifact kind {a['file']}")

    tensor = out / "unitary_blocking.process_tensor.json"
    for args, code in [
        (["check", str(tensor), "--kind", "causality"], 0),
        (["check", str(tensor), "--kind", "psd"], 0),
        (["check", str(tensor), "--kind", "nope"], 2),
        (["run", "--scenario", "pauli_superposition", "--out", str(out / "p")], 0),
        (["run", "--scenario", "werner", "--param", "r=0.34", "--out", str(out / "w")], 0),
        (["run", "--scenario", "werner", "--out", str(out / "w")], 1),
        (["run", "--scenario", "werner", "--param", "q=x", "--out", str(out / "w")], 2),
        (["run"], 2),
        ([], 2),
    ]:
        rc = subprocess.run([qmo, *args], capture_output=True).returncode
        expect(rc == code, f"{' '.join(args) or '(no args)'}: exit {rc}, wanted {code}")

for f in failures:
    print("FAIL", f)
print("ok" if not failures else f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
