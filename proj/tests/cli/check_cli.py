"""Runs every subcommand of the command line driver and validates its JSON
output against the schemas in docs/schemas, plus exit codes and restart."""

import json
import math
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema

EXE = str(Path(sys.argv[1]).resolve())
SCHEMAS, WORK = Path(sys.argv[2]).resolve(), Path(sys.argv[3]).resolve()
failures = []


def check(ok, what):
    print(("ok    " if ok else "FAIL  ") + what)
    if not ok:
        failures.append(what)


def run(*args, expect=0):
    proc = subprocess.run([EXE, *args], capture_output=True, text=True, cwd=WORK)
    check(proc.returncode == expect,
          f"{' '.join(args[:1])} exit {proc.returncode} (want {expect}) {proc.stderr.strip()}")
    return proc


def validate(doc, name):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    try:
        jsonschema.validate(doc, schema)
        check(True, f"{name} matches its schema")
    except jsonschema.ValidationError as e:
        check(False, f"{name} schema: {e.message}")


def report(*args, schema):
    proc = run(*args)
    doc = json.loads(proc.stdout) if proc.returncode == 0 else {}
    validate(doc, schema)
    return doc


shutil.rmtree(WORK, ignore_errors=True)
WORK.mkdir(parents=True)

(WORK / "run.ini").write_text(
    "[grid]\nn_transverse = 16\nn_lower = 16\nn_upper = 16\n"
    "[time]\ndt = 0.002\nt_end = 0.02\n"
    "[initial]\neta = random\neta_amplitude = 1e-3\n"
    "[output]\nsnapshot_every = 5\n")
(WORK / "illposed.ini").write_text(
    "[params]\nalpha = 0.4\nbeta = 0.1\n[grid]\nn_transverse = 16\n"
    "[time]\ndt = 0.002\nt_end = 0.01\n")
(WORK / "unknown.ini").write_text("[params]\nalfa = 0.1\n")
(WORK / "badstep.ini").write_text("[time]\ndt = 0.5\n")
(WORK / "phys.ini").write_text("[physical]\nlayer_L = 2\nlevel_h = 1\n")

summary = report("simulate", "--config", "run.ini", "--output-dir", "full", "--seed", "4",
                 schema="simulation-summary")
check(summary.get("steps") == 10 and not summary.get("halted"), "simulate runs 10 steps")
validate(json.loads((WORK / "full/report.json").read_text()), "simulation-report")
final = json.loads((WORK / "full/snapshot_final.json").read_text())
validate(final, "snapshot")
rows = (WORK / "full/timeseries.csv").read_text().splitlines()
check(len(rows) == 12 and rows[0].startswith("step,t,"), "time series has header and 11 rows")

report("simulate", "--config", "run.ini", "--output-dir", "resumed", "--seed", "4",
       "--restart", "full/snapshot_5.json", schema="simulation-summary")
resumed = json.loads((WORK / "resumed/snapshot_final.json").read_text())
check(resumed == final, "restart from step 5 reproduces the final snapshot exactly")

report("simulate", "--config", "run.ini", "--output-dir", "again", "--seed", "4",
       schema="simulation-summary")
check(json.loads((WORK / "again/snapshot_final.json").read_text()) == final,
      "seeded rerun is identical")

flagged = report("simulate", "--config", "illposed.ini", schema="simulation-summary")
check(flagged.get("wellposed") is False and flagged.get("halted") is False,
      "ill-posed run is flagged but not halted by default")
run("simulate", "--config", "illposed.ini", "--halt", "--output-dir", "halted", expect=4)
check((WORK / "halted/snapshot_halt.json").exists(), "halted run leaves a snapshot")
run("simulate", "--config", "unknown.ini", expect=2)
run("simulate", "--config", "badstep.ini", expect=2)
run("simulate", "--config", "missing.ini", expect=2)
(WORK / "other.ini").write_text("[params]\nalpha = 0.11\n[grid]\nn_transverse = 16\n"
                                "n_lower = 16\nn_upper = 16\n[time]\ndt = 0.002\n")
run("simulate", "--config", "other.ini", "--restart", "full/snapshot_5.json", expect=2)
run("bogus", expect=2)

nd = report("nondim", "--physical", "phys.ini", schema="nondim")
check(math.isclose(nd.get("alpha", 0), 1000 / 19620, rel_tol=1e-12), "nondim alpha for L = 2")
eq = report("equilibrium", "--solve-for", "H", "--alpha", "0.1", "--beta", "0.4",
            schema="equilibrium")
check(sorted(round(s["H"], 12) for s in eq.get("solutions", [])) == [0.2, 0.5],
      "equilibrium heights")
run("equilibrium", "--solve-for", "H", "--alpha", "1", "--beta", "1", expect=2)

good = report("symbol-scan", "--alpha", "1", "--beta", "1", "--c", "0",
              "--radial", "8", "--angular", "16", schema="symbol-scan")
check(good.get("pass") is True, "scan passes for alpha + beta > 0")
bad = report("symbol-scan", "--alpha", "2", "--beta", "-3", "--c", "0",
             "--radial", "8", "--angular", "16", schema="symbol-scan")
check(bad.get("pass") is False and bad.get("first_violation"), "scan reports a violation")

disp = report("dispersion", "--alpha", "0", "--beta", "1", "--c", "0", "--k", "1",
              "--layered-H", "0.5", schema="dispersion")
lam = disp.get("halfspace", {}).get("lambda", {}).get("re", 0)
check(math.isclose(lam, -(math.sqrt(5) - 1) / 2, abs_tol=1e-10), "dispersion root")

oracle = report("model-oracle", "--alpha", "0", "--beta", "1", "--c", "0", "--k", "1",
                "--T", "4", "--dt", "0.01", "--forcing", "pulse", "--tau", "0.5",
                schema="model-oracle")
check(len(oracle.get("series", [])) <= 402, "model-oracle series is decimated")
run("model-oracle", "--alpha", "-1", "--beta", "0.5", "--c", "0", "--k", "1", expect=2)

out = WORK / "scan.json"
run("symbol-scan", "--radial", "4", "--angular", "8", "--output", str(out))
validate(json.loads(out.read_text()), "symbol-scan")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
