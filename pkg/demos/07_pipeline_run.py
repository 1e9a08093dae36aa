"""Full run through the library entry point, writing reports and CSVs."""
import json
import tempfile
from pathlib import Path

from virialspec import RunConfig, run_pipeline

out = Path(tempfile.mkdtemp(prefix="virialspec_"))
res = run_pipeline(RunConfig(operator="all", out=out, emit_slices=True))

for label, rep in res.reports.items():
    print(f"{label:6s} {rep.verdict:14s} bounds {rep.bounds}")

print(f"\nwritten to {out}:")
for p in sorted(out.rglob("*"))[:12]:
    print("   ", p.relative_to(out))
print(json.dumps(json.loads((out / "report_M.json").read_text())["angles"], indent=1))
