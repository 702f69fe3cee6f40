"""Building quantum locally recoverable codes from the named families."""

from __future__ import annotations

import json

from mpqlrc import FamilyRequest, build_family, verify_artifact

# %% An optimal Euclidean instance.
res = build_family(FamilyRequest("El36_3", {"q": 5, "i": 1, "j": 1}))
print(res.report.label, "optimal:", res.report.optimal)

# %% The Hermitian instance over GF(9).
res = build_family(FamilyRequest("El46", {"q": 3, "a": 1, "b": 1}))
rep = res.report
print(rep.label, "quantum defect", rep.quantum_defect, "classical defect", rep.classical_defect)

# %% Artifacts are plain JSON and re-verify from the generator data alone.
art = json.loads(json.dumps(res.to_dict()))
print(verify_artifact(art)["checks"])

# %% Hypotheses are checked before anything is built.
try:
    build_family(FamilyRequest("MainEuclidean2", {"q": 5, "m": 4, "h": 4, "k": [3, 3, 3, 3]}))
except Exception as exc:
    print(type(exc).__name__, exc)
