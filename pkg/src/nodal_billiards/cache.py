"""Persistent eigenvalue cache: one JSON record per line, append-only.

Keys combine the canonical spec JSON, symmetry class, quantum numbers, and
a solver version tag, so numerically stale entries die with the version
bump.  Duplicate keys resolve last-write-wins at load time.  Appends go
through a single writer (the CLI parent process); readers load an immutable
snapshot once.
"""

import json
import os
import time
from pathlib import Path

from .eigensolve import SOLVER_VERSION, assemble, solve
from .errors import SolverError

ENV_VAR = "BILLIARD_CACHE"
_DEFAULT = Path.home() / ".cache" / "nodal-billiards" / "eigen.jsonl"


def default_path(flag_value=None):
    """Cache location: explicit flag beats the environment beats the default."""
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else _DEFAULT


def cache_key(spec, clazz, qnums):
    return "|".join([spec.to_json(), str(clazz),
                     f"{int(qnums[0])},{int(qnums[1])}", f"v{SOLVER_VERSION}"])


class EigenCache:
    def __init__(self, path):
        self.path = Path(path)
        self._records = {}
        if self.path.exists():
            with open(self.path) as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        rec = json.loads(line)
                        self._records[rec["key"]] = rec
                    except (json.JSONDecodeError, KeyError):
                        continue    # tolerate torn/foreign lines

    def get(self, key):
        return self._records.get(key)

    def put(self, key, record):
        record = dict(record, key=key, timestamp=time.time())
        self._records[key] = record
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    def __len__(self):
        return len(self._records)


def record_for(state):
    return {
        "k": state.k,
        "separation": state.separation,
        "radial_coeffs": list(state.radial_coeffs),
        "residual": state.residual,
    }


def solve_cached(cache, spec, qnums, clazz=None):
    """(Eigenstate, cache_hit).  A hit reassembles from stored roots and
    verifies the rebuilt boundary residual stayed within 10x the stored one."""
    key = cache_key(spec, clazz, qnums)
    rec = None if cache is None else cache.get(key)
    if rec is not None:
        state = assemble(spec, qnums, clazz, rec["k"], rec["separation"])
        if state.residual > 10.0 * rec["residual"] + 1e-9:
            raise SolverError(
                f"cache entry failed residual check: {state.residual} vs "
                f"stored {rec['residual']} for {key}")
        return state, True
    state = solve(spec, qnums, clazz)
    if cache is not None:
        cache.put(key, record_for(state))
    return state, False
