"""Plot-ready serialization of time series: CSV and JSON, written atomically.

Columns, in order: t, one c_<estimator> per requested estimator, the
eigenvalues mu_1..mu_r of rho(t), boundary_pop, and one 0/1
valid_<estimator> flag per estimator. Floats carry 17 significant digits
so a round-trip through text is bit-identical.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .errors import EntdynError
from .scenarios import BundleResult, TimeSeries

_FMT = "%.17g"


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _header(series: TimeSeries) -> list[str]:
    n_mu = series.records[0].eigenvalues.size if series.records else 0
    cols = ["t"]
    cols += [f"c_{e}" for e in series.estimators]
    cols += [f"mu_{i + 1}" for i in range(n_mu)]
    cols += ["boundary_pop"]
    cols += [f"valid_{e}" for e in series.estimators]
    return cols


def _rows(series: TimeSeries):
    for r in series.records:
        row = [r.t]
        row += [r.values[e].value for e in series.estimators]
        row += list(r.eigenvalues)
        row += [r.boundary_pop]
        row += [1 if (r.values[e].valid and r.values[e].converged) else 0
                for e in series.estimators]
        yield row


def _fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return _FMT % x


def write_csv(series: TimeSeries, path) -> None:
    lines = [",".join(_header(series))]
    lines += [",".join(_fmt(x) for x in row) for row in _rows(series)]
    _atomic_write(Path(path), "\n".join(lines) + "\n")


def write_json(series: TimeSeries, path, metadata: dict | None = None) -> None:
    header = _header(series)
    payload = {
        "metadata": {
            "name": series.name,
            "artifact_version": _version(),
            "seed": series.scenario.seed if series.scenario else None,
            "scenario": _scenario_echo(series),
            **(metadata or {}),
        },
        "columns": header,
        "rows": [list(row) for row in _rows(series)],
    }
    _atomic_write(Path(path), json.dumps(payload, indent=1))


def _version() -> str:
    from importlib.metadata import PackageNotFoundError, version
    try:
        return version("entdyn")
    except PackageNotFoundError:
        return "0.1.0"


def _scenario_echo(series: TimeSeries):
    sc = series.scenario
    if sc is None:
        return None
    return {
        "name": sc.name,
        "dims": [sc.dims.d1, sc.dims.d2],
        "state": {"kind": sc.state.kind, "bell": sc.state.bell,
                  "a": [sc.state.a.real, complex(sc.state.a).imag],
                  "b": [complex(sc.state.b).real, complex(sc.state.b).imag],
                  "labels": list(sc.state.labels)},
        "model": {"kind": sc.model.kind.value, "gamma": sc.model.gamma,
                  "nbar": sc.model.nbar, "ladder": sc.model.ladder.value},
        "t_max": sc.t_max, "n_points": sc.n_points,
        "estimators": list(sc.estimators), "seed": sc.seed,
    }


def write_series(series: TimeSeries, out_dir, fmt: str = "csv",
                 metadata: dict | None = None) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        path = out_dir / f"{series.name}.csv"
        write_csv(series, path)
    elif fmt == "json":
        path = out_dir / f"{series.name}.json"
        write_json(series, path, metadata)
    else:
        raise EntdynError(f"unknown export format {fmt!r}")
    return path


def write_fit_summary(bundle: BundleResult, path) -> None:
    lines = ["series,estimator,fitted_rate"]
    lines += [f"{name},{est},{_FMT % rate}" for name, est, rate in bundle.fits]
    _atomic_write(Path(path), "\n".join(lines) + "\n")


def read_csv(path) -> tuple[list[str], list[list[float]]]:
    """Parse a CSV written by :func:`write_csv` (round-trip helper)."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    header = lines[0].split(",")
    rows = [[float(x) for x in ln.split(",")] for ln in lines[1:]]
    return header, rows
