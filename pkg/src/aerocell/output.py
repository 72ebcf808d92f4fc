"""Result files: metrics JSON, per-step CSV and optional SVG charts."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict

from .errors import AerocellError
from .sim_engine import SeasonMetrics

STEP_COLUMNS = ("t", "bs_id", "p_hover", "p_mimo", "p_ris", "p_pv", "e_batt", "replaced")



class MetricsDocument(BaseModel):
    """Schema of ``metrics.json``."""

    model_config = ConfigDict(extra="forbid")

    meta: dict
    seasons: dict[str, SeasonMetrics]
    aggregate: SeasonMetrics


def metrics_json(report):
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def validate_metrics(text):
    """Parse and validate a metrics document; returns the parsed model."""
    doc = MetricsDocument.model_validate_json(text)
    for name, s in [*doc.seasons.items(), ("aggregate", doc.aggregate)]:
        if s.anur < 0 or s.anur_no_res < 0:
            raise ValueError(f"{name}: negative ANUR")
        if not (0.0 <= s.arec_grid <= 100.0):
            raise ValueError(f"{name}: AREC {s.arec_grid} outside [0, 100]")
    return doc


def metrics_schema():
    return MetricsDocument.model_json_schema()


class OutputError(AerocellError, OSError):
    pass


def _write(path, writer):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        writer(path)
    except OSError as exc:
        raise OutputError(f"{path}: {exc.strerror or exc}") from exc


def write_step_csv(log, path):
    def writer(p):
        stamps = np.datetime_as_string(log.t, unit="s")
        with p.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(STEP_COLUMNS)
            for i, stamp in enumerate(stamps):
                for b, tr in enumerate(log.traces):
                    w.writerow([stamp + "Z", b, repr(float(tr.p_hover[i])), repr(float(log.p_mimo[b])),
                                repr(float(log.p_ris[b])), repr(float(tr.p_pv[i])),
                                repr(float(tr.e_batt[i])), int(tr.replaced[i])])

    _write(Path(path), writer)


def write_svg(log, out_dir):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    hours = np.arange(len(log.t)) * ((log.t[1] - log.t[0]).astype(float) / 3600.0 if len(log.t) > 1 else 1)
    paths = []
    for name, attr, label in (("battery.svg", "e_batt", "stored energy [Wh]"),
                              ("pv_output.svg", "p_pv", "PV output [W]")):
        fig, ax = plt.subplots(figsize=(10, 4))
        for b, tr in enumerate(log.traces):
            ax.plot(hours, getattr(tr, attr), lw=0.8, label=f"BS {b}")
        ax.set_xlabel("simulation hour")
        ax.set_ylabel(label)
        ax.legend(ncol=4, fontsize="small")
        fig.tight_layout()
        path = out_dir / name
        _write(path, lambda p: fig.savefig(p, format="svg", metadata={"Date": None}))
        plt.close(fig)
        paths.append(path)
    return paths


def emit_results(report, log, out_dir, formats=("json", "csv"), plot=False):
    """Write the requested artifacts into ``out_dir``; returns the written paths."""
    out_dir = Path(out_dir)
    written = []
    if "json" in formats:
        path = out_dir / "metrics.json"
        text = metrics_json(report)
        _write(path, lambda p: p.write_text(text))
        written.append(path)
    if "csv" in formats and log is not None:
        path = out_dir / "steps.csv"
        write_step_csv(log, path)
        written.append(path)
    if plot and log is not None:
        written += write_svg(log, out_dir)
    return written
