"""Weather time series: CSV ingestion, resampling, synthetic clear-sky days.

CSV columns are ``timestamp,temp_c,pressure_pa,ghi_wm2`` with ISO-8601 UTC
timestamps. The pressure column is optional and defaults to 101325 Pa.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import WeatherError

STANDARD_PRESSURE = 101325.0
COLUMNS = ("timestamp", "temp_c", "pressure_pa", "ghi_wm2")
BOUNDS = {
    "T_ws": (-60.0, 60.0),
    "p_0": (80000.0, 110000.0),
    "G_T": (0.0, math.inf),
}


@dataclass(frozen=True)
class WeatherSample:
    t: np.datetime64
    T_ws: float
    p_0: float
    G_T: float


@dataclass(frozen=True, eq=False)
class WeatherSeries:
    """Column-oriented weather series.

    ``t`` holds ``datetime64[s]`` UTC timestamps; ``step`` is the nominal
    spacing in seconds (median spacing of the samples).
    """

    t: np.ndarray
    T_ws: np.ndarray
    p_0: np.ndarray
    G_T: np.ndarray
    step: float

    def __len__(self):
        return len(self.t)

    def __getitem__(self, i):
        return WeatherSample(self.t[i], float(self.T_ws[i]), float(self.p_0[i]), float(self.G_T[i]))

    @property
    def samples(self):
        return [self[i] for i in range(len(self))]

    @property
    def seconds(self):
        """Sample times in seconds relative to the first sample."""
        return (self.t - self.t[0]).astype("timedelta64[s]").astype(np.float64)

    def equals(self, other):
        return (
            self.step == other.step
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.T_ws, other.T_ws)
            and np.array_equal(self.p_0, other.p_0)
            and np.array_equal(self.G_T, other.G_T)
        )


def make_series(t, T_ws, p_0, G_T, max_gap_s=3600.0, validate=True):
    """Build a validated, time-sorted :class:`WeatherSeries` from columns."""
    t = np.asarray(t, dtype="datetime64[s]")
    cols = [np.asarray(a, dtype=np.float64) for a in (T_ws, p_0, G_T)]
    if not (len(t) == len(cols[0]) == len(cols[1]) == len(cols[2])):
        raise WeatherError("column lengths differ")
    order = np.argsort(t, kind="stable")
    t = t[order]
    cols = [a[order] for a in cols]
    if validate:
        _check_bounds(dict(zip(("T_ws", "p_0", "G_T"), cols)), rows=order + 1)
        _check_spacing(t, max_gap_s)
    diffs = np.diff(t).astype(np.float64)
    step = float(np.median(diffs)) if len(diffs) else 60.0
    return WeatherSeries(t, *cols, step=step)


def _check_bounds(cols, rows):
    for name, values in cols.items():
        lo, hi = BOUNDS[name]
        bad = np.flatnonzero(~((values >= lo) & (values <= hi)))
        if len(bad):
            i = bad[0]
            raise WeatherError(
                f"{name}={values[i]} outside [{lo}, {hi}]", row=int(rows[i]), field=name
            )


def _check_spacing(t, max_gap_s):
    if len(t) < 2:
        return
    diffs = np.diff(t).astype(np.float64)
    if np.any(diffs <= 0):
        i = int(np.flatnonzero(diffs <= 0)[0])
        raise WeatherError(f"duplicate timestamp {t[i + 1]}", field="timestamp")
    if np.any(diffs > max_gap_s):
        i = int(np.flatnonzero(diffs > max_gap_s)[0])
        raise WeatherError(
            f"gap of {diffs[i]:.0f} s after {t[i]} exceeds {max_gap_s:.0f} s", field="timestamp"
        )


def _parse_time(text):
    ts = datetime.fromisoformat(text.strip().replace("Z", "+00:00"))
    if ts.tzinfo is not None:
        ts = ts.astimezone(timezone.utc).replace(tzinfo=None)
    return np.datetime64(ts, "s")


def load_weather_csv(path, columns=None, max_gap_s=3600.0):
    """Read a weather CSV into a :class:`WeatherSeries`.

    ``columns`` optionally maps the canonical names in :data:`COLUMNS` to
    the header names used by the file.
    """
    names = dict(zip(COLUMNS, COLUMNS))
    names.update(columns or {})
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for key in ("timestamp", "temp_c", "ghi_wm2"):
            if names[key] not in header:
                raise WeatherError(f"{path}: missing column '{names[key]}'", field=names[key])
        has_p = names["pressure_pa"] in header
        t, T, p, G = [], [], [], []
        for row_no, row in enumerate(reader, start=1):
            try:
                t.append(_parse_time(row[names["timestamp"]]))
                T.append(float(row[names["temp_c"]]))
                p.append(float(row[names["pressure_pa"]]) if has_p else STANDARD_PRESSURE)
                G.append(float(row[names["ghi_wm2"]]))
            except (TypeError, ValueError) as exc:
                raise WeatherError(f"{path}: cannot parse ({exc})", row=row_no) from None
    if not t:
        raise WeatherError(f"{path}: no data rows")
    return make_series(t, T, p, G, max_gap_s=max_gap_s)


def write_weather_csv(series, path):
    """Serialize a series in the canonical CSV layout (lossless floats)."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(COLUMNS)
        for i in range(len(series)):
            stamp = np.datetime_as_string(series.t[i], unit="s") + "Z"
            w.writerow([stamp, repr(float(series.T_ws[i])), repr(float(series.p_0[i])),
                        repr(float(series.G_T[i]))])


def resample_to_step(series, step_s):
    """Linearly interpolate ``series`` onto a uniform ``step_s`` grid.

    The grid starts at the first sample and spans ``len(series)`` nominal
    steps, so every input sample covers one nominal interval. Values past
    the last sample are held constant.
    """
    if len(series) == 0:
        raise WeatherError("cannot resample an empty series")
    if step_s <= 0:
        raise WeatherError(f"step must be positive, got {step_s}")
    x = series.seconds
    span = x[-1] + series.step if len(series) > 1 else step_s
    n = int(math.ceil(span / step_s - 1e-9))
    grid = np.arange(n, dtype=np.float64) * step_s
    t = series.t[0] + grid.astype("timedelta64[s]")
    cols = [np.interp(grid, x, a) for a in (series.T_ws, series.p_0, series.G_T)]
    return WeatherSeries(t, *cols, step=float(step_s))


def solar_declination(day_of_year):
    """Solar declination in degrees (Cooper's formula)."""
    return 23.44 * math.sin(2.0 * math.pi * (284 + day_of_year) / 365.0)


def day_length_hours(day_of_year, latitude):
    """Astronomical day length in hours; 0 for polar night, 24 for polar day."""
    phi = math.radians(latitude)
    delta = math.radians(solar_declination(day_of_year))
    cos_w = -math.tan(phi) * math.tan(delta)
    cos_w = min(1.0, max(-1.0, cos_w))
    return 2.0 * math.degrees(math.acos(cos_w)) / 15.0


def noon_elevation(day_of_year, latitude):
    """Solar elevation at solar noon, degrees."""
    return 90.0 - abs(latitude - solar_declination(day_of_year))


def synthetic_clear_sky(
    day_of_year,
    latitude,
    peak_irradiance,
    T_day,
    T_night,
    p_0=STANDARD_PRESSURE,
    step_s=60.0,
    year=2022,
):
    """One synthetic clear-sky day at ``step_s`` resolution.

    Irradiance is a half-sine between sunrise and sunset, centred on solar
    noon at 12:00 UTC. Temperature follows a sinusoid between ``T_night``
    (03:00) and ``T_day`` (15:00).
    """
    if peak_irradiance < 0:
        raise WeatherError("peak irradiance must be non-negative", field="G_T")
    n = int(round(86400.0 / step_s))
    hours = np.arange(n) * step_s / 3600.0
    length = day_length_hours(day_of_year, latitude)
    sunrise = 12.0 - length / 2.0
    if length > 0:
        G = peak_irradiance * np.maximum(0.0, np.sin(np.pi * (hours - sunrise) / length))
        G[(hours < sunrise) | (hours > sunrise + length)] = 0.0
    else:
        G = np.zeros(n)
    mean = 0.5 * (T_day + T_night)
    amp = 0.5 * (T_day - T_night)
    T = mean + amp * np.sin(2.0 * np.pi * (hours - 9.0) / 24.0)
    start = np.datetime64(f"{year}-01-01T00:00:00") + np.timedelta64(int(day_of_year) - 1, "D")
    t = start + (hours * 3600.0).round().astype("timedelta64[s]")
    return WeatherSeries(t, T, np.full(n, float(p_0)), G, step=float(step_s))
