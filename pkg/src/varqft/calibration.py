"""Device calibration data and the noise scenarios built from it.

The CSV layout is fixed::

    qubit,t1_us,t2_us,frequency_ghz,temperature_mk,gate_time_1q_ns,id_error,rz_error,sx_error,x_error,ecr_error,gate_time_2q_ns

A dash (or an empty cell) marks an absent optional value. The bundled file
holds the two IBM Brisbane qubits the circuits are mapped to.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .channels import ThermalParams, excited_population
from .circuits import ALL_NOISE, CROSSTALK, DEPOLARIZING, NOISELESS, SCENARIO_KINDS, THERMAL, NoiseScenario

HEADER = (
    "qubit", "t1_us", "t2_us", "frequency_ghz", "temperature_mk", "gate_time_1q_ns",
    "id_error", "rz_error", "sx_error", "x_error", "ecr_error", "gate_time_2q_ns",
)
ABSENT = {"", "-", "\u2013", "\u2014"}  # empty, hyphen, en dash, em dash
DEFAULT_TEMPERATURE_MK = 15.0

# circuit wire -> device qubit
WIRE_TO_QUBIT = (2, 3)

EPS_1Q = 2.5e-4
EPS_2Q = 2.5e-3
ZETA_HZ = 1.5e5
TWO_QUBIT_GATE_TIME_S = 660e-9
# Duration over which the ZZ phase accumulates per two-qubit gate in the
# simulated scenarios. Shorter than the nominal ECR time; see README.
CROSSTALK_TIME_S = 600e-9


class CalibrationError(ValueError):
    pass


@dataclass(frozen=True)
class CalibrationRecord:
    qubit_id: int
    t1_us: float
    t2_us: float
    frequency_ghz: float
    temperature_mk: float
    single_gate_time_ns: float
    id_error: float
    rz_error: float
    sx_error: float
    x_error: float
    ecr_error: float | None = None
    two_qubit_gate_time_ns: float | None = None

    def __post_init__(self):
        where = f"qubit {self.qubit_id}"
        if not self.t1_us > 0:
            raise CalibrationError(f"{where}: t1_us must be positive, got {self.t1_us}")
        if not self.t2_us > 0:
            raise CalibrationError(f"{where}: t2_us must be positive, got {self.t2_us}")
        if self.t2_us > 2 * self.t1_us:
            raise CalibrationError(f"{where}: t2_us={self.t2_us} exceeds 2*t1_us={2 * self.t1_us}")
        if not self.frequency_ghz > 0 or not self.temperature_mk > 0:
            raise CalibrationError(f"{where}: frequency_ghz and temperature_mk must be positive")
        for name in ("single_gate_time_ns", "two_qubit_gate_time_ns"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise CalibrationError(f"{where}: {name} must be >= 0, got {v}")
        for name in ("id_error", "rz_error", "sx_error", "x_error", "ecr_error"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise CalibrationError(f"{where}: {name}={v} outside [0, 1]")

    @property
    def has_two_qubit_data(self) -> bool:
        return self.ecr_error is not None and self.two_qubit_gate_time_ns is not None


def _number(cell: str, row: int, field: str, optional: bool = False) -> float | None:
    cell = cell.strip()
    if cell in ABSENT:
        if optional:
            return None
        raise CalibrationError(f"row {row}: missing value for {field}")
    try:
        v = float(cell)
    except ValueError:
        raise CalibrationError(f"row {row}: {field}={cell!r} is not a number") from None
    if not math.isfinite(v):
        raise CalibrationError(f"row {row}: {field}={cell!r} is not finite")
    return v


def parse_calibration(text: str) -> list[CalibrationRecord]:
    """Parse calibration CSV text into records, one per data row.

    Raises
    ------
    CalibrationError
        On a wrong header, a malformed row or a violated invariant. The
        message names the (1-based, header excluded) row and the field.
    """
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if any(c.strip() for c in r)]
    if not rows:
        raise CalibrationError("calibration file is empty")
    header = tuple(c.strip() for c in rows[0])
    if header != HEADER:
        raise CalibrationError(f"unexpected header {','.join(header)}; expected {','.join(HEADER)}")
    records = []
    for i, r in enumerate(rows[1:], start=1):
        if len(r) != len(HEADER):
            raise CalibrationError(f"row {i}: expected {len(HEADER)} fields, got {len(r)}")
        cell = dict(zip(HEADER, r))
        qubit = _number(cell["qubit"], i, "qubit")
        if qubit != int(qubit):
            raise CalibrationError(f"row {i}: qubit must be an integer, got {cell['qubit']!r}")
        temp = _number(cell["temperature_mk"], i, "temperature_mk", optional=True)
        try:
            rec = CalibrationRecord(
                qubit_id=int(qubit),
                t1_us=_number(cell["t1_us"], i, "t1_us"),
                t2_us=_number(cell["t2_us"], i, "t2_us"),
                frequency_ghz=_number(cell["frequency_ghz"], i, "frequency_ghz"),
                temperature_mk=DEFAULT_TEMPERATURE_MK if temp is None else temp,
                single_gate_time_ns=_number(cell["gate_time_1q_ns"], i, "gate_time_1q_ns"),
                id_error=_number(cell["id_error"], i, "id_error"),
                rz_error=_number(cell["rz_error"], i, "rz_error"),
                sx_error=_number(cell["sx_error"], i, "sx_error"),
                x_error=_number(cell["x_error"], i, "x_error"),
                ecr_error=_number(cell["ecr_error"], i, "ecr_error", optional=True),
                two_qubit_gate_time_ns=_number(cell["gate_time_2q_ns"], i, "gate_time_2q_ns", optional=True),
            )
        except CalibrationError as exc:
            raise CalibrationError(f"row {i}: {exc}") from None
        records.append(rec)
    return records


def _fmt(v: float | None) -> str:
    if v is None:
        return "-"
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def format_calibration(records) -> str:
    """Serialise records back to CSV; ``parse_calibration`` inverts it exactly."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in records:
        w.writerow([
            r.qubit_id, _fmt(r.t1_us), _fmt(r.t2_us), _fmt(r.frequency_ghz), _fmt(r.temperature_mk),
            _fmt(r.single_gate_time_ns), _fmt(r.id_error), _fmt(r.rz_error), _fmt(r.sx_error),
            _fmt(r.x_error), _fmt(r.ecr_error), _fmt(r.two_qubit_gate_time_ns),
        ])
    return buf.getvalue()


def load_calibration(path: str | Path | None = None) -> list[CalibrationRecord]:
    """Read a calibration file, or the bundled IBM Brisbane data when ``path`` is None."""
    if path is None:
        text = resources.files("varqft").joinpath("data/ibm_brisbane.csv").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_calibration(text)


def build_thermal_params(rec: CalibrationRecord, gate_time_ns: float) -> ThermalParams:
    """Relaxation parameters of ``rec`` for a gate lasting ``gate_time_ns``."""
    return ThermalParams(
        t1=rec.t1_us * 1e-6,
        t2=rec.t2_us * 1e-6,
        gate_time=gate_time_ns * 1e-9,
        p_excited=excited_population(rec.frequency_ghz * 1e9, rec.temperature_mk),
    )


@dataclass(frozen=True)
class ScenarioConstants:
    eps_1q: float = EPS_1Q
    eps_2q: float = EPS_2Q
    zeta_hz: float = ZETA_HZ
    two_qubit_gate_time_s: float = TWO_QUBIT_GATE_TIME_S
    crosstalk_time_s: float = CROSSTALK_TIME_S


def default_scenario_constants() -> ScenarioConstants:
    return ScenarioConstants()


def _by_qubit(records) -> dict[int, CalibrationRecord]:
    table = {r.qubit_id: r for r in records}
    missing = [q for q in WIRE_TO_QUBIT if q not in table]
    if missing:
        raise CalibrationError(f"calibration lacks qubit(s) {missing}")
    return table


def calibrated_errors(records=None) -> tuple[tuple[float, float], float]:
    """Per-wire SX error rates and the ECR error rate of the coupled pair."""
    table = _by_qubit(load_calibration() if records is None else records)
    wires = [table[q] for q in WIRE_TO_QUBIT]
    two_q = [r for r in wires if r.ecr_error is not None]
    if not two_q:
        raise CalibrationError("no ECR error rate for the mapped qubits")
    return (wires[0].sx_error, wires[1].sx_error), two_q[0].ecr_error


def build_scenario(kind: str, records=None, constants: ScenarioConstants | None = None) -> NoiseScenario:
    """Noise scenario of the given kind for circuit wires mapped to qubits 2 and 3.

    The depolarizing and crosstalk scenarios use the flat error rates of
    ``constants``. Scenarios with thermal relaxation take their depolarizing
    rates from the calibration record (SX error per wire, ECR error for the
    pair), since those rates describe the gates the relaxation times belong to.
    """
    if kind not in SCENARIO_KINDS:
        raise CalibrationError(f"unknown scenario kind {kind!r}; expected one of {SCENARIO_KINDS}")
    if kind == NOISELESS:
        return NoiseScenario()
    c = default_scenario_constants() if constants is None else constants
    xt = dict(zeta_hz=c.zeta_hz, crosstalk_time_s=c.crosstalk_time_s) if "crosstalk" in kind else {}
    if kind in (DEPOLARIZING, CROSSTALK):
        return NoiseScenario(kind, (c.eps_1q, c.eps_1q), c.eps_2q, **xt)
    records = load_calibration() if records is None else records
    table = _by_qubit(records)
    eps_1q, eps_2q = calibrated_errors(records)
    wires = [table[q] for q in WIRE_TO_QUBIT]
    tg2 = next(r.two_qubit_gate_time_ns for r in wires if r.two_qubit_gate_time_ns is not None)
    assert kind in (THERMAL, ALL_NOISE)
    return NoiseScenario(
        kind,
        eps_1q,
        eps_2q,
        thermal_1q=tuple(build_thermal_params(r, r.single_gate_time_ns) for r in wires),
        thermal_2q=tuple(build_thermal_params(r, tg2) for r in wires),
        **xt,
    )
