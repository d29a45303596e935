import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from dotenv import dotenv_values, load_dotenv

# Try loading .env from project root, traversing up if needed
_env_path = Path(__file__).resolve().parent.parent.parent / ".env"
if _env_path.exists():
    load_dotenv(_env_path)
else:
    load_dotenv()  # fallback to CWD

# ==========================================
# Logging
# ==========================================
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FORMAT = os.getenv("LOG_FORMAT", "text").lower()

# ==========================================
# Deformation Parameter & Cutoffs
# ==========================================
QSPHERE_Q0 = os.getenv("QSPHERE_Q0", "1/2").strip()
QSPHERE_OPERATOR_CUTOFF = int(os.getenv("QSPHERE_OPERATOR_CUTOFF", "8").strip())
QSPHERE_TRACE_CUTOFF = int(os.getenv("QSPHERE_TRACE_CUTOFF", "20").strip())
QSPHERE_LADDER_LIMIT = int(os.getenv("QSPHERE_LADDER_LIMIT", "48").strip())
QSPHERE_PRECISION_BITS = int(os.getenv("QSPHERE_PRECISION_BITS", "256").strip())
QSPHERE_Z = os.getenv("QSPHERE_Z", "3").strip()

# ==========================================
# Verification Runs
# ==========================================
QSPHERE_SEED = int(os.getenv("QSPHERE_SEED", "7").strip())
QSPHERE_SAMPLES = int(os.getenv("QSPHERE_SAMPLES", "200").strip())
QSPHERE_THREADS = max(1, int(os.getenv("QSPHERE_THREADS", "1").strip()))

# ==========================================
# HTTP Gateway
# ==========================================
PORT = int(os.getenv("PORT", "8080").strip())
MAX_REQUEST_SIZE = int(os.getenv("MAX_REQUEST_SIZE", "65536").strip())
GATEWAY_MAX_CUTOFF = int(os.getenv("GATEWAY_MAX_CUTOFF", "10").strip())
GATEWAY_QUEUE_DEPTH = max(1, int(os.getenv("GATEWAY_QUEUE_DEPTH", "2").strip()))

SUITE_NAMES = ("scalar", "coordalg", "uq", "podles", "haar", "corep", "fodc", "spectral")
# suites served by POST /verify
GATEWAY_SUITES = tuple(name for name in SUITE_NAMES if name != "spectral")

DEFAULT_TOLERANCES = {
    "eigen": 1e-12,
    "operator": 1e-10,
    "commutant": 1e-9,
    "haar_trace": 1e-4,
    "tau_trace": 1e-3,
    "zeta": 1e-9,
    "residue": 1e-3,
    "stabilization": 1e-6,
}


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings for one CLI or gateway run."""

    q0: Fraction = Fraction(1, 2)
    cutoff: int = QSPHERE_OPERATOR_CUTOFF
    trace_cutoff: int = QSPHERE_TRACE_CUTOFF
    z: complex = 3 + 0j
    seed: int = QSPHERE_SEED
    samples: int = QSPHERE_SAMPLES
    precision_bits: int = QSPHERE_PRECISION_BITS
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_format: str = "json"
    suites: tuple[str, ...] = SUITE_NAMES
    threads: int = QSPHERE_THREADS

    def tolerance(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES.get(name, 1e-9))

    def with_overrides(self, **changes) -> "RunConfig":
        return replace(self, **changes)


def _environment_defaults() -> dict[str, str]:
    return {
        "q0": QSPHERE_Q0,
        "cutoff": str(QSPHERE_OPERATOR_CUTOFF),
        "trace_cutoff": str(QSPHERE_TRACE_CUTOFF),
        "z": QSPHERE_Z,
        "seed": str(QSPHERE_SEED),
        "samples": str(QSPHERE_SAMPLES),
        "precision_bits": str(QSPHERE_PRECISION_BITS),
        "output_format": "json",
        "suites": ",".join(SUITE_NAMES),
        "threads": str(QSPHERE_THREADS),
    }


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse a flat ``key = value`` file. Unknown keys are kept for the validator to reject."""
    config_path = Path(path)
    if not config_path.exists():
        from core.validators import ValidationError

        raise ValidationError(f"Config file not found: {config_path}", "CONFIG_MISSING")
    return {k.strip().lower(): (v or "").strip() for k, v in dotenv_values(config_path).items()}


def load_run_config(path: str | Path | None = None, overrides: dict[str, str | None] | None = None) -> RunConfig:
    """Resolve environment defaults, then the config file, then explicit overrides."""
    from core.validators import validate_raw_config

    raw = _environment_defaults()
    if path:
        raw.update(read_config_file(path))
    for key, value in (overrides or {}).items():
        if value is not None:
            raw[key] = str(value)
    return validate_raw_config(raw)
