"""Pipeline configuration: one flat dataclass, one flat key=value file format.

Every decision flag that shapes a run lives here and is echoed into every
report, so runs are self-describing.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

from .errors import InvalidConfig

VALID_VARIANTS = ("raw", "emd", "pca-k", "pca-w")
VALID_NORMALIZATIONS = ("raw", "unit_variance")
VALID_ORIENTATIONS = ("cluster_samples", "cluster_variables")


@dataclass(frozen=True)
class PipelineConfig:
    variants: tuple[str, ...] = VALID_VARIANTS
    kaiser_inclusive: bool = True
    wishart_strict: bool = True
    score_normalization: str = "raw"
    k_min: int = 2
    k_max: int = 10
    db_p: int = 2
    db_q: int = 2
    kmeans_seed: int = 0
    kmeans_restarts: int = 25
    kmeans_max_iters: int = 300
    emd_max_imfs: int = 10
    emd_sd_threshold: float = 0.2
    similarity_tolerance: int = 1
    orientation: str = "cluster_samples"

    def __post_init__(self):
        object.__setattr__(self, "variants", tuple(self.variants))
        self.validate()

    def validate(self):
        for v in self.variants:
            if v not in VALID_VARIANTS:
                raise InvalidConfig(f"unknown variant {v!r}")
        if not self.variants:
            raise InvalidConfig("at least one variant is required")
        if self.score_normalization not in VALID_NORMALIZATIONS:
            raise InvalidConfig(
                f"score_normalization must be one of {VALID_NORMALIZATIONS}"
            )
        if self.orientation not in VALID_ORIENTATIONS:
            raise InvalidConfig(f"orientation must be one of {VALID_ORIENTATIONS}")
        if self.k_min < 2:
            raise InvalidConfig("k_min must be at least 2")
        if self.k_max < self.k_min:
            raise InvalidConfig("k_max must be >= k_min")
        if self.db_p < 1 or self.db_q < 1:
            raise InvalidConfig("db_p and db_q must be at least 1")
        if self.kmeans_restarts < 1:
            raise InvalidConfig("kmeans_restarts must be at least 1")
        if self.kmeans_max_iters < 1:
            raise InvalidConfig("kmeans_max_iters must be at least 1")
        if self.emd_max_imfs < 1:
            raise InvalidConfig("emd_max_imfs must be at least 1")
        if not 0.0 < self.emd_sd_threshold:
            raise InvalidConfig("emd_sd_threshold must be positive")
        if self.similarity_tolerance < 0:
            raise InvalidConfig("similarity_tolerance must be nonnegative")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["variants"] = list(self.variants)
        return d


def save_config(config: PipelineConfig, path: str) -> None:
    lines = []
    for f in fields(config):
        value = getattr(config, f.name)
        if f.name == "variants":
            rendered = ",".join(value)
        elif isinstance(value, bool):
            rendered = "true" if value else "false"
        elif isinstance(value, float):
            rendered = repr(value)
        else:
            rendered = str(value)
        lines.append(f"{f.name}={rendered}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_config(path: str) -> PipelineConfig:
    known = {f.name: f for f in fields(PipelineConfig)}
    kwargs = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InvalidConfig(f"line {lineno}: expected key=value, got {line!r}")
            key, _, raw = line.partition("=")
            key = key.strip()
            raw = raw.strip()
            if key not in known:
                raise InvalidConfig(f"line {lineno}: unknown key {key!r}")
            kwargs[key] = _parse_value(known[key].type, raw, lineno)
    return PipelineConfig(**kwargs)


def _parse_value(type_name, raw: str, lineno: int):
    type_name = str(type_name)
    if "tuple" in type_name:
        return tuple(part.strip() for part in raw.split(",") if part.strip())
    if "bool" in type_name:
        if raw.lower() in ("true", "1", "yes"):
            return True
        if raw.lower() in ("false", "0", "no"):
            return False
        raise InvalidConfig(f"line {lineno}: expected a boolean, got {raw!r}")
    try:
        if "int" in type_name:
            return int(raw)
        if "float" in type_name:
            return float(raw)
    except ValueError:
        raise InvalidConfig(f"line {lineno}: cannot parse {raw!r}") from None
    return raw
