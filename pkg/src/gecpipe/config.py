"""Run configuration: the noising config file and the filter rules file.

Both are JSON documents parsed strictly — unknown keys are rejected so a
typo cannot silently run with defaults. All randomness in a run flows
from the single `seed` value here.
"""

from __future__ import annotations

import hashlib
import json
import string
from dataclasses import dataclass, field, replace

from .corpus_io import ICELANDIC_LETTERS, FilterRules
from .errors import ConfigError, IOFailure

__all__ = [
    "OpConfig",
    "NoiseConfig",
    "LexiconPaths",
    "RULE_OPS",
    "NAIVE_OPS",
    "ALL_OPS",
    "load_noise_config",
    "load_filter_rules",
    "config_hash",
]

# Application order: grammar-level ops first, then word-level, then
# character-level, so character noise can land on top of the rest.
RULE_OPS = ("noun_case", "mood", "dativitis", "split_compound", "misspelling")
NAIVE_OPS = (
    "delete_space",
    "delete_commas",
    "swap_words",
    "duplicate_word",
    "duplicate_char",
    "drop_char",
    "char_swap",
    "accent",
    "random_char",
)
ALL_OPS = RULE_OPS + NAIVE_OPS

DEFAULT_RANDOM_ALPHABET = string.ascii_lowercase + string.digits

# Per-op keys accepted beyond the common four.
_EXTRA_OP_KEYS = {
    "delete_commas": {"site_probability"},
    "random_char": {"alphabet"},
    "split_compound": {"min_part_len"},
    "mood": {"direction"},
    "dativitis": {"np_wide"},
}
_COMMON_OP_KEYS = {"enabled", "probability", "intensity", "words"}


@dataclass(frozen=True)
class OpConfig:
    """Knobs for a single corruption op.

    probability overrides the global naive_op_probability for this op
    (None = inherit). intensity = character events per chosen word;
    words = words touched per sentence (character-level ops only).
    """

    enabled: bool = True
    probability: float | None = None
    intensity: int = 1
    words: int = 1
    site_probability: float = 1.0
    alphabet: str = DEFAULT_RANDOM_ALPHABET
    min_part_len: int = 3
    direction: str = "ind2subj"
    np_wide: bool = False

    def __post_init__(self):
        if self.probability is not None and not 0.0 <= self.probability <= 1.0:
            raise ConfigError(f"op probability must be in [0,1], got {self.probability}")
        if not 0.0 <= self.site_probability <= 1.0:
            raise ConfigError(f"site_probability must be in [0,1], got {self.site_probability}")
        if self.intensity < 1:
            raise ConfigError(f"intensity must be >= 1, got {self.intensity}")
        if self.words < 1:
            raise ConfigError(f"words must be >= 1, got {self.words}")
        if self.min_part_len < 1:
            raise ConfigError(f"min_part_len must be >= 1, got {self.min_part_len}")
        if self.direction not in ("ind2subj", "subj2ind"):
            raise ConfigError(f"mood direction must be ind2subj or subj2ind, got {self.direction!r}")
        if not self.alphabet:
            raise ConfigError("replacement alphabet must be non-empty")


@dataclass(frozen=True)
class LexiconPaths:
    inflection: str | None = None
    misspellings: str | None = None
    oblique_verbs: str | None = None
    char_rules: str | None = None  # None = bundled default
    accents: str | None = None  # None = bundled default
    abbreviations: str | None = None  # None = bundled default


@dataclass(frozen=True)
class NoiseConfig:
    seed: int = 0
    naive_op_probability: float = 0.8
    # None = apply rule-based ops wherever a site exists; a float gates
    # each rule-based op with that probability instead.
    rule_based_probability: float | None = None
    ops: dict = field(default_factory=dict)  # op_id -> OpConfig
    lexicons: LexiconPaths = field(default_factory=LexiconPaths)

    def __post_init__(self):
        if not 0.0 <= self.naive_op_probability <= 1.0:
            raise ConfigError(
                f"naive_op_probability must be in [0,1], got {self.naive_op_probability}"
            )
        if self.rule_based_probability is not None and not 0.0 <= self.rule_based_probability <= 1.0:
            raise ConfigError(
                f"rule_based_probability must be in [0,1], got {self.rule_based_probability}"
            )
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        ops = dict(self.ops)
        for op_id in ALL_OPS:
            ops.setdefault(op_id, OpConfig())
        unknown = set(ops) - set(ALL_OPS)
        if unknown:
            raise ConfigError(f"unknown op ids: {sorted(unknown)}")
        object.__setattr__(self, "ops", ops)

    def op(self, op_id: str) -> OpConfig:
        return self.ops[op_id]

    def op_probability(self, op_id: str) -> float:
        """Effective per-sentence gate probability for the op."""
        conf = self.ops[op_id]
        if conf.probability is not None:
            return conf.probability
        if op_id in RULE_OPS:
            return 1.0 if self.rule_based_probability is None else self.rule_based_probability
        return self.naive_op_probability

    def with_seed(self, seed: int) -> "NoiseConfig":
        return replace(self, seed=seed)

    def only_op(self, op_id: str) -> "NoiseConfig":
        """Variant with every op but `op_id` disabled (typed test sets)."""
        if op_id not in ALL_OPS:
            raise ConfigError(f"unknown op id: {op_id}")
        ops = {
            name: replace(conf, enabled=(name == op_id))
            for name, conf in self.ops.items()
        }
        return replace(self, ops=ops)

    def to_json_obj(self) -> dict:
        ops = {}
        for op_id in ALL_OPS:
            conf = self.ops[op_id]
            entry = {"enabled": conf.enabled, "intensity": conf.intensity, "words": conf.words}
            if conf.probability is not None:
                entry["probability"] = conf.probability
            for key in _EXTRA_OP_KEYS.get(op_id, ()):
                entry[key] = getattr(conf, key)
            ops[op_id] = entry
        lex = {k: v for k, v in vars(self.lexicons).items() if v is not None}
        obj = {
            "seed": self.seed,
            "naive_op_probability": self.naive_op_probability,
            "ops": ops,
            "lexicons": lex,
        }
        if self.rule_based_probability is not None:
            obj["rule_based_probability"] = self.rule_based_probability
        return obj


def _check_keys(obj: dict, allowed: set, where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown {where} keys: {sorted(unknown)}")


def _parse_op(op_id: str, raw: dict) -> OpConfig:
    if not isinstance(raw, dict):
        raise ConfigError(f"ops.{op_id} must be an object")
    allowed = _COMMON_OP_KEYS | _EXTRA_OP_KEYS.get(op_id, set())
    _check_keys(raw, allowed, f"ops.{op_id}")
    kwargs = {}
    for key, value in raw.items():
        if key == "enabled" and not isinstance(value, bool):
            raise ConfigError(f"ops.{op_id}.enabled must be a boolean")
        if key in ("intensity", "words", "min_part_len") and not isinstance(value, int):
            raise ConfigError(f"ops.{op_id}.{key} must be an integer")
        kwargs[key] = value
    return OpConfig(**kwargs)


def noise_config_from_obj(obj: dict) -> NoiseConfig:
    if not isinstance(obj, dict):
        raise ConfigError("config root must be a JSON object")
    _check_keys(
        obj,
        {"seed", "naive_op_probability", "rule_based_probability", "ops", "lexicons"},
        "config",
    )
    kwargs: dict = {}
    if "seed" in obj:
        if not isinstance(obj["seed"], int):
            raise ConfigError("seed must be an integer")
        kwargs["seed"] = obj["seed"]
    if "naive_op_probability" in obj:
        value = obj["naive_op_probability"]
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError("naive_op_probability must be a number")
        kwargs["naive_op_probability"] = float(value)
    if "rule_based_probability" in obj:
        value = obj["rule_based_probability"]
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError("rule_based_probability must be a number")
        kwargs["rule_based_probability"] = float(value)
    if "ops" in obj:
        if not isinstance(obj["ops"], dict):
            raise ConfigError("ops must be an object")
        unknown = set(obj["ops"]) - set(ALL_OPS)
        if unknown:
            raise ConfigError(f"unknown op ids: {sorted(unknown)}")
        kwargs["ops"] = {op_id: _parse_op(op_id, raw) for op_id, raw in obj["ops"].items()}
    if "lexicons" in obj:
        if not isinstance(obj["lexicons"], dict):
            raise ConfigError("lexicons must be an object")
        _check_keys(
            obj["lexicons"],
            {"inflection", "misspellings", "oblique_verbs", "char_rules", "accents", "abbreviations"},
            "lexicons",
        )
        kwargs["lexicons"] = LexiconPaths(**{k: str(v) for k, v in obj["lexicons"].items()})
    return NoiseConfig(**kwargs)


def load_noise_config(path) -> NoiseConfig:
    try:
        with open(path, encoding="utf-8") as f:
            obj = json.load(f)
    except OSError as e:
        raise IOFailure(f"cannot open config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from e
    return noise_config_from_obj(obj)


def load_filter_rules(path) -> FilterRules:
    """Filter-rules JSON: allowed_letters, min_allowed_ratio, min_len,
    max_len, blocklist (path to a misspelling TSV whose variants are
    rejected)."""
    try:
        with open(path, encoding="utf-8") as f:
            obj = json.load(f)
    except OSError as e:
        raise IOFailure(f"cannot open rules file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"rules file {path} is not valid JSON: {e}") from e
    if not isinstance(obj, dict):
        raise ConfigError("rules file root must be a JSON object")
    _check_keys(
        obj, {"allowed_letters", "min_allowed_ratio", "min_len", "max_len", "blocklist"}, "rules"
    )
    kwargs: dict = {}
    if "allowed_letters" in obj:
        if not isinstance(obj["allowed_letters"], str):
            raise ConfigError("allowed_letters must be a string of characters")
        kwargs["allowed_charset"] = frozenset(obj["allowed_letters"])
    else:
        kwargs["allowed_charset"] = ICELANDIC_LETTERS
    for key, target in (("min_allowed_ratio", float), ("min_len", int), ("max_len", int)):
        if key in obj:
            value = obj[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{key} must be a number")
            kwargs[key] = target(value)
    if "blocklist" in obj:
        from .morpho import MisspellingLexicon

        kwargs["misspelling_blocklist"] = MisspellingLexicon.load(obj["blocklist"]).all_variants()
    return FilterRules(**kwargs)


def config_hash(config: NoiseConfig) -> str:
    """Stable digest of the effective config, recorded in manifests."""
    canonical = json.dumps(config.to_json_obj(), sort_keys=True, ensure_ascii=False)
    return hashlib.blake2b(canonical.encode("utf-8"), digest_size=8).hexdigest()
