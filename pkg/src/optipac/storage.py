from __future__ import annotations
from typing import Any, Iterable
import csv
import io
import json
import os
from .core import Ensemble, MajorityVote
from .errors import NotSerializable
from .ledger import CostLedger
from .log import log
from .Oracle import Hypothesis
from .settings import settings, output_dir
from .util import ResultJSONEncoder, ResultJSONDecoder

from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from .Learner import Learner, TrainReport
    from .Oracle import ErmOracle


ROW_FIELDS = ("learner", "m", "delta", "seed", "error", "erm_train_calls", "erm_train_examples", "inference_calls", "fallbacks", "wall_ms")

_PREDICTOR_TYPES: dict[str, type[MajorityVote]] = {"ensemble": Ensemble, "majority": MajorityVote}


def dumps(data: Any) -> str:
    """Stable JSON: sorted keys and the result encoder, so equal data gives equal bytes."""
    return json.dumps(data, cls=ResultJSONEncoder, sort_keys=True, indent=2)


def loads(text: str) -> Any:
    return json.loads(text, cls=ResultJSONDecoder)


def predictor_to_dict(predictor: MajorityVote | Hypothesis) -> dict[str, Any]:
    if isinstance(predictor, Hypothesis):
        return {"type": "single", "voters": [predictor.to_dict()]}
    kind = "ensemble" if isinstance(predictor, Ensemble) else "majority"
    return {"type": kind, "voters": [h.to_dict() for h in predictor.voters]}


def predictor_from_dict(d: dict[str, Any]) -> MajorityVote | Hypothesis:
    voters = [Hypothesis.from_dict(v) for v in d["voters"]]
    if d["type"] == "single":
        return voters[0]
    if d["type"] not in _PREDICTOR_TYPES:
        raise NotSerializable(f"Unknown predictor type '{d['type']}' in model descriptor.")
    return _PREDICTOR_TYPES[d["type"]](voters)


class ResultStore:
    """The persistence layer for optipac.
    Writes versioned model descriptors and appends experiment rows to a CSV file with a JSON-lines mirror.
    Everything lives under one output directory (config.output_dir, or OPTIPAC_OUTPUT_DIR)."""

    def __init__(self, root: str | None = None) -> None:
        self.root = root or output_dir()
        self.schema_version: int = settings.experiments.schema_version
        os.makedirs(self.root, exist_ok=True)
        log.debug(f"ResultStore initialized at {self.root}.")

    def path(self, filename: str) -> str:
        return filename if os.path.isabs(filename) else os.path.join(self.root, filename)

    # Models

    def model_descriptor(self, report: TrainReport, learner: Learner, erm: ErmOracle, extra: dict[str, Any] | None = None) -> dict[str, Any]:
        """The JSON-ready description of a trained model: learner and ERM parameters, every voter's
        parameters and provenance, and the training ledger."""
        return {
            "schema_version": self.schema_version,
            "learner": learner.describe(),
            "erm": erm.describe(),
            "m_input": report.m_input,
            "m_effective": report.m_effective,
            "fallback_count": report.fallback_count,
            "cache_hits": report.cache_hits,
            "params": report.params,
            "ledger": report.ledger.to_dict(),
            "predictor": predictor_to_dict(report.predictor),
            **(extra or {}),
        }

    def save_model(self, filename: str, descriptor: dict[str, Any]) -> str:
        path = self.path(filename)
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w") as f:
            f.write(dumps(descriptor))
            f.write("\n")
        log.info(f"Saved model descriptor to {path}")
        return path

    # Rows

    @staticmethod
    def rows_to_csv(rows: Iterable[dict[str, Any]]) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=ROW_FIELDS, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        return buf.getvalue()

    def append_rows(self, stem: str, rows: list[dict[str, Any]]) -> tuple[str, str]:
        """Append rows to <stem>.csv (writing the header if the file is new) and <stem>.jsonl.
        Rows are written in the order given; callers sort them first."""
        csv_path, json_path = self.path(f"{stem}.csv"), self.path(f"{stem}.jsonl")
        new = not os.path.exists(csv_path)
        with open(csv_path, "a", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=ROW_FIELDS, extrasaction="ignore", lineterminator="\n")
            if new:
                writer.writeheader()
            writer.writerows(rows)
        with open(json_path, "a") as f:
            for row in rows:
                f.write(json.dumps({"schema_version": self.schema_version, **row}, cls=ResultJSONEncoder, sort_keys=True))
                f.write("\n")
        log.info(f"Appended {len(rows)} rows to {csv_path}")
        return csv_path, json_path

    def save_report(self, filename: str, data: dict[str, Any]) -> str:
        path = self.path(filename)
        with open(path, "w") as f:
            f.write(dumps({"schema_version": self.schema_version, **data}))
            f.write("\n")
        log.info(f"Saved report to {path}")
        return path


def load_model(path: str) -> tuple[MajorityVote | Hypothesis, dict[str, Any]]:
    """Rebuild the predictor of a model descriptor. Returns (predictor, descriptor)."""
    with open(path, "r") as f:
        try:
            descriptor = loads(f.read())
        except json.JSONDecodeError as e:
            raise NotSerializable(f"Could not decode model descriptor {path}: {e}") from None
    version = descriptor.get("schema_version")
    if version != settings.experiments.schema_version:
        log.warning(f"Model descriptor {path} has schema_version={version}, expected {settings.experiments.schema_version}")
    return predictor_from_dict(descriptor["predictor"]), descriptor


def ledger_from_descriptor(descriptor: dict[str, Any]) -> CostLedger:
    return CostLedger.from_dict(descriptor["ledger"])
