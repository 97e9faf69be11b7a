"""Run configuration documents (JSON) and their validation."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace

from .cases import CASE_FACTORIES, CaseSpec, get_case
from .energy import TrainConfig
from .errors import ConfigError
from .geometry import SamplingPlan
from .network import NetworkSpec

OUTPUT_ENV = "HOLOELASTIC_OUTPUT_DIR"
TOP_KEYS = {"case", "network", "train", "sampling", "output_dir", "export"}


@dataclass
class RunConfig:
    case: CaseSpec
    case_name: str
    case_params: dict
    network: NetworkSpec
    train: TrainConfig
    sampling: SamplingPlan
    output_dir: str
    export: tuple = (50, 50)

    def resolved(self):
        """Plain-data echo of every setting, for reports."""
        plan = asdict(self.sampling)
        return {
            "case": {"name": self.case_name, "params": dict(self.case_params)},
            "network": {**asdict(self.network), "hidden": list(self.network.hidden)},
            "train": asdict(self.train),
            "sampling": {**plan, "grid": None if plan["grid"] is None else list(plan["grid"])},
            "output_dir": self.output_dir,
            "export": {"nx": self.export[0], "ny": self.export[1]},
        }


def _check_keys(section, data, allowed):
    if not isinstance(data, dict):
        raise ConfigError(f"{section}: expected an object, got {type(data).__name__}")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"{section}: unknown key {unknown[0]!r}")


def _overlay(section, base, data):
    allowed = {f.name for f in fields(base)}
    _check_keys(section, data, allowed)
    try:
        return replace(base, **data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{section}: {exc}") from None


def parse_case_ref(ref):
    """Accept "name" or {"name": ..., "params": {...}}."""
    if isinstance(ref, str):
        return ref, {}
    _check_keys("case", ref, {"name", "params"})
    if "name" not in ref:
        raise ConfigError("case: missing key 'name'")
    params = ref.get("params", {})
    _check_keys("case.params", params, params.keys())
    return ref["name"], dict(params)


def build_case(name, params):
    if name not in CASE_FACTORIES:
        raise ConfigError(f"case: unknown case {name!r}; valid: {', '.join(CASE_FACTORIES)}")
    try:
        return get_case(name, **params)
    except TypeError as exc:
        raise ConfigError(f"case.params: {exc}") from None


def config_from_dict(doc, env=None):
    env = os.environ if env is None else env
    _check_keys("config", doc, TOP_KEYS)
    if "case" not in doc:
        raise ConfigError("config: missing key 'case'")
    name, params = parse_case_ref(doc["case"])
    case = build_case(name, params)
    net = dict(doc.get("network", {}))
    if "hidden" in net:
        net["hidden"] = tuple(net["hidden"])
    network = _overlay("network", case.network, net)
    train = _overlay("train", case.train, doc.get("train", {}))
    samp = dict(doc.get("sampling", {}))
    if samp.get("grid") is not None:
        samp["grid"] = tuple(samp["grid"])
    sampling = _overlay("sampling", case.plan, samp)
    export = doc.get("export", {})
    _check_keys("export", export, {"nx", "ny"})
    out = env.get(OUTPUT_ENV) or doc.get("output_dir") or os.path.join("runs", name)
    case = replace(case, network=network, train=train, plan=sampling)
    return RunConfig(case, name, params, network, train, sampling, out,
                     (int(export.get("nx", 50)), int(export.get("ny", 50))))


def load_config(path, env=None):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return config_from_dict(doc, env)
