# Copyright 2026 The unlearnaudit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Deletion inference, reconstruction and compliance audits."""

import json
import os
import pathlib
from typing import Mapping, NamedTuple, Optional, Sequence, Union

_data = pathlib.Path(__file__).parent / "data"
if (_data / "corpus.txt").exists():
    os.environ.setdefault("UNLEARNAUDIT_DATA_DIR", str(_data))

from . import _core  # noqa: E402

__version__ = _core.version()
wilson_interval = _core.wilson_interval
list_presets = _core.list_presets
config_schema = _core.config_schema


class Result(NamedTuple):
    report: dict
    table_csv: str


def _overrides(overrides):
    if overrides is None:
        return []
    if isinstance(overrides, Mapping):
        return [f"{k}={v}" for k, v in overrides.items()]
    return list(overrides)


def run(config: Optional[Union[str, os.PathLike]] = None,
        overrides: Optional[Union[Mapping[str, object], Sequence[str]]] = None
        ) -> Result:
    """Runs one game. `config` is an INI path; overrides are section.key."""
    ini = pathlib.Path(config).read_text() if config is not None else ""
    text, table = _core.run_experiment(ini, _overrides(overrides))
    return Result(json.loads(text), table)


def reproduce(preset: str, seed: int = 0, workers: int = 1) -> list:
    return json.loads(_core.reproduce(preset, seed, workers))


def resolve_config(ini: str = "", overrides=None) -> str:
    return _core.resolve_config(ini, _overrides(overrides))
