# Copyright 2026 The fpselect Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Attribute selection for browser fingerprinting authentication."""

from __future__ import annotations

import json
import os
from typing import Iterable, Sequence

from ._fpselect import (
    ConfigError,
    Dataset,
    Error,
    ParseError,
    PreconditionError,
    SchemaError,
)
from . import _fpselect

__all__ = [
    "ConfigError",
    "Dataset",
    "Error",
    "ParseError",
    "PreconditionError",
    "SchemaError",
    "cost",
    "evaluate",
    "load_dataset",
    "select",
    "sensitivity",
    "synthesize",
]

DEFAULT_WEIGHTS = (1.0, 10.0, 10000.0)


def load_dataset(dataset: str | os.PathLike, catalog: str | os.PathLike) -> Dataset:
    return _fpselect.load_dataset(os.fspath(dataset), os.fspath(catalog))


def synthesize(config: dict | str, seed: int = 0) -> Dataset:
    text = config if isinstance(config, str) else json.dumps(config)
    return _fpselect.synthesize(text, seed)


def sensitivity(
    dataset: Dataset,
    attributes: Iterable[str],
    beta: int = 1,
    knowledge: str = "population",
    pmf: str | os.PathLike | None = None,
) -> float:
    return _fpselect.sensitivity(
        dataset, list(attributes), beta, knowledge, _path(pmf))


def cost(
    dataset: Dataset,
    attributes: Iterable[str],
    weights: Sequence[float] = DEFAULT_WEIGHTS,
) -> dict:
    return json.loads(_fpselect.cost(dataset, list(attributes), list(weights)))


def evaluate(
    dataset: Dataset,
    attributes: Iterable[str],
    beta: int = 1,
    knowledge: str = "population",
    pmf: str | os.PathLike | None = None,
    weights: Sequence[float] = DEFAULT_WEIGHTS,
) -> dict:
    return json.loads(_fpselect.evaluate(
        dataset, list(attributes), beta, knowledge, _path(pmf), list(weights)))


def select(
    dataset: Dataset,
    alpha: float,
    method: str = "greedy",
    k: int = 1,
    beta: int = 1,
    knowledge: str = "population",
    pmf: str | os.PathLike | None = None,
    weights: Sequence[float] = DEFAULT_WEIGHTS,
    threads: int = 0,
    max_attributes: int = 15,
) -> dict:
    """Returns the same report the command-line tool writes."""
    return json.loads(_fpselect.select(
        dataset, alpha, method, k, beta, knowledge, _path(pmf), list(weights),
        threads, max_attributes))


def _path(path: str | os.PathLike | None) -> str:
    return "" if path is None else os.fspath(path)
