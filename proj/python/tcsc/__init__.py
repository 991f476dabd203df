# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Budgeted worker assignment for time-continuous spatial crowdsourcing."""

from ._core import (
    TcscError,
    error_ratio,
    finishing_probability,
    generate,
    load_dataset,
    quality,
    save_dataset,
    solve,
    sweep,
)

__all__ = [
    "TcscError",
    "error_ratio",
    "finishing_probability",
    "generate",
    "load_dataset",
    "quality",
    "save_dataset",
    "solve",
    "sweep",
]
