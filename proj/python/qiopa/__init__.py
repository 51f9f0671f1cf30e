# Copyright 2026 The qiopa Authors
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

"""Python bindings for the qiopa amplifier simulator."""

from ._qiopa import (
    ConfigError,
    Qubit,
    amplify,
    basis_size,
    fidelities,
    load_config,
    monte_carlo_counts,
    overlap_scan,
    rotated_correlation,
    threefold,
    universality,
)

__all__ = [
    "ConfigError",
    "Qubit",
    "amplify",
    "basis_size",
    "fidelities",
    "load_config",
    "monte_carlo_counts",
    "overlap_scan",
    "rotated_correlation",
    "threefold",
    "universality",
]
