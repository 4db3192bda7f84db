# Copyright 2026 The clab Authors
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

"""Python access to the clab measurement and reduction simulators."""

import json as _json

from ._clab import (
    ConfigError,
    NumericalError,
    __version__,
    adiabatic_run,
    avg_cos_analytic,
    brute_force_exact_cover,
    decide_pi_E,
    decohered_probability,
    expected_probability,
    harmonic_ground_energy,
    mc_probability,
    prob_closed_form,
    prob_full_propagation,
)
from ._clab import run_experiment as _run_experiment


def run(experiment, config=None):
    """Run an experiment from a config dict; returns the result record as a dict."""
    return _json.loads(_run_experiment(experiment, _json.dumps(config or {})))


__all__ = [
    "ConfigError",
    "NumericalError",
    "__version__",
    "adiabatic_run",
    "avg_cos_analytic",
    "brute_force_exact_cover",
    "decide_pi_E",
    "decohered_probability",
    "expected_probability",
    "harmonic_ground_energy",
    "mc_probability",
    "prob_closed_form",
    "prob_full_propagation",
    "run",
]
