# Copyright 2026 The Chainwatch Authors
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

"""Consecutive projective measurement chains.

Classical Markov closed forms for detector marginals, entropies and
shared information, cross-checked against an exact joint pure-state
engine, plus the Zeno / anti-Zeno experiments.
"""

import json as _json

from ._core import (  # noqa: F401
    Chain,
    ChainwatchError,
    DEFAULT_DIMENSION_CAP,
    IndexOutOfRangeError,
    UnknownLabelError,
    __version__,
    anti_zeno_expectation,
    anti_zeno_trial,
    check_unitary,
    figure_sweep,
    hermitian_eigenvalues,
    random_unitary,
    shannon_entropy,
    von_neumann_unitary,
    zeno_closed_form,
    zeno_simulate,
)


def run_report(chain, oracle=True, venn=True, reproducible=False,
               dimension_cap=DEFAULT_DIMENSION_CAP):
    """Self-validating run report as a dict.

    Every closed-form quantity is paired with the pure-state engine's
    value and their absolute difference.
    """
    return _json.loads(
        chain.run_report_json(oracle, venn, reproducible, dimension_cap))
