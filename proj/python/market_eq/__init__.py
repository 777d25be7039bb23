# Copyright 2026 The market_eq Authors
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
"""Python access to the market_eq solver.

Games, outcomes and networks are plain dicts in the same JSON layout the
command line tool reads. Rational strings in results come back as Fraction.
"""

import json
from fractions import Fraction

from market_eq import _core

GuardError = _core.GuardError
PreconditionError = _core.PreconditionError

_RATIONAL_KEYS = {"payments", "profits", "gap", "gain", "normalized", "firm_gains",
                  "integral", "fractional", "ratio"}


def _fractions(obj, key=None):
  if isinstance(obj, dict):
    return {k: _fractions(v, k) for k, v in obj.items()}
  if isinstance(obj, list):
    return [_fractions(v, key) for v in obj]
  if isinstance(obj, str) and key in _RATIONAL_KEYS:
    return Fraction(obj)
  return obj


def _dump(obj):
  return json.dumps(obj, default=str)


def solve(game, objective="feasible"):
  return _fractions(json.loads(_core.solve(_dump(game), objective)))


def verify(game, outcome):
  return _fractions(json.loads(_core.verify(_dump(game), _dump(outcome))))


def optimal_partitions(game):
  return json.loads(_core.optimal_partitions(_dump(game)))


def integrality_gap(game):
  return _fractions(json.loads(_core.integrality_gap(_dump(game))))


def network_to_synergy(network):
  return [[Fraction(v) for v in row] for row in json.loads(_core.network_to_synergy(_dump(network)))]


def synergy_to_network(matrix):
  return json.loads(_core.synergy_to_network(_dump({"matrix": [[str(v) for v in r] for r in matrix]})))


def influence(network, seeds):
  return Fraction(json.loads(_core.influence(_dump(network), list(seeds))))


def generate(spec, default_seed=1):
  return json.loads(_core.generate(_dump(spec), default_seed))
