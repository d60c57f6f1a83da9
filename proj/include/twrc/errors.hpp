// SPDX-License-Identifier: Apache-2.0
//
// twrc-relay: beamforming and capacity tools for the two-way multi-antenna relay channel
// Copyright (C) 2026 The twrc-relay authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace twrc {

// Bad arguments: out-of-range parameters, asymmetric input, violated preconditions.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A tall matrix whose columns are (numerically) linearly dependent.
class RankDeficiency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iteration caps exceeded or an invariant that the math guarantees failed to hold numerically.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twrc
