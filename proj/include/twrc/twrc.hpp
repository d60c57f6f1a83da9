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

/// @file twrc.hpp
/// @brief Umbrella header.

#pragma once

#include "twrc/beamformer.hpp"
#include "twrc/bounds.hpp"
#include "twrc/channel.hpp"
#include "twrc/df.hpp"
#include "twrc/errors.hpp"
#include "twrc/io.hpp"
#include "twrc/linalg.hpp"
#include "twrc/oracle.hpp"
#include "twrc/parallel.hpp"
#include "twrc/region.hpp"
#include "twrc/rng.hpp"
#include "twrc/sdp.hpp"
#include "twrc/suboptimal.hpp"
