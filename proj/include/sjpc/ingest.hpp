// Copyright 2026 The SJPC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>

#include "sjpc/estimator.hpp"
#include "sjpc/subvalues.hpp"

namespace sjpc {

/// Reference path: records[i] is processed at stream position first_position + i.
void ingest_serial(SjpcState& state, std::span<const Record> records, std::uint64_t first_position);

/// OpenMP path: splits `records` into `threads` contiguous partitions, sketches
/// each into a private state and merges them into `state`. Produces exactly the
/// same summary as ingest_serial.
void ingest_parallel(SjpcState& state, std::span<const Record> records, std::uint64_t first_position,
                     int threads);

}  // namespace sjpc
