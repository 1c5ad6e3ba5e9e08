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

#include "sjpc/ingest.hpp"

#include <omp.h>

#include <exception>
#include <vector>

namespace sjpc {

void ingest_serial(SjpcState& state, std::span<const Record> records, std::uint64_t first_position) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto views = field_views(records[i]);
    state.process_record_at(views, first_position + i);
  }
}

void ingest_parallel(SjpcState& state, std::span<const Record> records, std::uint64_t first_position,
                     int threads) {
  if (threads <= 1 || records.size() < 2) {
    ingest_serial(state, records, first_position);
    return;
  }
  const auto parts = static_cast<std::size_t>(threads);
  std::vector<SjpcState> partials(parts, state.empty_clone());
  std::vector<std::exception_ptr> errors(parts);
  const std::size_t chunk = (records.size() + parts - 1) / parts;

#pragma omp parallel for num_threads(threads) schedule(static, 1)
  for (int p = 0; p < threads; ++p) {
    const std::size_t begin = std::min(records.size(), static_cast<std::size_t>(p) * chunk);
    const std::size_t end = std::min(records.size(), begin + chunk);
    try {
      ingest_serial(partials[p], records.subspan(begin, end - begin), first_position + begin);
    } catch (...) {
      errors[p] = std::current_exception();
    }
  }

  // Report the earliest failing partition, as the serial path would.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& partial : partials) state.merge(partial);
}

}  // namespace sjpc
