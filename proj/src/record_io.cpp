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

#include "sjpc/record_io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>

#define XXH_INLINE_ALL
#include "xxhash.h"

namespace sjpc {

InputError::InputError(std::uint64_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

struct RecordReader::DigestState {
  XXH3_state_t state;
};

RecordReader::RecordReader(std::istream& in, char delimiter, std::optional<int> arity)
    : in_(in), delimiter_(delimiter), arity_(arity.value_or(0)), digest_(std::make_unique<DigestState>()) {
  XXH3_64bits_reset(&digest_->state);
}

RecordReader::~RecordReader() = default;

bool RecordReader::next() {
  if (!std::getline(in_, line_buffer_)) return false;
  ++line_;
  XXH3_64bits_update(&digest_->state, line_buffer_.data(), line_buffer_.size());
  XXH3_64bits_update(&digest_->state, "\n", 1);

  fields_.clear();
  const std::string_view line(line_buffer_);
  std::size_t start = 0;
  while (true) {
    const std::size_t cut = line.find(delimiter_, start);
    if (cut == std::string_view::npos) {
      fields_.push_back(line.substr(start));
      break;
    }
    fields_.push_back(line.substr(start, cut - start));
    start = cut + 1;
  }
  if (arity_ == 0) arity_ = static_cast<int>(fields_.size());
  if (fields_.size() != static_cast<std::size_t>(arity_)) {
    throw InputError(line_, "expected " + std::to_string(arity_) + " fields, got " + std::to_string(fields_.size()));
  }
  return true;
}

Record RecordReader::record() const { return Record{{fields_.begin(), fields_.end()}}; }

std::string RecordReader::digest() const {
  const std::uint64_t h = XXH3_64bits_digest(&digest_->state);
  std::array<char, 16> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), h, 16);
  std::string out(16 - static_cast<std::size_t>(end - buf.data()), '0');
  out.append(buf.data(), end);
  return out;
}

void write_record(std::ostream& out, const Record& rec, char delimiter) {
  for (std::size_t i = 0; i < rec.fields.size(); ++i) {
    if (i > 0) out.put(delimiter);
    out << rec.fields[i];
  }
  out.put('\n');
}

std::vector<Record> read_records(std::istream& in, char delimiter, std::optional<int> arity) {
  RecordReader reader(in, delimiter, arity);
  std::vector<Record> out;
  while (reader.next()) out.push_back(reader.record());
  return out;
}

}  // namespace sjpc
