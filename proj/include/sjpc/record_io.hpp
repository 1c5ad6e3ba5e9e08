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
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sjpc/subvalues.hpp"

namespace sjpc {

/// Malformed input line; `line()` is 1-based.
class InputError : public std::runtime_error {
 public:
  InputError(std::uint64_t line, const std::string& what);
  std::uint64_t line() const { return line_; }

 private:
  std::uint64_t line_;
};

/// Streams delimiter-separated records, one per newline-terminated line.
/// Reads strictly forward (works on pipes and FIFOs) and keeps a running
/// digest of the bytes consumed. Without an explicit arity the first line
/// fixes d.
class RecordReader {
 public:
  RecordReader(std::istream& in, char delimiter = '\t', std::optional<int> arity = std::nullopt);
  ~RecordReader();
  RecordReader(const RecordReader&) = delete;
  RecordReader& operator=(const RecordReader&) = delete;

  /// Advances to the next record; false at end of input.
  /// Throws InputError when a line has the wrong number of fields.
  bool next();

  std::span<const std::string_view> fields() const { return fields_; }
  Record record() const;

  std::uint64_t line_number() const { return line_; }
  /// 0 until known.
  int arity() const { return arity_; }
  /// XXH3 digest of all bytes read so far, as 16 hex digits.
  std::string digest() const;

 private:
  struct DigestState;

  std::istream& in_;
  char delimiter_;
  int arity_;
  std::string line_buffer_;
  std::vector<std::string_view> fields_;
  std::uint64_t line_ = 0;
  std::unique_ptr<DigestState> digest_;
};

void write_record(std::ostream& out, const Record& rec, char delimiter = '\t');

/// Reads a whole file into memory (test and harness use; not one-pass state).
std::vector<Record> read_records(std::istream& in, char delimiter = '\t', std::optional<int> arity = std::nullopt);

}  // namespace sjpc
