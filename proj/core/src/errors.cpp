// Copyright 2026 The sqlseq Authors. All Rights Reserved.
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

#include "sqlseq/errors.hpp"

namespace sqlseq {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage: return "usage error";
    case ErrorKind::config: return "config error";
    case ErrorKind::data: return "data error";
    case ErrorKind::dimension: return "dimension error";
    case ErrorKind::index: return "index error";
    case ErrorKind::invalid_range: return "invalid-range error";
    case ErrorKind::numeric: return "numeric error";
    case ErrorKind::io: return "io error";
    case ErrorKind::oracle: return "oracle-invalid error";
  }
  return "error";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage:
    case ErrorKind::config:
      return 1;
    case ErrorKind::numeric:
      return 3;
    default:
      return 2;
  }
}

}  // namespace sqlseq
