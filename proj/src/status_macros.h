//
// Copyright 2026 The unlearnaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Internal helpers for StatusOr plumbing.

#ifndef UNLEARNAUDIT_SRC_STATUS_MACROS_H_
#define UNLEARNAUDIT_SRC_STATUS_MACROS_H_

#include <string_view>

#include "absl/strings/string_view.h"

namespace unlearnaudit {

// The system absl keeps its own string_view type.
inline absl::string_view AsAbsl(std::string_view s) {
  return absl::string_view(s.data(), s.size());
}

}  // namespace unlearnaudit

#define UA_CONCAT_INNER(a, b) a##b
#define UA_CONCAT(a, b) UA_CONCAT_INNER(a, b)

// Declares `lhs` from a StatusOr expression or returns its error.
#define UA_ASSIGN(lhs, expr)                                            \
  auto UA_CONCAT(lhs, _or_) = (expr);                                   \
  if (!UA_CONCAT(lhs, _or_).ok()) return UA_CONCAT(lhs, _or_).status(); \
  auto lhs = *std::move(UA_CONCAT(lhs, _or_))

#define UA_RETURN_IF_ERROR(expr)             \
  do {                                       \
    ::absl::Status ua_status_ = (expr);      \
    if (!ua_status_.ok()) return ua_status_; \
  } while (false)

#endif  // UNLEARNAUDIT_SRC_STATUS_MACROS_H_
