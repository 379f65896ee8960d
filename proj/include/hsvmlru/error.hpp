/*
 * Copyright 2026 The hsvmlru Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace hsvmlru {

// Malformed or inconsistent input data (files, catalogs, histories).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal consistency check failed; indicates a simulator bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Preconditions on API arguments are reported as std::invalid_argument.

}  // namespace hsvmlru
