// Copyright 2026 The Poison Authors. All rights reserved.
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

#ifndef POISON_ERRORS_H_
#define POISON_ERRORS_H_

#include <stdexcept>
#include <string>

namespace poison {

// Bad arguments from a caller or the command line (exit code 2 in the CLI).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A mathematical function evaluated outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input that makes an attack problem meaningless, e.g. an arm never pulled.
class IllPosedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Brute-force oracle found no feasible grid point.
class OracleEmptyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace poison

#endif  // POISON_ERRORS_H_
