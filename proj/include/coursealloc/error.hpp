/*
Copyright 2026 The coursealloc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef COURSEALLOC_ERROR_HPP_
#define COURSEALLOC_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace coursealloc {

// Malformed or inconsistent input: schema violations, unknown ids,
// invalid bundles, instances too large for an exact routine.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A condition the algorithms guarantee cannot happen did happen.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace coursealloc

#endif  // COURSEALLOC_ERROR_HPP_
