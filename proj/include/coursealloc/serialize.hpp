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

// JSON documents for the model types.
//
//   instance:   {classes: [id], groups: [{id, class, capacity,
//                slots: [{day, start, end}]}], lectures: [{class, slots}],
//                students: [id]}
//   profile:    {student: [[groupId, ...], ...]}            best first
//   assignment: {student: [{bundle: [groupId], p: "num/den" | number}]}
//   lottery:    {epsilon, support: [{lambda,
//                matching: {student: [groupId] | null}}]}
//
// Any document may carry a top-level "$meta" object (provenance, manifest
// reference, arithmetic mode); loaders skip it.

#ifndef COURSEALLOC_SERIALIZE_HPP_
#define COURSEALLOC_SERIALIZE_HPP_

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "coursealloc/model.hpp"

namespace coursealloc {

using Json = nlohmann::json;

inline constexpr const char* kMetaKey = "$meta";

// Throws DataError on malformed JSON.
Json ParseDocument(std::string_view text);

Instance InstanceFromJson(const Json& doc);
Json InstanceToJson(const Instance& instance);
Instance LoadInstance(std::string_view text);

PreferenceProfile ProfileFromJson(const Instance& instance, const Json& doc);
Json ProfileToJson(const Instance& instance, const PreferenceProfile& profile);

FractionalAssignment AssignmentFromJson(const Instance& instance,
                                        const Json& doc);
Json AssignmentToJson(const Instance& instance,
                      const FractionalAssignment& assignment);

DeterministicMatching MatchingFromJson(const Instance& instance,
                                       const Json& doc);
Json MatchingToJson(const Instance& instance,
                    const DeterministicMatching& matching);

Lottery LotteryFromJson(const Instance& instance, const Json& doc);
Json LotteryToJson(const Instance& instance, const Lottery& lottery);

// Exact "num/den" text, or a JSON number in decimal mode.
Json ProbabilityToJson(const Rational& p, ArithmeticMode mode);
Rational ProbabilityFromJson(const Json& value);

// Stable text form used for files: two-space indent, trailing newline.
std::string Dump(const Json& doc);

}  // namespace coursealloc

#endif  // COURSEALLOC_SERIALIZE_HPP_
