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

// Random assignment mechanisms over bundles.
//
// Bundled probabilistic serial (BPS): all students simultaneously eat
// their best bundle whose groups all still have seats, at unit speed over
// [0, 1]. When a group runs out, every bundle containing it disappears.
// Simulated event by event in exact rational arithmetic.
//
// Bundled random serial dictatorship (BRSD): students in uniformly random
// order take their best bundle that still fits. Available as a single
// run, a seeded Monte-Carlo estimate and an exact enumeration over all
// orders for small markets.

#ifndef COURSEALLOC_MECHANISMS_HPP_
#define COURSEALLOC_MECHANISMS_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "coursealloc/model.hpp"
#include "coursealloc/serialize.hpp"

namespace coursealloc {

struct EatingEvent {
  Rational time;                      // breakpoint reached
  Rational step;                      // length of the eating interval
  std::vector<int> exhausted_groups;  // groups that ran out at `time`
  // (student, list position) each student ate during the interval; -1
  // entries are omitted.
  std::vector<std::pair<int, int>> eating;
};

struct EatingTrace {
  std::vector<EatingEvent> events;
};

struct BpsResult {
  FractionalAssignment assignment;
  EatingTrace trace;
};

BpsResult RunBps(const Instance& instance, const PreferenceProfile& profile);

Json TraceToJson(const Instance& instance, const PreferenceProfile& profile,
                 const EatingTrace& trace);

// An ordering of all student indices.
using Permutation = std::vector<int>;

DeterministicMatching RunBrsdOnce(const Instance& instance,
                                  const PreferenceProfile& profile,
                                  std::span<const int> order);

// Uniform permutation for replication `rep`; a pure function of its inputs.
Permutation ReplicationPermutation(int num_students, std::uint64_t seed,
                                   std::uint64_t rep);

// count / reps per (student, bundle). Output is identical for any thread
// count.
FractionalAssignment EstimateBrsd(const Instance& instance,
                                  const PreferenceProfile& profile,
                                  std::uint64_t reps, std::uint64_t seed,
                                  int threads = 1);

inline constexpr int kMaxExactBrsdStudents = 9;

// Exact probabilities over all |S|! orders. Throws DataError above
// kMaxExactBrsdStudents students.
FractionalAssignment EnumerateBrsdExact(const Instance& instance,
                                        const PreferenceProfile& profile);

}  // namespace coursealloc

#endif  // COURSEALLOC_MECHANISMS_HPP_
