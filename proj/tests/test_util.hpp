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

// Small market builders shared by the test binaries.

#ifndef COURSEALLOC_TESTS_TEST_UTIL_HPP_
#define COURSEALLOC_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <initializer_list>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "coursealloc/model.hpp"

namespace coursealloc::testing {

// A distinct 30-minute slot per index, filling the week row by row.
inline TimeSlot GridSlot(int k) {
  const int per_day = (kGridEnd - kGridBegin) / kGridStep;
  TimeSlot slot;
  slot.day = static_cast<Weekday>((k / per_day) % kNumWeekdays);
  slot.start = kGridBegin + kGridStep * (k % per_day);
  slot.end = slot.start + kGridStep;
  return slot;
}

struct GroupSpec {
  std::string id;
  std::string class_id;
  int capacity = 1;
};

inline Instance NamedMarket(std::vector<std::string> classes, const std::vector<GroupSpec>& groups,
                            std::vector<std::string> students) {
  std::vector<TutorGroup> tg;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    tg.push_back(TutorGroup{groups[k].id, groups[k].class_id,
                            {GridSlot(static_cast<int>(k))}, groups[k].capacity});
  }
  return Instance::Create(std::move(classes), std::move(tg), {}, std::move(students));
}

inline std::vector<std::string> StudentIds(int n) {
  std::vector<std::string> ids;
  for (int s = 1; s <= n; ++s) ids.push_back("s" + std::to_string(s));
  return ids;
}

// capacities[c][k] is the capacity of group k of class c. Classes are
// named c1, c2, ..., groups c1-1, c1-2, ...
inline Instance Market(const std::vector<std::vector<int>>& capacities, int students) {
  std::vector<std::string> classes;
  std::vector<GroupSpec> groups;
  for (std::size_t c = 0; c < capacities.size(); ++c) {
    const std::string cls = "c" + std::to_string(c + 1);
    classes.push_back(cls);
    for (std::size_t k = 0; k < capacities[c].size(); ++k) {
      groups.push_back({cls + "-" + std::to_string(k + 1), cls, capacities[c][k]});
    }
  }
  return NamedMarket(std::move(classes), groups, StudentIds(students));
}

inline Bundle B(const Instance& instance, std::initializer_list<std::string> ids) {
  std::vector<std::string> v(ids);
  return MakeBundle(instance, v);
}

// A random valid bundle: a non-empty random subset of classes with one
// random group each.
inline Bundle RandomBundle(const Instance& instance, std::mt19937_64& rng, int max_size) {
  std::vector<std::vector<int>> by_class(instance.num_classes());
  for (int g = 0; g < instance.num_groups(); ++g) by_class[instance.class_of_group(g)].push_back(g);
  std::vector<int> classes;
  for (int c = 0; c < instance.num_classes(); ++c) {
    if (!by_class[c].empty()) classes.push_back(c);
  }
  std::shuffle(classes.begin(), classes.end(), rng);
  const int cap = std::min<int>(max_size, static_cast<int>(classes.size()));
  const int size = std::uniform_int_distribution<int>(1, cap)(rng);
  std::vector<int> groups;
  for (int i = 0; i < size; ++i) {
    const auto& options = by_class[classes[i]];
    groups.push_back(options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)]);
  }
  return Bundle(std::move(groups));
}

// Lists of random length in [min_len, max_len], distinct bundles.
inline PreferenceProfile RandomProfile(const Instance& instance, std::mt19937_64& rng,
                                       int min_len, int max_len, int max_size) {
  PreferenceProfile profile(instance.num_students());
  for (int s = 0; s < instance.num_students(); ++s) {
    const int len = std::uniform_int_distribution<int>(min_len, max_len)(rng);
    std::set<Bundle> seen;
    for (int attempt = 0; attempt < 50 * len && static_cast<int>(seen.size()) < len; ++attempt) {
      Bundle b = RandomBundle(instance, rng, max_size);
      if (seen.insert(b).second) profile.mutable_list(s).push_back(b);
    }
  }
  return profile;
}

}  // namespace coursealloc::testing

#endif  // COURSEALLOC_TESTS_TEST_UTIL_HPP_
