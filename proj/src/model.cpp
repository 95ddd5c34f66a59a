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

#include "coursealloc/model.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "coursealloc/error.hpp"

namespace coursealloc {

namespace {

constexpr std::array<std::string_view, kNumWeekdays> kWeekdayNames = {
    "Mon", "Tue", "Wed", "Thu", "Fri"};

void CheckId(std::string_view kind, const std::string& id) {
  if (id.empty()) throw DataError(std::string(kind) + " with empty id");
  if (id.front() == '$') {
    throw DataError(std::string(kind) + " '" + id +
                    "': ids starting with '$' are reserved");
  }
}

template <typename Index>
void InsertUnique(Index& index, std::string_view kind, const std::string& id,
                  int value) {
  CheckId(kind, id);
  if (!index.emplace(id, value).second) {
    throw DataError("duplicate " + std::string(kind) + " id '" + id + "'");
  }
}

}  // namespace

std::string_view WeekdayName(Weekday day) {
  return kWeekdayNames[static_cast<int>(day)];
}

std::optional<Weekday> ParseWeekday(std::string_view name) {
  for (int d = 0; d < kNumWeekdays; ++d) {
    if (kWeekdayNames[d] == name) return static_cast<Weekday>(d);
  }
  return std::nullopt;
}

std::string CheckTimeSlot(const TimeSlot& slot) {
  if (slot.start >= slot.end) return "slot start must precede its end";
  if (slot.start % kGridStep != 0 || slot.end % kGridStep != 0) {
    return "slot is not aligned to the 30-minute grid";
  }
  if (slot.start < kGridBegin || slot.end > kGridEnd) {
    return "slot lies outside 08:00-20:30";
  }
  return {};
}

Instance Instance::Create(std::vector<std::string> classes,
                          std::vector<TutorGroup> groups,
                          std::vector<Lecture> lectures,
                          std::vector<std::string> students) {
  Instance inst;
  for (int c = 0; c < static_cast<int>(classes.size()); ++c) {
    InsertUnique(inst.class_index_, "class", classes[c], c);
  }
  for (int g = 0; g < static_cast<int>(groups.size()); ++g) {
    const TutorGroup& group = groups[g];
    InsertUnique(inst.group_index_, "group", group.id, g);
    auto cls = inst.class_index_.find(group.class_id);
    if (cls == inst.class_index_.end()) {
      throw DataError("group '" + group.id + "': unknown class '" +
                      group.class_id + "'");
    }
    if (group.capacity < 1) {
      throw DataError("group '" + group.id + "': capacity must be >= 1");
    }
    if (group.slots.empty()) {
      throw DataError("group '" + group.id + "': no time slots");
    }
    for (std::size_t a = 0; a < group.slots.size(); ++a) {
      if (auto why = CheckTimeSlot(group.slots[a]); !why.empty()) {
        throw DataError("group '" + group.id + "': " + why);
      }
      for (std::size_t b = 0; b < a; ++b) {
        if (group.slots[a].Overlaps(group.slots[b])) {
          throw DataError("group '" + group.id + "': overlapping slots");
        }
      }
    }
    inst.group_class_.push_back(cls->second);
  }
  for (const Lecture& lecture : lectures) {
    if (!inst.class_index_.contains(lecture.class_id)) {
      throw DataError("lecture: unknown class '" + lecture.class_id + "'");
    }
    for (const TimeSlot& slot : lecture.slots) {
      if (auto why = CheckTimeSlot(slot); !why.empty()) {
        throw DataError("lecture of class '" + lecture.class_id + "': " + why);
      }
    }
  }
  for (int s = 0; s < static_cast<int>(students.size()); ++s) {
    InsertUnique(inst.student_index_, "student", students[s], s);
  }
  inst.classes_ = std::move(classes);
  inst.groups_ = std::move(groups);
  inst.lectures_ = std::move(lectures);
  inst.students_ = std::move(students);
  return inst;
}

std::optional<int> Instance::FindClass(std::string_view id) const {
  auto it = class_index_.find(std::string(id));
  if (it == class_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Instance::FindGroup(std::string_view id) const {
  auto it = group_index_.find(std::string(id));
  if (it == group_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Instance::FindStudent(std::string_view id) const {
  auto it = student_index_.find(std::string(id));
  if (it == student_index_.end()) return std::nullopt;
  return it->second;
}

Bundle::Bundle(std::vector<int> groups) : groups_(std::move(groups)) {
  std::sort(groups_.begin(), groups_.end());
  groups_.erase(std::unique(groups_.begin(), groups_.end()), groups_.end());
}

bool Bundle::Contains(int group) const {
  return std::binary_search(groups_.begin(), groups_.end(), group);
}

std::size_t BundleHash::operator()(const Bundle& b) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int g : b.groups()) {
    h ^= static_cast<std::size_t>(g) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

BundleVerdict ValidateBundle(const Instance& instance, const Bundle& bundle) {
  if (bundle.empty()) return {false, "empty bundle"};
  if (static_cast<int>(bundle.size()) > instance.num_classes()) {
    return {false, "bundle has more groups than there are classes"};
  }
  std::vector<int> seen(instance.num_classes(), -1);
  for (int g : bundle.groups()) {
    if (g < 0 || g >= instance.num_groups()) {
      return {false, "unknown group index " + std::to_string(g)};
    }
    int c = instance.class_of_group(g);
    if (seen[c] >= 0) {
      return {false, "two groups of class " + instance.classes()[c] + " (" +
                         instance.groups()[seen[c]].id + ", " +
                         instance.groups()[g].id + ")"};
    }
    seen[c] = g;
  }
  return {};
}

BundleVerdict ValidateBundleIds(const Instance& instance,
                                std::span<const std::string> group_ids) {
  std::vector<int> groups;
  for (const std::string& id : group_ids) {
    auto g = instance.FindGroup(id);
    if (!g) return {false, "unknown group '" + id + "'"};
    groups.push_back(*g);
  }
  Bundle bundle(groups);
  if (bundle.size() != groups.size()) return {false, "repeated group id"};
  return ValidateBundle(instance, bundle);
}

Bundle MakeBundle(const Instance& instance,
                  std::span<const std::string> group_ids) {
  BundleVerdict verdict = ValidateBundleIds(instance, group_ids);
  if (!verdict.valid) throw DataError("invalid bundle: " + verdict.reason);
  std::vector<int> groups;
  for (const std::string& id : group_ids) groups.push_back(*instance.FindGroup(id));
  return Bundle(std::move(groups));
}

std::vector<std::string> BundleIds(const Instance& instance,
                                   const Bundle& bundle) {
  std::vector<std::string> ids;
  ids.reserve(bundle.size());
  for (int g : bundle.groups()) ids.push_back(instance.groups()[g].id);
  return ids;
}

std::vector<std::string> SortedBundleIds(const Instance& instance,
                                         const Bundle& bundle) {
  std::vector<std::string> ids = BundleIds(instance, bundle);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::size_t PreferenceProfile::MaxListLength() const {
  std::size_t n = 0;
  for (const auto& l : lists_) n = std::max(n, l.size());
  return n;
}

void ValidateProfile(const Instance& instance,
                     const PreferenceProfile& profile) {
  if (profile.num_students() != instance.num_students()) {
    throw DataError("profile covers " + std::to_string(profile.num_students()) +
                    " students, instance has " +
                    std::to_string(instance.num_students()));
  }
  for (int s = 0; s < profile.num_students(); ++s) {
    std::unordered_set<Bundle, BundleHash> seen;
    for (const Bundle& b : profile.list(s)) {
      BundleVerdict v = ValidateBundle(instance, b);
      if (!v.valid) {
        throw DataError("student '" + instance.students()[s] + "': " + v.reason);
      }
      if (!seen.insert(b).second) {
        throw DataError("student '" + instance.students()[s] +
                        "': bundle ranked twice");
      }
    }
  }
}

RankIndex::RankIndex(const std::vector<Bundle>& list)
    : length_(static_cast<int>(list.size())) {
  rank_.reserve(list.size());
  for (int r = 0; r < length_; ++r) rank_.emplace(list[r], r + 1);
}

int RankIndex::RankOf(const Bundle& bundle) const {
  auto it = rank_.find(bundle);
  return it == rank_.end() ? 0 : it->second;
}

void FractionalAssignment::Add(int student, const Bundle& bundle,
                               const Rational& p) {
  if (p == 0) return;
  auto& row = rows_[student];
  for (auto& share : row) {
    if (share.bundle == bundle) {
      share.p += p;
      if (share.p == 0) {
        share = std::move(row.back());
        row.pop_back();
      }
      return;
    }
  }
  row.push_back({bundle, p});
}

void FractionalAssignment::Canonicalize() {
  for (auto& row : rows_) {
    std::sort(row.begin(), row.end(),
              [](const BundleShare& a, const BundleShare& b) {
                return a.bundle < b.bundle;
              });
  }
}

Rational FractionalAssignment::RowSum(int student) const {
  Rational sum = 0;
  for (const auto& share : rows_[student]) sum += share.p;
  return sum;
}

Rational FractionalAssignment::Probability(int student,
                                           const Bundle& bundle) const {
  for (const auto& share : rows_[student]) {
    if (share.bundle == bundle) return share.p;
  }
  return 0;
}

std::vector<Rational> FractionalAssignment::GroupUsage(
    const Instance& instance) const {
  std::vector<Rational> usage(instance.num_groups());
  for (const auto& row : rows_) {
    for (const auto& share : row) {
      for (int g : share.bundle.groups()) usage[g] += share.p;
    }
  }
  return usage;
}

std::size_t FractionalAssignment::SupportSize() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.size();
  return n;
}

FeasibilityReport CheckFeasibility(const Instance& instance,
                                   const FractionalAssignment& assignment,
                                   const Rational& supply_tolerance) {
  FeasibilityReport report;
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };
  if (assignment.num_students() != instance.num_students()) {
    fail("assignment covers " + std::to_string(assignment.num_students()) +
         " students, instance has " + std::to_string(instance.num_students()));
    return report;
  }
  for (int s = 0; s < assignment.num_students(); ++s) {
    for (const auto& share : assignment.row(s)) {
      if (share.p < 0 || share.p > 1) {
        fail("student '" + instance.students()[s] + "': probability " +
             ToString(share.p) + " outside [0,1]");
      }
    }
    Rational sum = assignment.RowSum(s);
    if (sum > 1) {
      fail("student '" + instance.students()[s] + "': demand " + ToString(sum) +
           " > 1");
    }
  }
  std::vector<Rational> usage = assignment.GroupUsage(instance);
  for (int g = 0; g < instance.num_groups(); ++g) {
    if (usage[g] > instance.capacity(g) + supply_tolerance) {
      fail("group '" + instance.groups()[g].id + "': usage " +
           ToString(usage[g]) + " > capacity " +
           std::to_string(instance.capacity(g)));
    }
  }
  return report;
}

std::size_t DeterministicMatching::Size() const {
  return static_cast<std::size_t>(
      std::count_if(assignment.begin(), assignment.end(),
                    [](const auto& b) { return b.has_value(); }));
}

std::vector<int> DeterministicMatching::GroupUsage(
    const Instance& instance) const {
  std::vector<int> usage(instance.num_groups(), 0);
  for (const auto& b : assignment) {
    if (!b) continue;
    for (int g : b->groups()) ++usage[g];
  }
  return usage;
}

FractionalAssignment ExpectedAssignment(const Lottery& lottery,
                                        int num_students) {
  FractionalAssignment out(num_students);
  out.mode = ArithmeticMode::kDecimal;
  out.mechanism = "lottery";
  for (const auto& entry : lottery.support) {
    Rational lambda = FromDouble(entry.lambda);
    for (int s = 0; s < num_students; ++s) {
      const auto& b = entry.matching.assignment[s];
      if (b) out.Add(s, *b, lambda);
    }
  }
  out.Canonicalize();
  return out;
}

}  // namespace coursealloc
