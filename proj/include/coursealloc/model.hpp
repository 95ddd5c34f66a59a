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

// Domain types of the course-assignment market: the instance (classes,
// tutor groups, lectures, students), bundles of tutor groups, ranked
// preference lists, fractional (random) assignments, deterministic
// matchings and lotteries over them.
//
// Groups, classes and students are addressed by dense indices inside the
// library; string ids only appear at the serialization boundary.

#ifndef COURSEALLOC_MODEL_HPP_
#define COURSEALLOC_MODEL_HPP_

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coursealloc/rational.hpp"

namespace coursealloc {

enum class Weekday { kMon = 0, kTue, kWed, kThu, kFri };
inline constexpr int kNumWeekdays = 5;

std::string_view WeekdayName(Weekday day);
std::optional<Weekday> ParseWeekday(std::string_view name);

// The weekly grid: 30-minute blocks from 08:00 to 20:30.
inline constexpr int kGridStep = 30;
inline constexpr int kGridBegin = 480;
inline constexpr int kGridEnd = 1230;

struct TimeSlot {
  Weekday day = Weekday::kMon;
  int start = kGridBegin;  // minutes since midnight
  int end = kGridBegin + kGridStep;

  bool Overlaps(const TimeSlot& other) const {
    return day == other.day && start < other.end && other.start < end;
  }
  int Minutes() const { return end - start; }

  friend bool operator==(const TimeSlot&, const TimeSlot&) = default;
};

// Empty string when the slot respects the grid, otherwise the reason.
std::string CheckTimeSlot(const TimeSlot& slot);

struct TutorGroup {
  std::string id;
  std::string class_id;
  std::vector<TimeSlot> slots;
  int capacity = 1;

  friend bool operator==(const TutorGroup&, const TutorGroup&) = default;
};

struct Lecture {
  std::string class_id;
  std::vector<TimeSlot> slots;

  friend bool operator==(const Lecture&, const Lecture&) = default;
};

// A validated market. Immutable after construction.
class Instance {
 public:
  // Throws DataError naming the offending id on: duplicate ids, unknown
  // class references, capacity < 1, empty or overlapping group slots,
  // off-grid slots, reserved ids (leading '$').
  static Instance Create(std::vector<std::string> classes,
                         std::vector<TutorGroup> groups,
                         std::vector<Lecture> lectures,
                         std::vector<std::string> students);

  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<TutorGroup>& groups() const { return groups_; }
  const std::vector<Lecture>& lectures() const { return lectures_; }
  const std::vector<std::string>& students() const { return students_; }

  // The number of classes, which bounds bundle sizes.
  int num_classes() const { return static_cast<int>(classes_.size()); }
  int num_groups() const { return static_cast<int>(groups_.size()); }
  int num_students() const { return static_cast<int>(students_.size()); }

  int class_of_group(int group) const { return group_class_[group]; }
  int capacity(int group) const { return groups_[group].capacity; }

  std::optional<int> FindClass(std::string_view id) const;
  std::optional<int> FindGroup(std::string_view id) const;
  std::optional<int> FindStudent(std::string_view id) const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.classes_ == b.classes_ && a.groups_ == b.groups_ &&
           a.lectures_ == b.lectures_ && a.students_ == b.students_;
  }

 private:
  Instance() = default;

  std::vector<std::string> classes_;
  std::vector<TutorGroup> groups_;
  std::vector<Lecture> lectures_;
  std::vector<std::string> students_;
  std::vector<int> group_class_;
  std::unordered_map<std::string, int> class_index_;
  std::unordered_map<std::string, int> group_index_;
  std::unordered_map<std::string, int> student_index_;
};

// A set of tutor groups held as sorted, distinct group indices.
class Bundle {
 public:
  Bundle() = default;
  explicit Bundle(std::vector<int> groups);

  const std::vector<int>& groups() const { return groups_; }
  std::size_t size() const { return groups_.size(); }
  bool empty() const { return groups_.empty(); }
  bool Contains(int group) const;

  auto operator<=>(const Bundle&) const = default;
  bool operator==(const Bundle&) const = default;

 private:
  std::vector<int> groups_;
};

struct BundleHash {
  std::size_t operator()(const Bundle& b) const noexcept;
};

struct BundleVerdict {
  bool valid = true;
  std::string reason;
};

// At most one group per class, every index known, 1 <= size <= classes.
BundleVerdict ValidateBundle(const Instance& instance, const Bundle& bundle);
// Same check starting from string ids; unknown ids are reported.
BundleVerdict ValidateBundleIds(const Instance& instance,
                                std::span<const std::string> group_ids);

// Resolves ids into a bundle. Throws DataError if the result is invalid.
Bundle MakeBundle(const Instance& instance,
                  std::span<const std::string> group_ids);
std::vector<std::string> BundleIds(const Instance& instance,
                                   const Bundle& bundle);
// Group ids sorted as strings; the canonical tie-break key.
std::vector<std::string> SortedBundleIds(const Instance& instance,
                                         const Bundle& bundle);

// Ranked list of acceptable bundles per student, best first. Bundles not
// listed are unacceptable and rank below being unmatched.
class PreferenceProfile {
 public:
  PreferenceProfile() = default;
  explicit PreferenceProfile(int num_students) : lists_(num_students) {}
  explicit PreferenceProfile(std::vector<std::vector<Bundle>> lists)
      : lists_(std::move(lists)) {}

  int num_students() const { return static_cast<int>(lists_.size()); }
  const std::vector<Bundle>& list(int student) const {
    return lists_[student];
  }
  std::vector<Bundle>& mutable_list(int student) { return lists_[student]; }
  const std::vector<std::vector<Bundle>>& lists() const { return lists_; }
  std::size_t MaxListLength() const;

  bool operator==(const PreferenceProfile&) const = default;

 private:
  std::vector<std::vector<Bundle>> lists_;
};

// Throws DataError on size mismatch, duplicates or invalid bundles.
void ValidateProfile(const Instance& instance,
                     const PreferenceProfile& profile);

// 1-based rank of each listed bundle for one student.
class RankIndex {
 public:
  explicit RankIndex(const std::vector<Bundle>& list);
  // 0 when the bundle is not listed.
  int RankOf(const Bundle& bundle) const;
  int length() const { return length_; }

 private:
  std::unordered_map<Bundle, int, BundleHash> rank_;
  int length_ = 0;
};

enum class ArithmeticMode { kExact, kDecimal };

struct BundleShare {
  Bundle bundle;
  Rational p;

  bool operator==(const BundleShare&) const = default;
};

// Sparse student x bundle probability matrix.
class FractionalAssignment {
 public:
  FractionalAssignment() = default;
  explicit FractionalAssignment(int num_students) : rows_(num_students) {}

  int num_students() const { return static_cast<int>(rows_.size()); }
  const std::vector<BundleShare>& row(int student) const {
    return rows_[student];
  }
  // Adds p to the entry (student, bundle); zero entries are kept out.
  void Add(int student, const Bundle& bundle, const Rational& p);
  // Sorts each row by bundle so that equal assignments compare equal.
  void Canonicalize();

  Rational RowSum(int student) const;
  Rational Probability(int student, const Bundle& bundle) const;
  // Expected seats used per group.
  std::vector<Rational> GroupUsage(const Instance& instance) const;
  // Number of nonzero (student, bundle) entries.
  std::size_t SupportSize() const;

  ArithmeticMode mode = ArithmeticMode::kExact;
  std::string mechanism;

  bool operator==(const FractionalAssignment& other) const {
    return rows_ == other.rows_;
  }

 private:
  std::vector<std::vector<BundleShare>> rows_;
};

struct FeasibilityReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Probabilities in [0,1], row sums <= 1 and group usage <= capacity +
// supply_tolerance, evaluated exactly.
FeasibilityReport CheckFeasibility(const Instance& instance,
                                   const FractionalAssignment& assignment,
                                   const Rational& supply_tolerance = 0);

// Student -> bundle, or nullopt for unmatched.
struct DeterministicMatching {
  std::vector<std::optional<Bundle>> assignment;

  std::size_t Size() const;
  std::vector<int> GroupUsage(const Instance& instance) const;
  bool operator==(const DeterministicMatching&) const = default;
};

struct LotteryEntry {
  DeterministicMatching matching;
  double lambda = 0.0;

  bool operator==(const LotteryEntry&) const = default;
};

struct Lottery {
  std::vector<LotteryEntry> support;
  double epsilon = 0.0;

  bool operator==(const Lottery&) const = default;
};

// Sum of lambda_k times each support matching's indicator vector.
FractionalAssignment ExpectedAssignment(const Lottery& lottery,
                                        int num_students);

}  // namespace coursealloc

#endif  // COURSEALLOC_MODEL_HPP_
