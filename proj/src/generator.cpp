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

#include "coursealloc/generator.hpp"

#include <algorithm>

#include "coursealloc/error.hpp"
#include "coursealloc/random.hpp"

namespace coursealloc {

namespace {

constexpr int kPlacementTries = 5000;
constexpr int kGridMinutes = kGridEnd - kGridBegin;

std::string Numbered(const std::string& prefix, int n, int width) {
  std::string digits = std::to_string(n);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

int Width(int count) { return static_cast<int>(std::to_string(count).size()); }

TimeSlot RandomSlot(StreamRng& rng, int minutes) {
  const int starts = (kGridMinutes - minutes) / kGridStep + 1;
  TimeSlot slot;
  slot.day = static_cast<Weekday>(rng.Below(kNumWeekdays));
  slot.start = kGridBegin + kGridStep * static_cast<int>(rng.Below(starts));
  slot.end = slot.start + minutes;
  return slot;
}

// True when the slots overlap or sit closer than one grid step.
bool TooClose(const TimeSlot& a, const TimeSlot& b) {
  return a.day == b.day && a.start < b.end + kGridStep && b.start < a.end + kGridStep;
}

void CheckMinutes(int minutes, const std::string& what) {
  if (minutes <= 0 || minutes % kGridStep != 0 || minutes > kGridMinutes) {
    throw DataError(what + " must be a positive multiple of 30 within the day grid");
  }
}

void CheckProbability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) throw DataError(what + " must lie in [0, 1]");
}

}  // namespace

void ValidateGeneratorConfig(const GeneratorConfig& c) {
  if (c.students < 1) throw DataError("students must be at least 1");
  if (c.classes < 1) throw DataError("classes must be at least 1");
  if (c.groups_per_class < 1) throw DataError("groupsPerClass must be at least 1");
  if (c.capacity_min < 1 || c.capacity_max < c.capacity_min) {
    throw DataError("capacity range must satisfy 1 <= min <= max");
  }
  if (c.slot_minutes.empty()) throw DataError("slotMinutes must not be empty");
  for (int m : c.slot_minutes) CheckMinutes(m, "slotMinutes");
  if (c.lectures_per_class < 0) throw DataError("lecturesPerClass must be non-negative");
  if (c.lectures_per_class > 0) CheckMinutes(c.lecture_minutes, "lectureMinutes");
  CheckProbability(c.class_select_prob, "classSelectProb");
  CheckProbability(c.restricted_day_prob, "restrictedDayProb");
  if (c.priority_min < 1 || c.priority_max > 5 || c.priority_min > c.priority_max) {
    throw DataError("priority range must lie within 1..5");
  }
  CheckMinutes(c.min_window_minutes, "minWindowMinutes");
  if (c.min_lunch_choices.empty()) throw DataError("minLunchChoices must not be empty");
  for (int m : c.min_lunch_choices) {
    if (m < 0) throw DataError("minLunchChoices must be non-negative");
  }
  if (c.min_gap < 0) throw DataError("minGap must be non-negative");
  if (c.max_bundles < 1) throw DataError("maxBundles must be at least 1");
}

GeneratorConfig GeneratorConfigFromJson(const Json& doc) {
  if (!doc.is_object()) throw DataError("generator config must be an object");
  GeneratorConfig c;
  auto integer = [&](const char* key, int& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_integer()) throw DataError(std::string(key) + " must be an integer");
    out = doc[key].get<int>();
  };
  auto real = [&](const char* key, double& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number()) throw DataError(std::string(key) + " must be a number");
    out = doc[key].get<double>();
  };
  auto ints = [&](const char* key, std::vector<int>& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_array()) throw DataError(std::string(key) + " must be a list");
    out.clear();
    for (const auto& v : doc[key]) {
      if (!v.is_number_integer()) throw DataError(std::string(key) + " entries must be integers");
      out.push_back(v.get<int>());
    }
  };
  for (const auto& [key, value] : doc.items()) {
    static const char* kKnown[] = {
        "students",  "classes",         "groupsPerClass",    "capacity",         "capacityMin",
        "capacityMax", "slotMinutes",   "lecturesPerClass",  "lectureMinutes",   "seed",
        "classSelectProb", "priorityMin", "priorityMax",     "restrictedDayProb", "minWindowMinutes",
        "minLunchChoices", "minGap",    "maxBundles",        kMetaKey};
    if (std::none_of(std::begin(kKnown), std::end(kKnown),
                     [&](const char* k) { return key == k; })) {
      throw DataError("unknown generator option " + key);
    }
    (void)value;
  }
  integer("students", c.students);
  integer("classes", c.classes);
  integer("groupsPerClass", c.groups_per_class);
  if (doc.contains("capacity")) {
    integer("capacity", c.capacity_min);
    c.capacity_max = c.capacity_min;
  }
  integer("capacityMin", c.capacity_min);
  integer("capacityMax", c.capacity_max);
  ints("slotMinutes", c.slot_minutes);
  integer("lecturesPerClass", c.lectures_per_class);
  integer("lectureMinutes", c.lecture_minutes);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw DataError("seed must be a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  real("classSelectProb", c.class_select_prob);
  integer("priorityMin", c.priority_min);
  integer("priorityMax", c.priority_max);
  real("restrictedDayProb", c.restricted_day_prob);
  integer("minWindowMinutes", c.min_window_minutes);
  ints("minLunchChoices", c.min_lunch_choices);
  integer("minGap", c.min_gap);
  integer("maxBundles", c.max_bundles);
  return c;
}

Json GeneratorConfigToJson(const GeneratorConfig& c) {
  return Json{{"students", c.students},
              {"classes", c.classes},
              {"groupsPerClass", c.groups_per_class},
              {"capacityMin", c.capacity_min},
              {"capacityMax", c.capacity_max},
              {"slotMinutes", c.slot_minutes},
              {"lecturesPerClass", c.lectures_per_class},
              {"lectureMinutes", c.lecture_minutes},
              {"seed", c.seed},
              {"classSelectProb", c.class_select_prob},
              {"priorityMin", c.priority_min},
              {"priorityMax", c.priority_max},
              {"restrictedDayProb", c.restricted_day_prob},
              {"minWindowMinutes", c.min_window_minutes},
              {"minLunchChoices", c.min_lunch_choices},
              {"minGap", c.min_gap},
              {"maxBundles", c.max_bundles}};
}

GeneratedMarket Generate(const GeneratorConfig& config) {
  ValidateGeneratorConfig(config);
  StreamRng rng(config.seed, 0);

  std::vector<std::string> classes;
  for (int c = 1; c <= config.classes; ++c) classes.push_back(Numbered("C", c, Width(config.classes)));

  std::vector<TimeSlot> lecture_slots;
  std::vector<Lecture> lectures;
  for (const auto& cls : classes) {
    Lecture lecture{cls, {}};
    for (int k = 0; k < config.lectures_per_class; ++k) {
      int tries = 0;
      while (true) {
        if (++tries > kPlacementTries) throw DataError("cannot place the lectures of " + cls);
        TimeSlot slot = RandomSlot(rng, config.lecture_minutes);
        // Lectures alone must fit in one feasible day.
        const int max_span = ScoreTables().MaxSpan();
        bool clash = std::any_of(lecture_slots.begin(), lecture_slots.end(), [&](const TimeSlot& o) {
          return TooClose(o, slot) ||
                 (o.day == slot.day &&
                  std::max(o.end, slot.end) - std::min(o.start, slot.start) > max_span);
        });
        if (clash) continue;
        lecture_slots.push_back(slot);
        lecture.slots.push_back(slot);
        break;
      }
    }
    if (!lecture.slots.empty()) lectures.push_back(std::move(lecture));
  }

  std::vector<TutorGroup> groups;
  const int gw = Width(config.groups_per_class);
  for (const auto& cls : classes) {
    std::vector<TimeSlot> taken;
    for (int k = 1; k <= config.groups_per_class; ++k) {
      TutorGroup group;
      group.id = cls + "-G" + Numbered("", k, gw);
      group.class_id = cls;
      group.capacity = config.capacity_min == config.capacity_max
                           ? config.capacity_min
                           : rng.Between(config.capacity_min, config.capacity_max);
      int tries = 0;
      while (true) {
        if (++tries > kPlacementTries) throw DataError("cannot place group " + group.id);
        const int minutes =
            config.slot_minutes[rng.Below(config.slot_minutes.size())];
        TimeSlot slot = RandomSlot(rng, minutes);
        bool clash = std::any_of(lecture_slots.begin(), lecture_slots.end(),
                                 [&](const TimeSlot& o) { return TooClose(o, slot); }) ||
                     std::any_of(taken.begin(), taken.end(), [&](const TimeSlot& o) {
                       return o.day == slot.day && o.start == slot.start;
                     });
        if (clash) continue;
        taken.push_back(slot);
        group.slots.push_back(slot);
        break;
      }
      groups.push_back(std::move(group));
    }
  }

  std::vector<std::string> students;
  const int sw = std::max(4, Width(config.students));
  for (int s = 1; s <= config.students; ++s) students.push_back(Numbered("S", s, sw));

  std::vector<ElicitationParameters> params;
  params.reserve(config.students);
  for (int s = 0; s < config.students; ++s) {
    StreamRng srng(config.seed, 1 + static_cast<std::uint64_t>(s));
    ElicitationParameters p;
    for (const auto& cls : classes) {
      if (config.class_select_prob >= 1.0 || srng.Unit() < config.class_select_prob) {
        p.classes.push_back(cls);
      }
    }
    if (p.classes.empty()) p.classes.push_back(classes[srng.Below(classes.size())]);
    for (const auto& lecture : lectures) {
      if (std::find(p.classes.begin(), p.classes.end(), lecture.class_id) != p.classes.end()) {
        p.lectures.push_back(lecture.class_id);
      }
    }
    for (int d = 0; d < kNumWeekdays; ++d) {
      p.priority[d] = srng.Between(config.priority_min, config.priority_max);
      if (config.restricted_day_prob > 0.0 && srng.Unit() < config.restricted_day_prob) {
        const int lengths = (kGridMinutes - config.min_window_minutes) / kGridStep + 1;
        const int length = config.min_window_minutes + kGridStep * static_cast<int>(srng.Below(lengths));
        const int starts = (kGridMinutes - length) / kGridStep + 1;
        const int start = kGridBegin + kGridStep * static_cast<int>(srng.Below(starts));
        p.ranges[d] = std::vector<Interval>{{start, start + length}};
      }
    }
    p.min_lunch = config.min_lunch_choices[srng.Below(config.min_lunch_choices.size())];
    p.min_gap = config.min_gap;
    p.max_bundles = config.max_bundles;
    params.push_back(std::move(p));
  }

  return GeneratedMarket{Instance::Create(std::move(classes), std::move(groups),
                                          std::move(lectures), std::move(students)),
                         std::move(params)};
}

Json ParamsToJson(const Instance& instance, const std::vector<ElicitationParameters>& params) {
  if (static_cast<int>(params.size()) != instance.num_students()) {
    throw DataError("need one parameter set per student");
  }
  Json doc = Json::object();
  for (int s = 0; s < instance.num_students(); ++s) {
    doc[instance.students()[s]] = ParametersToJson(params[s]);
  }
  return doc;
}

std::vector<ElicitationParameters> ParamsFromJson(const Instance& instance, const Json& doc) {
  if (!doc.is_object()) throw DataError("parameters document must be an object");
  std::vector<std::optional<ElicitationParameters>> slots(instance.num_students());
  for (const auto& [key, value] : doc.items()) {
    if (key == kMetaKey) continue;
    auto s = instance.FindStudent(key);
    if (!s) throw DataError("parameters for unknown student " + key);
    ElicitationParameters p = ParametersFromJson(value);
    ValidateParameters(instance, p);
    slots[*s] = std::move(p);
  }
  std::vector<ElicitationParameters> out;
  for (int s = 0; s < instance.num_students(); ++s) {
    if (!slots[s]) throw DataError("no parameters for student " + instance.students()[s]);
    out.push_back(std::move(*slots[s]));
  }
  return out;
}

}  // namespace coursealloc
