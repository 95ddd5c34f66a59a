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

#include "coursealloc/serialize.hpp"

#include <stdexcept>

#include "coursealloc/error.hpp"

namespace coursealloc {

namespace {

const Json& Field(const Json& obj, const char* key, std::string_view where) {
  if (!obj.is_object()) {
    throw DataError(std::string(where) + ": expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw DataError(std::string(where) + ": missing field '" + key + "'");
  }
  return *it;
}

std::string String(const Json& v, std::string_view where) {
  if (!v.is_string()) throw DataError(std::string(where) + ": expected a string");
  return v.get<std::string>();
}

int Integer(const Json& v, std::string_view where) {
  if (!v.is_number_integer()) {
    throw DataError(std::string(where) + ": expected an integer");
  }
  return v.get<int>();
}

const Json& Array(const Json& v, std::string_view where) {
  if (!v.is_array()) throw DataError(std::string(where) + ": expected an array");
  return v;
}

std::vector<std::string> StringList(const Json& v, std::string_view where) {
  std::vector<std::string> out;
  for (const Json& e : Array(v, where)) out.push_back(String(e, where));
  return out;
}

TimeSlot SlotFromJson(const Json& v, std::string_view where) {
  TimeSlot slot;
  std::string day = String(Field(v, "day", where), where);
  auto parsed = ParseWeekday(day);
  if (!parsed) throw DataError(std::string(where) + ": unknown day '" + day + "'");
  slot.day = *parsed;
  slot.start = Integer(Field(v, "start", where), where);
  slot.end = Integer(Field(v, "end", where), where);
  return slot;
}

Json SlotToJson(const TimeSlot& slot) {
  return Json{{"day", std::string(WeekdayName(slot.day))},
              {"start", slot.start},
              {"end", slot.end}};
}

std::vector<TimeSlot> SlotsFromJson(const Json& v, std::string_view where) {
  std::vector<TimeSlot> slots;
  for (const Json& s : Array(v, where)) slots.push_back(SlotFromJson(s, where));
  return slots;
}

Json SlotsToJson(const std::vector<TimeSlot>& slots) {
  Json arr = Json::array();
  for (const auto& s : slots) arr.push_back(SlotToJson(s));
  return arr;
}

int StudentOrThrow(const Instance& instance, const std::string& id) {
  auto s = instance.FindStudent(id);
  if (!s) throw DataError("unknown student '" + id + "'");
  return *s;
}

Bundle BundleFromJson(const Instance& instance, const Json& v,
                      std::string_view where) {
  std::vector<std::string> ids = StringList(v, where);
  BundleVerdict verdict = ValidateBundleIds(instance, ids);
  if (!verdict.valid) {
    throw DataError(std::string(where) + ": " + verdict.reason);
  }
  return MakeBundle(instance, ids);
}

Json BundleToJson(const Instance& instance, const Bundle& bundle) {
  return Json(BundleIds(instance, bundle));
}

}  // namespace

Json ParseDocument(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
}

Instance InstanceFromJson(const Json& doc) {
  std::vector<std::string> classes =
      StringList(Field(doc, "classes", "instance"), "instance.classes");
  std::vector<TutorGroup> groups;
  for (const Json& g : Array(Field(doc, "groups", "instance"), "instance.groups")) {
    TutorGroup group;
    group.id = String(Field(g, "id", "group"), "group.id");
    std::string where = "group '" + group.id + "'";
    group.class_id = String(Field(g, "class", where), where);
    group.capacity = Integer(Field(g, "capacity", where), where);
    group.slots = SlotsFromJson(Field(g, "slots", where), where);
    groups.push_back(std::move(group));
  }
  std::vector<Lecture> lectures;
  if (doc.contains("lectures")) {
    for (const Json& l : Array(doc["lectures"], "instance.lectures")) {
      Lecture lecture;
      lecture.class_id = String(Field(l, "class", "lecture"), "lecture.class");
      lecture.slots = SlotsFromJson(Field(l, "slots", "lecture"), "lecture.slots");
      lectures.push_back(std::move(lecture));
    }
  }
  std::vector<std::string> students =
      StringList(Field(doc, "students", "instance"), "instance.students");
  return Instance::Create(std::move(classes), std::move(groups),
                          std::move(lectures), std::move(students));
}

Json InstanceToJson(const Instance& instance) {
  Json groups = Json::array();
  for (const auto& g : instance.groups()) {
    groups.push_back(Json{{"id", g.id},
                          {"class", g.class_id},
                          {"capacity", g.capacity},
                          {"slots", SlotsToJson(g.slots)}});
  }
  Json lectures = Json::array();
  for (const auto& l : instance.lectures()) {
    lectures.push_back(Json{{"class", l.class_id}, {"slots", SlotsToJson(l.slots)}});
  }
  return Json{{"classes", instance.classes()},
              {"groups", std::move(groups)},
              {"lectures", std::move(lectures)},
              {"students", instance.students()}};
}

Instance LoadInstance(std::string_view text) {
  return InstanceFromJson(ParseDocument(text));
}

PreferenceProfile ProfileFromJson(const Instance& instance, const Json& doc) {
  if (!doc.is_object()) throw DataError("profile: expected an object");
  PreferenceProfile profile(instance.num_students());
  for (const auto& [key, value] : doc.items()) {
    if (key == kMetaKey) continue;
    int s = StudentOrThrow(instance, key);
    std::string where = "profile of '" + key + "'";
    for (const Json& b : Array(value, where)) {
      profile.mutable_list(s).push_back(BundleFromJson(instance, b, where));
    }
  }
  ValidateProfile(instance, profile);
  return profile;
}

Json ProfileToJson(const Instance& instance, const PreferenceProfile& profile) {
  Json doc = Json::object();
  for (int s = 0; s < profile.num_students(); ++s) {
    Json list = Json::array();
    for (const Bundle& b : profile.list(s)) list.push_back(BundleToJson(instance, b));
    doc[instance.students()[s]] = std::move(list);
  }
  return doc;
}

Json ProbabilityToJson(const Rational& p, ArithmeticMode mode) {
  if (mode == ArithmeticMode::kExact) return ToString(p);
  return p.get_d();
}

Rational ProbabilityFromJson(const Json& value) {
  try {
    if (value.is_string()) return ParseRational(value.get<std::string>());
    if (value.is_number_integer()) return Rational(value.get<long>());
    if (value.is_number()) return FromDouble(value.get<double>());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("bad probability: ") + e.what());
  }
  throw DataError("probability must be a string or a number");
}

FractionalAssignment AssignmentFromJson(const Instance& instance,
                                        const Json& doc) {
  if (!doc.is_object()) throw DataError("assignment: expected an object");
  FractionalAssignment out(instance.num_students());
  bool saw_decimal = false;
  for (const auto& [key, value] : doc.items()) {
    if (key == kMetaKey) continue;
    int s = StudentOrThrow(instance, key);
    std::string where = "assignment of '" + key + "'";
    for (const Json& entry : Array(value, where)) {
      Bundle b = BundleFromJson(instance, Field(entry, "bundle", where), where);
      const Json& p = Field(entry, "p", where);
      saw_decimal = saw_decimal || !p.is_string();
      out.Add(s, b, ProbabilityFromJson(p));
    }
  }
  out.mode = saw_decimal ? ArithmeticMode::kDecimal : ArithmeticMode::kExact;
  if (auto meta = doc.find(kMetaKey); meta != doc.end() && meta->is_object()) {
    if (auto a = meta->find("arithmetic"); a != meta->end() && a->is_string()) {
      out.mode = a->get<std::string>() == "exact" ? ArithmeticMode::kExact
                                                  : ArithmeticMode::kDecimal;
    }
    if (auto m = meta->find("mechanism"); m != meta->end() && m->is_string()) {
      out.mechanism = m->get<std::string>();
    }
  }
  out.Canonicalize();
  return out;
}

Json AssignmentToJson(const Instance& instance,
                      const FractionalAssignment& assignment) {
  Json doc = Json::object();
  for (int s = 0; s < assignment.num_students(); ++s) {
    Json row = Json::array();
    for (const auto& share : assignment.row(s)) {
      row.push_back(Json{{"bundle", BundleToJson(instance, share.bundle)},
                         {"p", ProbabilityToJson(share.p, assignment.mode)}});
    }
    doc[instance.students()[s]] = std::move(row);
  }
  doc[kMetaKey] = Json{
      {"arithmetic", assignment.mode == ArithmeticMode::kExact ? "exact" : "decimal"},
      {"mechanism", assignment.mechanism}};
  return doc;
}

DeterministicMatching MatchingFromJson(const Instance& instance,
                                       const Json& doc) {
  if (!doc.is_object()) throw DataError("matching: expected an object");
  DeterministicMatching m;
  m.assignment.resize(instance.num_students());
  for (const auto& [key, value] : doc.items()) {
    if (key == kMetaKey) continue;
    int s = StudentOrThrow(instance, key);
    if (value.is_null()) continue;
    m.assignment[s] = BundleFromJson(instance, value, "matching of '" + key + "'");
  }
  return m;
}

Json MatchingToJson(const Instance& instance,
                    const DeterministicMatching& matching) {
  Json doc = Json::object();
  for (int s = 0; s < static_cast<int>(matching.assignment.size()); ++s) {
    const auto& b = matching.assignment[s];
    doc[instance.students()[s]] = b ? BundleToJson(instance, *b) : Json(nullptr);
  }
  return doc;
}

Lottery LotteryFromJson(const Instance& instance, const Json& doc) {
  Lottery lottery;
  const Json& eps = Field(doc, "epsilon", "lottery");
  if (!eps.is_number()) throw DataError("lottery.epsilon: expected a number");
  lottery.epsilon = eps.get<double>();
  for (const Json& entry : Array(Field(doc, "support", "lottery"), "lottery.support")) {
    const Json& lambda = Field(entry, "lambda", "lottery.support");
    if (!lambda.is_number()) throw DataError("lottery lambda: expected a number");
    LotteryEntry e;
    e.lambda = lambda.get<double>();
    if (e.lambda < 0) throw DataError("lottery lambda must be non-negative");
    e.matching = MatchingFromJson(instance, Field(entry, "matching", "lottery.support"));
    lottery.support.push_back(std::move(e));
  }
  return lottery;
}

Json LotteryToJson(const Instance& instance, const Lottery& lottery) {
  Json support = Json::array();
  for (const auto& e : lottery.support) {
    support.push_back(Json{{"lambda", e.lambda},
                           {"matching", MatchingToJson(instance, e.matching)}});
  }
  return Json{{"epsilon", lottery.epsilon}, {"support", std::move(support)}};
}

std::string Dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace coursealloc
