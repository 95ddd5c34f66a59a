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

#include "coursealloc/elicitation.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "coursealloc/error.hpp"

namespace coursealloc {

namespace {

struct Event {
  TimeSlot slot;
  bool tutorial = false;
};

int DayIndex(Weekday d) { return static_cast<int>(d); }

bool OnGrid(int minute) {
  return minute % kGridStep == 0 && minute >= kGridBegin && minute <= kGridEnd;
}

std::vector<TimeSlot> LectureSlots(const Instance& instance,
                                   const ElicitationParameters& params) {
  std::vector<TimeSlot> slots;
  for (const auto& lecture : instance.lectures()) {
    if (std::find(params.lectures.begin(), params.lectures.end(), lecture.class_id) ==
        params.lectures.end()) {
      continue;
    }
    slots.insert(slots.end(), lecture.slots.begin(), lecture.slots.end());
  }
  return slots;
}

bool InsideRanges(const ElicitationParameters& params, const TimeSlot& slot) {
  const auto& ranges = params.ranges[DayIndex(slot.day)];
  if (!ranges) return true;
  return std::any_of(ranges->begin(), ranges->end(), [&](const Interval& r) {
    return r.first <= slot.start && slot.end <= r.second;
  });
}

// Longest stretch of the lunch window not covered by any event; time
// before the first and after the last event counts as free.
int LongestFreeInWindow(const std::vector<TimeSlot>& sorted, const Interval& window) {
  int cursor = window.first;
  int best = 0;
  for (const auto& e : sorted) {
    if (e.end <= cursor) continue;
    if (e.start >= window.second) break;
    best = std::max(best, std::min(e.start, window.second) - cursor);
    cursor = std::max(cursor, e.end);
  }
  best = std::max(best, window.second - cursor);
  return best;
}

// Full hard-constraint check on one day's events.
std::string CheckDay(std::vector<Event> events, const ElicitationParameters& params) {
  if (events.empty()) return {};
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.slot.start < b.slot.start || (a.slot.start == b.slot.start && a.slot.end < b.slot.end);
  });
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = i + 1; j < events.size(); ++j) {
      if ((events[i].tutorial || events[j].tutorial) && events[i].slot.Overlaps(events[j].slot)) {
        return "overlapping events";
      }
    }
  }
  int running_end = events[0].slot.end;
  bool running_tutorial = events[0].tutorial;
  for (std::size_t i = 1; i < events.size(); ++i) {
    const Event& e = events[i];
    int gap = e.slot.start - running_end;
    if (gap >= 0 && gap < params.min_gap && (e.tutorial || running_tutorial)) {
      return "gap shorter than the minimum";
    }
    if (e.slot.end > running_end) {
      running_end = e.slot.end;
      running_tutorial = e.tutorial;
    }
  }
  int first = events.front().slot.start;
  if (running_end - first > params.tables.MaxSpan()) return "day longer than allowed";
  if (params.min_lunch > 0) {
    std::vector<TimeSlot> slots;
    for (const auto& e : events) slots.push_back(e.slot);
    if (LongestFreeInWindow(slots, params.lunch_window) < params.min_lunch) {
      return "lunch break too short";
    }
  }
  return {};
}

std::array<std::vector<Event>, kNumWeekdays> BundleEvents(
    const Instance& instance, const std::vector<TimeSlot>& lectures, const Bundle& bundle) {
  std::array<std::vector<Event>, kNumWeekdays> days;
  for (const auto& slot : lectures) days[DayIndex(slot.day)].push_back({slot, false});
  for (int g : bundle.groups()) {
    for (const auto& slot : instance.groups()[g].slots) {
      days[DayIndex(slot.day)].push_back({slot, true});
    }
  }
  return days;
}

double ToD(const Rational& q) { return q.get_d(); }

struct FastTables {
  std::vector<std::pair<int, double>> span;
  std::vector<std::pair<int, double>> lunch;
  double free_day;

  explicit FastTables(const ScoreTables& t) : free_day(ToD(t.free_day)) {
    for (const auto& [m, p] : t.span_points) span.emplace_back(m, ToD(p));
    for (const auto& [m, p] : t.lunch_points) lunch.emplace_back(m, ToD(p));
  }
};

template <typename Table>
auto SpanPoints(const Table& table, int sp) {
  for (const auto& [bound, points] : table) {
    if (sp <= bound) return points;
  }
  throw DataError("day span of " + std::to_string(sp) + " minutes exceeds the score table");
}

template <typename Table>
auto LunchPoints(const Table& table, int lunch) {
  auto points = table.front().second;
  for (const auto& [bound, p] : table) {
    if (lunch >= bound) points = p;
  }
  return points;
}

// Attended minutes, span and lunch of sorted slots.
void Measure(const std::vector<TimeSlot>& sorted, const Interval& window, int& w, int& sp,
             int& lunch, std::vector<Interval>* gaps) {
  w = 0;
  lunch = 0;
  int block_start = sorted[0].start;
  int block_end = sorted[0].end;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const auto& e = sorted[i];
    if (e.start > block_end) {
      w += block_end - block_start;
      int lo = std::max(block_end, window.first);
      int hi = std::min(e.start, window.second);
      lunch = std::max(lunch, hi - lo);
      if (gaps) gaps->emplace_back(block_end, e.start);
      block_start = e.start;
      block_end = e.end;
    } else {
      block_end = std::max(block_end, e.end);
    }
  }
  w += block_end - block_start;
  sp = block_end - sorted[0].start;
}

double FastDayScore(std::vector<TimeSlot>& day, int prio, const Interval& window,
                    const FastTables& tables) {
  if (day.empty()) return tables.free_day;
  std::sort(day.begin(), day.end(),
            [](const TimeSlot& a, const TimeSlot& b) { return a.start < b.start; });
  int w, sp, lunch;
  Measure(day, window, w, sp, lunch, nullptr);
  return (static_cast<double>(w) / sp * SpanPoints(tables.span, sp) +
          LunchPoints(tables.lunch, lunch)) *
         prio;
}

Interval ParseInterval(const Json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    throw DataError(what + " must be a [start, end] pair of minutes");
  }
  return {v[0].get<int>(), v[1].get<int>()};
}

std::vector<std::pair<int, Rational>> ParseTable(const Json& v, const std::string& what) {
  if (!v.is_array() || v.empty()) throw DataError(what + " must be a non-empty list");
  std::vector<std::pair<int, Rational>> table;
  for (const auto& row : v) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number_integer()) {
      throw DataError(what + " rows must be [minutes, points]");
    }
    table.emplace_back(row[0].get<int>(), ProbabilityFromJson(row[1]));
  }
  return table;
}

Json TableToJson(const std::vector<std::pair<int, Rational>>& table) {
  Json out = Json::array();
  for (const auto& [m, p] : table) out.push_back(Json::array({m, ToString(p)}));
  return out;
}

}  // namespace

void ValidateParameters(const Instance& instance, const ElicitationParameters& params) {
  if (params.classes.empty()) throw DataError("no classes selected");
  for (std::size_t i = 0; i < params.classes.size(); ++i) {
    const auto& c = params.classes[i];
    if (!instance.FindClass(c)) throw DataError("unknown class " + c);
    if (std::find(params.classes.begin(), params.classes.begin() + i, c) !=
        params.classes.begin() + i) {
      throw DataError("class " + c + " selected twice");
    }
  }
  for (const auto& c : params.lectures) {
    if (!instance.FindClass(c)) throw DataError("unknown lecture class " + c);
  }
  for (int d = 0; d < kNumWeekdays; ++d) {
    const std::string day(WeekdayName(static_cast<Weekday>(d)));
    if (params.priority[d] < 1 || params.priority[d] > 5) {
      throw DataError("priority of " + day + " must lie in 1..5");
    }
    if (!params.ranges[d]) continue;
    for (const auto& [s, e] : *params.ranges[d]) {
      if (!OnGrid(s) || !OnGrid(e) || s >= e) {
        throw DataError("range on " + day + " is not a grid interval");
      }
    }
  }
  if (params.min_gap < 0) throw DataError("minGap must be non-negative");
  if (params.min_lunch < 0) throw DataError("minLunch must be non-negative");
  if (params.lunch_window.first >= params.lunch_window.second) {
    throw DataError("lunchWindow must be a non-empty interval");
  }
  if (params.max_bundles < 1) throw DataError("maxBundles must be positive");
  const auto& t = params.tables;
  if (t.span_points.empty() || t.lunch_points.empty() || t.lunch_points.front().first != 0) {
    throw DataError("score tables are malformed");
  }
  for (std::size_t i = 1; i < t.span_points.size(); ++i) {
    if (t.span_points[i].first <= t.span_points[i - 1].first) {
      throw DataError("span table bounds must increase");
    }
  }
  for (std::size_t i = 1; i < t.lunch_points.size(); ++i) {
    if (t.lunch_points[i].first <= t.lunch_points[i - 1].first) {
      throw DataError("lunch table bounds must increase");
    }
  }
}

ElicitationParameters ParametersFromJson(const Json& doc) {
  if (!doc.is_object()) throw DataError("parameters must be an object");
  ElicitationParameters p;
  auto strings = [&](const char* key) {
    std::vector<std::string> out;
    if (!doc.contains(key)) return out;
    if (!doc[key].is_array()) throw DataError(std::string(key) + " must be a list");
    for (const auto& v : doc[key]) {
      if (!v.is_string()) throw DataError(std::string(key) + " entries must be strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  p.classes = strings("classes");
  p.lectures = strings("lectures");
  if (doc.contains("ranges")) {
    if (!doc["ranges"].is_object()) throw DataError("ranges must be an object");
    for (const auto& [name, list] : doc["ranges"].items()) {
      auto day = ParseWeekday(name);
      if (!day) throw DataError("unknown weekday " + name);
      if (!list.is_array()) throw DataError("ranges of " + name + " must be a list");
      std::vector<Interval> intervals;
      for (const auto& r : list) intervals.push_back(ParseInterval(r, "range"));
      p.ranges[DayIndex(*day)] = std::move(intervals);
    }
  }
  if (doc.contains("priorities")) {
    if (!doc["priorities"].is_object()) throw DataError("priorities must be an object");
    for (const auto& [name, v] : doc["priorities"].items()) {
      auto day = ParseWeekday(name);
      if (!day) throw DataError("unknown weekday " + name);
      if (!v.is_number_integer()) throw DataError("priority of " + name + " must be an integer");
      p.priority[DayIndex(*day)] = v.get<int>();
    }
  }
  auto integer = [&](const char* key, int& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_integer()) throw DataError(std::string(key) + " must be an integer");
    out = doc[key].get<int>();
  };
  integer("minLunch", p.min_lunch);
  integer("minGap", p.min_gap);
  integer("maxBundles", p.max_bundles);
  if (doc.contains("lunchWindow")) p.lunch_window = ParseInterval(doc["lunchWindow"], "lunchWindow");
  if (doc.contains("spanPoints")) p.tables.span_points = ParseTable(doc["spanPoints"], "spanPoints");
  if (doc.contains("lunchPoints")) {
    p.tables.lunch_points = ParseTable(doc["lunchPoints"], "lunchPoints");
  }
  if (doc.contains("freeDay")) p.tables.free_day = ProbabilityFromJson(doc["freeDay"]);
  return p;
}

Json ParametersToJson(const ElicitationParameters& p) {
  Json ranges = Json::object();
  Json priorities = Json::object();
  for (int d = 0; d < kNumWeekdays; ++d) {
    const std::string day(WeekdayName(static_cast<Weekday>(d)));
    priorities[day] = p.priority[d];
    if (!p.ranges[d]) continue;
    Json list = Json::array();
    for (const auto& [s, e] : *p.ranges[d]) list.push_back(Json::array({s, e}));
    ranges[day] = std::move(list);
  }
  ScoreTables defaults;
  Json doc = {{"classes", p.classes},
              {"lectures", p.lectures},
              {"ranges", std::move(ranges)},
              {"priorities", std::move(priorities)},
              {"minLunch", p.min_lunch},
              {"minGap", p.min_gap},
              {"lunchWindow", Json::array({p.lunch_window.first, p.lunch_window.second})},
              {"maxBundles", p.max_bundles}};
  if (p.tables.span_points != defaults.span_points) doc["spanPoints"] = TableToJson(p.tables.span_points);
  if (p.tables.lunch_points != defaults.lunch_points) {
    doc["lunchPoints"] = TableToJson(p.tables.lunch_points);
  }
  if (p.tables.free_day != defaults.free_day) doc["freeDay"] = ToString(p.tables.free_day);
  return doc;
}

DaySchedule BuildDaySchedule(std::vector<TimeSlot> events, const Interval& lunch_window) {
  DaySchedule s;
  std::sort(events.begin(), events.end(), [](const TimeSlot& a, const TimeSlot& b) {
    return a.start < b.start || (a.start == b.start && a.end < b.end);
  });
  s.events = std::move(events);
  if (!s.events.empty()) Measure(s.events, lunch_window, s.w, s.sp, s.lunch, &s.gaps);
  return s;
}

Rational DayScore(const DaySchedule& schedule, int prio, const ScoreTables& tables) {
  if (schedule.empty()) return tables.free_day;
  Rational ratio(schedule.w, schedule.sp);
  ratio.canonicalize();
  return (ratio * SpanPoints(tables.span_points, schedule.sp) +
          LunchPoints(tables.lunch_points, schedule.lunch)) *
         prio;
}

std::string CheckBundle(const Instance& instance, const ElicitationParameters& params,
                        const Bundle& bundle) {
  std::vector<int> per_class(instance.num_classes(), -1);
  for (int g : bundle.groups()) {
    if (g < 0 || g >= instance.num_groups()) return "unknown group";
    per_class[instance.class_of_group(g)] = g;
  }
  if (bundle.size() != params.classes.size()) return "bundle does not cover the selected classes";
  for (const auto& c : params.classes) {
    if (per_class[*instance.FindClass(c)] < 0) return "no group of class " + c;
  }
  for (int g : bundle.groups()) {
    for (const auto& slot : instance.groups()[g].slots) {
      if (!InsideRanges(params, slot)) return "group " + instance.groups()[g].id + " outside ranges";
    }
  }
  auto days = BundleEvents(instance, LectureSlots(instance, params), bundle);
  for (auto& day : days) {
    std::string why = CheckDay(day, params);
    if (!why.empty()) return why;
  }
  return {};
}

std::vector<Bundle> GenerateFeasibleBundles(const Instance& instance,
                                            const ElicitationParameters& params) {
  ValidateParameters(instance, params);
  const auto lectures = LectureSlots(instance, params);
  const int k = static_cast<int>(params.classes.size());

  // Candidate groups per selected class, each checked alone with the lectures.
  std::vector<std::vector<int>> candidates(k);
  for (int g = 0; g < instance.num_groups(); ++g) {
    const std::string& cls = instance.groups()[g].class_id;
    auto it = std::find(params.classes.begin(), params.classes.end(), cls);
    if (it == params.classes.end()) continue;
    Bundle single({g});
    bool ok = std::all_of(instance.groups()[g].slots.begin(), instance.groups()[g].slots.end(),
                          [&](const TimeSlot& s) { return InsideRanges(params, s); });
    if (ok) {
      auto days = BundleEvents(instance, lectures, single);
      for (auto& day : days) ok = ok && CheckDay(day, params).empty();
    }
    if (ok) candidates[it - params.classes.begin()].push_back(g);
  }
  for (const auto& c : candidates) {
    if (c.empty()) return {};
  }

  // Pairwise conflicts (overlap or a short gap) are sound to prune on:
  // adding events never repairs them. Span and lunch are checked per day.
  std::vector<int> all;
  for (const auto& c : candidates) all.insert(all.end(), c.begin(), c.end());
  std::sort(all.begin(), all.end());
  std::vector<int> local(instance.num_groups(), -1);
  for (std::size_t i = 0; i < all.size(); ++i) local[all[i]] = static_cast<int>(i);
  const std::size_t n = all.size();
  std::vector<char> compatible(n * n, 1);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      std::array<std::vector<Event>, kNumWeekdays> days;
      for (int g : {all[a], all[b]}) {
        for (const auto& slot : instance.groups()[g].slots) {
          days[DayIndex(slot.day)].push_back({slot, true});
        }
      }
      ElicitationParameters pair_params = params;
      pair_params.min_lunch = 0;
      pair_params.tables.span_points.back().first = kGridEnd;
      bool ok = true;
      for (auto& day : days) ok = ok && CheckDay(day, pair_params).empty();
      compatible[a * n + b] = compatible[b * n + a] = ok;
    }
  }

  // Order classes by candidate count so the search tree is narrow at the top.
  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return candidates[a].size() < candidates[b].size();
  });

  std::vector<Bundle> out;
  std::vector<int> chosen;
  std::array<int, kNumWeekdays> base_first, base_last;
  base_first.fill(kGridEnd + 1);
  base_last.fill(kGridBegin - 1);
  for (const auto& slot : lectures) {
    int d = DayIndex(slot.day);
    base_first[d] = std::min(base_first[d], slot.start);
    base_last[d] = std::max(base_last[d], slot.end);
  }
  const int max_span = params.tables.MaxSpan();

  auto recurse = [&](auto&& self, int depth, std::array<int, kNumWeekdays> first,
                     std::array<int, kNumWeekdays> last) -> void {
    if (depth == k) {
      Bundle b(chosen);
      if (params.min_lunch > 0) {
        auto days = BundleEvents(instance, lectures, b);
        for (auto& day : days) {
          if (!CheckDay(day, params).empty()) return;
        }
      }
      out.push_back(std::move(b));
      return;
    }
    for (int g : candidates[order[depth]]) {
      const int lg = local[g];
      bool ok = std::all_of(chosen.begin(), chosen.end(),
                            [&](int h) { return compatible[lg * n + local[h]] != 0; });
      if (!ok) continue;
      auto f = first;
      auto l = last;
      for (const auto& slot : instance.groups()[g].slots) {
        int d = DayIndex(slot.day);
        f[d] = std::min(f[d], slot.start);
        l[d] = std::max(l[d], slot.end);
        if (l[d] - f[d] > max_span) ok = false;
      }
      if (!ok) continue;
      chosen.push_back(g);
      self(self, depth + 1, f, l);
      chosen.pop_back();
    }
  };
  recurse(recurse, 0, base_first, base_last);
  std::sort(out.begin(), out.end());
  return out;
}

ScoredBundle ScoreBundle(const Instance& instance, const ElicitationParameters& params,
                         const Bundle& bundle) {
  std::string why = CheckBundle(instance, params, bundle);
  if (!why.empty()) throw DataError("infeasible bundle: " + why);
  ScoredBundle scored;
  scored.bundle = bundle;
  auto days = BundleEvents(instance, LectureSlots(instance, params), bundle);
  for (int d = 0; d < kNumWeekdays; ++d) {
    std::vector<TimeSlot> slots;
    for (const auto& e : days[d]) slots.push_back(e.slot);
    scored.per_day[d] =
        DayScore(BuildDaySchedule(std::move(slots), params.lunch_window), params.priority[d],
                 params.tables);
    scored.score += scored.per_day[d];
  }
  return scored;
}

std::vector<ScoredBundle> RankBundles(const Instance& instance,
                                      const ElicitationParameters& params) {
  std::vector<Bundle> feasible = GenerateFeasibleBundles(instance, params);
  if (feasible.empty()) return {};

  // Screen in floating point, then rank the survivors exactly.
  const auto lectures = LectureSlots(instance, params);
  const FastTables tables(params.tables);
  std::vector<double> approx(feasible.size());
  std::array<std::vector<TimeSlot>, kNumWeekdays> day_slots;
  for (std::size_t i = 0; i < feasible.size(); ++i) {
    for (auto& d : day_slots) d.clear();
    for (const auto& slot : lectures) day_slots[DayIndex(slot.day)].push_back(slot);
    for (int g : feasible[i].groups()) {
      for (const auto& slot : instance.groups()[g].slots) {
        day_slots[DayIndex(slot.day)].push_back(slot);
      }
    }
    double total = 0;
    for (int d = 0; d < kNumWeekdays; ++d) {
      total += FastDayScore(day_slots[d], params.priority[d], params.lunch_window, tables);
    }
    approx[i] = total;
  }
  std::vector<std::size_t> idx(feasible.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const std::size_t keep = std::min<std::size_t>(params.max_bundles, idx.size());
  std::nth_element(idx.begin(), idx.begin() + (keep - 1), idx.end(),
                   [&](std::size_t a, std::size_t b) { return approx[a] > approx[b]; });
  const double cutoff = approx[idx[keep - 1]] - 1e-6;

  struct Candidate {
    ScoredBundle scored;
    std::vector<std::string> ids;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < feasible.size(); ++i) {
    if (approx[i] < cutoff) continue;
    Candidate c{ScoreBundle(instance, params, feasible[i]),
                SortedBundleIds(instance, feasible[i])};
    candidates.push_back(std::move(c));
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.scored.score != b.scored.score) return a.scored.score > b.scored.score;
    return a.ids < b.ids;
  });
  if (candidates.size() > keep) candidates.resize(keep);
  std::vector<ScoredBundle> out;
  out.reserve(candidates.size());
  for (auto& c : candidates) out.push_back(std::move(c.scored));
  return out;
}

PreferenceProfile ElicitProfile(const Instance& instance,
                                const std::vector<ElicitationParameters>& params,
                                int threads) {
  if (static_cast<int>(params.size()) != instance.num_students()) {
    throw DataError("need one parameter set per student");
  }
  for (const auto& p : params) ValidateParameters(instance, p);
  PreferenceProfile profile(instance.num_students());
  std::atomic<int> next{0};
  auto work = [&]() {
    for (int s = next++; s < instance.num_students(); s = next++) {
      for (auto& scored : RankBundles(instance, params[s])) {
        profile.mutable_list(s).push_back(std::move(scored.bundle));
      }
    }
  };
  threads = std::max(1, std::min(threads, instance.num_students()));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return profile;
}

}  // namespace coursealloc
