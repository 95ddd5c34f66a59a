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

#include "coursealloc/coursealloc.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <set>
#include <string>

#include "coursealloc/elicitation.hpp"
#include "coursealloc/error.hpp"
#include "coursealloc/generator.hpp"
#include "coursealloc/lottery.hpp"
#include "coursealloc/mechanisms.hpp"
#include "coursealloc/metrics.hpp"
#include "coursealloc/rev.hpp"
#include "coursealloc/serialize.hpp"

struct ca_instance {
  coursealloc::Instance value;
};
struct ca_profile {
  coursealloc::PreferenceProfile value;
};
struct ca_assignment {
  coursealloc::FractionalAssignment value;
};
struct ca_lottery {
  coursealloc::Lottery value;
};

namespace {

using coursealloc::Json;

thread_local std::string last_error;

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ca_status Fail(ca_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
ca_status Guard(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const coursealloc::DataError& e) {
    return Fail(CA_ERR_DATA, e.what());
  } catch (const Json::exception& e) {
    return Fail(CA_ERR_DATA, e.what());
  } catch (const coursealloc::InternalError& e) {
    return Fail(CA_ERR_INTERNAL, e.what());
  } catch (const std::invalid_argument& e) {
    return Fail(CA_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(CA_ERR_NO_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return Fail(CA_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(CA_ERR_INTERNAL, "unknown error");
  }
}

void Require(const void* p, const char* name) {
  if (!p) throw ArgumentError(std::string(name) + " is null");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Emit(char** out, const Json& doc) {
  if (out) *out = CopyString(coursealloc::Dump(doc));
}

Json ParseOptions(const char* text) {
  if (!text || !*text) return Json::object();
  Json doc = coursealloc::ParseDocument(text);
  if (!doc.is_object()) throw coursealloc::DataError("options: expected an object");
  return doc;
}

coursealloc::LpArithmetic ParseArithmetic(const std::string& name) {
  if (name == "auto") return coursealloc::LpArithmetic::kAuto;
  if (name == "exact") return coursealloc::LpArithmetic::kExact;
  if (name == "float") return coursealloc::LpArithmetic::kFloat;
  throw ArgumentError("arithmetic must be auto, exact or float");
}

Json OverAllocationJson(const coursealloc::Instance& instance,
                        const coursealloc::OverAllocationReport& report) {
  Json levels = Json::object();
  for (const auto& [level, e] : report.expected) {
    levels[std::to_string(level)] =
        Json{{"exact", coursealloc::ToString(e)}, {"value", e.get_d()}};
  }
  Json worst = Json::object();
  for (int g = 0; g < instance.num_groups(); ++g) {
    if (report.worst_per_group[g] > 0) worst[instance.groups()[g].id] = report.worst_per_group[g];
  }
  return Json{{"max_allowed", report.max_level},
              {"worst", report.worst},
              {"expected", std::move(levels)},
              {"worst_per_group", std::move(worst)}};
}

}  // namespace

extern "C" {

const char* ca_version(void) { return "1.0.0"; }

const char* ca_last_error(void) { return last_error.c_str(); }

void ca_string_free(char* s) { std::free(s); }

ca_status ca_instance_load(const char* json, ca_instance** out) {
  return Guard([&] {
    Require(json, "json");
    Require(out, "out");
    *out = new ca_instance{coursealloc::LoadInstance(json)};
    return CA_OK;
  });
}

ca_status ca_instance_to_json(const ca_instance* instance, char** out) {
  return Guard([&] {
    Require(instance, "instance");
    Require(out, "out");
    Emit(out, coursealloc::InstanceToJson(instance->value));
    return CA_OK;
  });
}

int ca_instance_num_students(const ca_instance* instance) {
  return instance ? instance->value.num_students() : -1;
}

int ca_instance_num_classes(const ca_instance* instance) {
  return instance ? instance->value.num_classes() : -1;
}

int ca_instance_num_groups(const ca_instance* instance) {
  return instance ? instance->value.num_groups() : -1;
}

void ca_instance_free(ca_instance* instance) { delete instance; }

ca_status ca_generate(const char* config_json, ca_instance** instance, char** params_json) {
  return Guard([&] {
    Require(instance, "instance");
    auto config = coursealloc::GeneratorConfigFromJson(ParseOptions(config_json));
    auto market = coursealloc::Generate(config);
    if (params_json) Emit(params_json, coursealloc::ParamsToJson(market.instance, market.params));
    *instance = new ca_instance{std::move(market.instance)};
    return CA_OK;
  });
}

ca_status ca_elicit(const ca_instance* instance, const char* params_json, int threads,
                    ca_profile** out, char** summary_json) {
  return Guard([&] {
    Require(instance, "instance");
    Require(params_json, "params_json");
    Require(out, "out");
    if (threads < 1) throw ArgumentError("threads must be positive");
    const auto params =
        coursealloc::ParamsFromJson(instance->value, coursealloc::ParseDocument(params_json));
    auto profile = coursealloc::ElicitProfile(instance->value, params, threads);
    if (summary_json) {
      std::set<coursealloc::Bundle> distinct;
      int empty = 0;
      std::size_t total = 0;
      Json lengths = Json::object();
      for (int s = 0; s < profile.num_students(); ++s) {
        const auto& list = profile.list(s);
        if (list.empty()) ++empty;
        total += list.size();
        distinct.insert(list.begin(), list.end());
        lengths[instance->value.students()[s]] = list.size();
      }
      Emit(summary_json, Json{{"students", profile.num_students()},
                              {"empty_rankings", empty},
                              {"ranked_bundles", total},
                              {"distinct_bundles", distinct.size()},
                              {"list_lengths", std::move(lengths)}});
    }
    *out = new ca_profile{std::move(profile)};
    return CA_OK;
  });
}

ca_status ca_profile_load(const ca_instance* instance, const char* json, ca_profile** out) {
  return Guard([&] {
    Require(instance, "instance");
    Require(json, "json");
    Require(out, "out");
    *out = new ca_profile{
        coursealloc::ProfileFromJson(instance->value, coursealloc::ParseDocument(json))};
    return CA_OK;
  });
}

ca_status ca_profile_to_json(const ca_instance* instance, const ca_profile* profile,
                             char** out) {
  return Guard([&] {
    Require(instance, "instance");
    Require(profile, "profile");
    Require(out, "out");
    Emit(out, coursealloc::ProfileToJson(instance->value, profile->value));
    return CA_OK;
  });
}

void ca_profile_free(ca_profile* profile) { delete profile; }

ca_status ca_match_bps(const ca_instance* instance, const ca_profile* profile,
                       ca_assignment** out, char** trace_json) {
  return Guard([&] {
    Require(instance, "instance");
    Require(profile, "profile");
    Require(out, "out");
    auto result = coursealloc::RunBps(instance->value, profile->value);
    if (trace_json) {
      Emit(trace_json, coursealloc::TraceToJson(instance->value, profile->value, result.trace));
    }
    *out = new ca_assignment{std::move(result.assignment)};
    return CA_OK;
  });
}

ca_status ca_match_brsd_estimate(const ca_instance* instance, const ca_profile* profile,
                                 uint64_t reps, uint64_t seed, int threads,
                                 ca_assignment** out) {
  return Guard([&] {
    Require(instance, "instance");
    Require(profile, "profile");
    Require(out, "out");
    if (reps == 0) throw ArgumentError("reps must be positive");
    if (threads < 1) throw ArgumentError("threads must be positive");
    *out = new ca_assignment{
        coursealloc::EstimateBrsd(instance->value, profile->value, reps, seed, threads)};
    return CA_OK;
  });
}

ca_status ca_match_brsd_exact(const ca_instance* instance, const ca_profile* profile,
                              ca_assignment** out) {
  return Guard([&] {
    Require(instance, "instance");
    Require(profile, "profile");
    Require(out, "out");
    *out = new ca_assignment{coursealloc::EnumerateBrsdExact(instance->value, profile->value)};
    return CA_OK;
  });
}

ca_status ca_assignment_load(const ca_instance* instance, const char* json,
                             ca_assignment** out) {
  return Guard([&] {
    Require(instance, "instance");
    Require(json, "json");
    Require(out, "out");
    *out = new ca_assignment{
        coursealloc::AssignmentFromJson(instance->value, coursealloc::ParseDocument(json))};
    return CA_OK;
  });
}

ca_status ca_assignment_to_json(const ca_instance* instance, const ca_assignment* assignment,
                                int decimal, char** out) {
  return Guard([&] {
    Require(instance, "instance");
    Require(assignment, "assignment");
    Require(out, "out");
    coursealloc::FractionalAssignment copy = assignment->value;
    copy.mode = decimal ? coursealloc::ArithmeticMode::kDecimal
                        : coursealloc::ArithmeticMode::kExact;
    Emit(out, coursealloc::AssignmentToJson(instance->value, copy));
    return CA_OK;
  });
}

ca_status ca_assignment_check(const ca_instance* instance, const ca_assignment* assignment,
                              char** report_json) {
  return Guard([&] {
    Require(instance, "instance");
    Require(assignment, "assignment");
    Require(report_json, "report_json");
    auto report = coursealloc::CheckFeasibility(instance->value, assignment->value);
    Emit(report_json, Json{{"feasible", report.ok}, {"violations", report.violations}});
    return CA_OK;
  });
}

void ca_assignment_free(ca_assignment* assignment) { delete assignment; }

ca_status ca_lottery_decompose(const ca_instance* instance, const ca_assignment* assignment,
                               const char* config_json, ca_lottery** out,
                               char** report_json) {
  return Guard([&] {
    Require(instance, "instance");
    Require(assignment, "assignment");
    Require(out, "out");
    const Json options = ParseOptions(config_json);
    coursealloc::LotteryConfig config;
    for (const auto& [key, value] : options.items()) {
      if (key == "epsilon") {
        config.epsilon = value.get<double>();
      } else if (key == "delta") {
        if (!value.is_null()) config.delta = value.get<double>();
      } else if (key == "alpha") {
        if (!value.is_null()) config.alpha = value.get<double>();
      } else if (key == "maxIterations") {
        config.max_iterations = value.get<int>();
      } else if (key == "arithmetic") {
        config.arithmetic = ParseArithmetic(value.get<std::string>());
      } else if (key == "strictProbe") {
        config.strict_probe = value.get<bool>();
      } else {
        throw ArgumentError("unknown lottery option " + key);
      }
    }
    if (config.max_iterations < 0) throw ArgumentError("maxIterations must be non-negative");
    auto result = coursealloc::Decompose(instance->value, assignment->value, config);
    if (report_json) Emit(report_json, coursealloc::LotteryReportToJson(instance->value, result));
    *out = new ca_lottery{std::move(result.lottery)};
    if (!result.converged) return Fail(CA_ERR_NOT_CONVERGED, result.diagnostic);
    return CA_OK;
  });
}

ca_status ca_lottery_load(const ca_instance* instance, const char* json, ca_lottery** out) {
  return Guard([&] {
    Require(instance, "instance");
    Require(json, "json");
    Require(out, "out");
    *out = new ca_lottery{
        coursealloc::LotteryFromJson(instance->value, coursealloc::ParseDocument(json))};
    return CA_OK;
  });
}

ca_status ca_lottery_to_json(const ca_instance* instance, const ca_lottery* lottery,
                             char** out) {
  return Guard([&] {
    Require(instance, "instance");
    Require(lottery, "lottery");
    Require(out, "out");
    Emit(out, coursealloc::LotteryToJson(instance->value, lottery->value));
    return CA_OK;
  });
}

ca_status ca_lottery_support_csv(const ca_lottery* lottery, const ca_profile* profile,
                                 char** out) {
  return Guard([&] {
    Require(lottery, "lottery");
    Require(out, "out");
    static const coursealloc::PreferenceProfile kNone;
    *out = CopyString(
        coursealloc::LotterySupportCsv(lottery->value, profile ? profile->value : kNone));
    return CA_OK;
  });
}

ca_status ca_lottery_stats(const ca_instance* instance, const ca_lottery* lottery,
                           char** report_json) {
  return Guard([&] {
    Require(instance, "instance");
    Require(lottery, "lottery");
    Require(report_json, "report_json");
    auto report = coursealloc::OverAllocationStats(lottery->value, instance->value);
    Emit(report_json, Json{{"support_size", lottery->value.support.size()},
                           {"over_allocation", OverAllocationJson(instance->value, report)}});
    return CA_OK;
  });
}

ca_status ca_lottery_draw(const ca_instance* instance, const ca_lottery* lottery,
                          uint64_t seed, uint64_t index, size_t* support_index,
                          char** matching_json) {
  return Guard([&] {
    Require(instance, "instance");
    Require(lottery, "lottery");
    const std::size_t k = coursealloc::DrawIndex(lottery->value, seed, index);
    if (support_index) *support_index = k;
    if (matching_json) {
      Emit(matching_json,
           coursealloc::MatchingToJson(instance->value, lottery->value.support[k].matching));
    }
    return CA_OK;
  });
}

void ca_lottery_free(ca_lottery* lottery) { delete lottery; }

ca_status ca_metrics(const ca_instance* instance, const ca_profile* profile,
                     const ca_assignment* assignment, const ca_assignment* against,
                     const char* options_json, char** report_json, char** csv) {
  return Guard([&] {
    Require(instance, "instance");
    Require(profile, "profile");
    Require(assignment, "assignment");
    const Json options = ParseOptions(options_json);
    coursealloc::SummaryOptions summary;
    for (const auto& [key, value] : options.items()) {
      if (key == "topK") {
        summary.top_k = value.get<std::vector<int>>();
      } else if (key == "ranks") {
        summary.ranks = value.get<int>();
      } else if (key == "envy") {
        summary.envy = value.get<bool>();
      } else {
        throw ArgumentError("unknown metrics option " + key);
      }
    }
    for (int k : summary.top_k) {
      if (k < 1) throw ArgumentError("topK entries must be positive");
    }
    coursealloc::ValidateProfile(instance->value, profile->value);
    auto report = coursealloc::Summarize(assignment->value, profile->value, summary);
    if (against) {
      report.against = coursealloc::Compare(assignment->value, against->value, profile->value);
    }
    if (report_json) Emit(report_json, coursealloc::MetricsToJson(report));
    if (csv) *csv = CopyString(coursealloc::ProfileCsv(report));
    return CA_OK;
  });
}

ca_status ca_rev(const char* ranking_json, const char* student, const char* gamma,
                 int exact, char** report_json) {
  return Guard([&] {
    Require(ranking_json, "ranking_json");
    Require(report_json, "report_json");
    std::optional<std::string> who;
    if (student) who = student;
    auto problem =
        coursealloc::RevProblemFromProfileJson(coursealloc::ParseDocument(ranking_json), who);
    if (gamma) problem.gamma = coursealloc::ParseRational(gamma);
    auto result = coursealloc::SolveRev(problem, exact != 0);
    Emit(report_json, coursealloc::RevToJson(result, problem.gamma));
    return CA_OK;
  });
}

}  // extern "C"
