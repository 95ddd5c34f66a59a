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

// coursealloc: batch frontend over the C API.
//
//   gen      instance.json, params.json
//   elicit   profiles.json
//   match    assignment_<mechanism>.json
//   lottery  lottery.json, lottery_report.json, lottery_support.csv
//   draw     draws.json
//   metrics  metrics.json, profile.csv
//   rev      rev.json
//
// Each command also writes manifest_<command>.json; every output names it
// under "$meta".manifest (CSV files in a leading comment line).
//
// Exit codes: 0 ok, 1 internal, 2 usage, 3 data, 4 non-convergence.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "coursealloc/coursealloc.h"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNotConverged = 4;

// Carries an exit code out of a command.
struct Failure {
  int code;
  std::string message;
};

int ExitCodeFor(ca_status status) {
  switch (status) {
    case CA_OK:
      return kExitOk;
    case CA_ERR_ARGUMENT:
      return kExitUsage;
    case CA_ERR_DATA:
      return kExitData;
    case CA_ERR_NOT_CONVERGED:
      return kExitNotConverged;
    default:
      return kExitInternal;
  }
}

void Check(ca_status status, const std::string& what) {
  if (status == CA_OK) return;
  throw Failure{ExitCodeFor(status), what + ": " + ca_last_error()};
}

// Owned C string.
struct CString {
  char* p = nullptr;
  CString() = default;
  CString(const CString&) = delete;
  CString& operator=(const CString&) = delete;
  ~CString() { ca_string_free(p); }
  char** out() {
    ca_string_free(p);
    p = nullptr;
    return &p;
  }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};
using Instance = Handle<ca_instance, ca_instance_free>;
using Profile = Handle<ca_profile, ca_profile_free>;
using Assignment = Handle<ca_assignment, ca_assignment_free>;
using LotteryH = Handle<ca_lottery, ca_lottery_free>;

std::string Sha256(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Failure{kExitInternal, "SHA-256 failed"};
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

struct Globals {
  int threads = 0;
  std::string arithmetic;  // "", "exact" or "float"
  std::string output = ".";
};

// Collects inputs, outputs and timings for one command run.
class Run {
 public:
  Run(std::string command, const Globals& globals)
      : command_(std::move(command)), globals_(globals), start_(Clock::now()) {
    manifest_name_ = "manifest_" + command_ + ".json";
    std::error_code ec;
    fs::create_directories(globals_.output, ec);
    if (ec) throw Failure{kExitData, "cannot create output directory " + globals_.output};
  }

  const std::string& manifest_name() const { return manifest_name_; }
  int threads() const {
    if (globals_.threads > 0) return globals_.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }

  std::string Read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kExitData, "cannot read " + path};
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    inputs_.push_back(Json{{"path", path}, {"sha256", Sha256(text)}});
    return text;
  }

  // Writes a JSON document after tagging it with the manifest name.
  void WriteJson(const std::string& name, Json doc) {
    Json& meta = doc["$meta"];
    if (!meta.is_object()) meta = Json::object();
    meta["manifest"] = manifest_name_;
    meta["command"] = command_;
    WriteText(name, doc.dump(2) + "\n");
  }

  void WriteCsv(const std::string& name, const std::string& csv) {
    WriteText(name, "# manifest: " + manifest_name_ + "\n" + csv);
  }

  void Seed(const std::string& name, std::uint64_t value, bool drawn) {
    seeds_[name] = Json{{"value", value}, {"drawn", drawn}};
  }

  void Time(const std::string& stage, double seconds) { timings_[stage] = seconds; }
  void Note(const std::string& key, Json value) { extra_[key] = std::move(value); }

  void Finish(const Json& config, int exit_code, const std::string& status) {
    Json manifest = {
        {"command", command_},
        {"tool_version", ca_version()},
        {"config", config},
        {"inputs", inputs_},
        {"outputs", outputs_},
        {"seeds", seeds_},
        {"threads", threads()},
        {"arithmetic", globals_.arithmetic.empty() ? "default" : globals_.arithmetic},
        {"status", status},
        {"exit_code", exit_code},
        {"timings", timings_},
    };
    manifest["timings"]["wall_seconds"] =
        std::chrono::duration<double>(Clock::now() - start_).count();
    for (const auto& [k, v] : extra_.items()) manifest[k] = v;
    const std::string text = manifest.dump(2) + "\n";
    std::ofstream out(fs::path(globals_.output) / manifest_name_, std::ios::binary);
    out << text;
    if (!out) throw Failure{kExitInternal, "cannot write manifest"};
  }

 private:
  using Clock = std::chrono::steady_clock;

  void WriteText(const std::string& name, const std::string& text) {
    const fs::path path = fs::path(globals_.output) / name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Failure{kExitInternal, "cannot write " + path.string()};
    outputs_.push_back(Json{{"path", path.string()}, {"sha256", Sha256(text)}});
  }

  std::string command_;
  Globals globals_;
  Clock::time_point start_;
  std::string manifest_name_;
  Json inputs_ = Json::array();
  Json outputs_ = Json::array();
  Json seeds_ = Json::object();
  Json timings_ = Json::object();
  Json extra_ = Json::object();
};

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::uint64_t DrawSeed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

Json ParseJson(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Failure{kExitData, what + ": " + e.what()};
  }
}

void LoadInstance(Run& run, const std::string& path, Instance& instance) {
  Check(ca_instance_load(run.Read(path).c_str(), instance.out()), "instance " + path);
}

void LoadProfile(Run& run, const std::string& path, const Instance& instance,
                 Profile& profile) {
  Check(ca_profile_load(instance.get(), run.Read(path).c_str(), profile.out()),
        "profiles " + path);
}

void LoadAssignment(Run& run, const std::string& path, const Instance& instance,
                    Assignment& assignment) {
  Check(ca_assignment_load(instance.get(), run.Read(path).c_str(), assignment.out()),
        "assignment " + path);
}

// ---- gen ----

struct GenArgs {
  std::string config;
  std::optional<int> students, classes, groups, capacity, capacity_min, capacity_max;
  std::optional<int> lectures, max_bundles;
  std::optional<std::uint64_t> seed;
};

int CmdGen(const GenArgs& a, const Globals& g) {
  Run run("gen", g);
  Json config = Json::object();
  if (!a.config.empty()) {
    config = ParseJson(run.Read(a.config), "config " + a.config);
    if (!config.is_object()) throw Failure{kExitData, "config: expected an object"};
    config.erase("$meta");
  }
  if (a.students) config["students"] = *a.students;
  if (a.classes) config["classes"] = *a.classes;
  if (a.groups) config["groupsPerClass"] = *a.groups;
  if (a.capacity) config["capacity"] = *a.capacity;
  if (a.capacity_min) config["capacityMin"] = *a.capacity_min;
  if (a.capacity_max) config["capacityMax"] = *a.capacity_max;
  if (a.lectures) config["lecturesPerClass"] = *a.lectures;
  if (a.max_bundles) config["maxBundles"] = *a.max_bundles;
  bool drawn = false;
  if (a.seed) {
    config["seed"] = *a.seed;
  } else if (!config.contains("seed")) {
    config["seed"] = DrawSeed();
    drawn = true;
  }
  run.Seed("seed", config["seed"].get<std::uint64_t>(), drawn);

  Stopwatch sw;
  Instance instance;
  CString params;
  Check(ca_generate(config.dump().c_str(), instance.out(), params.out()), "gen");
  CString instance_json;
  Check(ca_instance_to_json(instance.get(), instance_json.out()), "gen");
  run.Time("generate", sw.Seconds());
  run.WriteJson("instance.json", ParseJson(instance_json.str(), "instance"));
  run.WriteJson("params.json", ParseJson(params.str(), "params"));
  run.Finish(config, kExitOk, "ok");
  std::cout << "students=" << ca_instance_num_students(instance.get())
            << " classes=" << ca_instance_num_classes(instance.get())
            << " groups=" << ca_instance_num_groups(instance.get()) << "\n";
  return kExitOk;
}

// ---- elicit ----

struct ElicitArgs {
  std::string instance, params;
};

int CmdElicit(const ElicitArgs& a, const Globals& g) {
  Run run("elicit", g);
  Instance instance;
  LoadInstance(run, a.instance, instance);
  const std::string params = run.Read(a.params);
  Stopwatch sw;
  Profile profile;
  CString summary;
  Check(ca_elicit(instance.get(), params.c_str(), run.threads(), profile.out(), summary.out()),
        "elicit");
  run.Time("elicit", sw.Seconds());
  CString profile_json;
  Check(ca_profile_to_json(instance.get(), profile.get(), profile_json.out()), "elicit");
  run.WriteJson("profiles.json", ParseJson(profile_json.str(), "profiles"));

  Json s = ParseJson(summary.str(), "summary");
  Json empty = Json::array();
  for (const auto& [student, length] : s["list_lengths"].items()) {
    if (length.get<int>() == 0) {
      empty.push_back(student);
      std::cerr << "warning: student " << student << " has an empty ranking\n";
    }
  }
  Json note = {{"students", s["students"]},
               {"ranked_bundles", s["ranked_bundles"]},
               {"distinct_bundles", s["distinct_bundles"]},
               {"empty_rankings", empty}};
  run.Note("summary", note);
  run.Finish(Json{{"instance", a.instance}, {"params", a.params}}, kExitOk, "ok");
  std::cout << "students=" << s["students"] << " ranked_bundles=" << s["ranked_bundles"]
            << " distinct_bundles=" << s["distinct_bundles"]
            << " empty_rankings=" << empty.size() << "\n";
  return kExitOk;
}

// ---- match ----

struct MatchArgs {
  std::string mechanism, instance, profiles;
  std::uint64_t reps = 1000;
  std::optional<std::uint64_t> seed;
  bool exact = false;
  bool trace = false;
};

int CmdMatch(const MatchArgs& a, const Globals& g) {
  Run run("match", g);
  Instance instance;
  LoadInstance(run, a.instance, instance);
  Profile profile;
  LoadProfile(run, a.profiles, instance, profile);
  Json config = {{"mechanism", a.mechanism}, {"instance", a.instance}, {"profiles", a.profiles}};
  Assignment assignment;
  std::string name;
  bool decimal = false;
  Stopwatch sw;
  if (a.mechanism == "bps") {
    if (a.exact || a.seed) throw Failure{kExitUsage, "--exact and --seed apply to brsd only"};
    CString trace;
    Check(ca_match_bps(instance.get(), profile.get(), assignment.out(),
                       a.trace ? trace.out() : nullptr),
          "bps");
    run.Time("bps", sw.Seconds());
    if (a.trace) run.WriteJson("bps_trace.json", ParseJson(trace.str(), "trace"));
    name = "assignment_bps.json";
    decimal = g.arithmetic == "float";
  } else {
    if (a.exact) {
      Check(ca_match_brsd_exact(instance.get(), profile.get(), assignment.out()), "brsd");
      name = "assignment_brsd_exact.json";
      config["exact"] = true;
      decimal = g.arithmetic == "float";
    } else {
      if (a.reps == 0) throw Failure{kExitUsage, "--reps must be positive"};
      const bool drawn = !a.seed;
      const std::uint64_t seed = a.seed ? *a.seed : DrawSeed();
      run.Seed("seed", seed, drawn);
      config["reps"] = a.reps;
      config["seed"] = seed;
      Check(ca_match_brsd_estimate(instance.get(), profile.get(), a.reps, seed, run.threads(),
                                   assignment.out()),
            "brsd");
      name = "assignment_brsd.json";
      // Estimates are count/reps, exact unless floats are requested.
      decimal = g.arithmetic == "float";
    }
    run.Time("brsd", sw.Seconds());
  }
  CString report;
  Check(ca_assignment_check(instance.get(), assignment.get(), report.out()), "check");
  const Json feasibility = ParseJson(report.str(), "check");
  if (!feasibility["feasible"].get<bool>()) {
    throw Failure{kExitInternal, "mechanism output failed the feasibility check"};
  }
  CString out;
  Check(ca_assignment_to_json(instance.get(), assignment.get(), decimal ? 1 : 0, out.out()),
        "match");
  run.WriteJson(name, ParseJson(out.str(), "assignment"));
  run.Note("feasibility", feasibility);
  run.Finish(config, kExitOk, "ok");
  std::cout << "wrote " << name << "\n";
  return kExitOk;
}

// ---- lottery ----

struct LotteryArgs {
  std::string instance, assignment, profiles;
  double epsilon = 2.0;
  std::optional<double> delta, alpha;
  int max_iterations = 0;
  bool strict_probe = false;
};

int CmdLottery(const LotteryArgs& a, const Globals& g) {
  Run run("lottery", g);
  Instance instance;
  LoadInstance(run, a.instance, instance);
  Assignment assignment;
  LoadAssignment(run, a.assignment, instance, assignment);
  Profile profile;
  if (!a.profiles.empty()) LoadProfile(run, a.profiles, instance, profile);

  Json config = {{"epsilon", a.epsilon},
                 {"maxIterations", a.max_iterations},
                 {"strictProbe", a.strict_probe},
                 {"arithmetic", g.arithmetic.empty() ? "auto" : g.arithmetic}};
  if (a.delta) config["delta"] = *a.delta;
  if (a.alpha) config["alpha"] = *a.alpha;
  Stopwatch sw;
  LotteryH lottery;
  CString report;
  const ca_status status = ca_lottery_decompose(instance.get(), assignment.get(),
                                                config.dump().c_str(), lottery.out(),
                                                report.out());
  if (status != CA_OK && status != CA_ERR_NOT_CONVERGED) Check(status, "lottery");
  const std::string diagnostic = status == CA_OK ? "" : ca_last_error();
  run.Time("decompose", sw.Seconds());

  CString lottery_json, csv;
  Check(ca_lottery_to_json(instance.get(), lottery.get(), lottery_json.out()), "lottery");
  Check(ca_lottery_support_csv(lottery.get(), profile.get(), csv.out()), "lottery");
  run.WriteJson("lottery.json", ParseJson(lottery_json.str(), "lottery"));
  run.WriteJson("lottery_report.json", ParseJson(report.str(), "report"));
  run.WriteCsv("lottery_support.csv", csv.str());
  const int code = status == CA_OK ? kExitOk : kExitNotConverged;
  if (code != kExitOk) run.Note("diagnostic", diagnostic);
  run.Finish(config, code, code == kExitOk ? "ok" : "not_converged");
  const Json r = ParseJson(report.str(), "report");
  std::cout << "support=" << r["support_size"] << " distance=" << r["distance"]
            << " worst_violation=" << r["over_allocation"]["worst"] << "\n";
  if (code != kExitOk) std::cerr << "lottery did not converge: " << diagnostic << "\n";
  return code;
}

// ---- draw ----

struct DrawArgs {
  std::string instance, lottery;
  std::optional<std::uint64_t> seed;
  std::uint64_t count = 1;
};

int CmdDraw(const DrawArgs& a, const Globals& g) {
  Run run("draw", g);
  Instance instance;
  LoadInstance(run, a.instance, instance);
  LotteryH lottery;
  Check(ca_lottery_load(instance.get(), run.Read(a.lottery).c_str(), lottery.out()), "lottery");
  if (a.count == 0) throw Failure{kExitUsage, "--count must be positive"};
  const bool drawn = !a.seed;
  const std::uint64_t seed = a.seed ? *a.seed : DrawSeed();
  run.Seed("seed", seed, drawn);
  Json draws = Json::array();
  for (std::uint64_t i = 0; i < a.count; ++i) {
    std::size_t k = 0;
    CString matching;
    Check(ca_lottery_draw(instance.get(), lottery.get(), seed, i, &k, matching.out()), "draw");
    Json m = ParseJson(matching.str(), "matching");
    m.erase("$meta");
    draws.push_back(Json{{"draw", i}, {"support_index", k}, {"matching", std::move(m)}});
  }
  run.WriteJson("draws.json", Json{{"seed", seed}, {"draws", std::move(draws)}});
  run.Finish(Json{{"count", a.count}, {"seed", seed}}, kExitOk, "ok");
  std::cout << "wrote draws.json\n";
  return kExitOk;
}

// ---- metrics ----

struct MetricsArgs {
  std::string instance, profiles, assignment, against;
  std::vector<int> top_k = {1, 10, 100};
  int ranks = 0;
  bool no_envy = false;
};

int CmdMetrics(const MetricsArgs& a, const Globals& g) {
  Run run("metrics", g);
  Instance instance;
  LoadInstance(run, a.instance, instance);
  Profile profile;
  LoadProfile(run, a.profiles, instance, profile);
  Assignment assignment, against;
  LoadAssignment(run, a.assignment, instance, assignment);
  if (!a.against.empty()) LoadAssignment(run, a.against, instance, against);
  Json options = {{"topK", a.top_k}, {"ranks", a.ranks}, {"envy", !a.no_envy}};
  Stopwatch sw;
  CString report, csv;
  Check(ca_metrics(instance.get(), profile.get(), assignment.get(), against.get(),
                   options.dump().c_str(), report.out(), csv.out()),
        "metrics");
  run.Time("metrics", sw.Seconds());
  Json doc = ParseJson(report.str(), "metrics");
  doc["$meta"] = Json{{"assignment", a.assignment}};
  if (!a.against.empty()) doc["$meta"]["against"] = a.against;
  run.WriteJson("metrics.json", doc);
  run.WriteCsv("profile.csv", csv.str());
  options["assignment"] = a.assignment;
  if (!a.against.empty()) options["against"] = a.against;
  run.Finish(options, kExitOk, "ok");
  std::cout << "wrote metrics.json, profile.csv\n";
  return kExitOk;
}

// ---- rev ----

struct RevArgs {
  std::string ranking, student;
  std::string gamma = "1/1000";
};

int CmdRev(const RevArgs& a, const Globals& g) {
  Run run("rev", g);
  const std::string text = run.Read(a.ranking);
  const bool exact = g.arithmetic != "float";
  Stopwatch sw;
  CString report;
  Check(ca_rev(text.c_str(), a.student.empty() ? nullptr : a.student.c_str(), a.gamma.c_str(),
               exact ? 1 : 0, report.out()),
        "rev");
  run.Time("rev", sw.Seconds());
  Json doc = ParseJson(report.str(), "rev");
  run.WriteJson("rev.json", doc);
  Json config = {{"ranking", a.ranking}, {"gamma", a.gamma}};
  if (!a.student.empty()) config["student"] = a.student;
  run.Finish(config, kExitOk, "ok");
  std::cout << "err=" << doc["err"]["exact"].get<std::string>()
            << " representable=" << (doc["representable"].get<bool>() ? "yes" : "no") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Course allocation with bundled mechanisms and lottery decomposition"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(ca_version()));
  Globals globals;
  app.add_option("--threads", globals.threads, "Worker threads (default: all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--arithmetic", globals.arithmetic, "Arithmetic for LPs and output numbers")
      ->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--output", globals.output, "Output directory")->capture_default_str();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic instance and parameters");
  gen_cmd->add_option("--config", gen.config, "Generator config file")
      ->check(CLI::ExistingFile);
  gen_cmd->add_option("--students", gen.students)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--classes", gen.classes)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--groups", gen.groups, "Groups per class")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--capacity", gen.capacity)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--capacity-min", gen.capacity_min)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--capacity-max", gen.capacity_max)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--lectures", gen.lectures, "Lectures per class")
      ->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--max-bundles", gen.max_bundles)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed);

  ElicitArgs elicit;
  auto* elicit_cmd = app.add_subcommand("elicit", "Rank feasible bundles per student");
  elicit_cmd->add_option("--instance", elicit.instance)->required();
  elicit_cmd->add_option("--params", elicit.params)->required();

  MatchArgs match;
  auto* match_cmd = app.add_subcommand("match", "Run a mechanism");
  match_cmd->add_option("mechanism", match.mechanism)
      ->required()
      ->check(CLI::IsMember({"bps", "brsd"}));
  match_cmd->add_option("--instance", match.instance)->required();
  match_cmd->add_option("--profiles", match.profiles)->required();
  match_cmd->add_option("--reps", match.reps, "BRSD replications")->capture_default_str();
  match_cmd->add_option("--seed", match.seed);
  match_cmd->add_flag("--exact", match.exact, "Enumerate all orders (at most 9 students)");
  match_cmd->add_flag("--trace", match.trace, "Write the BPS eating trace");

  LotteryArgs lottery;
  auto* lottery_cmd = app.add_subcommand("lottery", "Decompose an assignment into a lottery");
  lottery_cmd->add_option("--instance", lottery.instance)->required();
  lottery_cmd->add_option("--assignment", lottery.assignment)->required();
  lottery_cmd->add_option("--profiles", lottery.profiles, "For average ranks in the CSV");
  lottery_cmd->add_option("--epsilon", lottery.epsilon)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  lottery_cmd->add_option("--delta", lottery.delta)->check(CLI::PositiveNumber);
  lottery_cmd->add_option("--alpha", lottery.alpha)->check(CLI::Range(0.0, 1.0));
  lottery_cmd->add_option("--max-iterations", lottery.max_iterations, "0: ten times the dimension")
      ->check(CLI::NonNegativeNumber);
  lottery_cmd->add_flag("--strict-probe", lottery.strict_probe,
                        "Stop when a rounded point misses the probe threshold");

  DrawArgs draw;
  auto* draw_cmd = app.add_subcommand("draw", "Draw matchings from a lottery");
  draw_cmd->add_option("--instance", draw.instance)->required();
  draw_cmd->add_option("--lottery", draw.lottery)->required();
  draw_cmd->add_option("--seed", draw.seed);
  draw_cmd->add_option("--count", draw.count)->capture_default_str();

  MetricsArgs metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "Evaluate an assignment");
  metrics_cmd->add_option("--instance", metrics.instance)->required();
  metrics_cmd->add_option("--profiles", metrics.profiles)->required();
  metrics_cmd->add_option("--assignment", metrics.assignment)->required();
  metrics_cmd->add_option("--against", metrics.against, "Second assignment to compare with");
  metrics_cmd->add_option("--top-k", metrics.top_k)->delimiter(',')->capture_default_str();
  metrics_cmd->add_option("--ranks", metrics.ranks, "Ranks for AUPCR (0: longest list)")
      ->check(CLI::NonNegativeNumber);
  metrics_cmd->add_flag("--no-envy", metrics.no_envy, "Skip the quadratic envy count");

  RevArgs rev;
  auto* rev_cmd = app.add_subcommand("rev", "Test a ranking for additive representability");
  rev_cmd->add_option("--ranking", rev.ranking)->required();
  rev_cmd->add_option("--student", rev.student);
  rev_cmd->add_option("--gamma", rev.gamma)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return CmdGen(gen, globals);
    if (*elicit_cmd) return CmdElicit(elicit, globals);
    if (*match_cmd) return CmdMatch(match, globals);
    if (*lottery_cmd) return CmdLottery(lottery, globals);
    if (*draw_cmd) return CmdDraw(draw, globals);
    if (*metrics_cmd) return CmdMetrics(metrics, globals);
    if (*rev_cmd) return CmdRev(rev, globals);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
