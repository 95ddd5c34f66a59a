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

// Searches generated markets for the committed regression fixtures:
//
//   envy  a small two-class market where exact BRSD leaves some student
//         with strong envy while BPS is envy-free
//   rev   an elicited ranking that no additive-plus-pairs utility
//         explains at the given margin

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "coursealloc/elicitation.hpp"
#include "coursealloc/generator.hpp"
#include "coursealloc/mechanisms.hpp"
#include "coursealloc/metrics.hpp"
#include "coursealloc/rev.hpp"
#include "coursealloc/serialize.hpp"

namespace {

using namespace coursealloc;

void Save(const std::string& path, const Json& doc) {
  std::ofstream(path) << Dump(doc) << "\n";
  std::cout << "wrote " << path << "\n";
}

bool SearchEnvy(std::uint64_t first_seed, std::uint64_t last_seed, const std::string& out) {
  for (std::uint64_t seed = first_seed; seed <= last_seed; ++seed) {
    GeneratorConfig config;
    config.seed = seed;
    config.classes = 2;
    config.students = 4 + static_cast<int>(seed % 3);
    config.groups_per_class = 2;
    config.capacity_min = 1;
    config.capacity_max = 2;
    config.lectures_per_class = 0;
    config.restricted_day_prob = 0.5;
    config.max_bundles = 4;
    const GeneratedMarket market = Generate(config);
    const PreferenceProfile profile = ElicitProfile(market.instance, market.params);
    const FractionalAssignment bps = RunBps(market.instance, profile).assignment;
    const FractionalAssignment brsd = EnumerateBrsdExact(market.instance, profile);
    const EnvyCounts bps_envy = CountEnvy(bps, profile);
    const EnvyCounts brsd_envy = CountEnvy(brsd, profile);
    const SdPreferCounts sd = CountSdPreferences(bps, brsd, profile);
    if (bps_envy == EnvyCounts{} && brsd_envy.strong >= 1 && sd.first >= sd.second) {
      std::cout << "seed " << seed << ": students " << config.students << ", BRSD envy ("
                << brsd_envy.strong << ", " << brsd_envy.weak << "), SD counts (" << sd.first
                << "|" << sd.second << ")\n";
      Save(out + "/regression_instance.json", InstanceToJson(market.instance));
      Save(out + "/regression_profiles.json", ProfileToJson(market.instance, profile));
      return true;
    }
  }
  return false;
}

bool SearchRev(std::uint64_t first_seed, std::uint64_t last_seed, const std::string& out,
               const Rational& gamma) {
  for (std::uint64_t seed = first_seed; seed <= last_seed; ++seed) {
    GeneratorConfig config;
    config.seed = seed;
    config.classes = 3;
    config.students = 5;
    config.max_bundles = 12;
    const GeneratedMarket market = Generate(config);
    const Json doc = ProfileToJson(market.instance, ElicitProfile(market.instance, market.params));
    for (const auto& [student, ranking] : doc.items()) {
      if (ranking.size() < 2) continue;
      const Json single = {{student, ranking}};
      RevProblem problem = RevProblemFromProfileJson(single, std::nullopt);
      problem.gamma = gamma;
      const RevResult result = SolveRev(problem);
      if (result.err > 0) {
        std::cout << "seed " << seed << ", student " << student << ": " << ranking.size()
                  << " bundles, err " << result.err.get_str() << "\n";
        Save(out + "/rev_ranking.json", single);
        return true;
      }
    }
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search generated markets for regression fixtures"};
  std::string mode, out = ".", gamma = "1/1000";
  std::uint64_t first = 1, last = 10000;
  app.add_option("mode", mode, "envy or rev")->required()->check(CLI::IsMember({"envy", "rev"}));
  app.add_option("--output", out, "Directory for the fixture files");
  app.add_option("--first-seed", first);
  app.add_option("--last-seed", last);
  app.add_option("--gamma", gamma, "Margin for the rev search");
  CLI11_PARSE(app, argc, argv);
  try {
    Rational g(gamma);
    g.canonicalize();
    const bool found = mode == "envy" ? SearchEnvy(first, last, out) : SearchRev(first, last, out, g);
    if (!found) {
      std::cerr << "nothing found in seeds " << first << ".." << last << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
