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

// Synthetic markets: classes with lectures and tutor groups on the weekly
// grid, plus one set of schedule parameters per student. Output is a pure
// function of the config.

#ifndef COURSEALLOC_GENERATOR_HPP_
#define COURSEALLOC_GENERATOR_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "coursealloc/elicitation.hpp"
#include "coursealloc/model.hpp"
#include "coursealloc/serialize.hpp"

namespace coursealloc {

struct GeneratorConfig {
  int students = 50;
  int classes = 3;
  int groups_per_class = 4;
  int capacity_min = 5;
  int capacity_max = 5;
  std::vector<int> slot_minutes = {90, 120};
  int lectures_per_class = 1;
  int lecture_minutes = 90;
  std::uint64_t seed = 1;

  // Student parameters.
  double class_select_prob = 1.0;    // each class kept with this chance, at least one
  int priority_min = 1;
  int priority_max = 5;
  double restricted_day_prob = 0.2;  // a day gets a random availability window
  int min_window_minutes = 360;
  std::vector<int> min_lunch_choices = {0};
  int min_gap = 15;
  int max_bundles = 200;
};

// Throws DataError on invalid counts or when groups cannot be placed.
void ValidateGeneratorConfig(const GeneratorConfig& config);

GeneratorConfig GeneratorConfigFromJson(const Json& doc);
Json GeneratorConfigToJson(const GeneratorConfig& config);

struct GeneratedMarket {
  Instance instance;
  std::vector<ElicitationParameters> params;  // per student
};

GeneratedMarket Generate(const GeneratorConfig& config);

// {student id: parameters}.
Json ParamsToJson(const Instance& instance, const std::vector<ElicitationParameters>& params);
std::vector<ElicitationParameters> ParamsFromJson(const Instance& instance, const Json& doc);

}  // namespace coursealloc

#endif  // COURSEALLOC_GENERATOR_HPP_
