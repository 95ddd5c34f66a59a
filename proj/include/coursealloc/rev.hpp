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

// Revealed-preference test: is a bundle ranking explained by an additive
// utility over items plus pairwise adjustments?
//
//   u(b) = sum_{i in b} w_i + sum_{i<j in b} w_ij,  w_i in [0, 1], w_ij >= -2
//
// The LP minimizes the total violation of u(b) >= u(b') + gamma over
// consecutive ranks and of w_i + w_j + w_ij >= 0 over item pairs.

#ifndef COURSEALLOC_REV_HPP_
#define COURSEALLOC_REV_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coursealloc/rational.hpp"
#include "coursealloc/serialize.hpp"

namespace coursealloc {

struct RevProblem {
  std::vector<std::vector<std::string>> ranking;  // best first; item ids
  Rational gamma = Rational(1, 1000);
};

using ItemPair = std::pair<std::string, std::string>;  // first < second

struct RevResult {
  Rational err;
  std::map<std::string, Rational> weights;
  // Pairs that occur together in some ranked bundle; other pairs can
  // always take w_ij = 0 at no cost.
  std::map<ItemPair, Rational> pair_weights;
  std::vector<Rational> rank_errors;  // eps for ranks (r, r+1)
  std::map<ItemPair, Rational> pair_errors;
  int pivots = 0;
  bool exact = true;
};

// Throws DataError on rankings shorter than 2, duplicate bundles, or
// negative gamma.
RevResult SolveRev(const RevProblem& problem, bool exact = true);

// Reads a single ranking from a profile document; `student` selects one
// when the document holds several.
RevProblem RevProblemFromProfileJson(const Json& doc,
                                     const std::optional<std::string>& student);

Json RevToJson(const RevResult& result, const Rational& gamma);

}  // namespace coursealloc

#endif  // COURSEALLOC_REV_HPP_
