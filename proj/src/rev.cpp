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

#include "coursealloc/rev.hpp"

#include <algorithm>
#include <set>
#include <type_traits>

#include "coursealloc/error.hpp"
#include "coursealloc/numeric.hpp"

namespace coursealloc {

namespace {

// Column layout: [items w_i] [pairs w_ij + 2] [rank errors] [pair errors].
struct Layout {
  std::vector<std::string> items;
  std::vector<ItemPair> pairs;
  std::map<std::string, int> item_col;
  std::map<ItemPair, int> pair_col;
  std::vector<std::vector<int>> bundle_items;
  std::vector<std::vector<int>> bundle_pairs;

  int num_items() const { return static_cast<int>(items.size()); }
  int num_pairs() const { return static_cast<int>(pairs.size()); }
};

Layout MakeLayout(const RevProblem& problem) {
  Layout layout;
  std::set<std::string> items;
  std::set<ItemPair> pairs;
  std::set<std::vector<std::string>> seen;
  for (const auto& bundle : problem.ranking) {
    std::vector<std::string> sorted = bundle;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.empty()) throw DataError("ranking holds an empty bundle");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw DataError("bundle lists an item twice");
    }
    if (!seen.insert(sorted).second) throw DataError("ranking lists a bundle twice");
    for (std::size_t a = 0; a < sorted.size(); ++a) {
      items.insert(sorted[a]);
      for (std::size_t b = a + 1; b < sorted.size(); ++b) pairs.insert({sorted[a], sorted[b]});
    }
  }
  layout.items.assign(items.begin(), items.end());
  layout.pairs.assign(pairs.begin(), pairs.end());
  for (int i = 0; i < layout.num_items(); ++i) layout.item_col[layout.items[i]] = i;
  for (int p = 0; p < layout.num_pairs(); ++p) layout.pair_col[layout.pairs[p]] = p;
  for (const auto& bundle : problem.ranking) {
    std::vector<std::string> sorted = bundle;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> is, ps;
    for (std::size_t a = 0; a < sorted.size(); ++a) {
      is.push_back(layout.item_col[sorted[a]]);
      for (std::size_t b = a + 1; b < sorted.size(); ++b) {
        ps.push_back(layout.pair_col[{sorted[a], sorted[b]}]);
      }
    }
    layout.bundle_items.push_back(std::move(is));
    layout.bundle_pairs.push_back(std::move(ps));
  }
  return layout;
}

template <typename Scalar>
numeric::DenseLpResult<Scalar> Solve(const Layout& layout, const Scalar& gamma, int ranks) {
  const int I = layout.num_items();
  const int P = layout.num_pairs();
  const int E = ranks - 1;
  const int n = I + P + E + P;
  numeric::DenseLp<Scalar> lp;
  lp.num_vars = n;
  lp.objective.assign(n, Scalar(0));
  for (int c = I + P; c < n; ++c) lp.objective[c] = -1;

  // u(b') - u(b) - eps_r <= -gamma, with w_ij = w'_ij - 2.
  for (int r = 0; r < E; ++r) {
    std::vector<Scalar> row(n, Scalar(0));
    for (int i : layout.bundle_items[r + 1]) row[i] += 1;
    for (int i : layout.bundle_items[r]) row[i] -= 1;
    for (int p : layout.bundle_pairs[r + 1]) row[I + p] += 1;
    for (int p : layout.bundle_pairs[r]) row[I + p] -= 1;
    row[I + P + r] = -1;
    const int pair_delta = static_cast<int>(layout.bundle_pairs[r + 1].size()) -
                           static_cast<int>(layout.bundle_pairs[r].size());
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(Scalar(2 * pair_delta) - gamma);
  }
  // -(w_i + w_j + w'_ij) - eps_ij <= -2.
  for (int p = 0; p < P; ++p) {
    std::vector<Scalar> row(n, Scalar(0));
    row[layout.item_col.at(layout.pairs[p].first)] = -1;
    row[layout.item_col.at(layout.pairs[p].second)] = -1;
    row[I + p] = -1;
    row[I + P + E + p] = -1;
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(Scalar(-2));
  }
  // w_i <= 1.
  for (int i = 0; i < I; ++i) {
    std::vector<Scalar> row(n, Scalar(0));
    row[i] = 1;
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(Scalar(1));
  }
  auto result = numeric::SolveDenseLp(lp);
  if (result.status != numeric::LpStatus::kOptimal) {
    throw InternalError("REV program is not solvable");
  }
  return result;
}

template <typename Scalar>
RevResult Collect(const Layout& layout, const numeric::DenseLpResult<Scalar>& lp, int ranks,
                  bool exact) {
  auto conv = [](const Scalar& v) -> Rational {
    if constexpr (std::is_same_v<Scalar, Rational>) {
      return v;
    } else {
      return FromDouble(v);
    }
  };
  const int I = layout.num_items();
  const int P = layout.num_pairs();
  RevResult out;
  out.exact = exact;
  out.pivots = lp.pivots;
  out.err = conv(-lp.value);
  for (int i = 0; i < I; ++i) out.weights[layout.items[i]] = conv(lp.x[i]);
  for (int p = 0; p < P; ++p) {
    out.pair_weights[layout.pairs[p]] = conv(lp.x[I + p]) - 2;
    out.pair_errors[layout.pairs[p]] = conv(lp.x[I + P + ranks - 1 + p]);
  }
  for (int r = 0; r + 1 < ranks; ++r) out.rank_errors.push_back(conv(lp.x[I + P + r]));
  return out;
}

}  // namespace

RevResult SolveRev(const RevProblem& problem, bool exact) {
  if (problem.ranking.size() < 2) throw DataError("REV needs a ranking of at least 2 bundles");
  if (problem.gamma < 0) throw DataError("gamma must be non-negative");
  const Layout layout = MakeLayout(problem);
  const int ranks = static_cast<int>(problem.ranking.size());
  if (exact) {
    return Collect(layout, Solve<Rational>(layout, problem.gamma, ranks), ranks, true);
  }
  return Collect(layout, Solve<double>(layout, problem.gamma.get_d(), ranks), ranks, false);
}

RevProblem RevProblemFromProfileJson(const Json& doc, const std::optional<std::string>& student) {
  if (!doc.is_object()) throw DataError("ranking: expected an object");
  const Json* list = nullptr;
  int count = 0;
  for (const auto& [key, value] : doc.items()) {
    if (key == kMetaKey) continue;
    ++count;
    if (!student || *student == key) list = &value;
  }
  if (student && !list) throw DataError("ranking: no student " + *student);
  if (!student && count != 1) {
    throw DataError("ranking: document holds " + std::to_string(count) +
                    " students; select one");
  }
  RevProblem problem;
  if (!list->is_array()) throw DataError("ranking: expected a list of bundles");
  for (const auto& b : *list) {
    if (!b.is_array()) throw DataError("ranking: bundles must be lists of ids");
    std::vector<std::string> ids;
    for (const auto& id : b) {
      if (!id.is_string()) throw DataError("ranking: ids must be strings");
      ids.push_back(id.get<std::string>());
    }
    problem.ranking.push_back(std::move(ids));
  }
  return problem;
}

Json RevToJson(const RevResult& result, const Rational& gamma) {
  auto number = [](const Rational& q) {
    return Json{{"exact", ToString(q)}, {"value", q.get_d()}};
  };
  Json weights = Json::object();
  for (const auto& [id, w] : result.weights) weights[id] = number(w);
  Json pairs = Json::array();
  for (const auto& [p, w] : result.pair_weights) {
    pairs.push_back(Json{{"items", Json::array({p.first, p.second})},
                         {"weight", number(w)},
                         {"error", number(result.pair_errors.at(p))}});
  }
  Json rank_errors = Json::array();
  for (std::size_t r = 0; r < result.rank_errors.size(); ++r) {
    if (result.rank_errors[r] != 0) {
      rank_errors.push_back(Json{{"rank", r + 1}, {"error", number(result.rank_errors[r])}});
    }
  }
  return Json{{"gamma", number(gamma)},
              {"err", number(result.err)},
              {"representable", result.err == 0},
              {"arithmetic", result.exact ? "exact" : "float"},
              {"pivots", result.pivots},
              {"weights", std::move(weights)},
              {"pairs", std::move(pairs)},
              {"violated_ranks", std::move(rank_errors)}};
}

}  // namespace coursealloc
