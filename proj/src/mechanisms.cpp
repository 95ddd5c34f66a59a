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

#include "coursealloc/mechanisms.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "coursealloc/error.hpp"
#include "coursealloc/random.hpp"

namespace coursealloc {

namespace {

struct Eaten {
  int position;
  Rational amount;
};

FractionalAssignment CountsToAssignment(
    const PreferenceProfile& profile,
    const std::vector<std::vector<std::uint64_t>>& counts,
    const Rational& total) {
  FractionalAssignment out(profile.num_students());
  for (int s = 0; s < profile.num_students(); ++s) {
    for (std::size_t pos = 0; pos < counts[s].size(); ++pos) {
      if (counts[s][pos] == 0) continue;
      Rational p(mpz_class(std::to_string(counts[s][pos])), 1);
      p /= total;
      out.Add(s, profile.list(s)[pos], p);
    }
  }
  out.Canonicalize();
  return out;
}

// List position each student receives, -1 when unmatched.
void BrsdPositions(const Instance& instance, const PreferenceProfile& profile,
                   std::span<const int> order, std::vector<int>& seats,
                   std::vector<int>& position) {
  seats.resize(instance.num_groups());
  for (int g = 0; g < instance.num_groups(); ++g) seats[g] = instance.capacity(g);
  position.assign(profile.num_students(), -1);
  for (int s : order) {
    const auto& list = profile.list(s);
    for (std::size_t pos = 0; pos < list.size(); ++pos) {
      const auto& groups = list[pos].groups();
      bool fits = std::all_of(groups.begin(), groups.end(),
                              [&](int g) { return seats[g] >= 1; });
      if (!fits) continue;
      for (int g : groups) --seats[g];
      position[s] = static_cast<int>(pos);
      break;
    }
  }
}

}  // namespace

BpsResult RunBps(const Instance& instance, const PreferenceProfile& profile) {
  ValidateProfile(instance, profile);
  const int S = profile.num_students();
  const int G = instance.num_groups();

  std::vector<Rational> remaining(G);
  for (int g = 0; g < G; ++g) remaining[g] = instance.capacity(g);
  std::vector<char> exhausted(G, 0);
  std::vector<std::size_t> cursor(S, 0);
  std::vector<std::vector<Eaten>> eaten(S);
  std::vector<int> demand(G, 0);
  std::vector<int> eaters;

  BpsResult result;
  Rational t = 0;
  while (t < 1) {
    // Each student moves to the first listed bundle that is still intact.
    eaters.clear();
    std::fill(demand.begin(), demand.end(), 0);
    for (int s = 0; s < S; ++s) {
      const auto& list = profile.list(s);
      while (cursor[s] < list.size()) {
        const auto& groups = list[cursor[s]].groups();
        if (std::none_of(groups.begin(), groups.end(),
                         [&](int g) { return exhausted[g] != 0; })) {
          break;
        }
        ++cursor[s];
      }
      if (cursor[s] == list.size()) continue;
      eaters.push_back(s);
      for (int g : list[cursor[s]].groups()) ++demand[g];
    }
    if (eaters.empty()) break;

    // Time until the next group runs out.
    Rational step;
    bool have_step = false;
    for (int g = 0; g < G; ++g) {
      if (demand[g] == 0) continue;
      Rational until = remaining[g] / demand[g];
      if (!have_step || until < step) {
        step = until;
        have_step = true;
      }
    }
    if (t + step > 1) step = 1 - t;

    EatingEvent event;
    event.step = step;
    for (int s : eaters) {
      const int pos = static_cast<int>(cursor[s]);
      event.eating.emplace_back(s, pos);
      auto& mine = eaten[s];
      if (!mine.empty() && mine.back().position == pos) {
        mine.back().amount += step;
      } else {
        mine.push_back({pos, step});
      }
    }
    for (int g = 0; g < G; ++g) {
      if (demand[g] == 0) continue;
      remaining[g] -= step * demand[g];
      if (remaining[g] < 0) throw InternalError("BPS: negative remaining capacity");
      if (remaining[g] == 0) {
        exhausted[g] = 1;
        event.exhausted_groups.push_back(g);
      }
    }
    t += step;
    event.time = t;
    result.trace.events.push_back(std::move(event));
  }

  result.assignment = FractionalAssignment(S);
  result.assignment.mode = ArithmeticMode::kExact;
  result.assignment.mechanism = "bps";
  for (int s = 0; s < S; ++s) {
    for (const Eaten& e : eaten[s]) {
      result.assignment.Add(s, profile.list(s)[e.position], e.amount);
    }
  }
  result.assignment.Canonicalize();
  return result;
}

Json TraceToJson(const Instance& instance, const PreferenceProfile& profile,
                 const EatingTrace& trace) {
  Json events = Json::array();
  for (const auto& e : trace.events) {
    Json exhausted = Json::array();
    for (int g : e.exhausted_groups) exhausted.push_back(instance.groups()[g].id);
    Json eating = Json::object();
    for (const auto& [s, pos] : e.eating) {
      Json ids = Json::array();
      for (const auto& id : BundleIds(instance, profile.list(s)[pos])) ids.push_back(id);
      eating[instance.students()[s]] = Json{{"rank", pos + 1}, {"bundle", ids}};
    }
    events.push_back(Json{{"time", ToString(e.time)},
                          {"step", ToString(e.step)},
                          {"exhausted", std::move(exhausted)},
                          {"eating", std::move(eating)}});
  }
  return Json{{"events", std::move(events)}};
}

DeterministicMatching RunBrsdOnce(const Instance& instance,
                                  const PreferenceProfile& profile,
                                  std::span<const int> order) {
  const int S = profile.num_students();
  std::vector<char> seen(S, 0);
  if (static_cast<int>(order.size()) != S) {
    throw DataError("BRSD order is not a permutation of the students");
  }
  for (int s : order) {
    if (s < 0 || s >= S || seen[s]) {
      throw DataError("BRSD order is not a permutation of the students");
    }
    seen[s] = 1;
  }
  std::vector<int> seats, position;
  BrsdPositions(instance, profile, order, seats, position);
  DeterministicMatching m;
  m.assignment.resize(S);
  for (int s = 0; s < S; ++s) {
    if (position[s] >= 0) m.assignment[s] = profile.list(s)[position[s]];
  }
  return m;
}

Permutation ReplicationPermutation(int num_students, std::uint64_t seed,
                                   std::uint64_t rep) {
  Permutation perm(num_students);
  std::iota(perm.begin(), perm.end(), 0);
  StreamRng rng(seed, rep);
  rng.Shuffle(perm);
  return perm;
}

FractionalAssignment EstimateBrsd(const Instance& instance,
                                  const PreferenceProfile& profile,
                                  std::uint64_t reps, std::uint64_t seed,
                                  int threads) {
  if (reps == 0) throw DataError("BRSD estimate needs at least one replication");
  ValidateProfile(instance, profile);
  const int S = profile.num_students();
  threads = std::max(1, threads);
  if (static_cast<std::uint64_t>(threads) > reps) threads = static_cast<int>(reps);

  using Counts = std::vector<std::vector<std::uint64_t>>;
  auto empty_counts = [&]() {
    Counts c(S);
    for (int s = 0; s < S; ++s) c[s].assign(profile.list(s).size(), 0);
    return c;
  };
  std::vector<Counts> partial(threads, empty_counts());
  auto work = [&](int worker) {
    const std::uint64_t begin = reps * worker / threads;
    const std::uint64_t end = reps * (worker + 1) / threads;
    std::vector<int> seats, position;
    Permutation perm(S);
    for (std::uint64_t rep = begin; rep < end; ++rep) {
      std::iota(perm.begin(), perm.end(), 0);
      StreamRng rng(seed, rep);
      rng.Shuffle(perm);
      BrsdPositions(instance, profile, perm, seats, position);
      for (int s = 0; s < S; ++s) {
        if (position[s] >= 0) ++partial[worker][s][position[s]];
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  Counts total = empty_counts();
  for (const Counts& c : partial) {
    for (int s = 0; s < S; ++s) {
      for (std::size_t pos = 0; pos < c[s].size(); ++pos) total[s][pos] += c[s][pos];
    }
  }
  FractionalAssignment out = CountsToAssignment(
      profile, total, Rational(mpz_class(std::to_string(reps)), 1));
  out.mechanism = "brsd-estimate";
  return out;
}

FractionalAssignment EnumerateBrsdExact(const Instance& instance,
                                        const PreferenceProfile& profile) {
  ValidateProfile(instance, profile);
  const int S = profile.num_students();
  if (S > kMaxExactBrsdStudents) {
    throw DataError("exact BRSD enumeration supports at most " +
                    std::to_string(kMaxExactBrsdStudents) + " students, got " +
                    std::to_string(S));
  }
  std::vector<std::vector<std::uint64_t>> counts(S);
  for (int s = 0; s < S; ++s) counts[s].assign(profile.list(s).size(), 0);
  Permutation perm(S);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t orders = 0;
  std::vector<int> seats, position;
  do {
    BrsdPositions(instance, profile, perm, seats, position);
    for (int s = 0; s < S; ++s) {
      if (position[s] >= 0) ++counts[s][position[s]];
    }
    ++orders;
  } while (std::next_permutation(perm.begin(), perm.end()));
  FractionalAssignment out = CountsToAssignment(
      profile, counts, Rational(mpz_class(std::to_string(orders)), 1));
  out.mechanism = "brsd-exact";
  return out;
}

}  // namespace coursealloc
