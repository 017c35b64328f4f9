#pragma once

// Experiment: tensor products of semistable lattices are semistable, with slopes adding.

#include "parallel.hpp"
#include "subobjects.hpp"

#include <string>
#include <vector>

namespace kisinhn {

struct PoolOptions {
  int size = 50;
  std::vector<int> fields{2, 3};
  int max_rank = 2;
  int max_height = 2;  // Hodge divisors in [0, max_height * e]
  int e = 1;
  int entry_degree = 1;
  long max_attempts = 100000;
};

struct PoolEntry {
  KisinLattice lattice;
  Rational slope;
  std::string label;  // field order, rank, divisors
};

inline std::vector<PoolEntry> sample_semistable_pool(Rng& rng, const PoolOptions& o) {
  std::vector<PoolEntry> pool;
  std::set<std::string> seen;
  for (long attempt = 0; static_cast<int>(pool.size()) < o.size; ++attempt) {
    if (attempt >= o.max_attempts) throw BudgetExceeded("could not fill the semistable pool");
    int q = o.fields[pool.size() % o.fields.size()];
    Field f = field_of_order(q);
    // Rank 2 most of the time: rank one is always semistable.
    int n = o.max_rank == 1 || uniform(rng, 0, 3) == 0 ? 1 : static_cast<int>(uniform(rng, 2, o.max_rank));
    std::vector<int> divs;
    for (int i = 0; i < n; ++i) divs.push_back(static_cast<int>(uniform(rng, 0, o.max_height * o.e)));
    std::sort(divs.begin(), divs.end());
    auto l = random_lattice(rng, f, o.e, divs, o.entry_degree, LaurentSeries::kExact);
    std::string key = std::to_string(q) + ":" + l.frobenius().to_string();
    if (!seen.insert(key).second) continue;
    if (!is_semistable(l)) continue;
    std::string label = "q=" + std::to_string(q) + " n=" + std::to_string(n) + " divs=";
    for (size_t i = 0; i < divs.size(); ++i) label += (i ? "," : "") + std::to_string(divs[i]);
    pool.push_back({l, l.slope(), label});
  }
  return pool;
}

struct PairOutcome {
  int i = 0, j = 0;
  Rational mu;        // slope of the tensor product
  bool semistable = false;
  bool additive = false;
  std::string polygon;
};

struct TensorReport {
  int pool_size = 0;
  std::vector<PairOutcome> pairs;
  int counterexamples() const {
    int c = 0;
    for (auto& p : pairs) c += !(p.semistable && p.additive);
    return c;
  }
};

// All unordered pairs (i <= j) over the same coefficient field.
inline TensorReport run_tensor_experiment(const std::vector<PoolEntry>& pool, int jobs = 1, const EnumerationOptions& eo = {}) {
  std::vector<std::pair<int, int>> idx;
  for (int i = 0; i < static_cast<int>(pool.size()); ++i)
    for (int j = i; j < static_cast<int>(pool.size()); ++j)
      if (pool[i].lattice.ctx()->q() == pool[j].lattice.ctx()->q()) idx.emplace_back(i, j);
  TensorReport r;
  r.pool_size = static_cast<int>(pool.size());
  r.pairs = parallel_map<PairOutcome>(jobs, static_cast<int>(idx.size()), [&](int k) {
    auto [i, j] = idx[k];
    auto t = tensor(pool[i].lattice, pool[j].lattice);
    auto P = hn_polygon_normalized(t, eo);
    PairOutcome o;
    o.i = i;
    o.j = j;
    o.mu = t.slope();
    o.semistable = is_semistable(P);
    o.additive = o.mu == pool[i].slope + pool[j].slope && P.slopes().front() == o.mu;
    o.polygon = P.to_string();
    return o;
  });
  return r;
}

}  // namespace kisinhn
