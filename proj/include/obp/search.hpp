#pragma once

/**
 * @file search.hpp
 * @brief Exhaustive enumeration of admissible OBPs over bounded (n, K).
 *
 * Candidates are every sigma in Perm(n) and every k >= 1 with sum k <= Kmax.
 * The quick filters prune whole families without visiting them; they are
 * still counted, so the counters always add up to the candidate total
 * C(Kmax, n) * n!.
 *
 * Work is split by sigma across threads. Results are merged into canonical
 * order (K, sigma, k), so the output does not depend on the worker count.
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "obp/admissibility.hpp"
#include "obp/core.hpp"
#include "obp/geometry.hpp"
#include "obp/spectral.hpp"

namespace obp {

struct SearchSpec {
  int n = 2;
  int k_max = 2;
  std::optional<int> genus;                ///< keep only this genus
  std::optional<std::vector<int>> stratum; ///< keep only this stratum (descending)
  int workers = 1;
};

struct SearchCounters {
  std::uint64_t candidates = 0;
  std::uint64_t quick_filter_rejections = 0;
  std::uint64_t fail_cover = 0;
  std::uint64_t fail_first_return = 0;
  std::uint64_t fail_irreducible = 0;
  std::uint64_t fail_top_bottom = 0;
  std::uint64_t fail_no_fake = 0;
  std::uint64_t degenerate = 0;       ///< admissible but lambda touches a bound
  std::uint64_t bounds_violations = 0;
  std::uint64_t construction_failures = 0;
  std::uint64_t admissible = 0;       ///< constructed successfully
  std::uint64_t only_irreducible_fails = 0;
  std::uint64_t filtered_out = 0;     ///< admissible but excluded by genus/stratum filters

  SearchCounters& operator+=(const SearchCounters& o) {
    candidates += o.candidates;
    quick_filter_rejections += o.quick_filter_rejections;
    fail_cover += o.fail_cover;
    fail_first_return += o.fail_first_return;
    fail_irreducible += o.fail_irreducible;
    fail_top_bottom += o.fail_top_bottom;
    fail_no_fake += o.fail_no_fake;
    degenerate += o.degenerate;
    bounds_violations += o.bounds_violations;
    construction_failures += o.construction_failures;
    admissible += o.admissible;
    only_irreducible_fails += o.only_irreducible_fails;
    filtered_out += o.filtered_out;
    return *this;
  }

  /// Every candidate lands in exactly one bucket.
  std::uint64_t accounted() const {
    return quick_filter_rejections + fail_cover + fail_first_return + fail_irreducible + fail_top_bottom +
           fail_no_fake + degenerate + bounds_violations + construction_failures + admissible;
  }
};

struct SearchResult {
  ObpInstance instance;
  double lambda = 0.0;
  int genus = 0;
  int nu = 0;
  std::vector<int> stratum;
  Side side = Side::Left;
};

/// (K, sigma, k) lexicographic.
inline bool canonical_less(const ObpInstance& a, const ObpInstance& b) {
  if (a.K() != b.K()) return a.K() < b.K();
  if (a.sigma() != b.sigma()) return a.sigma() < b.sigma();
  return std::lexicographical_compare(a.k().begin(), a.k().end(), b.k().begin(), b.k().end());
}

namespace detail {

inline std::uint64_t binomial(int n, int r) {
  if (r < 0 || n < r) return 0;
  std::uint64_t c = 1;
  for (int i = 1; i <= r; ++i) c = c * static_cast<std::uint64_t>(n - r + i) / i;
  return c;
}

inline std::vector<Permutation> all_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  std::vector<Permutation> out;
  do {
    out.emplace_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Visits every k with k_i >= lower_i and sum k == total, lexicographically.
inline void for_each_composition(int total, const std::vector<int>& lower,
                                 const std::function<void(const std::vector<int>&)>& visit) {
  const int n = static_cast<int>(lower.size());
  std::vector<int> suffix_min(n + 1, 0);
  for (int i = n - 1; i >= 0; --i) suffix_min[i] = suffix_min[i + 1] + lower[i];
  if (suffix_min[0] > total) return;
  std::vector<int> k(n);
  std::function<void(int, int)> rec = [&](int i, int remaining) {
    if (i == n - 1) {
      k[i] = remaining;
      visit(k);
      return;
    }
    for (int v = lower[i]; v <= remaining - suffix_min[i + 1]; ++v) {
      k[i] = v;
      rec(i + 1, remaining - v);
    }
  };
  rec(0, total);
}

}  // namespace detail

/// The outcome of running the full pipeline on one candidate.
struct CandidateOutcome {
  AdmissibilityReport report;
  std::optional<BoundsVerdict> bounds;
  std::optional<SearchResult> result;  ///< set when admissible and constructed
  bool construction_failed = false;
};

inline CandidateOutcome evaluate_candidate(const ObpInstance& inst) {
  CandidateOutcome out;
  const Combinatorics comb(inst);
  out.report = check_admissible(comb);
  if (!out.report.overall) return out;

  const auto a = build_matrix(comb.dec, comb.blocks);
  const auto pd = perron(a);
  out.bounds = check_lambda_bounds(pd, inst.k(), comb.dec.m);
  if (!out.bounds->pass()) return out;

  try {
    const ObpInstance right = *out.report.side == Side::Right ? inst : invert_obp(inst);
    const Surface surface(right, Normalization::SumHOne);
    if (!all_pass(verify_surface(surface, 8))) {
      out.construction_failed = true;
      return out;
    }
    const auto& sd = surface.singularities();
    out.result = SearchResult{inst, pd.lambda, sd.genus, sd.nu, sd.stratum, *out.report.side};
  } catch (const Error&) {
    out.construction_failed = true;
  }
  return out;
}

namespace detail {

inline void tally(SearchCounters& c, const CandidateOutcome& o) {
  const auto& r = o.report;
  if (r.fails_only_irreducibility()) ++c.only_irreducible_fails;
  if (!r.overall) {
    switch (*r.first_failure()) {
      case Condition::Cover: ++c.fail_cover; break;
      case Condition::FirstReturn: ++c.fail_first_return; break;
      case Condition::Irreducible: ++c.fail_irreducible; break;
      case Condition::TopBottom: ++c.fail_top_bottom; break;
      case Condition::NoFake: ++c.fail_no_fake; break;
    }
    return;
  }
  if (o.bounds && o.bounds->status == BoundsStatus::Degenerate) {
    ++c.degenerate;
  } else if (o.bounds && o.bounds->status == BoundsStatus::Fail) {
    ++c.bounds_violations;
  } else if (o.construction_failed) {
    ++c.construction_failures;
  } else {
    ++c.admissible;
  }
}

inline bool passes_filters(const SearchSpec& spec, const SearchResult& r) {
  if (spec.genus && r.genus != *spec.genus) return false;
  if (spec.stratum && r.stratum != *spec.stratum) return false;
  return true;
}

}  // namespace detail

/// Visits every candidate (sigma, k) that survives the quick filters, for one
/// sigma, in canonical order. Returns how many k vectors the filters removed.
inline std::uint64_t for_each_filtered_k(const Permutation& sigma, int k_max,
                                         const std::function<void(const ObpInstance&)>& visit) {
  const int n = sigma.size();
  const std::uint64_t all_k = detail::binomial(k_max, n);
  if (sigma(1) == 1 || sigma(n) == n) return all_k;
  std::vector<int> lower(n, 1);
  lower[0] = n;
  lower[sigma.inverse()(1) - 1] = n;
  std::uint64_t visited = 0;
  for (int total = n; total <= k_max; ++total) {
    detail::for_each_composition(total, lower, [&](const std::vector<int>& k) {
      ++visited;
      visit(ObpInstance(sigma, k));
    });
  }
  return all_k - visited;
}

struct SearchOutput {
  std::vector<SearchResult> results;
  SearchCounters counters;
};

inline SearchOutput enumerate(const SearchSpec& spec) {
  if (spec.n < 1 || spec.k_max < spec.n)
    throw Error(ErrorCode::InvalidInstance, "search needs n >= 1 and Kmax >= n");

  const auto perms = detail::all_permutations(spec.n);
  const int workers = std::max(1, std::min<int>(spec.workers, static_cast<int>(perms.size())));

  std::vector<SearchOutput> partial(workers);
  auto run = [&](int w) {
    auto& mine = partial[w];
    for (std::size_t p = w; p < perms.size(); p += workers) {
      mine.counters.quick_filter_rejections += for_each_filtered_k(perms[p], spec.k_max, [&](const ObpInstance& inst) {
        const auto outcome = evaluate_candidate(inst);
        detail::tally(mine.counters, outcome);
        if (outcome.result) {
          if (detail::passes_filters(spec, *outcome.result)) {
            mine.results.push_back(*outcome.result);
          } else {
            ++mine.counters.filtered_out;
          }
        }
      });
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }

  SearchOutput out;
  out.counters.candidates = detail::binomial(spec.k_max, spec.n) * perms.size();
  for (auto& part : partial) {
    out.counters += part.counters;
    out.results.insert(out.results.end(), std::make_move_iterator(part.results.begin()),
                       std::make_move_iterator(part.results.end()));
  }
  std::sort(out.results.begin(), out.results.end(),
            [](const SearchResult& a, const SearchResult& b) { return canonical_less(a.instance, b.instance); });
  return out;
}

/// The admissible instance of least dilatation, ties broken canonically.
/// Uses min k < lambda and min m < lambda to skip candidates that cannot win.
inline SearchResult min_dilatation(const SearchSpec& spec) {
  std::optional<SearchResult> best;
  double best_lambda = std::numeric_limits<double>::infinity();
  const auto perms = detail::all_permutations(spec.n);

  auto better = [&](const SearchResult& r) {
    if (!best) return true;
    if (r.lambda < best->lambda - 1e-12 * best->lambda) return true;
    if (r.lambda > best->lambda + 1e-12 * best->lambda) return false;
    return canonical_less(r.instance, best->instance);
  };

  for (const auto& sigma : perms) {
    for_each_filtered_k(sigma, spec.k_max, [&](const ObpInstance& inst) {
      const auto k = inst.k();
      if (*std::min_element(k.begin(), k.end()) > best_lambda) return;
      const Combinatorics comb(inst);
      if (*std::min_element(comb.dec.m.begin(), comb.dec.m.end()) > best_lambda) return;
      const auto outcome = evaluate_candidate(inst);
      if (!outcome.result || !detail::passes_filters(spec, *outcome.result)) return;
      if (better(*outcome.result)) {
        best = outcome.result;
        best_lambda = best->lambda;
      }
    });
  }
  if (!best) throw Error(ErrorCode::EmptySearchSpace, "no admissible instance in range");
  return *best;
}

}  // namespace obp
