#pragma once

// Shared instances and corpus helpers for the test binaries.

#include <functional>
#include <vector>

#include "obp/obp.hpp"

namespace fixtures {

/// sigma = (4,2,1,3), k = (4,3,6,9); the first worked example.
inline obp::ObpInstance worked_example() { return obp::ObpInstance(std::vector<int>{4, 2, 1, 3}, {4, 3, 6, 9}); }

/// sigma = (4,1,3,2), k = (6,5,4,3); the instance of the genus-2 figure.
inline obp::ObpInstance figure_instance() { return obp::ObpInstance(std::vector<int>{4, 1, 3, 2}, {6, 5, 4, 3}); }

/// An admissible 7-rectangle instance found by random sampling.
inline obp::ObpInstance seven_rectangle_instance() {
  return obp::ObpInstance(std::vector<int>{4, 2, 1, 5, 7, 6, 3}, {8, 3, 10, 6, 7, 3, 5});
}

/// The 22-entry tau table of the worked example, as printed.
inline const std::vector<int>& worked_example_tau() {
  static const std::vector<int> t{19, 20, 21, 22, 7, 8, 9, 1, 2, 3, 4, 5, 6, 10, 11, 12, 13, 14, 15, 16, 17, 18};
  return t;
}

inline std::vector<std::vector<std::int64_t>> rows(const obp::TransitionMatrix& a) {
  std::vector<std::vector<std::int64_t>> out(a.n(), std::vector<std::int64_t>(a.n()));
  for (int i = 1; i <= a.n(); ++i)
    for (int j = 1; j <= a.n(); ++j) out[i - 1][j - 1] = a(i, j);
  return out;
}

inline std::vector<int> to_vector(std::span<const int> s) { return {s.begin(), s.end()}; }

/// Every candidate of the desk corpus (2 <= n <= n_max, K <= k_max) that
/// survives the quick filters, in canonical order per sigma.
inline void for_each_candidate(int n_max, int k_max, const std::function<void(const obp::ObpInstance&)>& visit) {
  for (int n = 2; n <= n_max; ++n)
    for (const auto& sigma : obp::detail::all_permutations(n)) {
      if (sigma(1) == 1 || sigma(n) == n) continue;
      obp::for_each_filtered_k(sigma, k_max, visit);
    }
}

/// Admissible instances of the desk corpus.
inline const std::vector<obp::ObpInstance>& admissible_corpus(int n_max = 5, int k_max = 24) {
  static const std::vector<obp::ObpInstance> corpus = [&] {
    std::vector<obp::ObpInstance> out;
    for_each_candidate(n_max, k_max, [&](const obp::ObpInstance& inst) {
      if (obp::check_admissible(inst).overall) out.push_back(inst);
    });
    return out;
  }();
  return corpus;
}

}  // namespace fixtures
