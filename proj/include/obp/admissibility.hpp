#pragma once

/**
 * @file admissibility.hpp
 * @brief Admissibility of an ordered block permutation.
 *
 * Five conditions are checked: the orbits cover all strands (i), the first
 * return map is sigma (ii), the transition matrix is irreducible (iii), each
 * orbit passes through the top and bottom strand of its own block with the
 * single NS exception (iv), and no fixed regular point masquerades as a
 * singularity (v).
 *
 * The side is an output of (iv): Right when both final strands tau^-1(K) and
 * K lie in O_{sigma^-1(n)}, Left when both lie in O_n.
 */

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "obp/core.hpp"
#include "obp/spectral.hpp"

namespace obp {

enum class Side { Left, Right };

inline std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }
inline Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

enum class QuickFilter {
  FirstBlockTooSmall,     ///< k_1 < n
  LeftTopBlockTooSmall,   ///< k_{sigma^-1(1)} < n
  SigmaFixesFirst,        ///< sigma(1) = 1
  SigmaFixesLast,         ///< sigma(n) = n
};

inline std::string_view to_string(QuickFilter f) {
  switch (f) {
    case QuickFilter::FirstBlockTooSmall: return "k1_lt_n";
    case QuickFilter::LeftTopBlockTooSmall: return "k_sigma_inv_1_lt_n";
    case QuickFilter::SigmaFixesFirst: return "sigma_1_eq_1";
    case QuickFilter::SigmaFixesLast: return "sigma_n_eq_n";
  }
  return "unknown";
}

struct Verdict {
  bool pass = true;
  std::vector<int> witness;
  std::string detail;

  static Verdict ok() { return {}; }
  static Verdict fail(std::vector<int> witness, std::string detail) {
    return Verdict{false, std::move(witness), std::move(detail)};
  }
};

enum class Condition { Cover, FirstReturn, Irreducible, TopBottom, NoFake };

inline std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::Cover: return "cover";
    case Condition::FirstReturn: return "first_return";
    case Condition::Irreducible: return "irreducible";
    case Condition::TopBottom: return "top_bottom";
    case Condition::NoFake: return "no_fake";
  }
  return "unknown";
}

struct AdmissibilityReport {
  std::vector<QuickFilter> quick_filter_failures;
  Verdict cover;
  Verdict first_return;
  Verdict irreducible;
  Verdict top_bottom;
  std::optional<Verdict> no_fake;  ///< absent when (iv) fails
  std::optional<Side> side;        ///< present iff (iv) passes
  bool overall = false;

  /// First failing condition; nullopt when admissible or when only the quick
  /// filters objected.
  std::optional<Condition> first_failure() const {
    if (!cover.pass) return Condition::Cover;
    if (!first_return.pass) return Condition::FirstReturn;
    if (!irreducible.pass) return Condition::Irreducible;
    if (!top_bottom.pass) return Condition::TopBottom;
    if (!no_fake || !no_fake->pass) return Condition::NoFake;
    return std::nullopt;
  }

  /// (iii) is the only condition that fails.
  bool fails_only_irreducibility() const {
    return cover.pass && first_return.pass && !irreducible.pass && top_bottom.pass && no_fake &&
           no_fake->pass;
  }
};

/// Necessary conditions: k_1 >= n, k_{sigma^-1(1)} >= n, sigma(1) > 1, sigma(n) < n.
inline std::vector<QuickFilter> quick_filters(const ObpInstance& inst) {
  std::vector<QuickFilter> failures;
  const int n = inst.n();
  const auto& sigma = inst.sigma();
  if (inst.k(1) < n) failures.push_back(QuickFilter::FirstBlockTooSmall);
  if (inst.k(sigma.inverse()(1)) < n) failures.push_back(QuickFilter::LeftTopBlockTooSmall);
  if (sigma(1) == 1) failures.push_back(QuickFilter::SigmaFixesFirst);
  if (sigma(n) == n) failures.push_back(QuickFilter::SigmaFixesLast);
  return failures;
}

/// (i) the orbits partition {1..K}.
inline Verdict check_cover(const OrbitDecomposition& dec, int K) {
  if (dec.duplicate_strand) {
    return Verdict::fail({*dec.duplicate_strand},
                         "strand " + std::to_string(*dec.duplicate_strand) + " lies in two orbits");
  }
  for (int s = 1; s <= K; ++s) {
    if (dec.slot(s).orbit == 0)
      return Verdict::fail({s}, "strand " + std::to_string(s) + " is in no orbit");
  }
  return Verdict::ok();
}

/// (ii) tau' = sigma.
inline Verdict check_first_return(const OrbitDecomposition& dec, const Permutation& sigma) {
  for (int i = 1; i <= dec.n(); ++i) {
    if (dec.first_return(i) != sigma(i)) {
      return Verdict::fail({i}, "tau'(" + std::to_string(i) + ") = " + std::to_string(dec.first_return(i)) +
                                    " but sigma(" + std::to_string(i) + ") = " + std::to_string(sigma(i)));
    }
  }
  return Verdict::ok();
}

/// (iii) A is irreducible. The witness is a closed proper subset of indices.
inline Verdict check_irreducible(const TransitionMatrix& a) {
  auto scc = strongly_connected(a);
  if (scc.irreducible) return Verdict::ok();
  return Verdict::fail(std::move(scc.closed_set), "transition matrix is reducible");
}

/// (iv) top and bottom strands, and the side of the NS edge.
inline std::pair<Verdict, std::optional<Side>> check_top_bottom(const OrbitDecomposition& dec,
                                                                const BlockStructure& blocks,
                                                                const Permutation& sigma) {
  const int n = dec.n();
  const int K = blocks.K();
  const int last_left = sigma.inverse()(n);

  for (int i = 1; i <= n; ++i) {
    if (!dec.contains(i, blocks.top(i))) {
      return {Verdict::fail({i, blocks.top(i)}, "top strand " + std::to_string(blocks.top(i)) +
                                                    " of block " + std::to_string(i) + " is not in O_" +
                                                    std::to_string(i)),
              std::nullopt};
    }
  }
  for (int i = 1; i <= n; ++i) {
    if (i == n || i == last_left) continue;
    if (!dec.contains(i, blocks.bottom(i))) {
      return {Verdict::fail({i, blocks.bottom(i)}, "bottom strand " + std::to_string(blocks.bottom(i)) +
                                                       " of block " + std::to_string(i) + " is not in O_" +
                                                       std::to_string(i)),
              std::nullopt};
    }
  }

  // tau^-1(K) is the bottom strand of B_{sigma^-1(n)}.
  const int a = blocks.bottom(last_left);
  const int b = K;
  const int oa = dec.slot(a).orbit;
  const int ob = dec.slot(b).orbit;
  if (last_left != n && oa == ob) {
    if (oa == n) return {Verdict::ok(), Side::Left};
    if (oa == last_left) return {Verdict::ok(), Side::Right};
  }
  return {Verdict::fail({a, b}, "final strands " + std::to_string(a) + " and " + std::to_string(b) +
                                    " do not lie together in O_" + std::to_string(n) + " or O_" +
                                    std::to_string(last_left)),
          std::nullopt};
}

namespace detail {

// The fake-point predicate for a right-admissible permutation pi. Returns the
// label of the first fake point (0 for z_0), or nullopt.
inline std::optional<int> find_fake_point(const Permutation& pi) {
  const int n = pi.size();
  const Permutation inv = pi.inverse();
  const int skipped = inv(1) - 1;
  for (int i = 1; i <= n - 1; ++i) {
    if (i == skipped) continue;
    const bool fake = pi(i + 1) == pi(n) + 1 ? pi(i) == n : pi(i + 1) == pi(i) + 1;
    if (fake) return i;
  }
  bool z0_fake = false;
  if (pi(1) == pi(n) + 1) {
    z0_fake = inv(1) == inv(n) + 1;
  } else if (pi(1) >= 2) {
    z0_fake = inv(pi(1) - 1) == inv(1) - 1;
  }
  if (z0_fake) return 0;
  return std::nullopt;
}

}  // namespace detail

/// (v) no fake singularities. Left-side instances test sigma^-1.
inline Verdict check_no_fake(const ObpInstance& inst, Side side) {
  const Permutation pi = side == Side::Right ? inst.sigma() : inst.sigma().inverse();
  if (auto fake = detail::find_fake_point(pi)) {
    const std::string name = *fake == 0 ? std::string("z_0") : "X_" + std::to_string(*fake);
    return Verdict::fail({*fake}, name + " is a fake singularity");
  }
  return Verdict::ok();
}

inline AdmissibilityReport check_admissible(const Combinatorics& c) {
  AdmissibilityReport r;
  r.quick_filter_failures = quick_filters(c.inst);
  r.cover = check_cover(c.dec, c.inst.K());
  r.first_return = check_first_return(c.dec, c.inst.sigma());
  r.irreducible = check_irreducible(build_matrix(c.dec, c.blocks));
  auto [tb, side] = check_top_bottom(c.dec, c.blocks, c.inst.sigma());
  r.top_bottom = std::move(tb);
  r.side = side;
  if (side) r.no_fake = check_no_fake(c.inst, *side);
  r.overall = r.cover.pass && r.first_return.pass && r.irreducible.pass && r.top_bottom.pass &&
              r.no_fake && r.no_fake->pass;
  return r;
}

inline AdmissibilityReport check_admissible(const ObpInstance& inst) {
  return check_admissible(Combinatorics(inst));
}

}  // namespace obp
