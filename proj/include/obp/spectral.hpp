#pragma once

/**
 * @file spectral.hpp
 * @brief Integer transition matrix of an OBP and its Perron data.
 *
 * a_ij counts the strands of orbit O_i lying in block B_j. The dilatation is
 * the Perron root of this matrix; lengths and heights are its right and left
 * Perron vectors.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "obp/core.hpp"
#include "obp/error.hpp"

namespace obp {

/// Square non-negative integer matrix, row-major, 1-based accessors.
class TransitionMatrix {
public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0) {}
  TransitionMatrix(int n, std::vector<std::int64_t> entries) : n_(n), a_(std::move(entries)) {
    if (a_.size() != static_cast<std::size_t>(n) * n)
      throw Error(ErrorCode::InvalidInstance, "matrix entry count does not match dimension");
  }

  static TransitionMatrix identity(int n) {
    TransitionMatrix id(n);
    for (int i = 1; i <= n; ++i) id(i, i) = 1;
    return id;
  }

  int n() const { return n_; }
  std::int64_t& operator()(int i, int j) { return a_[static_cast<std::size_t>(i - 1) * n_ + (j - 1)]; }
  std::int64_t operator()(int i, int j) const { return a_[static_cast<std::size_t>(i - 1) * n_ + (j - 1)]; }
  std::span<const std::int64_t> entries() const { return a_; }

  std::vector<std::int64_t> row_sums() const {
    std::vector<std::int64_t> r(n_, 0);
    for (int i = 1; i <= n_; ++i)
      for (int j = 1; j <= n_; ++j) r[i - 1] += (*this)(i, j);
    return r;
  }

  std::vector<std::int64_t> column_sums() const {
    std::vector<std::int64_t> c(n_, 0);
    for (int i = 1; i <= n_; ++i)
      for (int j = 1; j <= n_; ++j) c[j - 1] += (*this)(i, j);
    return c;
  }

  TransitionMatrix transpose() const {
    TransitionMatrix t(n_);
    for (int i = 1; i <= n_; ++i)
      for (int j = 1; j <= n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend TransitionMatrix operator*(const TransitionMatrix& x, const TransitionMatrix& y) {
    TransitionMatrix p(x.n_);
    for (int i = 1; i <= x.n_; ++i)
      for (int k = 1; k <= x.n_; ++k) {
        const auto xik = x(i, k);
        if (xik == 0) continue;
        for (int j = 1; j <= x.n_; ++j) p(i, j) += xik * y(k, j);
      }
    return p;
  }

  bool operator==(const TransitionMatrix&) const = default;

private:
  int n_ = 0;
  std::vector<std::int64_t> a_;
};

inline TransitionMatrix build_matrix(const OrbitDecomposition& dec, const BlockStructure& blocks) {
  TransitionMatrix a(dec.n());
  for (int i = 1; i <= dec.n(); ++i)
    for (int s : dec.orbit(i)) a(i, blocks.beta(s)) += 1;
  return a;
}

/// Result of the strong-connectivity test. When the graph i -> j (a_ij > 0)
/// is not strongly connected, closed_set is a proper non-empty subset with
/// no edge leaving it.
struct IrreducibilityResult {
  bool irreducible = true;
  std::vector<int> closed_set;
};

namespace detail {

inline std::vector<char> reach_from(const TransitionMatrix& a, int start, bool forward) {
  std::vector<char> seen(a.n(), 0);
  std::queue<int> frontier;
  seen[start - 1] = 1;
  frontier.push(start);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v = 1; v <= a.n(); ++v) {
      const auto w = forward ? a(u, v) : a(v, u);
      if (w > 0 && !seen[v - 1]) {
        seen[v - 1] = 1;
        frontier.push(v);
      }
    }
  }
  return seen;
}

}  // namespace detail

inline IrreducibilityResult strongly_connected(const TransitionMatrix& a) {
  IrreducibilityResult r;
  if (a.n() == 0) return r;
  const auto fwd = detail::reach_from(a, 1, true);
  if (std::find(fwd.begin(), fwd.end(), 0) != fwd.end()) {
    r.irreducible = false;
    for (int i = 1; i <= a.n(); ++i)
      if (fwd[i - 1]) r.closed_set.push_back(i);
    return r;
  }
  const auto bwd = detail::reach_from(a, 1, false);
  if (std::find(bwd.begin(), bwd.end(), 0) != bwd.end()) {
    r.irreducible = false;
    for (int i = 1; i <= a.n(); ++i)
      if (!bwd[i - 1]) r.closed_set.push_back(i);
  }
  return r;
}

/// A^n strictly positive. Only meaningful for irreducible A.
inline bool is_primitive_power_positive(const TransitionMatrix& a) {
  // Work on the 0/1 pattern so entries never overflow.
  TransitionMatrix pattern(a.n());
  for (int i = 1; i <= a.n(); ++i)
    for (int j = 1; j <= a.n(); ++j) pattern(i, j) = a(i, j) > 0 ? 1 : 0;
  TransitionMatrix power = pattern;
  for (int step = 1; step < a.n(); ++step) {
    power = power * pattern;
    for (int i = 1; i <= a.n(); ++i)
      for (int j = 1; j <= a.n(); ++j) power(i, j) = power(i, j) > 0 ? 1 : 0;
  }
  const auto e = power.entries();
  return std::all_of(e.begin(), e.end(), [](std::int64_t v) { return v > 0; });
}

enum class Normalization {
  SumHOne,  ///< sum h_i = 1 and sum l_i = 1
  MaxLOne,  ///< max l_i = 1 and max h_i = 1
};

inline std::string_view to_string(Normalization n) {
  return n == Normalization::SumHOne ? "sum_h" : "max_l";
}

struct PerronData {
  double lambda = 0.0;
  std::vector<double> l;
  std::vector<double> h;
  double residual_l = 0.0;  ///< |A l - lambda l|_inf / |l|_inf
  double residual_h = 0.0;  ///< |A^T h - lambda h|_inf / |h|_inf
  Normalization normalization = Normalization::SumHOne;
  int iterations = 0;
};

namespace detail {

inline double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline std::vector<double> apply(const TransitionMatrix& a, std::span<const double> v, bool transposed) {
  std::vector<double> out(a.n(), 0.0);
  for (int i = 1; i <= a.n(); ++i)
    for (int j = 1; j <= a.n(); ++j) {
      const double w = static_cast<double>(transposed ? a(j, i) : a(i, j));
      out[i - 1] += w * v[j - 1];
    }
  return out;
}

inline double relative_residual(const TransitionMatrix& a, std::span<const double> v, double lambda,
                                bool transposed) {
  const auto av = apply(a, v, transposed);
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r = std::max(r, std::abs(av[i] - lambda * v[i]));
  return r / inf_norm(v);
}

struct PowerResult {
  double lambda;
  std::vector<double> vec;
  int iterations;
};

// Power iteration on A + I; the shift makes any irreducible A primitive and
// leaves the eigenvectors in place.
inline PowerResult shifted_power_iteration(const TransitionMatrix& a, bool transposed) {
  constexpr int kMaxIterations = 1'000'000;
  constexpr double kRayleighTol = 1e-12;
  constexpr double kResidualTol = 1e-13;

  const int n = a.n();
  std::vector<double> v(n, 1.0 / n);
  double previous = -1.0;
  for (int it = 1; it <= kMaxIterations; ++it) {
    auto w = apply(a, v, transposed);
    for (int i = 0; i < n; ++i) w[i] += v[i];
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      num += w[i] * v[i];
      den += v[i] * v[i];
    }
    const double rayleigh = num / den;
    const double norm = inf_norm(w);
    for (double& x : w) x /= norm;
    v = std::move(w);
    if (previous > 0.0 && std::abs(rayleigh - previous) < kRayleighTol * rayleigh) {
      const double lambda = rayleigh - 1.0;
      if (relative_residual(a, v, lambda, transposed) <= kResidualTol * std::max(1.0, lambda))
        return {lambda, v, it};
    }
    previous = rayleigh;
  }
  throw Error(ErrorCode::NoConvergence, "power iteration did not converge");
}

inline void normalize(std::vector<double>& v, bool by_sum) {
  double scale = 0.0;
  if (by_sum) {
    for (double x : v) scale += x;
  } else {
    scale = inf_norm(v);
  }
  for (double& x : v) x /= scale;
}

}  // namespace detail

inline PerronData perron(const TransitionMatrix& a, Normalization normalization = Normalization::SumHOne) {
  const auto scc = strongly_connected(a);
  if (!scc.irreducible) throw Error(ErrorCode::NotIrreducible, "transition matrix is reducible");

  auto right = detail::shifted_power_iteration(a, false);
  auto left = detail::shifted_power_iteration(a, true);

  PerronData pd;
  pd.normalization = normalization;
  pd.lambda = right.lambda;
  pd.l = std::move(right.vec);
  pd.h = std::move(left.vec);
  pd.iterations = right.iterations + left.iterations;
  const bool by_sum = normalization == Normalization::SumHOne;
  detail::normalize(pd.l, by_sum);
  detail::normalize(pd.h, by_sum);
  pd.residual_l = detail::relative_residual(a, pd.l, pd.lambda, false);
  pd.residual_h = detail::relative_residual(a, pd.h, pd.lambda, true);
  return pd;
}

enum class BoundsStatus { Pass, Degenerate, Fail };

inline std::string_view to_string(BoundsStatus s) {
  switch (s) {
    case BoundsStatus::Pass: return "pass";
    case BoundsStatus::Degenerate: return "degenerate";
    case BoundsStatus::Fail: return "fail";
  }
  return "fail";
}

struct BoundsVerdict {
  BoundsStatus status = BoundsStatus::Pass;
  int min_k = 0, max_k = 0;
  int min_m = 0, max_m = 0;
  bool pass() const { return status == BoundsStatus::Pass; }
};

namespace detail {

// Strict lower < lambda < upper with a relative margin; touching a bound
// within the margin is Degenerate.
inline BoundsStatus strict_between(double lower, double lambda, double upper) {
  constexpr double kMargin = 1e-9;
  const bool near_lower = std::abs(lambda - lower) <= kMargin * std::max(1.0, lower);
  const bool near_upper = std::abs(lambda - upper) <= kMargin * std::max(1.0, upper);
  if (near_lower || near_upper) return BoundsStatus::Degenerate;
  return (lower < lambda && lambda < upper) ? BoundsStatus::Pass : BoundsStatus::Fail;
}

inline BoundsStatus worst(BoundsStatus a, BoundsStatus b) {
  if (a == BoundsStatus::Fail || b == BoundsStatus::Fail) return BoundsStatus::Fail;
  if (a == BoundsStatus::Degenerate || b == BoundsStatus::Degenerate) return BoundsStatus::Degenerate;
  return BoundsStatus::Pass;
}

}  // namespace detail

/// min k < lambda < max k and min m < lambda < max m.
inline BoundsVerdict check_lambda_bounds(const PerronData& pd, std::span<const int> k, std::span<const int> m) {
  BoundsVerdict v;
  v.min_k = *std::min_element(k.begin(), k.end());
  v.max_k = *std::max_element(k.begin(), k.end());
  v.min_m = *std::min_element(m.begin(), m.end());
  v.max_m = *std::max_element(m.begin(), m.end());
  v.status = detail::worst(detail::strict_between(v.min_k, pd.lambda, v.max_k),
                           detail::strict_between(v.min_m, pd.lambda, v.max_m));
  return v;
}

/// P_sigma A P_sigma^-1 with P_sigma = (e_sigma(1), ..., e_sigma(n)); entry
/// (sigma(i), sigma(j)) of the result is a_ij.
inline TransitionMatrix conjugate_matrix(const TransitionMatrix& a, const Permutation& sigma) {
  TransitionMatrix c(a.n());
  for (int i = 1; i <= a.n(); ++i)
    for (int j = 1; j <= a.n(); ++j) c(sigma(i), sigma(j)) = a(i, j);
  return c;
}

}  // namespace obp
