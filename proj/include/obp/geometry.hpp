#pragma once

/**
 * @file geometry.hpp
 * @brief Flat surface assembled from an admissible OBP, and the map on it.
 *
 * Construction always runs on right-admissible data. Rectangle R_i is
 * [0, l_i] x [0, h_i] glued on the right of the vertical segment J; points are
 * (rect, u, v) with u measured rightwards from J and v downwards from the top
 * of the rectangle. R_i occupies depths [cumH_{i-1}, cumH_i] of J on the
 * right and, on the left of J, position sigma(i) of the stack ordered by
 * sigma.
 *
 * Horizontal edges: x_i (1 <= i < n) joins the bottom-left of R_i to the
 * top-left of R_{i+1} and ends at the singularity X_i. y_j (0 <= j <= n) is
 * the top-right of the rectangle in left position j+1; y_n is the
 * bottom-right of R_{sigma^-1(n)}. The bottom of R_n is the NS edge.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "obp/admissibility.hpp"
#include "obp/core.hpp"
#include "obp/error.hpp"
#include "obp/spectral.hpp"

namespace obp {

/// Tolerance for identities derived directly from the eigen-data.
inline constexpr double kEigenTolerance = 1e-9;
/// Tolerance for composed map and gluing comparisons.
inline constexpr double kMapTolerance = 1e-8;

struct HorizontalEdges {
  std::vector<double> x;  ///< x[i-1] = x_i, i = 1..n-1
  std::vector<double> y;  ///< y[j] = y_j, j = 0..n
  double max_disagreement = 0.0;  ///< largest gap between doubly-defined values

  double x_at(int i) const { return x[i - 1]; }
  double y_at(int j) const { return y[j]; }
};

namespace detail {

inline double l_sum(const std::vector<int>& strands, const BlockStructure& blocks, const PerronData& pd) {
  double s = 0.0;
  for (int strand : strands) s += pd.l[blocks.beta(strand) - 1];
  return s;
}

inline double scale_of(const PerronData& pd) {
  return *std::max_element(pd.l.begin(), pd.l.end());
}

}  // namespace detail

/// True when the final strands both lie in O_{sigma^-1(n)}.
inline bool is_right_admissible_shape(const ObpInstance& inst, const BlockStructure& blocks,
                                      const OrbitDecomposition& dec) {
  const int last_left = inst.sigma().inverse()(inst.n());
  if (last_left == inst.n()) return false;
  return dec.contains(last_left, inst.K()) && dec.contains(last_left, blocks.bottom(last_left));
}

/// x_i = (sum over O'_{i+1} of l_beta) / (lambda - 1).
inline std::vector<double> solve_x(const ObpInstance& inst, const BlockStructure& blocks,
                                   const OrbitDecomposition& dec, const PerronData& pd) {
  if (!is_right_admissible_shape(inst, blocks, dec))
    throw Error(ErrorCode::NotRightAdmissible, "edge lengths are solved on right-admissible data only");
  const int n = inst.n();
  std::vector<double> x(n - 1);
  for (int i = 1; i <= n - 1; ++i) {
    const auto split = split_orbit_at_top(dec, blocks, i + 1);
    x[i - 1] = detail::l_sum(split.before, blocks, pd) / (pd.lambda - 1.0);
  }
  return x;
}

/// Solves y_0..y_n from both orbit decompositions and cross-checks them.
inline HorizontalEdges solve_y(const ObpInstance& inst, const BlockStructure& blocks, const OrbitDecomposition& dec,
                               const PerronData& pd, std::vector<double> x) {
  const int n = inst.n();
  const auto& sigma = inst.sigma();
  const double scale = detail::scale_of(pd);
  const double inv = 1.0 / (pd.lambda - 1.0);
  auto l = [&](int i) { return pd.l[i - 1]; };

  std::vector<std::optional<double>> from_top(n + 1), from_bottom(n + 1);
  double gap = 0.0;
  for (int i = 1; i <= n - 1; ++i) {
    const auto top = split_orbit_at_top(dec, blocks, i + 1);
    const double y_top = detail::l_sum(top.after, blocks, pd) * inv;
    from_top[sigma(i + 1) - 1] = y_top;
    gap = std::max(gap, std::abs(x[i - 1] + y_top - l(i + 1)));

    const auto bottom = split_orbit_at_bottom(dec, blocks, i);
    const double x_bottom = detail::l_sum(bottom.before, blocks, pd) * inv;
    const double y_bottom = detail::l_sum(bottom.after, blocks, pd) * inv;
    from_bottom[sigma(i)] = y_bottom;
    gap = std::max(gap, std::abs(x_bottom - x[i - 1]));
    gap = std::max(gap, std::abs(x[i - 1] + y_bottom - l(i)));
  }

  HorizontalEdges e;
  e.x = std::move(x);
  e.y.assign(n + 1, 0.0);
  const int top_of_first = sigma(1) - 1;
  for (int j = 0; j <= n; ++j) {
    if (j == top_of_first) {
      e.y[j] = l(1);
      if (from_bottom[j]) gap = std::max(gap, std::abs(*from_bottom[j] - l(1)));
    } else if (from_top[j] && from_bottom[j]) {
      e.y[j] = *from_top[j];
      gap = std::max(gap, std::abs(*from_top[j] - *from_bottom[j]));
    } else if (from_top[j]) {
      e.y[j] = *from_top[j];
    } else if (from_bottom[j]) {
      e.y[j] = *from_bottom[j];
    }
  }
  e.y[0] = 0.0;
  if (from_top[0]) gap = std::max(gap, std::abs(*from_top[0]));
  e.max_disagreement = gap / scale;
  if (e.max_disagreement > kEigenTolerance) {
    throw Error(ErrorCode::InconsistentY,
                "doubly-defined edge lengths disagree by " + std::to_string(e.max_disagreement));
  }
  return e;
}

struct SingularityData {
  std::vector<std::vector<int>> classes;  ///< labels X_1..X_{n-1}, each class sorted, classes by least label
  std::vector<int> class_of_label;        ///< class_of_label[i-1] = index into classes
  std::vector<int> multiplicities;        ///< p_r = |class| - 1
  std::vector<double> cone_angles;        ///< 2 pi (p_r + 1)
  std::vector<int> stratum;               ///< multiplicities sorted descending
  int nu = 0;
  int genus = 0;
  int z0_label = 0;                       ///< X_0 = z_0 is an alias of this label

  int class_of(int label) const { return class_of_label[label - 1]; }
};

namespace detail {

class UnionFind {
public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

private:
  std::vector<int> parent_;
};

}  // namespace detail

/// Partition of the labels X_1..X_{n-1} into singularities, from the gluings
/// of the y edges to the left of J. Classes are sorted and ordered by least
/// label. Needs sigma(1) > 1 and sigma(n) < n.
inline std::vector<std::vector<int>> singularity_partition(const Permutation& sigma) {
  const int n = sigma.size();
  const Permutation inv = sigma.inverse();
  if (n < 2) throw Error(ErrorCode::InvalidInstance, "singularities need at least two rectangles");
  const int z0_label = inv(1) - 1;
  if (z0_label < 1 || inv(n) == n)
    throw Error(ErrorCode::NotRightAdmissible, "sigma(1) = 1 or sigma(n) = n leaves no valid labelling");
  auto idx = [&](int label) { return (label == 0 ? z0_label : label) - 1; };

  detail::UnionFind uf(n - 1);
  for (int j = 1; j <= n - 1; ++j) {
    if (j == sigma(n)) continue;
    uf.unite(idx(inv(j + 1) - 1), idx(inv(j)));
  }
  uf.unite(idx(inv(sigma(n) + 1) - 1), idx(inv(n)));

  std::vector<int> root_to_class(n - 1, -1);
  std::vector<std::vector<int>> classes;
  for (int label = 1; label <= n - 1; ++label) {
    const int root = uf.find(label - 1);
    if (root_to_class[root] < 0) {
      root_to_class[root] = static_cast<int>(classes.size());
      classes.emplace_back();
    }
    classes[root_to_class[root]].push_back(label);
  }
  return classes;
}

/// Singularity classes, cone angles, genus and stratum of a right-admissible
/// instance.
inline SingularityData singularity_classes(const ObpInstance& inst) {
  const int n = inst.n();
  SingularityData sd;
  sd.classes = singularity_partition(inst.sigma());
  sd.z0_label = inst.sigma().inverse()(1) - 1;
  sd.class_of_label.resize(n - 1);
  for (std::size_t c = 0; c < sd.classes.size(); ++c)
    for (int label : sd.classes[c]) sd.class_of_label[label - 1] = static_cast<int>(c);

  int total = 0;
  for (const auto& c : sd.classes) {
    const int p = static_cast<int>(c.size()) - 1;
    sd.multiplicities.push_back(p);
    sd.cone_angles.push_back(2.0 * std::numbers::pi * (p + 1));
    total += p;
  }
  sd.nu = static_cast<int>(sd.classes.size());
  if (total % 2 != 0)
    throw Error(ErrorCode::NonIntegerGenus, "multiplicities sum to an odd number " + std::to_string(total));
  sd.genus = (total + 2) / 2;
  sd.stratum = sd.multiplicities;
  std::sort(sd.stratum.begin(), sd.stratum.end(), std::greater<>());
  return sd;
}

/// Antisymmetric intersection matrix of the core curves of the rectangles.
class IntersectionForm {
public:
  explicit IntersectionForm(int n) : n_(n), s_(static_cast<std::size_t>(n) * n, 0) {}
  int n() const { return n_; }
  int& operator()(int i, int j) { return s_[static_cast<std::size_t>(i - 1) * n_ + (j - 1)]; }
  int operator()(int i, int j) const { return s_[static_cast<std::size_t>(i - 1) * n_ + (j - 1)]; }
  bool operator==(const IntersectionForm&) const = default;

private:
  int n_;
  std::vector<int> s_;
};

inline IntersectionForm intersection_form(const Permutation& sigma) {
  IntersectionForm s(sigma.size());
  for (int i = 1; i <= sigma.size(); ++i)
    for (int j = i + 1; j <= sigma.size(); ++j) {
      if (sigma(i) > sigma(j)) {
        s(i, j) = 1;
        s(j, i) = -1;
      }
    }
  return s;
}

/// A S A^T == S, exactly.
inline Verdict symplectic_check(const TransitionMatrix& a, const IntersectionForm& s) {
  const int n = a.n();
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      std::int64_t v = 0;
      for (int p = 1; p <= n; ++p) {
        if (a(i, p) == 0) continue;
        for (int q = 1; q <= n; ++q) v += a(i, p) * s(p, q) * a(j, q);
      }
      if (v != s(i, j)) {
        return Verdict::fail({i, j}, "(A S A^T)_" + std::to_string(i) + "," + std::to_string(j) + " = " +
                                         std::to_string(v) + " but S = " + std::to_string(s(i, j)));
      }
    }
  return Verdict::ok();
}

/// Strand heights inside B_j add up to h_j: sum_{s in B_j} h_{o(s)} = lambda h_j.
inline Verdict strand_partition_check(const BlockStructure& blocks, const OrbitDecomposition& dec,
                                      const PerronData& pd) {
  for (int j = 1; j <= blocks.n(); ++j) {
    double total = 0.0;
    for (int s = blocks.top(j); s <= blocks.bottom(j); ++s) total += pd.h[dec.slot(s).orbit - 1];
    const double expected = pd.lambda * pd.h[j - 1];
    if (std::abs(total - expected) > kEigenTolerance * std::max(std::abs(expected), 1e-300)) {
      return Verdict::fail({j}, "strand heights of block " + std::to_string(j) + " do not add up");
    }
  }
  return Verdict::ok();
}

struct SurfacePoint {
  int rect = 1;
  double u = 0.0;
  double v = 0.0;
};

/// Immutable geometric data of the surface built from a right-admissible OBP.
class Surface {
public:
  Surface(const ObpInstance& right_instance, Normalization normalization)
      : comb_(right_instance),
        matrix_(build_matrix(comb_.dec, comb_.blocks)),
        perron_(perron(matrix_, normalization)),
        edges_(solve_y(comb_.inst, comb_.blocks, comb_.dec, perron_,
                       solve_x(comb_.inst, comb_.blocks, comb_.dec, perron_))),
        singularities_(singularity_classes(comb_.inst)) {
    const int n = comb_.inst.n();
    const Permutation inv = comb_.inst.sigma().inverse();
    cum_h_.assign(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) cum_h_[i] = cum_h_[i - 1] + h(i);
    left_cum_.assign(n + 1, 0.0);
    for (int p = 1; p <= n; ++p) left_cum_[p] = left_cum_[p - 1] + h(inv(p));

    strand_offset_.assign(comb_.inst.K(), 0.0);
    for (int j = 1; j <= n; ++j) {
      double acc = 0.0;
      for (int s = comb_.blocks.top(j); s <= comb_.blocks.bottom(j); ++s) {
        strand_offset_[s - 1] = acc;
        acc += h(orbit_of(s)) / lambda();
      }
    }
  }

  const ObpInstance& instance() const { return comb_.inst; }
  const Combinatorics& combinatorics() const { return comb_; }
  const TransitionMatrix& matrix() const { return matrix_; }
  const PerronData& perron_data() const { return perron_; }
  const HorizontalEdges& edges() const { return edges_; }
  const SingularityData& singularities() const { return singularities_; }

  int n() const { return comb_.inst.n(); }
  double lambda() const { return perron_.lambda; }
  double l(int i) const { return perron_.l[i - 1]; }
  double h(int i) const { return perron_.h[i - 1]; }
  double cum_h(int i) const { return cum_h_[i]; }
  double left_cum_h(int position) const { return left_cum_[position]; }
  int orbit_of(int strand) const { return comb_.dec.slot(strand).orbit; }
  /// Distance from the top of its block to the top of the strand's band.
  double strand_top_offset(int strand) const { return strand_offset_[strand - 1]; }
  double scale() const { return detail::scale_of(perron_); }

  /// x + iy -> lambda x + i y / lambda on each rectangle.
  SurfacePoint apply_map(const SurfacePoint& p) const {
    if (p.rect < 1 || p.rect > n()) throw Error(ErrorCode::OutOfChart, "no rectangle " + std::to_string(p.rect));
    const double slack = 1e-12 * std::max(scale(), 1.0);
    if (p.u < -slack || p.u > l(p.rect) + slack || p.v < -slack || p.v > h(p.rect) + slack)
      throw Error(ErrorCode::OutOfChart, "point outside rectangle " + std::to_string(p.rect));

    const double target = lambda() * std::clamp(p.u, 0.0, l(p.rect));
    const auto& orbit = comb_.dec.orbit(p.rect);
    double acc = 0.0;
    for (std::size_t t = 0; t < orbit.size(); ++t) {
      const int s = orbit[t];
      const int block = comb_.blocks.beta(s);
      const double width = l(block);
      if (target < acc + width || t + 1 == orbit.size()) {
        const double u = std::clamp(target - acc, 0.0, width);
        const double v = std::clamp(p.v, 0.0, h(p.rect)) / lambda() + strand_top_offset(s);
        return SurfacePoint{block, u, v};
      }
      acc += width;
    }
    return p;  // unreachable: orbits are non-empty
  }

  /// Canonical representative of a point under the gluings: points of J are
  /// moved to the right-of-J chart, points of a horizontal edge to the
  /// rectangle above it. z_1 is (n, 0, h_n).
  SurfacePoint canonicalize(SurfacePoint p, double tol = kMapTolerance) const {
    const double t = tol * std::max(scale(), 1.0);
    for (int round = 0; round < 4; ++round) {
      bool changed = false;
      if (p.u >= l(p.rect) - t && l(p.rect) > t) {
        p = from_j(left_cum_[comb_.inst.sigma()(p.rect) - 1] + p.v, t);
        changed = true;
      }
      if (p.v <= t) {
        if (auto up = glue_top(p, t)) {
          p = *up;
          changed = true;
        }
      }
      if (!changed) break;
    }
    return p;
  }

  bool identified(const SurfacePoint& a, const SurfacePoint& b, double tol = kMapTolerance) const {
    const auto ca = canonicalize(a, tol);
    const auto cb = canonicalize(b, tol);
    const double t = tol * std::max(scale(), 1.0);
    return ca.rect == cb.rect && std::abs(ca.u - cb.u) <= t && std::abs(ca.v - cb.v) <= t;
  }

  /// The chart positions at which singularity X_label appears.
  std::vector<SurfacePoint> singular_positions(int label) const {
    std::vector<SurfacePoint> pts{{label + 1, edges_.x_at(label), 0.0}, {label, edges_.x_at(label), h(label)}};
    if (label == singularities_.z0_label) pts.push_back({1, 0.0, 0.0});
    return pts;
  }

  /// Index of the singularity class located at p, if any.
  std::optional<int> singular_class_at(const SurfacePoint& p, double tol = kMapTolerance) const {
    const double t = tol * std::max(scale(), 1.0);
    auto close = [t](const SurfacePoint& a, const SurfacePoint& b) {
      return a.rect == b.rect && std::abs(a.u - b.u) <= t && std::abs(a.v - b.v) <= t;
    };
    const auto cp = canonicalize(p, tol);
    for (int label = 1; label <= n() - 1; ++label)
      for (const auto& q : singular_positions(label))
        if (close(q, p) || close(canonicalize(q, tol), cp)) return singularities_.class_of(label);
    return std::nullopt;
  }

private:
  // A point of J at depth d, in the right-of-J chart.
  SurfacePoint from_j(double depth, double t) const {
    for (int r = 1; r <= n(); ++r)
      if (depth <= cum_h_[r] + t || r == n()) return SurfacePoint{r, 0.0, std::clamp(depth - cum_h_[r - 1], 0.0, h(r))};
    return SurfacePoint{n(), 0.0, h(n())};
  }

  // The point of the rectangle above p, when p lies on the top edge of its
  // rectangle and that edge is glued to something.
  std::optional<SurfacePoint> glue_top(const SurfacePoint& p, double t) const {
    const int r = p.rect;
    const auto& sigma = comb_.inst.sigma();
    const Permutation inv = sigma.inverse();
    const double split = r >= 2 ? edges_.x_at(r - 1) : 0.0;
    if (r >= 2 && p.u <= split + t) return SurfacePoint{r - 1, p.u, h(r - 1)};
    if (sigma(r) == 1) return std::nullopt;  // top of J: z_0
    const int j = sigma(r) - 1;
    const double from_right = l(r) - p.u;
    if (j != sigma(n())) {
      const int above = inv(j);
      return SurfacePoint{above, std::max(0.0, l(above) - from_right), h(above)};
    }
    if (from_right <= l(n()) + t) return SurfacePoint{n(), std::max(0.0, l(n()) - from_right), h(n())};
    const int above = inv(n());
    return SurfacePoint{above, std::max(0.0, l(above) - (from_right - l(n()))), h(above)};
  }

  Combinatorics comb_;
  TransitionMatrix matrix_;
  PerronData perron_;
  HorizontalEdges edges_;
  SingularityData singularities_;
  std::vector<double> cum_h_;
  std::vector<double> left_cum_;
  std::vector<double> strand_offset_;
};

/// One named runtime check on a built surface.
struct InvariantCheck {
  std::string name;
  bool pass = true;
  double error = 0.0;
};

namespace detail {

inline void record(std::vector<InvariantCheck>& out, std::string name, double error, double tol) {
  out.push_back({std::move(name), error <= tol, error});
}

}  // namespace detail

/// Every identity the construction promises, evaluated on the built surface.
inline std::vector<InvariantCheck> verify_surface(const Surface& s, int samples_per_edge = 100) {
  std::vector<InvariantCheck> out;
  const int n = s.n();
  const auto& sigma = s.instance().sigma();
  const Permutation inv = sigma.inverse();
  const auto& e = s.edges();
  const auto& pd = s.perron_data();
  const double scale = s.scale();

  detail::record(out, "perron_residual_l", pd.residual_l, kEigenTolerance);
  detail::record(out, "perron_residual_h", pd.residual_h, kEigenTolerance);

  double top_eq = 0.0, bottom_eq = 0.0, x_range = 0.0;
  for (int i = 1; i <= n - 1; ++i) {
    top_eq = std::max(top_eq, std::abs(e.x_at(i) + e.y_at(sigma(i + 1) - 1) - s.l(i + 1)));
    bottom_eq = std::max(bottom_eq, std::abs(e.x_at(i) + e.y_at(sigma(i)) - s.l(i)));
    if (i != inv(1) - 1 && !(e.x_at(i) > 0.0 && e.x_at(i) < std::min(s.l(i), s.l(i + 1)))) x_range = 1.0;
  }
  detail::record(out, "x_plus_top_right_y", top_eq / scale, kEigenTolerance);
  detail::record(out, "x_plus_bottom_right_y", bottom_eq / scale, kEigenTolerance);
  detail::record(out, "x_strictly_inside", x_range, 0.0);
  detail::record(out, "x_at_left_top_corner", std::abs(e.x_at(inv(1) - 1) - s.l(inv(1))) / scale, kEigenTolerance);
  detail::record(out, "y_ns_split", std::abs(e.y_at(sigma(n)) - e.y_at(n) - s.l(n)) / scale, kEigenTolerance);
  detail::record(out, "y_top_of_first", std::abs(e.y_at(sigma(1) - 1) - s.l(1)) / scale, kEigenTolerance);
  detail::record(out, "y_zero", std::abs(e.y_at(0)), 0.0);
  detail::record(out, "y_double_definitions", e.max_disagreement, kEigenTolerance);

  double y_neg = 0.0;
  for (int j = 1; j <= n; ++j) y_neg = std::max(y_neg, e.y_at(j) > 0 ? 0.0 : 1.0);
  detail::record(out, "y_positive", y_neg, 0.0);

  const auto part = strand_partition_check(s.combinatorics().blocks, s.combinatorics().dec, pd);
  detail::record(out, "strand_partition", part.pass ? 0.0 : 1.0, 0.0);

  // Area: strands of B_j have widths l_j and heights h_{o(s)}/lambda.
  double area = 0.0, strand_area = 0.0;
  for (int i = 1; i <= n; ++i) area += s.l(i) * s.h(i);
  for (int st = 1; st <= s.instance().K(); ++st)
    strand_area += s.l(s.combinatorics().blocks.beta(st)) * s.h(s.orbit_of(st)) / s.lambda();
  detail::record(out, "area_preserved", std::abs(area - strand_area) / area, kEigenTolerance);

  const auto z0 = s.apply_map({1, 0.0, 0.0});
  detail::record(out, "fixes_z0", std::max({std::abs(z0.u), std::abs(z0.v), z0.rect == 1 ? 0.0 : 1.0}), 0.0);

  double sing = 0.0;
  for (int label = 1; label <= n - 1; ++label) {
    const auto image = s.apply_map({label + 1, e.x_at(label), 0.0});
    const auto cls = s.singular_class_at(image);
    if (!cls || *cls != s.singularities().class_of(label)) sing = 1.0;
  }
  detail::record(out, "fixes_singularities", sing, 0.0);

  double glue = 0.0;
  for (int i = 1; i <= n - 1; ++i) {
    for (int k = 1; k <= samples_per_edge; ++k) {
      const double u = e.x_at(i) * k / (samples_per_edge + 1.0);
      const auto a = s.apply_map({i, u, s.h(i)});
      const auto b = s.apply_map({i + 1, u, 0.0});
      if (!s.identified(a, b)) glue = 1.0;
    }
  }
  detail::record(out, "gluing_compatible", glue, 0.0);

  const auto& sd = s.singularities();
  int p_plus_one = 0;
  for (int p : sd.multiplicities) p_plus_one += p + 1;
  const bool counts = p_plus_one == n - 1 && n == 2 * sd.genus + sd.nu - 1 && 4 * sd.genus >= n + 3 &&
                      2 * sd.genus <= n;
  detail::record(out, "topology_counts", counts ? 0.0 : 1.0, 0.0);

  return out;
}

inline bool all_pass(const std::vector<InvariantCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.pass; });
}

}  // namespace obp
