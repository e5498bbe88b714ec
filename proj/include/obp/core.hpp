#pragma once

/**
 * @file core.hpp
 * @brief Blocks, strands, ordered block permutations and their orbits.
 *
 * All indices handed to or returned from this header are 1-based: blocks run
 * over 1..n and strands over 1..K. Containers are ordinary 0-based vectors
 * holding 1-based values.
 */

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "obp/error.hpp"

namespace obp {

/// A permutation of {1..n}, stored by its image array.
class Permutation {
public:
  Permutation() = default;

  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    const int n = size();
    std::vector<char> seen(images_.size(), 0);
    for (int v : images_) {
      if (v < 1 || v > n || seen[v - 1]) {
        throw Error(ErrorCode::InvalidInstance,
                    "not a permutation of 1.." + std::to_string(n));
      }
      seen[v - 1] = 1;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> images(n);
    std::iota(images.begin(), images.end(), 1);
    return Permutation(std::move(images));
  }

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[i - 1]; }
  std::span<const int> images() const { return images_; }

  Permutation inverse() const {
    std::vector<int> inv(images_.size());
    for (int i = 1; i <= size(); ++i) inv[(*this)(i) - 1] = i;
    return Permutation(std::move(inv));
  }

  bool is_identity() const {
    for (int i = 1; i <= size(); ++i)
      if ((*this)(i) != i) return false;
    return true;
  }

  int cycle_count() const {
    std::vector<char> seen(images_.size(), 0);
    int cycles = 0;
    for (int i = 1; i <= size(); ++i) {
      if (seen[i - 1]) continue;
      ++cycles;
      for (int j = i; !seen[j - 1]; j = (*this)(j)) seen[j - 1] = 1;
    }
    return cycles;
  }

  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation&) const = default;

private:
  std::vector<int> images_;
};

/// The pair (sigma, k): sigma places rectangle i at position sigma(i) on the
/// left of J, and k_i strands cross rectangle i.
class ObpInstance {
public:
  ObpInstance() = default;

  ObpInstance(Permutation sigma, std::vector<int> k) : sigma_(std::move(sigma)), k_(std::move(k)) {
    if (sigma_.size() == 0) throw Error(ErrorCode::InvalidInstance, "n must be positive");
    if (static_cast<int>(k_.size()) != sigma_.size()) {
      throw Error(ErrorCode::InvalidInstance, "k has length " + std::to_string(k_.size()) +
                                                  ", expected " + std::to_string(sigma_.size()));
    }
    for (std::size_t i = 0; i < k_.size(); ++i) {
      if (k_[i] < 1) {
        throw Error(ErrorCode::InvalidInstance,
                    "k_" + std::to_string(i + 1) + " must be a positive integer");
      }
    }
    total_ = std::accumulate(k_.begin(), k_.end(), 0);
  }

  ObpInstance(std::vector<int> sigma, std::vector<int> k)
      : ObpInstance(Permutation(std::move(sigma)), std::move(k)) {}

  int n() const { return sigma_.size(); }
  int K() const { return total_; }
  const Permutation& sigma() const { return sigma_; }
  std::span<const int> k() const { return k_; }
  int k(int i) const { return k_[i - 1]; }

  bool operator==(const ObpInstance& other) const {
    return sigma_ == other.sigma_ && k_ == other.k_;
  }

private:
  Permutation sigma_;
  std::vector<int> k_;
  int total_ = 0;
};

/// Block B_i holds strands start(i)..end(i); beta maps a strand to its block.
class BlockStructure {
public:
  explicit BlockStructure(const ObpInstance& inst) : start_(inst.n()), end_(inst.n()), beta_(inst.K()) {
    int next = 1;
    for (int i = 1; i <= inst.n(); ++i) {
      start_[i - 1] = next;
      end_[i - 1] = next + inst.k(i) - 1;
      for (int s = start_[i - 1]; s <= end_[i - 1]; ++s) beta_[s - 1] = i;
      next = end_[i - 1] + 1;
    }
  }

  int n() const { return static_cast<int>(start_.size()); }
  int K() const { return static_cast<int>(beta_.size()); }
  int top(int i) const { return start_[i - 1]; }
  int bottom(int i) const { return end_[i - 1]; }
  int beta(int strand) const { return beta_[strand - 1]; }
  std::span<const int> starts() const { return start_; }
  std::span<const int> ends() const { return end_; }

private:
  std::vector<int> start_;
  std::vector<int> end_;
  std::vector<int> beta_;
};

inline BlockStructure build_blocks(const ObpInstance& inst) { return BlockStructure(inst); }

/// The ordered block permutation tau on strands 1..K and its inverse.
struct Obp {
  Permutation tau;
  Permutation tau_inv;

  int K() const { return tau.size(); }
  int operator()(int strand) const { return tau(strand); }
};

/// tau(j) = j + sum_{i < sigma(beta(j))} k_{sigma^-1(i)} - sum_{i < beta(j)} k_i
inline Obp build_tau(const ObpInstance& inst, const BlockStructure& blocks) {
  const int n = inst.n();
  const Permutation sigma_inv = inst.sigma().inverse();

  // left_offset[p-1]: strands that precede position p on the left of J
  std::vector<int> left_offset(n, 0);
  for (int p = 2; p <= n; ++p) left_offset[p - 1] = left_offset[p - 2] + inst.k(sigma_inv(p - 1));

  std::vector<int> images(inst.K());
  for (int j = 1; j <= inst.K(); ++j) {
    const int b = blocks.beta(j);
    const int right_offset = blocks.top(b) - 1;
    images[j - 1] = j + left_offset[inst.sigma()(b) - 1] - right_offset;
  }
  Permutation tau(std::move(images));
  Permutation inv = tau.inverse();
  return Obp{std::move(tau), std::move(inv)};
}

inline int cycle_count(const Obp& obp) { return obp.tau.cycle_count(); }

/// Where a strand sits: orbit index (1-based, 0 when uncovered) and 0-based
/// position inside that orbit.
struct OrbitSlot {
  int orbit = 0;
  int position = 0;
};

/// Orbits O_i of the strands 1..n under tau, cut at the first return to 1..n.
struct OrbitDecomposition {
  std::vector<std::vector<int>> orbits;
  std::vector<int> m;
  std::vector<int> tau_prime;
  std::vector<OrbitSlot> orbit_of;       // indexed by strand - 1
  std::optional<int> duplicate_strand;   // first strand met by two orbits

  int n() const { return static_cast<int>(orbits.size()); }
  const std::vector<int>& orbit(int i) const { return orbits[i - 1]; }
  int length(int i) const { return m[i - 1]; }
  int first_return(int i) const { return tau_prime[i - 1]; }
  const OrbitSlot& slot(int strand) const { return orbit_of[strand - 1]; }
  bool contains(int i, int strand) const { return slot(strand).orbit == i; }
};

inline OrbitDecomposition decompose_orbits(const Obp& obp, const ObpInstance& inst) {
  const int n = inst.n();
  OrbitDecomposition dec;
  dec.orbits.resize(n);
  dec.m.resize(n);
  dec.tau_prime.resize(n);
  dec.orbit_of.assign(obp.K(), OrbitSlot{});

  for (int i = 1; i <= n; ++i) {
    auto& orbit = dec.orbits[i - 1];
    int s = i;
    while (true) {
      auto& slot = dec.orbit_of[s - 1];
      if (slot.orbit != 0 && !dec.duplicate_strand) dec.duplicate_strand = s;
      if (slot.orbit == 0) slot = OrbitSlot{i, static_cast<int>(orbit.size())};
      orbit.push_back(s);
      s = obp(s);
      if (s <= n) break;
    }
    dec.m[i - 1] = static_cast<int>(orbit.size());
    dec.tau_prime[i - 1] = s;
  }
  return dec;
}

/// An orbit cut at one of its strands: before ++ {pivot} ++ after.
struct OrbitSplit {
  std::vector<int> before;
  int pivot = 0;
  std::vector<int> after;
};

namespace detail {

inline OrbitSplit split_at(const std::vector<int>& orbit, int pivot, ErrorCode missing,
                           const std::string& what) {
  const auto it = std::find(orbit.begin(), orbit.end(), pivot);
  if (it == orbit.end()) throw Error(missing, what);
  return OrbitSplit{std::vector<int>(orbit.begin(), it), pivot, std::vector<int>(it + 1, orbit.end())};
}

}  // namespace detail

/// O_i = O'_i, top strand of B_i, O''_i.
inline OrbitSplit split_orbit_at_top(const OrbitDecomposition& dec, const BlockStructure& blocks, int i) {
  return detail::split_at(dec.orbit(i), blocks.top(i), ErrorCode::TopStrandMissing,
                          "top strand " + std::to_string(blocks.top(i)) + " of block " +
                              std::to_string(i) + " is not in its orbit");
}

/// O_i = O3_i, bottom strand of B_i, O4_i.
inline OrbitSplit split_orbit_at_bottom(const OrbitDecomposition& dec, const BlockStructure& blocks, int i) {
  return detail::split_at(dec.orbit(i), blocks.bottom(i), ErrorCode::BottomStrandMissing,
                          "bottom strand " + std::to_string(blocks.bottom(i)) + " of block " +
                              std::to_string(i) + " is not in its orbit");
}

/// The instance seen from the left of J: (sigma^-1, k_{sigma^-1(.)}).
inline ObpInstance invert_obp(const ObpInstance& inst) {
  Permutation inv = inst.sigma().inverse();
  std::vector<int> k(inst.n());
  for (int i = 1; i <= inst.n(); ++i) k[i - 1] = inst.k(inv(i));
  return ObpInstance(std::move(inv), std::move(k));
}

/// Everything combinatorial derived from one instance.
struct Combinatorics {
  ObpInstance inst;
  BlockStructure blocks;
  Obp obp;
  OrbitDecomposition dec;

  explicit Combinatorics(ObpInstance instance)
      : inst(std::move(instance)),
        blocks(build_blocks(inst)),
        obp(build_tau(inst, blocks)),
        dec(decompose_orbits(obp, inst)) {}
};

}  // namespace obp
