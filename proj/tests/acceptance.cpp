// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.
//
// The desk corpus is every candidate with 2 <= n <= 5 and K <= 24.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "oracles/brute_force.hpp"
#include "oracles/exact_charpoly.hpp"
#include "support/fixtures.hpp"

using namespace obp;

namespace {

constexpr int kCorpusMaxN = 5;
constexpr int kCorpusMaxK = 24;
constexpr double kResidualTolerance = 1e-9;
constexpr double kOracleTolerance = 1e-10;
constexpr double kEdgeTolerance = 1e-9;
constexpr double kInverseLambdaTolerance = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string describe(const ObpInstance& inst) { return to_json(inst).dump(); }

ObpInstance right_representative(const ObpInstance& inst, Side side) {
  return side == Side::Right ? inst : invert_obp(inst);
}

struct Corpus {
  std::vector<ObpInstance> admissible;
  std::vector<Side> sides;
  // Candidates passing conditions (i)-(iv), with the verdict of (v).
  std::vector<std::pair<ObpInstance, AdmissibilityReport>> combinatorial;
  std::size_t candidates = 0;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus out;
    fixtures::for_each_candidate(kCorpusMaxN, kCorpusMaxK, [&](const ObpInstance& inst) {
      ++out.candidates;
      const Combinatorics comb(inst);
      auto report = check_admissible(comb);
      if (report.cover.pass && report.first_return.pass && report.irreducible.pass && report.top_bottom.pass)
        out.combinatorial.emplace_back(inst, report);
      if (report.overall) {
        out.admissible.push_back(inst);
        out.sides.push_back(*report.side);
      }
    });
    return out;
  }();
  return c;
}

// 1
Outcome worked_example_exactness() {
  Outcome o;
  const Combinatorics c(fixtures::worked_example());
  if (fixtures::to_vector(c.obp.tau.images()) != fixtures::worked_example_tau()) o.fail("tau table differs");
  const std::vector<std::vector<int>> orbits{
      {1, 19, 15, 11}, {2, 20, 16, 12, 5, 7, 9}, {3, 21, 17, 13, 6, 8}, {4, 22, 18, 14, 10}};
  if (c.dec.orbits != orbits) o.fail("orbits differ");
  if (c.dec.tau_prime != std::vector<int>{4, 2, 1, 3}) o.fail("first return differs from sigma");
  const auto r = check_admissible(c);
  if (!r.overall) o.fail("not admissible");
  if (!r.side || *r.side != Side::Left) o.fail("side is not left");
  if (o.pass) o.detail = "tau, orbits, first return, side left";
  return o;
}

// 2
Outcome matrix_identities() {
  Outcome o;
  const std::vector<std::vector<std::int64_t>> worked{{1, 0, 1, 2}, {1, 2, 2, 2}, {1, 1, 2, 2}, {1, 0, 1, 3}};
  const std::vector<std::vector<std::int64_t>> figure{{1, 1, 1, 0}, {2, 2, 1, 1}, {1, 1, 2, 0}, {2, 1, 0, 2}};
  const std::pair<ObpInstance, std::vector<std::vector<std::int64_t>>> cases[] = {
      {fixtures::worked_example(), worked}, {fixtures::figure_instance(), figure}};
  for (const auto& [inst, pinned] : cases) {
    std::vector<int> sigma(inst.sigma().images().begin(), inst.sigma().images().end());
    std::vector<int> k(inst.k().begin(), inst.k().end());
    if (oracle::lay_out(sigma, k).matrix != pinned) o.fail("orbit-counting oracle disagrees with pinned matrix");
    const Combinatorics c(inst);
    const auto a = build_matrix(c.dec, c.blocks);
    if (fixtures::rows(a) != pinned) o.fail("built matrix differs for " + describe(inst));
    for (int i = 1; i <= a.n(); ++i) {
      if (a.row_sums()[i - 1] != c.dec.length(i)) o.fail("row sum differs from m");
      if (a.column_sums()[i - 1] != inst.k(i)) o.fail("column sum differs from k");
    }
  }
  if (o.pass) o.detail = "both matrices pinned, row sums m, column sums k";
  return o;
}

// 3
Outcome perron_residuals() {
  Outcome o;
  double worst = 0.0;
  for (const auto& inst : corpus().admissible) {
    const Combinatorics c(inst);
    const auto pd = perron(build_matrix(c.dec, c.blocks));
    worst = std::max({worst, pd.residual_l, pd.residual_h});
    if (pd.residual_l > kResidualTolerance || pd.residual_h > kResidualTolerance)
      o.fail("residual too large for " + describe(inst));
  }
  double worst_oracle = 0.0;
  for (const auto& inst : {fixtures::worked_example(), fixtures::figure_instance()}) {
    const Combinatorics c(inst);
    const auto a = build_matrix(c.dec, c.blocks);
    const double exact = oracle::largest_root_double(fixtures::rows(a));
    const double rel = std::abs(perron(a).lambda - exact) / exact;
    worst_oracle = std::max(worst_oracle, rel);
    if (rel > kOracleTolerance) o.fail("lambda disagrees with exact oracle for " + describe(inst));
  }
  if (o.pass) {
    std::ostringstream s;
    s << corpus().admissible.size() << " instances, worst residual " << worst << ", oracle rel. error "
      << worst_oracle;
    o.detail = s.str();
  }
  return o;
}

// 4
Outcome dilatation_bounds() {
  Outcome o;
  for (const auto& inst : corpus().admissible) {
    const Combinatorics c(inst);
    const auto pd = perron(build_matrix(c.dec, c.blocks));
    const auto b = check_lambda_bounds(pd, inst.k(), c.dec.m);
    if (!b.pass()) o.fail(std::string(to_string(b.status)) + " for " + describe(inst));
  }
  if (o.pass) o.detail = std::to_string(corpus().admissible.size()) + " instances strictly inside both bounds";
  return o;
}

// 5
Outcome edge_identities() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t idx = 0; idx < corpus().admissible.size(); ++idx) {
    const auto right = right_representative(corpus().admissible[idx], corpus().sides[idx]);
    try {
      const Surface s(right, Normalization::SumHOne);
      const auto& e = s.edges();
      const auto& sigma = right.sigma();
      const Permutation inv = sigma.inverse();
      const int n = right.n();
      const double scale = s.scale();
      auto note = [&](double err) { worst = std::max(worst, err / scale); };
      for (int i = 1; i <= n - 1; ++i) {
        note(std::abs(e.x_at(i) + e.y_at(sigma(i + 1) - 1) - s.l(i + 1)));
        note(std::abs(e.x_at(i) + e.y_at(sigma(i)) - s.l(i)));
      }
      note(std::abs(e.y_at(sigma(n)) - e.y_at(n) - s.l(n)));
      note(std::abs(e.y_at(sigma(1) - 1) - s.l(1)));
      note(std::abs(e.x_at(inv(1) - 1) - s.l(inv(1))));
    } catch (const Error& err) {
      o.fail(std::string("construction failed for ") + describe(right) + ": " + err.what());
    }
  }
  if (worst > kEdgeTolerance) o.fail("worst relative edge error " + std::to_string(worst));
  if (o.pass) {
    std::ostringstream s;
    s << "worst relative error " << worst;
    o.detail = s.str();
  }
  return o;
}

// 6
Outcome symplectic_identity() {
  Outcome o;
  for (const auto& inst : corpus().admissible) {
    const Combinatorics c(inst);
    if (!symplectic_check(build_matrix(c.dec, c.blocks), intersection_form(inst.sigma())).pass)
      o.fail("A S A^T != S for " + describe(inst));
  }
  if (o.pass) o.detail = "exact on " + std::to_string(corpus().admissible.size()) + " instances";
  return o;
}

// 7
Outcome topology_counts() {
  Outcome o;
  auto check = [&](const ObpInstance& right) -> std::optional<SingularityData> {
    try {
      const auto sd = singularity_classes(right);
      const int n = right.n();
      int sum = 0;
      for (int p : sd.multiplicities) sum += p + 1;
      if (sum != n - 1) o.fail("sum (p+1) != n-1 for " + describe(right));
      if (n != 2 * sd.genus + sd.nu - 1) o.fail("n != 2g + nu - 1 for " + describe(right));
      if (4 * sd.genus < n + 3 || 2 * sd.genus > n) o.fail("genus out of range for " + describe(right));
      return sd;
    } catch (const Error& e) {
      o.fail(std::string(e.what()) + " for " + describe(right));
      return std::nullopt;
    }
  };
  for (std::size_t idx = 0; idx < corpus().admissible.size(); ++idx)
    check(right_representative(corpus().admissible[idx], corpus().sides[idx]));

  const auto worked = check(invert_obp(fixtures::worked_example()));
  if (!worked || worked->genus != 2 || worked->nu != 1 || worked->stratum != std::vector<int>{2})
    o.fail("worked example is not genus 2 with one zero of order 2");

  const auto seven = fixtures::seven_rectangle_instance();
  const auto r7 = check_admissible(seven);
  if (!r7.overall) {
    o.fail("pinned 7-rectangle instance is not admissible");
  } else {
    const auto sd = check(right_representative(seven, *r7.side));
    if (!sd || sd->genus != 3) o.fail("7-rectangle instance is not genus 3");
  }
  if (o.pass) o.detail = "corpus counts hold; worked example H(2), g=2; n=7 instance " + describe(seven) + " g=3";
  return o;
}

// 8
Outcome fake_point_equivalence() {
  Outcome o;
  std::size_t passes = 0;
  for (const auto& [inst, report] : corpus().combinatorial) {
    const auto right = right_representative(inst, *report.side);
    const auto classes = singularity_partition(right.sigma());
    const bool all_big =
        std::all_of(classes.begin(), classes.end(), [](const std::vector<int>& c) { return c.size() >= 2; });
    if (report.no_fake->pass) ++passes;
    if (report.no_fake->pass != all_big) o.fail("counterexample " + describe(inst));
  }
  if (o.pass) {
    o.detail = std::to_string(corpus().combinatorial.size()) + " instances pass (i)-(iv), " + std::to_string(passes) +
               " pass (v), 0 counterexamples";
  }
  return o;
}

// 9
Outcome map_verification() {
  Outcome o;
  const char* wanted[] = {"fixes_z0", "fixes_singularities", "gluing_compatible", "strand_partition"};
  for (std::size_t idx = 0; idx < corpus().admissible.size(); ++idx) {
    const auto right = right_representative(corpus().admissible[idx], corpus().sides[idx]);
    const Surface s(right, Normalization::SumHOne);
    const auto z0 = s.apply_map({1, 0.0, 0.0});
    if (z0.rect != 1 || z0.u != 0.0 || z0.v != 0.0) o.fail("z_0 moves for " + describe(right));
    for (const auto& c : verify_surface(s, 100))
      for (const char* name : wanted)
        if (c.name == name && !c.pass) o.fail(c.name + " fails for " + describe(right));
  }
  if (o.pass) o.detail = "z_0 fixed exactly, singularities fixed, 100 samples per edge glue, strand heights add up";
  return o;
}

// 10
Outcome inverse_consistency() {
  Outcome o;
  for (std::size_t idx = 0; idx < corpus().admissible.size(); ++idx) {
    const auto& inst = corpus().admissible[idx];
    const auto inverse = invert_obp(inst);
    const Combinatorics c(inst), ci(inverse);
    const auto a = build_matrix(c.dec, c.blocks);
    const auto ai = build_matrix(ci.dec, ci.blocks);
    if (conjugate_matrix(a, inst.sigma()) != ai) o.fail("A_inverse != P A P^-1 for " + describe(inst));
    const auto ri = check_admissible(ci);
    if (!ri.overall || *ri.side != opposite(corpus().sides[idx])) o.fail("inverse side wrong for " + describe(inst));
    const double l1 = perron(a).lambda, l2 = perron(ai).lambda;
    if (std::abs(l1 - l2) > kInverseLambdaTolerance * l1) o.fail("lambda changes under inversion");
    // Topology from each side: the partition, and the rank of each
    // intersection form (rank 2g).
    const auto right = right_representative(inst, corpus().sides[idx]);
    const auto sd = singularity_classes(right);
    for (const auto& sigma : {inst.sigma(), inverse.sigma()}) {
      const auto s = intersection_form(sigma);
      std::vector<std::vector<double>> m(s.n(), std::vector<double>(s.n()));
      for (int i = 1; i <= s.n(); ++i)
        for (int j = 1; j <= s.n(); ++j) m[i - 1][j - 1] = s(i, j);
      if (oracle::rank(m) != 2 * sd.genus) o.fail("rank of S is not 2g for " + describe(inst));
    }
    const int nu_from_rank = inst.n() + 1 - 2 * sd.genus;
    if (nu_from_rank != sd.nu) o.fail("nu disagrees with rank for " + describe(inst));
  }
  if (o.pass) o.detail = "matrix conjugation exact, sides swap, lambda/g/nu/stratum invariant";
  return o;
}

std::string run_cli(const std::string& args) {
  const std::string cmd = std::string(OBP_CLI) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return out;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  pclose(pipe);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 11
Outcome determinism() {
  Outcome o;
  const auto one = run_cli("search --n 4 --kmax 18 --workers 1");
  const auto eight = run_cli("search --n 4 --kmax 18 --workers 8");
  if (one.empty()) o.fail("search produced no output");
  if (one != eight) o.fail("1 and 8 workers differ");

  SvgOptions highlight;
  highlight.highlight_orbit = 4;
  const std::pair<std::string, std::string> goldens[] = {
      {"figure_orbit4.svg", render_svg(fixtures::figure_instance(), highlight)},
      {"worked_example.svg", render_svg(fixtures::worked_example())},
  };
  for (const auto& [name, rendered] : goldens) {
    const auto golden = read_file(std::string(GOLDEN_DIR) + "/" + name);
    if (golden.empty()) o.fail("missing golden " + name);
    else if (golden != rendered) o.fail("golden " + name + " differs");
  }
  if (read_file(std::string(GOLDEN_DIR) + "/figure_orbit4.svg") !=
      run_cli("svg --highlight-orbit 4 " + std::string(GOLDEN_DIR) + "/figure.json"))
    o.fail("CLI svg differs from golden");
  if (o.pass) {
    const auto lines = std::count(one.begin(), one.end(), '\n');
    o.detail = std::to_string(lines) + " identical JSON lines; 2 SVG goldens byte-identical";
  }
  return o;
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"worked example exactness", worked_example_exactness},
      {"transition matrix identities", matrix_identities},
      {"Perron residuals and exact dilatation", perron_residuals},
      {"dilatation bounds", dilatation_bounds},
      {"edge length identities", edge_identities},
      {"symplectic identity", symplectic_identity},
      {"topology counts", topology_counts},
      {"fake point equivalence", fake_point_equivalence},
      {"map verification", map_verification},
      {"inverse consistency", inverse_consistency},
      {"determinism", determinism},
  };

  const auto t0 = Clock::now();
  const auto& c = corpus();
  std::printf("corpus: n <= %d, K <= %d: %zu candidates past quick filters, %zu pass (i)-(iv), %zu admissible "
              "(%.2f s)\n",
              kCorpusMaxN, kCorpusMaxK, c.candidates, c.combinatorial.size(), c.admissible.size(),
              std::chrono::duration<double>(Clock::now() - t0).count());

  int failures = 0;
  int id = 0;
  for (const auto& [title, fn] : criteria) {
    ++id;
    const auto start = Clock::now();
    const auto outcome = fn();
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("%s  %2d  %-40s %6.2fs  %s\n", outcome.pass ? "PASS" : "FAIL", id, title, secs,
                outcome.detail.c_str());
    if (!outcome.pass) ++failures;
  }
  std::printf("%d of %d criteria passed\n", id - failures, id);
  return failures;
}
