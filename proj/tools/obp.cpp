// obp: command-line front end for admissibility, construction, rendering and
// search of ordered block permutations.
//
// Exit codes: 0 ok, 1 input error, 2 inadmissible, 3 internal invariant failure.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "obp/obp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInadmissible = 2;
constexpr int kExitInvariant = 3;

obp::ObpInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw obp::Error(obp::ErrorCode::ParseError, "cannot read " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return obp::parse_instance(text);
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw obp::Error(obp::ErrorCode::ParseError, "cannot write " + path);
  out << content;
}

int cmd_check(const std::string& path, const std::string& output) {
  const auto inst = read_instance(path);
  const auto report = obp::check_admissible(inst);
  obp::json doc{{"schema", obp::kReportSchema}, {"input", obp::to_json(inst)}, {"admissibility", obp::to_json(report)}};
  write_output(output, doc.dump(2) + "\n");
  return report.overall ? kExitOk : kExitInadmissible;
}

int cmd_build(const std::string& path, const std::string& normalize, const std::string& output) {
  const auto inst = read_instance(path);
  const auto norm = normalize == "max_l" ? obp::Normalization::MaxLOne : obp::Normalization::SumHOne;
  const auto report = obp::build_report(inst, norm);
  write_output(output, report.document.dump(2) + "\n");
  if (!report.admissible) return kExitInadmissible;
  return report.invariants_ok ? kExitOk : kExitInvariant;
}

int cmd_svg(const std::string& path, int highlight, const std::string& output) {
  const auto inst = read_instance(path);
  if (!obp::check_admissible(inst).overall) {
    std::cerr << "obp: instance is not admissible, nothing to draw\n";
    return kExitInadmissible;
  }
  obp::SvgOptions opt;
  if (highlight > 0) opt.highlight_orbit = highlight;
  write_output(output, obp::render_svg(inst, opt));
  return kExitOk;
}

int cmd_invert(const std::string& path, const std::string& output) {
  const auto inst = read_instance(path);
  write_output(output, obp::to_json(obp::invert_obp(inst)).dump() + "\n");
  return kExitOk;
}

int cmd_search(int n, int k_max, bool min_dilatation, int workers, const std::string& output) {
  if (n < 2 || k_max < n) {
    std::cerr << "obp: search needs --n >= 2 and --kmax >= n\n";
    return kExitInput;
  }
  obp::SearchSpec spec;
  spec.n = n;
  spec.k_max = k_max;
  spec.workers = workers;
  std::ostream& summary = (output.empty() || output == "-") ? std::cerr : std::cout;

  if (min_dilatation) {
    try {
      const auto best = obp::min_dilatation(spec);
      write_output(output, obp::to_json(best).dump() + "\n");
      summary << obp::json{{"min_dilatation", best.lambda}}.dump() << "\n";
      return kExitOk;
    } catch (const obp::Error& e) {
      if (e.code() != obp::ErrorCode::EmptySearchSpace) throw;
      write_output(output, "");
      summary << obp::json{{"min_dilatation", nullptr}}.dump() << "\n";
      return kExitInadmissible;
    }
  }

  const auto result = obp::enumerate(spec);
  std::string lines;
  for (const auto& r : result.results) lines += obp::to_json(r).dump() + "\n";
  write_output(output, lines);
  summary << obp::to_json(result.counters).dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Admissible ordered block permutations and their pseudo-Anosov maps"};
  app.require_subcommand(1);

  std::string path, output, normalize = "sum_h";
  int highlight = 0;
  int n = 0, k_max = 0;
  bool min_dilatation = false;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  auto* check = app.add_subcommand("check", "Decide admissibility of an instance file");
  check->add_option("path", path, "instance JSON file")->required();
  check->add_option("-o,--output", output, "write the report here instead of stdout");

  auto* build = app.add_subcommand("build", "Construct the surface and map, write the full report");
  build->add_option("path", path, "instance JSON file")->required();
  build->add_option("--normalize", normalize, "eigenvector normalization")
      ->check(CLI::IsMember({"sum_h", "max_l"}));
  build->add_option("-o,--output", output, "report file");

  auto* svg = app.add_subcommand("svg", "Draw the rectangular decomposition");
  svg->add_option("path", path, "instance JSON file")->required();
  svg->add_option("--highlight-orbit", highlight, "shade the strands of this orbit")->check(CLI::PositiveNumber);
  svg->add_option("-o,--output", output, "SVG file");

  auto* search = app.add_subcommand("search", "Enumerate admissible instances");
  search->add_option("--n", n, "number of rectangles")->required();
  search->add_option("--kmax", k_max, "largest total strand count")->required();
  search->add_flag("--min-dilatation", min_dilatation, "emit only the instance of least dilatation");
  search->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  search->add_option("-o,--output", output, "JSON-lines file");

  auto* invert = app.add_subcommand("invert", "Write the inverse instance");
  invert->add_option("path", path, "instance JSON file")->required();
  invert->add_option("-o,--output", output, "instance file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*check) return cmd_check(path, output);
    if (*build) return cmd_build(path, normalize, output);
    if (*svg) return cmd_svg(path, highlight, output);
    if (*search) return cmd_search(n, k_max, min_dilatation, workers, output);
    if (*invert) return cmd_invert(path, output);
  } catch (const obp::Error& e) {
    std::cerr << "obp: " << e.what() << "\n";
    return e.code() == obp::ErrorCode::ParseError || e.code() == obp::ErrorCode::InvalidInstance ? kExitInput
                                                                                                 : kExitInvariant;
  }
  return kExitInput;
}
