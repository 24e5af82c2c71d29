#include "rmono/report.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace rmono;

namespace {

enum Exit { kOk = 0, kNumerical = 2, kInvalid = 3 };

void write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + (dir / name).string());
  out << text;
  std::cout << "wrote " << (dir / name).string() << "\n";
}

void print_solve(Session& s) {
  const auto& b = s.base();
  std::cout << s.system_name() << ": " << b.degree() << " solutions, " << b.num_real() << " real\n";
  for (std::size_t k = 0; k < b.labels.size(); ++k) {
    std::cout << "  x(" << k + 1 << ") =";
    for (Eigen::Index i = 0; i < b.labels[k].size(); ++i) std::cout << " " << b.labels[k][i];
    std::cout << "\n";
  }
}

void print_census(Session& s) {
  const auto& m = s.regions();
  std::cout << "count  regions\n";
  for (const auto& [count, n] : m.census()) std::cout << (count == kSingular ? "sing" : std::to_string(count)) << "\t" << n << "\n";
  std::cout << "base region " << m.base_region << " (count " << m.regions.at(m.base_region).count << ")\n";
}

void run(const std::string& cmd, Session& s, const fs::path& out) {
  if (cmd == "solve" || cmd == "report") {
    print_solve(s);
    write_file(out, "solutions.json", dump_json(s.solve_json()));
  }
  if (cmd == "cgroup" || cmd == "report") {
    const auto& g = s.cgroup();
    std::cout << "complex monodromy group order " << g.order() << (g.is_full_symmetric() ? " (full symmetric)" : "")
              << "\n";
    write_file(out, "cgroup.json", dump_json(s.cgroup_json()));
  }
  if (cmd == "regions" || cmd == "report") {
    print_census(s);
    write_file(out, "regions.json", dump_json(s.regions_json()));
    write_file(out, "regions.svg", s.regions_svg());
  }
  if (cmd == "rstruct" || cmd == "report") {
    const std::string text = s.rstruct_text();
    std::cout << text;
    write_file(out, "rstruct.json", dump_json(s.rstruct_json()));
    write_file(out, "rstruct.txt", text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real monodromy of parameterized polynomial systems"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1, 1);

  RunConfig cfg;
  std::string out = ".";

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve", "Solve at the base point and label the real solutions"},
      {"cgroup", "Complex monodromy group at the base point"},
      {"regions", "Region map of real-solution counts (JSON and SVG)"},
      {"rstruct", "Real monodromy structure G_1..G_R"},
      {"report", "Run every stage and write all artifacts"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--system", cfg.system, "Builtin name or DSL file")->capture_default_str();
    sub->add_option("--base", cfg.base, "Base parameter values, comma separated")->delimiter(',');
    sub->add_option("--window", cfg.window, "Window lows then highs, comma separated")->delimiter(',');
    sub->add_option("--res", cfg.res, "Lattice nodes per axis (one value or one per axis)")->delimiter(',');
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--tol-real", cfg.tol_real, "Imaginary-part tolerance for realness");
    sub->add_option("--tol-sing", cfg.tol_sing, "Smallest singular value treated as singular");
    sub->add_option("--tol-match", cfg.match_radius, "Endpoint matching radius");
    sub->add_option("--out", out, "Output directory")->capture_default_str();
    sub->add_option("--labels", cfg.labels_file, "JSON file of real solutions in label order");
    sub->add_option("--loops", cfg.loops_file, "JSON file of extra loops at the base point");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    Session s(cfg);
    run(app.get_subcommands().front()->get_name(), s, out);
  } catch (const ParseError& e) {
    std::cerr << "invalid system: " << e.what() << "\n";
    return kInvalid;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const DimensionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
