#include "rmono/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rmono {

std::string version_string() { return "0.1.0"; }

namespace {

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json cvec_json(const CVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v[i]));
  return a;
}

Json rvec_json(const RVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json one_based(const std::vector<int>& t) {
  Json a = Json::array();
  for (int v : t) a.push_back(v + 1);
  return a;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

Complex coordinate(const Json& c) {
  if (c.is_number()) return {c.get<double>(), 0.0};
  if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number())
    return {c[0].get<double>(), c[1].get<double>()};
  throw InvalidArgument("coordinate must be a number or a [re, im] pair");
}

void dump(const Json& j, std::string& out, int indent) {
  const std::string pad(indent, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + "  " + Json(k).dump() + ": ";
        dump(v, out, indent + 2);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      // Scalar rows, and up to four short scalar rows (points, pairs), stay on one line.
      auto scalar_row = [](const Json& a) {
        return std::none_of(a.begin(), a.end(), [](const Json& v) { return v.is_structured(); });
      };
      bool flat = scalar_row(j);
      if (!flat && j.size() <= 4)
        flat = std::all_of(j.begin(), j.end(), [&](const Json& v) { return v.is_array() && v.size() <= 4 && scalar_row(v); });
      if (flat) {
        out += "[";
        bool first = true;
        for (const auto& v : j) {
          if (!first) out += ", ";
          first = false;
          dump(v, out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad + "  ";
        dump(v, out, indent + 2);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double d = j.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

Json strip_timing(Json j) {
  if (j.is_object()) j.erase("wall_time_s");
  return j;
}

Json to_json(const ParamPath& path) {
  Json w = Json::array();
  for (const auto& p : path.waypoints) w.push_back(path.is_real() ? rvec_json(p.real()) : cvec_json(p));
  Json j = {{"waypoints", std::move(w)}};
  if (!path.detour_flags.empty()) {
    Json f = Json::array();
    for (bool b : path.detour_flags) f.push_back(b);
    j["detour_flags"] = std::move(f);
  }
  return j;
}

Json to_json(const PartialPermutation& p) {
  Json a = Json::array();
  for (int i = 0; i < p.source_size(); ++i)
    if (p.defined(i)) a.push_back(Json::array({i + 1, p(i) + 1}));
  return a;
}

Json to_json(const std::vector<GeneratorRef>& word) {
  Json a = Json::array();
  for (const auto& g : word)
    a.push_back({{"kind", g.kind == GeneratorRef::Kind::crossing ? "crossing" : "loop"},
                 {"index", g.index},
                 {"inverse", g.inverse}});
  return a;
}

std::vector<RVector> read_labels_file(const std::string& path) {
  const Json j = read_json_file(path);
  if (!j.is_array()) throw InvalidArgument(path + ": expected an array of coordinate tuples");
  std::vector<RVector> out;
  for (const auto& row : j) {
    if (!row.is_array() || row.empty()) throw InvalidArgument(path + ": each label must be a coordinate tuple");
    RVector x(static_cast<Eigen::Index>(row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!row[i].is_number()) throw InvalidArgument(path + ": label coordinates must be real numbers");
      x[static_cast<Eigen::Index>(i)] = row[i].get<double>();
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<ParamPath> read_loops_file(const std::string& path) {
  Json j = read_json_file(path);
  if (j.is_object() && j.contains("loops")) j = j["loops"];
  if (!j.is_array()) throw InvalidArgument(path + ": expected an array of loops");
  std::vector<ParamPath> out;
  for (const auto& loop : j) {
    if (!loop.is_array() || loop.size() < 2) throw InvalidArgument(path + ": a loop needs at least two waypoints");
    std::vector<CPoint> pts;
    for (const auto& w : loop) {
      if (!w.is_array() || w.empty()) throw InvalidArgument(path + ": waypoint must be an array");
      CPoint p(static_cast<Eigen::Index>(w.size()));
      for (std::size_t i = 0; i < w.size(); ++i) p[static_cast<Eigen::Index>(i)] = coordinate(w[i]);
      pts.push_back(std::move(p));
    }
    ParamPath pp(std::move(pts));
    pp.validate();
    out.push_back(std::move(pp));
  }
  return out;
}

std::map<std::pair<std::vector<int>, std::vector<int>>, std::vector<GeneratorRef>> entry_witnesses(
    const RealStructureResult& rs) {
  std::map<std::pair<std::vector<int>, std::vector<int>>, std::vector<GeneratorRef>> out;
  for (const auto& [pi, word] : rs.groupoid.witness) {
    const auto dom = pi.domain();
    const int n = static_cast<int>(dom.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> q, img;
      for (int b = 0; b < n; ++b)
        if (mask & (1u << b)) {
          q.push_back(dom[b]);
          img.push_back(pi(dom[b]));
        }
      if (q == img) continue;
      out.try_emplace({q, img}, word);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// RunConfig / Session

Json RunConfig::echo() const {
  Json j;
  j["system"] = system;
  j["base"] = base;
  j["window"] = window;
  j["res"] = res;
  j["seed"] = seed;
  j["tol_real"] = tol_real ? Json(*tol_real) : Json(nullptr);
  j["tol_sing"] = tol_sing ? Json(*tol_sing) : Json(nullptr);
  j["match_radius"] = match_radius ? Json(*match_radius) : Json(nullptr);
  j["labels"] = labels_file;
  j["loops"] = loops_file;
  return j;
}

Session::Session(RunConfig cfg) : cfg_(std::move(cfg)), start_(std::chrono::steady_clock::now()) {
  bool is_builtin = false;
  for (Builtin b : all_builtins())
    if (builtin_name(b) == cfg_.system) is_builtin = true;
  if (is_builtin) {
    builtin_ = builtin_from_name(cfg_.system);
    sys_.emplace(builtin(*builtin_));
    name_ = cfg_.system;
  } else {
    sys_.emplace(parse_system(read_file(cfg_.system)));
    name_ = cfg_.system;
  }
  const int P = sys_->num_params();

  if (cfg_.base.empty()) {
    if (!builtin_) throw InvalidArgument("--base is required for a DSL system");
    base_point_ = builtin_base(*builtin_).real();
  } else {
    if (static_cast<int>(cfg_.base.size()) != P)
      throw InvalidArgument("--base needs " + std::to_string(P) + " values");
    base_point_ = Eigen::Map<const RVector>(cfg_.base.data(), P);
  }
  if (!base_point_.allFinite()) throw InvalidArgument("--base must be finite");

  if (!cfg_.window.empty() && static_cast<int>(cfg_.window.size()) != 2 * P)
    throw InvalidArgument("--window needs " + std::to_string(2 * P) + " values (lows then highs)");
  if (cfg_.res.size() > 2) throw InvalidArgument("--res takes one or two values");
  for (int r : cfg_.res)
    if (r < 21) throw InvalidArgument("--res must be at least 21 per axis");
  for (auto t : {cfg_.tol_real, cfg_.tol_sing, cfg_.match_radius})
    if (t && !(*t > 0.0)) throw InvalidArgument("tolerances must be positive");
}

Window Session::window() const {
  const int P = sys_->num_params();
  if (P < 1 || P > 2) throw InvalidArgument("region maps need one or two parameters");
  Window w;
  if (cfg_.window.empty()) {
    if (!builtin_) throw InvalidArgument("--window is required for a DSL system");
    w = builtin_window(*builtin_);
  } else {
    w.lo.assign(cfg_.window.begin(), cfg_.window.begin() + P);
    w.hi.assign(cfg_.window.begin() + P, cfg_.window.end());
  }
  for (int a = 0; a < P; ++a)
    if (!(w.lo[a] < w.hi[a])) throw InvalidArgument("--window needs lo < hi on every axis");
  if (!w.contains(base_point_)) throw InvalidArgument("--window must contain the base point");
  return w;
}

std::pair<int, int> Session::resolution() const {
  const int P = sys_->num_params();
  int n1 = cfg_.res.empty() ? 201 : cfg_.res[0];
  int n2 = cfg_.res.size() == 2 ? cfg_.res[1] : n1;
  if (P == 1) n2 = 1;
  return {n1, n2};
}

TrackOptions Session::track_options() const {
  TrackOptions t;
  if (cfg_.tol_sing) t.singular_svd_tol = *cfg_.tol_sing;
  return t;
}

RmsOptions Session::rms_options() const {
  RmsOptions o;
  o.track = track_options();
  if (cfg_.match_radius) o.match_radius = *cfg_.match_radius;
  return o;
}

const SolutionSet& Session::base() {
  if (!base_) {
    SolveOptions so;
    so.track = track_options();
    auto set = solve_at(*sys_, base_point_.cast<Complex>(), cfg_.seed, so);
    set = classify_real(std::move(set), *sys_, cfg_.tol_real.value_or(1e-6));
    std::optional<std::vector<RVector>> override;
    if (!cfg_.labels_file.empty()) override = read_labels_file(cfg_.labels_file);
    else if (builtin_ && cfg_.base.empty()) override = builtin_label_override(*builtin_);
    base_ = assign_labels(std::move(set), override);
  }
  return *base_;
}

const MonodromyGroup& Session::cgroup() {
  if (!cgroup_) {
    MonodromyOptions mo;
    mo.track = track_options();
    if (cfg_.match_radius) mo.match_radius = *cfg_.match_radius;
    cgroup_.emplace(monodromy_group(*sys_, base(), cfg_.seed + 1, mo));
  }
  return *cgroup_;
}

const RegionMapResult& Session::regions() {
  if (!map_) {
    const Window w = window();
    const auto [n1, n2] = resolution();
    RegionMapOptions ro;
    ro.scan.solve.track = track_options();
    if (cfg_.tol_real) ro.scan.real_tol = *cfg_.tol_real;
    map_.emplace(build_region_map(*sys_, base(), w, n1, n2, cfg_.seed + 4, ro));
  }
  return *map_;
}

const RealStructureResult& Session::rstruct() {
  if (!rs_) {
    std::vector<ParamPath> loops;
    if (!cfg_.loops_file.empty()) loops = read_loops_file(cfg_.loops_file);
    for (const auto& l : loops) {
      if (l.front().size() != sys_->num_params()) throw InvalidArgument("loop waypoints have the wrong dimension");
      if ((l.front() - base_point_.cast<Complex>()).norm() > 1e-9 || (l.back() - l.front()).norm() > 1e-9)
        throw InvalidArgument("user loops must start and end at the base point");
    }
    const auto& map = regions();
    rs_.emplace(real_structure(*sys_, map, base(), cfg_.seed + 6, loops, rms_options()));
  }
  return *rs_;
}

Json Session::header(const std::string& command) const {
  Json j;
  j["schema"] = kSchemaVersion;
  j["tool"] = "rmono";
  j["version"] = version_string();
  j["command"] = command;
  j["seed"] = cfg_.seed;
  j["config"] = cfg_.echo();
  j["system"] = {{"name", name_},
                 {"variables", sys_->var_names()},
                 {"parameters", sys_->param_names()},
                 {"degrees", sys_->degrees()},
                 {"total_degree_bound", sys_->total_degree_bound()},
                 {"dsl", print_system(*sys_)}};
  j["base"] = rvec_json(base_point_);
  return j;
}

void Session::finish(Json& j) const {
  j["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

Json Session::solve_json() {
  const auto& s = base();
  Json j = header("solve");
  j["degree"] = s.degree();
  j["num_real"] = s.num_real();
  Json sols = Json::array();
  for (int i = 0; i < s.degree(); ++i) {
    const CPoint& x = s.all_complex[i];
    const CPoint p = s.param;
    Json e;
    e["index"] = i + 1;
    e["x"] = cvec_json(x);
    int label = 0;
    for (std::size_t k = 0; k < s.label_index.size(); ++k)
      if (s.label_index[k] == i) label = static_cast<int>(k) + 1;
    e["real"] = label > 0;
    e["label"] = label > 0 ? Json(label) : Json(nullptr);
    e["residual"] = evaluate(*sys_, label > 0 ? CPoint(s.labels[label - 1].cast<Complex>()) : x, p).norm();
    e["min_sv"] = jacobian_singular_values(*sys_, x, p).min;
    sols.push_back(std::move(e));
  }
  j["solutions"] = std::move(sols);
  Json labels = Json::array();
  for (std::size_t k = 0; k < s.labels.size(); ++k)
    labels.push_back({{"label", k + 1}, {"index", s.label_index[k] + 1}, {"x", rvec_json(s.labels[k])}});
  j["labels"] = std::move(labels);
  finish(j);
  return j;
}

Json Session::cgroup_json() {
  const auto& g = cgroup();
  Json j = header("cgroup");
  j["degree"] = g.degree();
  j["order"] = g.order();
  j["full_symmetric"] = g.is_full_symmetric();
  Json gens = Json::array();
  for (const auto& gen : g.generators()) gens.push_back({{"cycles", gen.perm.cycles()}, {"loop", to_json(gen.loop)}});
  j["generators"] = std::move(gens);
  if (g.order() <= 1000) {
    Json el = Json::array();
    for (const auto& p : g.elements()) el.push_back(p.cycles());
    j["elements"] = std::move(el);
  }
  finish(j);
  return j;
}

Json Session::regions_json() {
  const auto& m = regions();
  const Grid& g = m.grid;
  Json j = header("regions");
  j["window"] = {{"lo", g.window.lo}, {"hi", g.window.hi}};
  j["resolution"] = {g.n1, g.n2};
  j["degree"] = g.degree;
  Json census = Json::array();
  for (const auto& [count, n] : m.census()) census.push_back({{"count", count}, {"regions", n}});
  j["census"] = std::move(census);
  j["base_region"] = m.base_region;
  Json grid;
  grid["counts"] = g.counts;
  Json sv = Json::array();
  for (double v : g.min_sv) sv.push_back(v);
  grid["min_sv"] = std::move(sv);
  grid["region_of"] = m.region_of;
  Json diag = Json::array();
  for (auto d : g.diagonal) diag.push_back(static_cast<int>(d));
  grid["diagonal"] = std::move(diag);
  Json cut = Json::array();
  for (auto c : g.cut) cut.push_back(static_cast<int>(c));
  grid["cut"] = std::move(cut);
  j["grid"] = std::move(grid);

  auto loops_json = [](const std::vector<EncirclingLoop>& v) {
    Json a = Json::array();
    for (const auto& h : v)
      a.push_back({{"center", rvec_json(h.center)},
                   {"component_size", h.component.size()},
                   {"puncture", h.puncture},
                   {"loop", to_json(h.loop)}});
    return a;
  };
  Json regs = Json::array();
  for (const auto& r : m.regions) {
    Json ip = Json::array();
    for (const auto& p : r.intermediate_points) ip.push_back(rvec_json(p));
    regs.push_back({{"id", r.id},
                    {"count", r.count},
                    {"cells", r.cells.size()},
                    {"marked_point", rvec_json(r.marked_point)},
                    {"intermediate_points", std::move(ip)},
                    {"holes", loops_json(r.holes)},
                    {"punctures", loops_json(r.punctures)},
                    {"skipped_holes", r.skipped_holes}});
  }
  j["regions"] = std::move(regs);
  Json sites = Json::array();
  for (const auto& s : m.sites)
    sites.push_back({{"id", s.id},
                     {"region_a", s.region_a},
                     {"region_b", s.region_b},
                     {"location", rvec_json(s.location)},
                     {"approach_a", s.approach_a},
                     {"approach_b", s.approach_b},
                     {"special", s.special},
                     {"gap", s.gap},
                     {"offset", s.offset}});
  j["sites"] = std::move(sites);
  j["adjacency"] = m.adjacency;
  finish(j);
  return j;
}

Json Session::rstruct_json() {
  const auto& rs = rstruct();
  const auto& st = rs.structure;
  Json j = header("rstruct");
  j["R"] = st.R;
  Json labels = Json::array();
  for (std::size_t r = 0; r < rs.labels.size(); ++r) {
    Json pts = Json::array();
    for (const auto& x : rs.labels[r].labels) pts.push_back(rvec_json(x));
    labels.push_back({{"region", r}, {"labels", std::move(pts)}});
  }
  j["region_labels"] = std::move(labels);
  j["count_mismatch"] = rs.count_mismatch;
  j["sites_tracked"] = rs.sites_tracked;
  j["routes_repaired"] = rs.routes_repaired;

  Json corr = Json::array();
  for (std::size_t i = 0; i < rs.correspondences.size(); ++i) {
    const auto& c = rs.correspondences[i];
    corr.push_back({{"index", i},
                    {"from_region", c.from_region},
                    {"to_region", c.to_region},
                    {"site", c.site},
                    {"map", to_json(c.map)},
                    {"path", to_json(c.witness)}});
  }
  Json loops = Json::array();
  for (std::size_t i = 0; i < rs.loops.size(); ++i) {
    const auto& l = rs.loops[i];
    loops.push_back({{"index", i},
                     {"region", l.region},
                     {"origin", l.origin},
                     {"map", to_json(l.map)},
                     {"path", to_json(l.loop)}});
  }
  j["generators"] = {{"correspondences", std::move(corr)}, {"loops", std::move(loops)}};
  j["closure_size"] = rs.groupoid.closure.size();
  j["states"] = rs.groupoid.states;

  const auto witnesses = entry_witnesses(rs);
  Json G = Json::array();
  for (int k = 1; k <= st.R; ++k) {
    Json entries = Json::array();
    for (const auto& [q, images] : st.g(k)) {
      Json imgs = Json::array();
      for (const auto& s : images) {
        Json e = {{"image", one_based(s)}};
        if (s != q) {
          auto it = witnesses.find({q, s});
          e["witness"] = it == witnesses.end() ? Json(nullptr) : to_json(it->second);
        }
        imgs.push_back(std::move(e));
      }
      entries.push_back({{"source", one_based(q)}, {"images", std::move(imgs)}});
    }
    G.push_back({{"k", k}, {"entries", std::move(entries)}});
  }
  j["G"] = std::move(G);
  Json trans = Json::array();
  for (int k = 1; k <= st.R; ++k) trans.push_back(is_k_transitive(st, k));
  j["k_transitive"] = std::move(trans);
  Json amc = Json::array();
  for (const auto& [a, b] : assembly_mode_changes(st)) amc.push_back({a + 1, b + 1});
  j["assembly_mode_changes"] = std::move(amc);
  Json part = Json::array();
  for (const auto& p : label_partition(st)) part.push_back(one_based(p));
  j["partition"] = std::move(part);
  Json grp = Json::array();
  for (const auto& p : real_monodromy_group(st)) grp.push_back(p.cycles());
  j["real_monodromy_group"] = {{"order", grp.size()}, {"elements", std::move(grp)}};
  j["listing"] = format_structure(st);
  j["completeness"] =
      "lower bound: every entry has a witness word over the generators; a missing entry is evidence at this "
      "resolution, not a proof";
  finish(j);
  return j;
}

std::string Session::rstruct_text() {
  const auto& rs = rstruct();
  const auto& st = rs.structure;
  std::ostringstream os;
  os << "system " << name_ << ", R = " << st.R << "\n";
  os << format_structure(st);
  os << "partition " << format_partition(label_partition(st)) << "\n";
  os << "k-transitive:";
  for (int k = 1; k <= st.R; ++k) os << " " << k << (is_k_transitive(st, k) ? "=yes" : "=no");
  os << "\nreal monodromy group order " << real_monodromy_group(st).size() << "\n";
  os << "assembly mode changes:";
  const auto amc = assembly_mode_changes(st);
  if (amc.empty()) os << " none";
  for (const auto& [a, b] : amc) os << " {" << a + 1 << "," << b + 1 << "}";
  os << "\ngenerators: " << rs.correspondences.size() << " crossings, " << rs.loops.size() << " loops\n";
  os << "entries are a lower bound at the chosen resolution\n";
  return os.str();
}

std::string Session::regions_svg() { return region_svg(regions()); }

// ---------------------------------------------------------------------------
// SVG

namespace {

const char* count_color(int count) {
  static const char* palette[] = {"#ffffff", "#fde0c5", "#a6d8f0", "#8fb9d9", "#7a9cc6",
                                  "#4f6fa8", "#1b2a6b", "#131f52", "#0b1238"};
  if (count == kSingular) return "#d62728";
  if (count >= 0 && count < 9) return palette[count];
  return "#000000";
}

}  // namespace

std::string region_svg(const RegionMapResult& map) {
  const Grid& g = map.grid;
  const double cell = std::max(1.0, 720.0 / g.n1);
  const double strip = g.n2 == 1 ? 40.0 : cell;
  const double W = cell * g.n1, H = strip * g.n2;
  const double legend = 28.0;
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H + legend
     << "\" shape-rendering=\"crispEdges\">\n";
  // Runs of equal count per lattice row, top row first.
  for (int j = g.n2 - 1; j >= 0; --j) {
    const double y = (g.n2 - 1 - j) * strip;
    int i = 0;
    while (i < g.n1) {
      const int c = g.counts[g.index(i, j)];
      int e = i + 1;
      while (e < g.n1 && g.counts[g.index(e, j)] == c) ++e;
      os << "<rect x=\"" << i * cell << "\" y=\"" << y << "\" width=\"" << (e - i) * cell << "\" height=\"" << strip
         << "\" fill=\"" << count_color(c) << "\"/>\n";
      i = e;
    }
  }
  auto to_px = [&](const RVector& p) {
    const double fx = (p[0] - g.window.lo[0]) / g.spacing(0);
    const double fy = g.n2 == 1 ? 0.0 : (p[1] - g.window.lo[1]) / g.spacing(1);
    return std::pair<double, double>{(fx + 0.5) * cell, g.n2 == 1 ? strip / 2 : (g.n2 - 0.5 - fy) * strip};
  };
  for (const auto& r : map.regions) {
    const auto [x, y] = to_px(r.marked_point);
    os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"#e31a1c\" stroke=\"#000000\" "
       << "stroke-width=\"0.5\"/>\n";
  }
  {
    const auto [x, y] = to_px(map.base_point);
    os << "<text x=\"" << x << "\" y=\"" << y + 4 << "\" font-size=\"14\" text-anchor=\"middle\" "
       << "fill=\"#e31a1c\">*</text>\n";
  }
  std::set<int> counts(g.counts.begin(), g.counts.end());
  double lx = 4.0;
  for (int c : counts) {
    os << "<rect x=\"" << lx << "\" y=\"" << H + 8 << "\" width=\"14\" height=\"14\" fill=\"" << count_color(c)
       << "\" stroke=\"#000000\" stroke-width=\"0.5\"/>\n";
    os << "<text x=\"" << lx + 18 << "\" y=\"" << H + 20 << "\" font-size=\"12\">"
       << (c == kSingular ? std::string("singular") : std::to_string(c) + " real") << "</text>\n";
    lx += 90.0;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace rmono
