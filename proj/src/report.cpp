#include "perco/report.hpp"

#include <cstdio>
#include <sstream>

namespace perco {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string xs_text(const Path& p) {
  std::string out;
  for (std::size_t i = 0; i < p.xs.size(); ++i) out += (i ? ";" : "") + std::to_string(p.xs[i]);
  return out;
}

json exact_field(const std::optional<Rational>& q) { return q ? json(to_string(*q)) : json(nullptr); }

}  // namespace

json to_json(const Path& p) { return json{{"m", p.m}, {"xs", p.xs}}; }

json to_json(const std::vector<Site>& sites) {
  json out = json::array();
  for (const Site& s : sites) out.push_back({s.x, s.y});
  return out;
}

json to_json(const PathDistribution& d) {
  json weights = json::array();
  for (const PathWeight& w : d.entries) weights.push_back({{"path", to_json(w.path)}, {"p", w.p}, {"exact", exact_field(w.exact)}});
  return json{{"A", to_json(d.a)},
              {"B", to_json(d.b)},
              {"levels", {d.region.first_level(), d.region.last_level()}},
              {"weights", weights}};
}

json to_json(const DominanceResult& r) {
  json out{{"holds", r.holds}, {"exact", r.exact}, {"flow", r.flow}};
  if (r.holds) {
    json c = json::array();
    for (const CouplingEntry& e : r.coupling) {
      c.push_back({{"from", to_json(e.from)}, {"to", to_json(e.to)}, {"mass", e.mass}, {"exact", exact_field(e.exact)}});
    }
    out["certificate"] = c;
  } else {
    json u = json::array();
    for (const Path& p : r.violating_up_set) u.push_back(to_json(p));
    out["violating_up_set"] = {{"paths", u}, {"lhs_mass", r.up_mu}, {"rhs_mass", r.up_nu}};
  }
  return out;
}

json to_json(const ClaimReport& r) {
  json records = json::array();
  for (const ClaimRecord& c : r.records) {
    json rec{{"inequality", c.claim}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"applicable", c.applicable}, {"holds", c.holds}};
    if (c.applicable) {
      const json d = to_json(c.detail);
      rec["flow"] = d["flow"];
      if (d.contains("certificate")) rec["certificate"] = d["certificate"];
      if (d.contains("violating_up_set")) rec["violating_up_set"] = d["violating_up_set"];
    }
    records.push_back(rec);
  }
  return json{{"report", r.name}, {"holds", r.all_hold()}, {"records", records}};
}

json to_json(const EstimateReport& e) {
  return json{{"value", e.value}, {"stderr", e.stderr_}, {"n", e.n}, {"method", std::string(to_string(e.method))},
              {"interval", {e.lo, e.hi}}, {"exact", exact_field(e.exact)}};
}

json to_json(const InequalityReport& r) {
  json records = json::array();
  for (const InequalityRecord& c : r.records) {
    records.push_back({{"claim", c.claim},
                       {"lhs", to_json(c.lhs)},
                       {"rhs", to_json(c.rhs)},
                       {"gap", c.gap},
                       {"exact_gap", exact_field(c.exact_gap)},
                       {"method", std::string(to_string(c.method))},
                       {"n", c.n},
                       {"applicable", c.applicable},
                       {"holds", c.holds}});
  }
  return json{{"report", r.name}, {"holds", r.all_hold()}, {"records", records}};
}

json to_json(const Corollary63Report& r) {
  json rows = json::array();
  for (const ConnectionRow& row : r.rows) rows.push_back({{"y", row.y}, {"estimate", to_json(row.estimate)}});
  json out = to_json(r.checks);
  out["n"] = r.n;
  out["rows"] = rows;
  return out;
}

json to_json(const ChainEstimateReport& r) {
  json series = json::array();
  for (const ChainSeries& s : r.series) {
    series.push_back({{"name", s.name},
                      {"mean", s.mean},
                      {"stderr", s.stderr_},
                      {"exact", s.exact ? json(*s.exact) : json(nullptr)},
                      {"z", s.z()}});
  }
  json upsets = json::array();
  for (const UpsetDifference& d : r.upsets) {
    upsets.push_back({{"generator", to_json(d.generator)},
                      {"extreme", d.extreme},
                      {"upper", d.upper_mean},
                      {"lower", d.lower_mean},
                      {"diff", d.diff()}});
  }
  return json{{"report", "chain"},
              {"comparison", r.comparison},
              {"steps", r.steps},
              {"burn_in", r.burn_in},
              {"x_checks", r.x_checks},
              {"x_violations", r.x_violations},
              {"min_diff", r.min_diff},
              {"series", series},
              {"upsets", upsets},
              {"holds", r.holds}};
}

std::string to_csv(const PathDistribution& d) {
  std::string out = "xs,p,exact\n";
  for (const PathWeight& w : d.entries) out += xs_text(w.path) + "," + num(w.p) + "," + (w.exact ? to_string(*w.exact) : "") + "\n";
  return out;
}

std::string to_csv(const ClaimReport& r) {
  std::string out = "inequality,lhs,rhs,applicable,holds,flow\n";
  for (const ClaimRecord& c : r.records) {
    out += c.claim + "," + c.lhs + "," + c.rhs + "," + (c.applicable ? "true" : "false") + "," +
           (c.holds ? "true" : "false") + "," + num(c.detail.flow) + "\n";
  }
  return out;
}

std::string to_csv(const InequalityReport& r) {
  std::string out = "claim,lhs,rhs,gap,method,n,applicable,holds\n";
  for (const InequalityRecord& c : r.records) {
    out += "\"" + c.claim + "\"," + num(c.lhs.value) + "," + num(c.rhs.value) + "," + num(c.gap) + "," +
           std::string(to_string(c.method)) + "," + std::to_string(c.n) + "," + (c.applicable ? "true" : "false") + "," +
           (c.holds ? "true" : "false") + "\n";
  }
  return out;
}

std::string to_csv(const Corollary63Report& r) {
  std::string out = "y,p,stderr,method,exact\n";
  for (const ConnectionRow& row : r.rows) {
    out += std::to_string(row.y) + "," + num(row.estimate.value) + "," + num(row.estimate.stderr_) + "," +
           std::string(to_string(row.estimate.method)) + "," + (row.estimate.exact ? to_string(*row.estimate.exact) : "") + "\n";
  }
  return out;
}

std::string to_csv(const ChainEstimateReport& r) {
  std::string out = "series,mean,stderr,exact,z\n";
  for (const ChainSeries& s : r.series) {
    out += s.name + "," + num(s.mean) + "," + num(s.stderr_) + "," + (s.exact ? num(*s.exact) : "") + "," + num(s.z()) + "\n";
  }
  return out;
}

std::string render_svg(const Configuration& config, const std::vector<Site>& a, const std::vector<Site>& b,
                       const Region& region) {
  constexpr int kScale = 40;
  constexpr int kMargin = 30;
  const Universe& u = config.universe();
  const SupportGraph graph(u, region, a, b);
  const Support& support = graph.support();
  int lo = 0;
  int hi = 0;
  bool first = true;
  for (const Site& s : support.sites) {
    lo = first ? s.x : std::min(lo, s.x);
    hi = first ? s.x : std::max(hi, s.x);
    first = false;
  }
  const int levels = region.last_level() - region.first_level();
  auto px = [&](int x) { return kMargin + (x - lo) * kScale; };
  auto py = [&](int y) { return kMargin + (y - region.first_level()) * kScale; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * kMargin + (hi - lo) * kScale << "\" height=\""
      << 2 * kMargin + levels * kScale << "\">\n";
  const bool bonds = u.openness() == Openness::Bonds;
  for (const Edge& e : support.edges) {
    const int unit = bonds ? u.index_of(e) : -1;
    const bool open = !bonds || config.open(unit);
    svg << "<line class=\"edge " << (open ? "open" : "closed") << "\" x1=\"" << px(e.from.x) << "\" y1=\"" << py(e.from.y)
        << "\" x2=\"" << px(e.to().x) << "\" y2=\"" << py(e.to().y) << "\" stroke=\"#444\" stroke-width=\"2\""
        << (open ? "" : " stroke-dasharray=\"4 4\"") << "/>\n";
  }
  for (const Site& s : support.sites) {
    const int unit = bonds ? -1 : u.index_of(s);
    const bool open = bonds || config.open(unit);
    svg << "<circle class=\"site " << (open ? "open" : "closed") << "\" cx=\"" << px(s.x) << "\" cy=\"" << py(s.y)
        << "\" r=\"4\" fill=\"" << (open ? "#444" : "white") << "\" stroke=\"#444\"/>\n";
  }
  const auto left = graph.leftmost(config.words());
  const auto right = graph.rightmost(config.words());
  auto polyline = [&](const Path& p, const char* cls, const char* colour) {
    svg << "<polyline class=\"path " << cls << "\" fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"4\" stroke-opacity=\"0.7\" points=\"";
    for (int k = p.first_level(); k <= p.last_level(); ++k) svg << (k == p.first_level() ? "" : " ") << px(p.at(k)) << "," << py(k);
    svg << "\"/>\n";
  };
  if (left && right && *left == *right) {
    polyline(*left, "leftmost rightmost", "purple");
  } else {
    if (left) polyline(*left, "leftmost", "blue");
    if (right) polyline(*right, "rightmost", "red");
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace perco
