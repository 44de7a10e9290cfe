// perco: command-line front end for the oriented percolation toolkit.

#include "perco/chain.hpp"
#include "perco/error.hpp"
#include "perco/inequalities.hpp"
#include "perco/oracle.hpp"
#include "perco/pathkit.hpp"
#include "perco/report.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace perco;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitClaimFailed = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raw option values; a job file fills them first, flags override.
struct Params {
  std::string command;
  std::string model_file, variant = "IndependentBond", p, pair_law, range;
  std::optional<double> rho;
  std::optional<json> model_json;  // inline model from a job file
  std::string a, b, g, c, b1, b2, b3, extra, tau1, tau2, tau3, mu, nu, trajectory;
  std::string region = "whole", side = "left", at = "start", lhs = "whole", rhs = "whole";
  std::string method = "auto", arithmetic = "auto", format, out;
  int n = 2;
  std::int64_t budget = 1000000, steps = 100000, burn_in = -1;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> bits;
  int threads = default_threads();
};

std::string read_file(const std::string& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) throw UsageError(field + ": cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json parse_json(const std::string& text, const std::string& field) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(field + ": malformed JSON: " + e.what());
  }
}

int to_int(const std::string& s, const std::string& field) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(field + ": expected an integer, got '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<Site> sites_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) throw UsageError(field + ": expected an array of [x, y] pairs");
  std::vector<Site> out;
  for (const json& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw UsageError(field + ": expected [x, y] integer pairs");
    }
    out.push_back(Site{e[0].get<int>(), e[1].get<int>()});
  }
  return out;
}

/// "x,y", "x,y;x,y", or "@file.json" holding [[x,y],...].
std::vector<Site> parse_sites(const std::string& text, const std::string& field, const Lattice& lattice) {
  if (text.empty()) throw UsageError(field + ": required");
  std::vector<Site> out;
  if (text.front() == '@') {
    out = sites_from_json(parse_json(read_file(text.substr(1), field), field), field);
  } else {
    for (const std::string& item : split(text, ';')) {
      const auto xy = split(item, ',');
      if (xy.size() != 2) throw UsageError(field + ": expected x,y but got '" + item + "'");
      out.push_back(Site{to_int(xy[0], field), to_int(xy[1], field)});
    }
  }
  if (out.empty()) throw UsageError(field + ": empty site set");
  for (const Site& s : out) {
    if (!lattice.valid(s)) throw UsageError(field + ": " + to_string(s) + " is not a site of the lattice");
  }
  return out;
}

/// "-inf", "+inf", "x_m,x_{m+1},...", or "@file.json" holding {"m":..,"xs":[..]}.
BoundaryPath parse_tau(const std::string& text, const std::string& field, int m) {
  if (text == "-inf") return BoundaryPath::neg_inf();
  if (text == "+inf" || text == "inf") return BoundaryPath::pos_inf();
  if (text.empty()) throw UsageError(field + ": required");
  Path p{m, {}};
  if (text.front() == '@') {
    const json j = parse_json(read_file(text.substr(1), field), field);
    if (!j.contains("m") || !j.contains("xs")) throw UsageError(field + ": expected {\"m\":..,\"xs\":[..]}");
    p.m = j["m"].get<int>();
    p.xs = j["xs"].get<std::vector<int>>();
  } else {
    for (const std::string& x : split(text, ',')) p.xs.push_back(to_int(x, field));
  }
  return BoundaryPath::of(std::move(p));
}

PercolationModel build_model(const Params& prm) {
  if (!prm.model_file.empty()) {
    return model_from_json(parse_json(read_file(prm.model_file, "--model"), "--model"));
  }
  if (prm.model_json && prm.p.empty() && prm.pair_law.empty()) return model_from_json(*prm.model_json);
  if (prm.p.empty() && prm.pair_law.empty()) throw UsageError("--p: required (or --model FILE)");
  const Variant variant = parse_variant(prm.variant);
  if (prm.rho) {
    if (variant != Variant::CorrelatedPairBond) throw UsageError("--rho: only for CorrelatedPairBond");
    return PercolationModel::correlated_pair_bond(PairLaw::from_correlation(Prob::parse(prm.p), *prm.rho));
  }
  json j{{"variant", prm.variant}};
  if (!prm.p.empty()) j["p"] = prm.p;
  if (!prm.pair_law.empty()) {
    json q = json::array();
    for (const std::string& v : split(prm.pair_law, ',')) q.push_back(v);
    j["pair_law"] = q;
  }
  if (!prm.range.empty()) {
    const auto ab = split(prm.range, ',');
    if (ab.size() != 2) throw UsageError("--range: expected a,b");
    j["range"] = {to_int(ab[0], "--range"), to_int(ab[1], "--range")};
  }
  return model_from_json(j);
}

Region build_region(const Params& prm, const Lattice& lattice, int m, int n) {
  if (prm.region == "whole") return Region::whole(m, n);
  if (prm.region == "left" || prm.region == "right") {
    const auto g = parse_sites(prm.g, "--G", lattice);
    return prm.region == "left" ? strictly_left_region(g, m, n) : strictly_right_region(g, m, n);
  }
  if (prm.region == "band") {
    return band(parse_tau(prm.tau1, "--tau1", m), parse_tau(prm.tau2, "--tau2", m), m, n);
  }
  throw UsageError("--region: expected whole, left, right or band");
}

Method parse_method(const std::string& s) {
  if (s == "auto") return Method::Auto;
  if (s == "exact") return Method::Exact;
  if (s == "mc") return Method::MonteCarlo;
  throw UsageError("--method: expected auto, exact or mc");
}

Arithmetic parse_arithmetic(const std::string& s) {
  if (s == "auto") return Arithmetic::Auto;
  if (s == "exact") return Arithmetic::Exact;
  if (s == "float") return Arithmetic::Float;
  throw UsageError("--arithmetic: expected auto, exact or float");
}

PathDistribution distribution_from_json(const json& j, const std::string& field) {
  try {
    PathDistribution d{sites_from_json(j.at("A"), field), sites_from_json(j.at("B"), field),
                       Region::whole(j.at("levels").at(0).get<int>(), j.at("levels").at(1).get<int>()), {}};
    for (const json& w : j.at("weights")) {
      PathWeight pw{Path{w.at("path").at("m").get<int>(), w.at("path").at("xs").get<std::vector<int>>()},
                    w.at("p").get<double>(), std::nullopt};
      if (w.contains("exact") && w["exact"].is_string()) {
        const Prob q = Prob::parse(w["exact"].get<std::string>());
        pw.exact = q.exact();
      }
      d.entries.push_back(std::move(pw));
    }
    return d;
  } catch (const json::exception& e) {
    throw UsageError(field + ": malformed path law: " + e.what());
  }
}

struct Output {
  std::string text;
  bool holds = true;
};

Output emit(const Params& prm, const json& j, const std::string& csv, const std::string& default_format = "json") {
  const std::string format = prm.format.empty() ? default_format : prm.format;
  if (format == "json") return {j.dump(2) + "\n", true};
  if (format == "csv") return {csv, true};
  throw UsageError("--format: " + format + " is not available for this command");
}

struct Slab {
  std::vector<Site> a, b;
  int m, n;
};

Slab slab(const Params& prm, const Lattice& lattice) {
  Slab s{parse_sites(prm.a, "--A", lattice), parse_sites(prm.b, "--B", lattice), 0, 0};
  s.m = common_level(s.a, "A");
  s.n = common_level(s.b, "B");
  if (s.n <= s.m) throw UsageError("--B: must lie above --A");
  return s;
}

Output run_command(const Params& prm) {
  const PercolationModel model = build_model(prm);
  const Lattice& lattice = model.lattice();
  const OracleOptions oracle{parse_arithmetic(prm.arithmetic), kDefaultEnumerationCap, prm.threads};
  EventOptions events;
  events.method = parse_method(prm.method);
  events.budget = prm.budget;
  events.seed = prm.seed;
  events.arithmetic = oracle.arithmetic;
  events.threads = prm.threads;
  const std::string& cmd = prm.command;

  if (cmd == "paths") {
    const Slab s = slab(prm, lattice);
    const Region region = build_region(prm, lattice, s.m, s.n);
    const auto paths = prm.c.empty() ? enumerate_paths(lattice, s.a, s.b, region)
                                     : enumerate_paths_through(lattice, s.a, parse_sites(prm.c, "--C", lattice), s.b, region);
    json list = json::array();
    std::string csv = "xs\n";
    for (const Path& p : paths) {
      list.push_back(to_json(p));
      for (std::size_t i = 0; i < p.xs.size(); ++i) csv += (i ? ";" : "") + std::to_string(p.xs[i]);
      csv += "\n";
    }
    return emit(prm, json{{"count", paths.size()}, {"paths", list}}, csv);
  }
  if (cmd == "exact") {
    const Slab s = slab(prm, lattice);
    const ExtremeQuery q{s.a, s.b, build_region(prm, lattice, s.m, s.n), parse_side(prm.side), std::nullopt};
    const PathDistribution d = exact_extreme_distribution(model, q, oracle);
    json j = to_json(d);
    j["side"] = std::string(to_string(q.side));
    return emit(prm, j, to_csv(d));
  }
  if (cmd == "dominance") {
    PathDistribution mu{{}, {}, Region::whole(0, 1), {}};
    PathDistribution nu = mu;
    if (!prm.mu.empty() || !prm.nu.empty()) {
      mu = distribution_from_json(parse_json(read_file(prm.mu, "--mu"), "--mu"), "--mu");
      nu = distribution_from_json(parse_json(read_file(prm.nu, "--nu"), "--nu"), "--nu");
    } else {
      const Slab s = slab(prm, lattice);
      Params l = prm;
      l.region = prm.lhs;
      Params r = prm;
      r.region = prm.rhs;
      const std::vector<ExtremeQuery> qs{
          ExtremeQuery{s.a, s.b, build_region(l, lattice, s.m, s.n), parse_side(prm.side), std::nullopt},
          ExtremeQuery{s.a, s.b, build_region(r, lattice, s.m, s.n), parse_side(prm.side), std::nullopt}};
      auto laws = extreme_distributions(model, qs, oracle);
      mu = std::move(laws[0]);
      nu = std::move(laws[1]);
    }
    const DominanceResult r = stochastic_leq(mu, nu);
    json j = to_json(r);
    j["lhs"] = to_json(mu);
    j["rhs"] = to_json(nu);
    try {
      j["upset_check"] = upset_dominance(mu, nu);
    } catch (const Error&) {
      j["upset_check"] = nullptr;
    }
    std::string csv = "holds,flow\n" + std::string(r.holds ? "true" : "false") + "," + std::to_string(r.flow) + "\n";
    Output o = emit(prm, j, csv);
    o.holds = r.holds;
    return o;
  }
  if (cmd == "theorem1") {
    const Slab s = slab(prm, lattice);
    const std::vector<Site> g = prm.g.empty() ? std::vector<Site>{} : parse_sites(prm.g, "--G", lattice);
    const ClaimReport r = verify_theorem1(model, s.a, s.b, g, oracle);
    Output o = emit(prm, to_json(r), to_csv(r));
    o.holds = r.all_hold();
    return o;
  }
  if (cmd == "prop31") {
    const Slab s = slab(prm, lattice);
    const ClaimReport r = verify_proposition31(model, parse_tau(prm.tau1.empty() ? "-inf" : prm.tau1, "--tau1", s.m),
                                               parse_tau(prm.tau2.empty() ? "+inf" : prm.tau2, "--tau2", s.m),
                                               parse_tau(prm.tau3, "--tau3", s.m), s.a, s.b, oracle);
    Output o = emit(prm, to_json(r), to_csv(r));
    o.holds = r.all_hold();
    return o;
  }
  if (cmd == "corollary2") {
    const Slab s = slab(prm, lattice);
    const auto extra = parse_sites(prm.extra, "--extra", lattice);
    if (extra.size() != 1) throw UsageError("--extra: expected a single site");
    if (prm.at != "start" && prm.at != "end") throw UsageError("--at: expected start or end");
    const ClaimReport r = verify_corollary2(model, s.a, s.b, extra.front(), prm.at == "start" ? End::Start : End::Finish, oracle);
    Output o = emit(prm, to_json(r), to_csv(r));
    o.holds = r.all_hold();
    return o;
  }
  if (cmd == "chain") {
    const Slab s = slab(prm, lattice);
    const std::vector<Site> g = prm.g.empty() ? std::vector<Site>{} : parse_sites(prm.g, "--G", lattice);
    ChainOptions opt;
    opt.steps = prm.steps;
    opt.burn_in = prm.burn_in;
    opt.seed = prm.seed;
    std::ofstream traj;
    if (!prm.trajectory.empty()) {
      traj.open(prm.trajectory);
      if (!traj) throw UsageError("--trajectory: cannot write '" + prm.trajectory + "'");
      opt.trajectory = &traj;
    }
    const ChainEstimateReport r = chain_theorem1_estimate(model, s.a, s.b, g, parse_side(prm.side), opt);
    Output o = emit(prm, to_json(r), to_csv(r));
    o.holds = r.holds;
    return o;
  }
  if (cmd == "kernel") {
    const Slab s = slab(prm, lattice);
    const BhkChain chain = BhkChain::on_support(model, s.a, s.b, build_region(prm, lattice, s.m, s.n));
    const ExactKernel kernel(chain);
    if (prm.format == "csv") {
      if (kernel.states().size() > 4096) throw UsageError("--format csv: kernel export limited to 4096 states");
      std::ostringstream csv;
      write_dense_csv(kernel, csv);
      return {csv.str(), true};
    }
    const bool exact = model.exact() && oracle.arithmetic != Arithmetic::Float;
    const InvarianceReport inv = check_invariance(kernel, exact);
    json j{{"report", "kernel"}, {"units", kernel.units()}, {"states", inv.states}, {"tv_residual", inv.tv_residual},
           {"exact_residual", inv.exact_residual ? json(to_string(*inv.exact_residual)) : json(nullptr)}};
    bool holds = inv.tv_residual < 1e-10;
    if (kernel.states().size() <= 1024) {
      const ConvergenceReport c = check_convergence(kernel);
      j["convergence"] = {{"iterations", c.iterations}, {"max_tv", c.max_tv}, {"converged", c.converged}};
      holds = holds && c.converged;
    }
    j["holds"] = holds;
    Output o = emit(prm, j, "");
    o.holds = holds;
    return o;
  }
  if (cmd == "lemma61" || cmd == "corr62") {
    const auto a = parse_sites(prm.a, "--A", lattice);
    const auto b1 = parse_sites(prm.b1, "--B1", lattice);
    const auto b2 = parse_sites(prm.b2, "--B2", lattice);
    const auto b3 = parse_sites(prm.b3, "--B3", lattice);
    const InequalityReport r = cmd == "lemma61" ? verify_lemma61(model, a, b1, b2, b3, events)
                                                : verify_corollary62(model, a, b1, b2, b3, events);
    Output o = emit(prm, to_json(r), to_csv(r));
    o.holds = r.all_hold();
    return o;
  }
  if (cmd == "corr63") {
    const Corollary63Report r = verify_corollary63(model, prm.n, events);
    Output o = emit(prm, to_json(r), to_csv(r), "csv");
    o.holds = r.checks.all_hold();
    return o;
  }
  if (cmd == "render") {
    const Slab s = slab(prm, lattice);
    const Region region = build_region(prm, lattice, s.m, s.n);
    const Support support = path_support(lattice, region, s.a, s.b);
    const Support supports[] = {support};
    auto universe = std::make_shared<const Universe>(lattice, supports);
    std::vector<std::uint64_t> words;
    if (prm.bits) {
      words.assign(std::max<std::size_t>(1, (static_cast<std::size_t>(universe->size()) + 63) / 64), 0);
      words[0] = *prm.bits;
    } else {
      StreamRng rng(prm.seed, 0);
      sample_configuration(factors_for(model, *universe), universe->size(), rng, words);
    }
    const Configuration config(universe, words);
    if (!prm.format.empty() && prm.format != "svg") throw UsageError("--format: render writes svg");
    return {render_svg(config, s.a, s.b, region), true};
  }
  throw UsageError("unknown command '" + cmd + "'");
}

void apply_job(Params& prm, const json& job) {
  auto str = [&](const char* key, std::string& into) {
    if (!job.contains(key)) return;
    const json& v = job[key];
    if (v.is_string()) {
      into = v.get<std::string>();
    } else if (v.is_array()) {
      // Site lists [[x,y],...] or path coordinates [x,...].
      std::string text;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_array()) {
          text += (i ? ";" : "") + std::to_string(v[i].at(0).get<int>()) + "," + std::to_string(v[i].at(1).get<int>());
        } else {
          text += (i ? "," : "") + std::to_string(v[i].get<int>());
        }
      }
      into = text;
    } else if (v.is_number()) {
      into = v.dump();
    } else {
      throw UsageError(std::string("job.") + key + ": unsupported value");
    }
  };
  try {
    str("command", prm.command);
    if (job.contains("model")) {
      const json& m = job["model"];
      if (m.is_string()) {
        prm.model_file = m.get<std::string>();
      } else {
        prm.model_json = m;
      }
    }
    for (const auto& [key, field] : std::initializer_list<std::pair<const char*, std::string*>>{
             {"A", &prm.a}, {"B", &prm.b}, {"G", &prm.g}, {"C", &prm.c}, {"B1", &prm.b1}, {"B2", &prm.b2}, {"B3", &prm.b3},
             {"extra", &prm.extra}, {"tau1", &prm.tau1}, {"tau2", &prm.tau2}, {"tau3", &prm.tau3}, {"region", &prm.region},
             {"side", &prm.side}, {"at", &prm.at}, {"method", &prm.method}, {"arithmetic", &prm.arithmetic},
             {"format", &prm.format}, {"out", &prm.out}, {"lhs", &prm.lhs}, {"rhs", &prm.rhs}}) {
      str(key, *field);
    }
    if (job.contains("n")) prm.n = job["n"].get<int>();
    if (job.contains("budget")) prm.budget = job["budget"].get<std::int64_t>();
    if (job.contains("steps")) prm.steps = job["steps"].get<std::int64_t>();
    if (job.contains("burn_in")) prm.burn_in = job["burn_in"].get<std::int64_t>();
    if (job.contains("seed")) prm.seed = job["seed"].get<std::uint64_t>();
    if (job.contains("threads")) prm.threads = job["threads"].get<int>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("job: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oriented percolation: extreme paths, dominance, resampling chain and correlation inequalities"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  Params prm;
  std::string job_file, seed_text, p_text, rho_text, bits_text;

  app.add_option("--job", job_file, "JSON job file (flags override its fields)");
  app.add_option("--model", prm.model_file, "JSON model file");
  app.add_option("--p", p_text, "open probability (decimal or num/den)");
  app.add_option("--variant", prm.variant, "IndependentBond|CorrelatedPairBond|IndependentSite|RangeSite");
  app.add_option("--pair-law", prm.pair_law, "q00,q01,q10,q11 for CorrelatedPairBond");
  app.add_option("--rho", rho_text, "within-pair correlation for CorrelatedPairBond");
  app.add_option("--range", prm.range, "a,b for RangeSite");
  app.add_option("--A", prm.a, "source sites: x,y[;x,y...] or @file.json");
  app.add_option("--B", prm.b, "target sites");
  app.add_option("--G", prm.g, "set G");
  app.add_option("--C", prm.c, "intermediate sites (paths)");
  app.add_option("--B1", prm.b1, "left target set");
  app.add_option("--B2", prm.b2, "middle target set");
  app.add_option("--B3", prm.b3, "right target set");
  app.add_option("--extra", prm.extra, "point added to A or B (corollary2)");
  app.add_option("--at", prm.at, "start|end (corollary2)");
  app.add_option("--tau1", prm.tau1, "-inf, +inf or x_m,...,x_n");
  app.add_option("--tau2", prm.tau2, "-inf, +inf or x_m,...,x_n");
  app.add_option("--tau3", prm.tau3, "-inf, +inf or x_m,...,x_n");
  app.add_option("--region", prm.region, "whole|left|right|band");
  app.add_option("--side", prm.side, "left|right");
  app.add_option("--lhs", prm.lhs, "region of the left law (dominance)");
  app.add_option("--rhs", prm.rhs, "region of the right law (dominance)");
  app.add_option("--mu", prm.mu, "path law JSON file (dominance)");
  app.add_option("--nu", prm.nu, "path law JSON file (dominance)");
  app.add_option("--n", prm.n, "level (corr63)");
  app.add_option("--budget", prm.budget, "Monte Carlo samples");
  app.add_option("--steps", prm.steps, "chain steps");
  app.add_option("--burn-in", prm.burn_in, "chain burn-in (default 100 |E|)");
  app.add_option("--seed", seed_text, "64-bit seed (overrides PERCO_SEED)");
  app.add_option("--threads", prm.threads, "worker threads");
  app.add_option("--method", prm.method, "auto|exact|mc");
  app.add_option("--arithmetic", prm.arithmetic, "auto|exact|float");
  app.add_option("--bits", bits_text, "configuration bits for render");
  app.add_option("--trajectory", prm.trajectory, "CSV trajectory file (chain)");
  app.add_option("--out", prm.out, "output file (default stdout)");
  app.add_option("--format", prm.format, "json|csv|svg");

  for (const char* name : {"paths", "exact", "dominance", "theorem1", "prop31", "corollary2", "chain", "kernel",
                           "lemma61", "corr62", "corr63", "render"}) {
    app.add_subcommand(name)->fallthrough();
  }

  // The job file only supplies defaults, so it is read before the flags.
  std::string job_command;
  try {
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--job" && i + 1 < argc) job_file = argv[i + 1];
      if (arg.rfind("--job=", 0) == 0) job_file = arg.substr(6);
    }
    if (!job_file.empty()) {
      apply_job(prm, parse_json(read_file(job_file, "--job"), "--job"));
      job_command = prm.command;
    }
  } catch (const UsageError& e) {
    std::cerr << "perco: " << e.what() << "\n";
    return kExitUsage;
  }
  const std::string job_model_file = prm.model_file;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (prm.model_file == job_model_file && (!p_text.empty() || !prm.pair_law.empty())) prm.model_file.clear();
    if (const char* env = std::getenv("PERCO_SEED")) seed_text = seed_text.empty() ? env : seed_text;
    if (!seed_text.empty()) {
      try {
        prm.seed = std::stoull(seed_text);
      } catch (const std::exception&) {
        throw UsageError("--seed: expected a 64-bit integer, got '" + seed_text + "'");
      }
    }
    if (!p_text.empty()) prm.p = p_text;
    if (!rho_text.empty()) {
      try {
        prm.rho = std::stod(rho_text);
      } catch (const std::exception&) {
        throw UsageError("--rho: expected a number");
      }
    }
    if (!bits_text.empty()) prm.bits = std::stoull(bits_text, nullptr, 0);
    prm.command = job_command;
    for (CLI::App* sub : app.get_subcommands()) prm.command = sub->get_name();
    if (prm.command.empty()) throw UsageError("no command given (see --help)");

    const Output out = run_command(prm);
    if (prm.out.empty()) {
      std::cout << out.text;
    } else {
      std::ofstream f(prm.out);
      if (!f) throw UsageError("--out: cannot write '" + prm.out + "'");
      f << out.text;
    }
    return out.holds ? kExitOk : kExitClaimFailed;
  } catch (const UsageError& e) {
    std::cerr << "perco: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "perco: " << e.what() << "\n";
    return kExitUsage;
  }
}
