#include "friedland/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "friedland/bounds.hpp"
#include "friedland/errors.hpp"
#include "friedland/preimage.hpp"
#include "friedland/sft.hpp"

namespace friedland {
namespace {

using json = nlohmann::json;

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(15) << v;
  return os.str();
}

std::string boolean(bool b) { return b ? "true" : "false"; }

template <typename T>
std::string joined(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << "|";
    os << v[i];
  }
  return os.str();
}

std::string joined_num(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << "|";
    os << std::setprecision(15) << v[i];
  }
  return os.str();
}

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

long require_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail("field '" + field + "' must be an exact integer");
  return j.get<long>();
}

double require_num(const json& j, const std::string& field) {
  if (!j.is_number()) fail("field '" + field + "' must be a number");
  return j.get<double>();
}

Action parse_action(const json& j) {
  if (!j.is_object()) fail("'action' must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "space" && key != "dim" && key != "generators")
      fail("unknown action field '" + key + "'");
  }
  if (!j.contains("space") || !j.at("space").is_string())
    fail("'action.space' must be \"circle\" or \"torus\"");
  const std::string space = j.at("space").get<std::string>();
  SpaceDesc sd;
  if (space == "circle") {
    sd = circle_space();
    if (j.contains("dim") && require_int(j.at("dim"), "action.dim") != 1)
      fail("circle space has dim 1");
  } else if (space == "torus") {
    long dim = j.contains("dim") ? require_int(j.at("dim"), "action.dim") : 1;
    if (dim < 1) fail("'action.dim' must be >= 1");
    sd = torus_space(static_cast<int>(dim));
  } else {
    fail("'action.space' must be \"circle\" or \"torus\"");
  }
  if (!j.contains("generators") || !j.at("generators").is_array() || j.at("generators").empty())
    fail("'action.generators' must be a nonempty array");
  std::vector<GeneratorMap> gens;
  for (const auto& g : j.at("generators")) {
    if (!g.is_object() || !g.contains("kind") || !g.at("kind").is_string())
      fail("each generator needs a string field 'kind'");
    const std::string kind = g.at("kind").get<std::string>();
    if (kind == "circle_linear") {
      gens.push_back(GeneratorMap::circle_linear(require_int(g.at("L"), "generator.L")));
    } else if (kind == "circle_rotation") {
      gens.push_back(GeneratorMap::circle_rotation(require_num(g.at("alpha"), "generator.alpha")));
    } else if (kind == "torus_matrix") {
      if (!g.contains("rows") || !g.at("rows").is_array()) fail("torus_matrix needs 'rows'");
      std::vector<std::vector<long>> rows;
      for (const auto& row : g.at("rows")) {
        if (!row.is_array()) fail("'rows' must be an array of arrays");
        std::vector<long> r;
        for (const auto& e : row) r.push_back(require_int(e, "matrix entry"));
        rows.push_back(std::move(r));
      }
      gens.push_back(GeneratorMap::torus_matrix(IntMatrix::from_rows(rows)));
    } else {
      fail("unknown generator kind '" + kind + "'");
    }
  }
  try {
    return make_action(sd, std::move(gens));
  } catch (const std::exception& e) {
    fail(std::string("invalid action: ") + e.what());
  }
}

double parse_grid(const json& j, const std::string& field) {
  double g = require_num(j, field);
  if (g >= 1.0) return 1.0 / g;
  if (g > 0.0) return g;
  fail("'" + field + "' must be positive");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");

  static const char* allowed[] = {"command", "action",  "schedule", "n_list", "epsilon_list",
                                  "grid",    "depth",   "budget",   "seed",   "out",
                                  "threads", "x",       "m_list",   "hurley", "shift"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail("unknown field '" + key + "'");
  }

  ExperimentConfig c;
  if (!j.contains("command") || !j.at("command").is_string()) fail("'command' is required");
  c.command = j.at("command").get<std::string>();
  static const char* commands[] = {"sft",      "estimate", "traditional",  "bounds",
                                   "preimage", "hurley",   "power-check",  "conjugacy-check"};
  bool known = false;
  for (const char* cmd : commands) known = known || c.command == cmd;
  if (!known) fail("unknown command '" + c.command + "'");

  if (!j.contains("action")) fail("'action' is required");
  c.action = parse_action(j.at("action"));

  if (j.contains("schedule")) {
    if (!j.at("schedule").is_array()) fail("'schedule' must be an array");
    for (const auto& e : j.at("schedule")) {
      ScheduleEntry s;
      s.n = static_cast<int>(require_int(e.at("n"), "schedule.n"));
      s.epsilon = require_num(e.at("epsilon"), "schedule.epsilon");
      s.grid = parse_grid(e.at("grid"), "schedule.grid");
      if (s.n < 1) fail("'schedule.n' must be >= 1");
      if (s.epsilon <= 0.0) fail("'schedule.epsilon' must be positive");
      c.schedule.push_back(s);
    }
  } else if (j.contains("n_list")) {
    if (!j.contains("epsilon_list") || !j.contains("grid"))
      fail("'n_list' needs 'epsilon_list' and 'grid'");
    double spacing = parse_grid(j.at("grid"), "grid");
    for (const auto& jn : j.at("n_list")) {
      int n = static_cast<int>(require_int(jn, "n_list entry"));
      if (n < 1) fail("'n_list' entries must be >= 1");
      for (const auto& je : j.at("epsilon_list")) {
        double eps = require_num(je, "epsilon_list entry");
        if (eps <= 0.0) fail("'epsilon_list' entries must be positive");
        c.schedule.push_back({n, eps, spacing});
      }
    }
  }
  const bool needs_schedule = c.command == "estimate" || c.command == "traditional" ||
                              c.command == "conjugacy-check";
  if (needs_schedule && c.schedule.empty())
    fail("command '" + c.command + "' needs a nonempty schedule");

  if (j.contains("depth")) c.depth = static_cast<int>(require_int(j.at("depth"), "depth"));
  if (c.depth < 0) fail("'depth' must be >= 0");
  if (j.contains("budget")) {
    long b = require_int(j.at("budget"), "budget");
    if (b <= 0) fail("'budget' must be positive");
    c.budget = static_cast<std::size_t>(b);
  }
  if (j.contains("seed")) c.seed = static_cast<std::uint64_t>(require_int(j.at("seed"), "seed"));
  if (j.contains("out")) {
    if (!j.at("out").is_string()) fail("'out' must be a string");
    c.out_dir = j.at("out").get<std::string>();
  }
  if (j.contains("threads"))
    c.threads = static_cast<int>(require_int(j.at("threads"), "threads"));
  if (j.contains("x")) {
    if (!j.at("x").is_array()) fail("'x' must be an array of numbers");
    for (const auto& e : j.at("x")) c.probe_point.push_back(require_num(e, "x entry"));
  }
  if (j.contains("m_list")) {
    c.m_list.clear();
    for (const auto& e : j.at("m_list")) {
      long m = require_int(e, "m_list entry");
      if (m < 1) fail("'m_list' entries must be >= 1");
      c.m_list.push_back(m);
    }
    if (c.m_list.empty()) fail("'m_list' must be nonempty");
  }
  if (j.contains("hurley")) {
    const json& h = j.at("hurley");
    if (!h.is_object()) fail("'hurley' must be an object");
    for (const auto& [key, value] : h.items()) {
      (void)value;
      if (key != "n" && key != "epsilon" && key != "grid" && key != "hi_grid" && key != "slack")
        fail("unknown hurley field '" + key + "'");
    }
    if (h.contains("n")) c.hurley_n = static_cast<int>(require_int(h.at("n"), "hurley.n"));
    if (h.contains("epsilon")) c.hurley_epsilon = require_num(h.at("epsilon"), "hurley.epsilon");
    if (h.contains("grid"))
      c.hurley_grid = static_cast<int>(require_int(h.at("grid"), "hurley.grid"));
    if (h.contains("hi_grid"))
      c.hurley_hi_grid = static_cast<int>(require_int(h.at("hi_grid"), "hurley.hi_grid"));
    if (h.contains("slack")) c.hurley_slack = require_num(h.at("slack"), "hurley.slack");
    if (c.hurley_n < 1 || c.hurley_epsilon <= 0.0 || c.hurley_grid < 1 || c.hurley_hi_grid < 1)
      fail("invalid hurley parameters");
  }
  if (j.contains("shift")) c.conj_shift = require_num(j.at("shift"), "shift");

  c.echo = j.dump();
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

std::vector<long> circle_multipliers(const Action& T, const char* cmd) {
  std::vector<long> L;
  for (const auto& g : T.generators) {
    if (g.kind != GeneratorMap::Kind::CircleLinear)
      throw std::invalid_argument(std::string(cmd) +
                                  " command requires circle linear generators");
    L.push_back(g.L);
  }
  return L;
}

bool column_sums_ok(const TransitionMatrix& A, long target) {
  std::vector<long> sums(A.size(), 0);
  for (const auto& row : A.rows)
    for (std::int32_t c : row) ++sums[c];
  for (long s : sums)
    if (s != target) return false;
  return true;
}

double stationary_residual(const MarkovMeasure& m) {
  std::vector<double> acc(m.stationary.size(), 0.0);
  for (std::size_t s = 0; s < m.P.size(); ++s)
    for (std::size_t t = 0; t < m.P[s].size(); ++t)
      acc[m.cols[s][t]] += m.stationary[s] * m.P[s][t];
  double r = 0.0;
  for (std::size_t t = 0; t < acc.size(); ++t)
    r = std::max(r, std::abs(acc[t] - m.stationary[t]));
  return r;
}

RunReport run_sft(const ExperimentConfig& c) {
  RunReport rep;
  std::vector<long> L = circle_multipliers(c.action, "sft");
  long sum = 0;
  for (long l : L) sum += l;

  TransitionMatrix A = build_matrix_block(L);
  TransitionMatrix G = build_matrix_geometric(L);
  const bool equal_constructions = A.rows == G.rows;
  const bool irreducible = is_irreducible(A);
  const bool sums_ok = column_sums_ok(A, sum);
  PerronData pd = perron_root(A);
  const double entropy = std::log(pd.rho);
  const double target = std::log(static_cast<double>(sum));

  MarkovMeasure mm = parry_measure(A);
  const double resid = stationary_residual(mm);
  StatePath path = sample_parry_path(mm, 12, c.seed);
  PiTildeResult pt = pi_tilde(path, L);

  rep.columns = {"L_list",     "kM",          "rho",
                 "entropy_nats", "exact_target", "abs_err",
                 "irreducible", "column_sums_ok", "block_equals_geometric",
                 "parry_entropy_rate", "stationary_residual", "iterations", "converged"};
  rep.rows.push_back({joined(L), std::to_string(A.size()), num(pd.rho), num(entropy),
                      num(target), num(std::abs(entropy - target)), boolean(irreducible),
                      boolean(sums_ok), boolean(equal_constructions), num(mm.entropy_rate),
                      num(resid), std::to_string(pd.iterations), boolean(pd.converged)});

  rep.ok = irreducible && sums_ok && equal_constructions && pd.converged &&
           std::abs(pd.rho - sum) <= 1e-9 && std::abs(entropy - target) <= 1e-9 &&
           std::abs(mm.entropy_rate - target) <= 1e-9 && resid < 1e-10;

  rep.summary.push_back("exact target log(sum L) = " + num(target));
  rep.summary.push_back("computed entropy = " + num(entropy) + " (abs err " +
                        num(std::abs(entropy - target)) + ")");
  rep.summary.push_back("perron residual = " + num(pd.residual) + " after " +
                        std::to_string(pd.iterations) + " iterations");
  rep.summary.push_back("sampled path length 12, seed " + std::to_string(c.seed) +
                        ": interval width " + pt.width.get_str() + ", base point " +
                        pt.x0.get_str());
  return rep;
}

RunReport run_estimate(const ExperimentConfig& c) {
  RunReport rep;
  rep.columns = {"n", "epsilon", "grid", "count", "rate", "elapsed_ms", "note"};
  double best_rate = 0.0;
  for (const auto& entry : c.schedule) {
    try {
      auto rows = estimate_entropy(c.action, {entry}, c.budget);
      const auto& e = rows.front();
      best_rate = std::max(best_rate, e.rate);
      rep.rows.push_back({std::to_string(e.n), num(e.epsilon), num(e.grid),
                          std::to_string(e.count), num(e.rate), num(e.elapsed_ms), ""});
    } catch (const BudgetExceeded& ex) {
      rep.rows.push_back({std::to_string(entry.n), num(entry.epsilon), num(entry.grid), "", "",
                          "", ex.what()});
    }
  }
  bool all_linear = true;
  for (const auto& g : c.action.generators)
    all_linear = all_linear && g.kind == GeneratorMap::Kind::CircleLinear;
  if (all_linear) {
    long sum = 0;
    for (const auto& g : c.action.generators) sum += g.L;
    rep.summary.push_back("exact target log(sum L) = " + num(std::log((double)sum)));
  }
  rep.summary.push_back("best certified rate = " + num(best_rate));
  return rep;
}

RunReport run_traditional(const ExperimentConfig& c) {
  RunReport rep;
  rep.columns = {"n", "epsilon", "grid", "count", "rate", "elapsed_ms", "note"};
  for (const auto& entry : c.schedule) {
    try {
      EntropyEstimate e = estimate_traditional_entropy(c.action, entry.n, entry.epsilon,
                                                       entry.grid);
      rep.rows.push_back({std::to_string(e.n), num(e.epsilon), num(e.grid),
                          std::to_string(e.count), num(e.rate), num(e.elapsed_ms), ""});
    } catch (const BudgetExceeded& ex) {
      rep.rows.push_back({std::to_string(entry.n), num(entry.epsilon), num(entry.grid), "", "",
                          "", ex.what()});
    }
  }
  rep.summary.push_back("rates normalized by n^k with k = " +
                        std::to_string(c.action.k()));
  return rep;
}

RunReport run_bounds(const ExperimentConfig& c) {
  RunReport rep;
  rep.columns = {"kind", "value", "D", "details", "note"};
  const double D = ball_dimension(c.action.space);

  BoundReport lip = lipschitz_bound(c.action, D);
  rep.rows.push_back({"lipschitz", num(lip.value), num(D), "L+=" + joined_num(lip.lip_plus), ""});
  BoundReport skew = skew_bound(c.action, D);
  rep.rows.push_back({"skew", num(skew.value), num(D), "L+=" + joined_num(skew.lip_plus), ""});

  bool integer_action = true;
  for (const auto& g : c.action.generators)
    integer_action = integer_action && (g.kind == GeneratorMap::Kind::CircleLinear ||
                                        g.kind == GeneratorMap::Kind::TorusMatrix);
  if (integer_action) {
    try {
      BoundReport tor = torus_preimage_bound(c.action);
      rep.rows.push_back({"torus_preimage", num(tor.value), num(D),
                          "dets=" + joined(tor.dets), ""});
      double two_way = 0.0;
      std::size_t mi = 0;
      for (std::size_t gi = 0; gi < tor.dets.size(); ++gi) {
        int n = c.action.generators[gi].kind == GeneratorMap::Kind::TorusMatrix
                    ? c.action.generators[gi].A.n
                    : 1;
        double prod = 1.0;
        for (int t = 0; t < n; ++t) prod *= tor.moduli[mi++];
        two_way = std::max(two_way, std::abs(prod - static_cast<double>(tor.dets[gi])));
      }
      rep.summary.push_back("det vs eigenvalue-product max gap = " + num(two_way));
      rep.ok = rep.ok && two_way <= 1e-7;
    } catch (const std::invalid_argument& ex) {
      rep.rows.push_back({"torus_preimage", "", num(D), "", ex.what()});
    }
    for (std::size_t gi = 0; gi < c.action.generators.size(); ++gi) {
      const auto& g = c.action.generators[gi];
      IntMatrix A;
      if (g.kind == GeneratorMap::Kind::TorusMatrix) {
        A = g.A;
      } else {
        A = IntMatrix(1);
        A.at(0, 0) = g.L;
      }
      SingleEndoResult r = single_endo_entropy(A);
      std::string note = r.boundary.empty()
                             ? ""
                             : "boundary moduli " + joined_num(r.boundary);
      rep.rows.push_back({"single_endo_g" + std::to_string(gi + 1), num(r.value), num(D),
                          "moduli=" + joined_num(r.moduli), note});
    }
  }
  return rep;
}

RunReport run_preimage(const ExperimentConfig& c) {
  RunReport rep;
  rep.columns = {"row", "generator", "count", "det_abs", "note"};
  Point x = c.probe_point;
  if (x.empty()) x = Point(c.action.space.dim, 1.0 / 7.0);
  if (static_cast<int>(x.size()) != c.action.space.dim)
    throw std::invalid_argument("config: 'x' dimension does not match the action");

  std::size_t total = 0;
  for (int gi = 1; gi <= c.action.k(); ++gi) {
    const auto& g = c.action.generators[gi - 1];
    PreimageSet fib = preimages(g, x);
    long det = 1;
    if (g.kind == GeneratorMap::Kind::CircleLinear) det = g.L;
    if (g.kind == GeneratorMap::Kind::TorusMatrix) {
      mpz_class d = abs(det_exact(g.A));
      det = d.get_si();
    }
    total += fib.size();
    bool match = static_cast<long>(fib.size()) == det;
    rep.ok = rep.ok && match;
    rep.rows.push_back({"fiber", "T" + std::to_string(gi), std::to_string(fib.size()),
                        std::to_string(det), match ? "" : "count != |det|"});
  }
  std::size_t uni = check_union_cardinality(c.action, x);
  rep.rows.push_back({"union", "all", std::to_string(uni), "",
                      uni < total ? "exceptional root (coincidences)" : ""});
  try {
    PreimageTree tree = build_tree(c.action, x, c.depth, c.budget);
    rep.rows.push_back({"tree", "all", std::to_string(tree.branches.size()),
                        std::to_string(endpoint_count(tree)), ""});
    if (tree.branches.size() <= 64) {
      std::istringstream dump(dump_tree(tree));
      std::string line;
      while (std::getline(dump, line)) rep.summary.push_back(line);
    }
  } catch (const BudgetExceeded& ex) {
    rep.rows.push_back({"tree", "all", "", "", ex.what()});
  }
  return rep;
}

RunReport run_hurley(const ExperimentConfig& c) {
  if (c.action.k() != 1)
    throw std::invalid_argument("hurley command requires a single generator");
  HurleyParams p;
  p.n = c.hurley_n;
  p.epsilon = c.hurley_epsilon;
  p.grid = c.hurley_grid;
  p.hi_grid = c.hurley_hi_grid;
  p.slack = c.hurley_slack;
  p.budget = c.budget;
  if (!c.probe_point.empty()) p.samples.push_back(c.probe_point);
  HurleyReport r = hurley_check(c.action.generators[0], p);

  RunReport rep;
  rep.columns = {"n",      "epsilon",  "hm_count", "hm_rate", "h_count",
                 "h_rate", "hi_count", "hi_rate",  "chain_ok"};
  rep.rows.push_back({std::to_string(r.n), num(r.epsilon), std::to_string(r.hm_count),
                      num(r.hm_rate), std::to_string(r.h_count), num(r.h_rate),
                      std::to_string(r.hi_count), num(r.hi_rate), boolean(r.chain_ok)});
  rep.ok = r.chain_ok;
  rep.summary.push_back("chain h_m <= h <= h_m + h_i " +
                        std::string(r.chain_ok ? "holds" : "violated") + " at slack " +
                        num(p.slack));
  return rep;
}

RunReport run_power_check(const ExperimentConfig& c) {
  RunReport rep;
  std::vector<long> L = circle_multipliers(c.action, "power-check");
  rep.columns = {"m", "L_pow", "entropy_pow", "m_times_base", "ok", "note"};
  const double base = sft_entropy(L);
  for (long m : c.m_list) {
    try {
      Action powered = power_action(c.action, m);
      std::vector<long> Lp = circle_multipliers(powered, "power-check");
      const double ep = sft_entropy(Lp);
      const double bound = m * base;
      const bool ok = ep <= bound + 1e-12;
      rep.ok = rep.ok && ok;
      rep.rows.push_back({std::to_string(m), joined(Lp), num(ep), num(bound), boolean(ok), ""});
    } catch (const std::overflow_error& ex) {
      rep.rows.push_back({std::to_string(m), "", "", "", "", ex.what()});
    }
  }
  rep.summary.push_back("base entropy = " + num(base));
  return rep;
}

RunReport run_conjugacy_check(const ExperimentConfig& c) {
  const double s = c.conj_shift;
  const int dim = c.action.space.dim;
  auto h = [s, dim](const Point& p) {
    Point q(p);
    for (int i = 0; i < dim; ++i) q[i] = frac1(q[i] + s);
    return q;
  };
  auto h_inv = [s, dim](const Point& p) {
    Point q(p);
    for (int i = 0; i < dim; ++i) q[i] = frac1(q[i] - s);
    return q;
  };
  Action conj = conjugate_action(c.action, h, h_inv, 1.0, 1.0);

  RunReport rep;
  rep.columns = {"n",         "epsilon",   "grid", "count_base", "rate_base",
                 "count_conj", "rate_conj", "rate_diff", "note"};
  double worst = 0.0;
  for (const auto& entry : c.schedule) {
    try {
      auto base_rows = estimate_entropy(c.action, {entry}, c.budget);
      auto conj_rows = estimate_entropy(conj, {entry}, c.budget);
      const auto& a = base_rows.front();
      const auto& b = conj_rows.front();
      const double diff = std::abs(a.rate - b.rate);
      worst = std::max(worst, diff);
      rep.rows.push_back({std::to_string(a.n), num(a.epsilon), num(a.grid),
                          std::to_string(a.count), num(a.rate), std::to_string(b.count),
                          num(b.rate), num(diff), ""});
    } catch (const BudgetExceeded& ex) {
      rep.rows.push_back({std::to_string(entry.n), num(entry.epsilon), num(entry.grid), "", "",
                          "", "", "", ex.what()});
    }
  }
  rep.summary.push_back("largest rate difference under conjugation = " + num(worst));
  rep.summary.push_back("conjugating homeomorphism: coordinate shift by " + num(s));
  return rep;
}

}  // namespace

RunReport run(const ExperimentConfig& config) {
#ifdef _OPENMP
  if (config.threads > 0) omp_set_num_threads(config.threads);
#endif
  RunReport rep;
  if (config.command == "sft")
    rep = run_sft(config);
  else if (config.command == "estimate")
    rep = run_estimate(config);
  else if (config.command == "traditional")
    rep = run_traditional(config);
  else if (config.command == "bounds")
    rep = run_bounds(config);
  else if (config.command == "preimage")
    rep = run_preimage(config);
  else if (config.command == "hurley")
    rep = run_hurley(config);
  else if (config.command == "power-check")
    rep = run_power_check(config);
  else if (config.command == "conjugacy-check")
    rep = run_conjugacy_check(config);
  else
    throw std::invalid_argument("config: unknown command '" + config.command + "'");
  rep.command = config.command;
  rep.config_echo = config.echo;
  rep.summary.push_back("library version " + std::string(kLibraryVersion));
  return rep;
}

std::string to_csv(const RunReport& report) {
  std::ostringstream os;
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (i) os << ",";
    os << report.columns[i];
  }
  os << "\n";
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      os << row[i];
    }
    os << "\n";
  }
  return os.str();
}

std::vector<std::string> emit(const RunReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir);

  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream stamp;
  stamp << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");

  const std::string csv_path = (fs::path(out_dir) / (report.command + ".csv")).string();
  {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write " + csv_path);
    out << "# generated " << stamp.str() << "\n" << to_csv(report);
    if (!out) throw std::runtime_error("write failed for " + csv_path);
  }
  const std::string sum_path =
      (fs::path(out_dir) / (report.command + "_summary.txt")).string();
  {
    std::ofstream out(sum_path);
    if (!out) throw std::runtime_error("cannot write " + sum_path);
    out << "command " << report.command << "\n";
    out << "ok " << (report.ok ? "true" : "false") << "\n";
    for (const auto& line : report.summary) out << line << "\n";
    out << "config " << report.config_echo << "\n";
    if (!out) throw std::runtime_error("write failed for " + sum_path);
  }
  return {csv_path, sum_path};
}

}  // namespace friedland
