#pragma once

// Command implementations behind the dimerlab tool. Argument parsing lives in
// the tool; everything here works on a validated RunConfig and returns a report
// that renders as text, JSON or CSV.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dimerlab/acceptance.hpp"
#include "dimerlab/analysis.hpp"
#include "dimerlab/bell.hpp"
#include "dimerlab/errors.hpp"
#include "dimerlab/lattice.hpp"
#include "dimerlab/matchings.hpp"
#include "dimerlab/report.hpp"
#include "dimerlab/ring.hpp"

namespace dimerlab::cli {

using report::fmt12;
using report::Json;
using report::num;

enum class Format { kHuman, kJson, kCsv };

inline const char* to_string(Format f) {
  switch (f) {
    case Format::kHuman: return "human";
    case Format::kJson: return "json";
    case Format::kCsv: return "csv";
  }
  return "human";
}

inline Format parse_format(const std::string& s) {
  if (s == "human") return Format::kHuman;
  if (s == "json") return Format::kJson;
  if (s == "csv") return Format::kCsv;
  throw ArgumentError("unknown format '" + s + "' (expected human, json or csv)");
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"ring", "lattice", "werner", "thresholds", "verify"};
  return names;
}

struct RunConfig {
  std::string command = "verify";
  Format format = Format::kHuman;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::uint64_t max_nodes = 1'000'000'000ULL;

  // ring
  int S = 2;
  int N = 4;
  int a = 1;
  int b = 1;
  bool closed_form_only = false;

  // lattice
  std::string family = "square";
  std::vector<int> sizes;  // empty: family default
  std::string boundary = "periodic";
  std::string file;
  bool check_oracle = false;
  std::vector<int> spins{2, 3, 4, 5};  // S values for pair-state negativities

  // werner
  std::vector<double> weights;  // empty: 1/2, 1/3, 1/4, 1/6

  // thresholds
  std::vector<int> z{2, 3, 4, 6};

  // verify
  std::vector<std::string> only;

  void validate() const {
    bool known = false;
    for (const auto& c : command_names()) known = known || c == command;
    if (!known) throw ArgumentError("unknown command '" + command + "'");
    if (threads == 0) throw ArgumentError("--threads must be >= 1");
    if (max_nodes == 0) throw ArgumentError("--max-nodes must be >= 1");
    if (command == "ring") {
      if (S < 2) throw ArgumentError("--S must be >= 2, got " + std::to_string(S));
      if (N < 1 || N > 64) throw ArgumentError("--N must lie in [1, 64], got " + std::to_string(N));
      if (a < 0 || a >= S || b < 0 || b >= S) {
        throw ArgumentError("--a and --b must lie in [0, S-1], got (" + std::to_string(a) + "," + std::to_string(b) + ")");
      }
    }
    if (command == "lattice") {
      if (family != "square" && family != "honeycomb" && family != "cubic" && family != "file") {
        throw ArgumentError("--family must be square, honeycomb, cubic or file, got '" + family + "'");
      }
      if (boundary != "open" && boundary != "periodic") {
        throw ArgumentError("--boundary must be open or periodic, got '" + boundary + "'");
      }
      if (family == "file" && file.empty()) throw ArgumentError("--family file needs --file PATH");
      for (int L : sizes) {
        if (L < 1) throw ArgumentError("--sizes entries must be >= 1, got " + std::to_string(L));
      }
      for (int s : spins) {
        if (s < 2) throw ArgumentError("--spins entries must be >= 2, got " + std::to_string(s));
      }
      if (a < 0 || b < 0) throw ArgumentError("--a and --b must be non-negative");
    }
    if (command == "werner") {
      for (int s : spins) {
        if (s < 2) throw ArgumentError("--spins entries must be >= 2, got " + std::to_string(s));
      }
      for (double p : weights) {
        if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("--p entries must lie in [0,1], got " + fmt12(p));
      }
    }
    if (command == "thresholds") {
      for (int v : z) {
        if (v < 2) throw ArgumentError("--z entries must be >= 2, got " + std::to_string(v));
      }
    }
  }
};

inline Json to_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["format"] = to_string(c.format);
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["max_nodes"] = c.max_nodes;
  j["S"] = c.S;
  j["N"] = c.N;
  j["a"] = c.a;
  j["b"] = c.b;
  j["closed_form_only"] = c.closed_form_only;
  j["family"] = c.family;
  j["sizes"] = c.sizes;
  j["boundary"] = c.boundary;
  j["file"] = c.file;
  j["check_oracle"] = c.check_oracle;
  j["spins"] = c.spins;
  Json w = Json::array();
  for (double p : c.weights) w.push_back(num(p));
  j["weights"] = w;
  j["z"] = c.z;
  j["only"] = c.only;
  return j;
}

inline RunConfig config_from_json(const Json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.format = parse_format(j.at("format").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.threads = j.at("threads").get<unsigned>();
  c.max_nodes = j.at("max_nodes").get<std::uint64_t>();
  c.S = j.at("S").get<int>();
  c.N = j.at("N").get<int>();
  c.a = j.at("a").get<int>();
  c.b = j.at("b").get<int>();
  c.closed_form_only = j.at("closed_form_only").get<bool>();
  c.family = j.at("family").get<std::string>();
  c.sizes = j.at("sizes").get<std::vector<int>>();
  c.boundary = j.at("boundary").get<std::string>();
  c.file = j.at("file").get<std::string>();
  c.check_oracle = j.at("check_oracle").get<bool>();
  c.spins = j.at("spins").get<std::vector<int>>();
  c.weights = j.at("weights").get<std::vector<double>>();
  c.z = j.at("z").get<std::vector<int>>();
  c.only = j.at("only").get<std::vector<std::string>>();
  c.validate();
  return c;
}

/// A command's result: the JSON payload plus a table for text and CSV output.
struct Outcome {
  Json result = Json::object();
  report::Table table;
  std::vector<std::string> summary;  // human-format lines printed above the table
  bool ok = true;
};

inline Json envelope(const RunConfig& c, const Outcome& o) {
  Json j;
  j["schema"] = report::kSchema;
  j["config"] = to_json(c);
  j["ok"] = o.ok;
  j["result"] = o.result;
  return j;
}

/// Parses an emitted JSON report back into its config and result.
inline std::pair<RunConfig, Json> parse_report(const std::string& text) {
  const Json j = Json::parse(text);
  const auto schema = j.at("schema").get<std::string>();
  if (schema != report::kSchema) throw ArgumentError("unsupported report schema '" + schema + "'");
  return {config_from_json(j.at("config")), j.at("result")};
}

inline void render(std::ostream& os, const RunConfig& c, const Outcome& o) {
  switch (c.format) {
    case Format::kJson:
      os << envelope(c, o).dump(2) << '\n';
      break;
    case Format::kCsv:
      o.table.write_csv(os);
      break;
    case Format::kHuman:
      for (const auto& line : o.summary) os << line << '\n';
      if (!o.table.rows.empty()) {
        if (!o.summary.empty()) os << '\n';
        o.table.write_text(os);
      }
      break;
  }
}

namespace detail {

inline Json nullable(const std::optional<double>& x) { return x ? num(*x) : Json(nullptr); }
inline std::string cell(const std::optional<double>& x) { return x ? fmt12(*x) : "-"; }

/// Largest matrix side for which the CLI runs a dense eigensolve on a sublattice state.
inline constexpr std::size_t kSublatticeSide = 256;


}  // namespace detail

inline Outcome cmd_ring(const RunConfig& c) {
  const SpinDim S(c.S);
  const BellLabel label{c.a, c.b};
  const RingSpec spec{S, c.N, label};
  spec.validate();
  Outcome o;
  auto& r = o.result;
  r["S"] = c.S;
  r["N"] = c.N;
  r["label"] = Json::array({c.a, c.b});
  r["coverings_overlap"] = spec.coverings_overlap();
  const double M = covering_trace(spec);
  r["trace_M"] = num(M);

  Json oracle;
  oracle["checked"] = !c.closed_form_only;
  if (!c.closed_form_only) {
    const std::size_t cap = limits().max_amplitudes;
    const std::size_t need = checked_pow(S.size(), spec.num_sites(), cap);
    if (need > cap) {
      throw CapacityError("ring: the brute-force oracle needs S^(2N) = " + std::to_string(c.S) + "^" +
                          std::to_string(2 * c.N) + " amplitudes, above the cap of " + std::to_string(cap) +
                          "; rerun with --closed-form-only, lower --N, or raise DIMERLAB_MAX_STATE");
    }
    const auto psi = build_spin_liquid(spec);
    double worst = max_abs_diff(reduced_state(psi, {1, 2}).matrix(), closed_form_nn(spec).matrix());
    oracle["max_diff_12"] = num(worst);
    oracle["max_diff_13"] = nullptr;
    oracle["max_diff_odd"] = nullptr;
    oracle["max_diff_1234"] = nullptr;
    if (c.N >= 2) {
      const double d13 = max_abs_diff(reduced_state(psi, {1, 3}).matrix(), closed_form_nnn(spec).matrix());
      const double d1234 = max_abs_diff(reduced_state(psi, {1, 2, 3, 4}).matrix(), closed_form_four_site(spec).matrix());
      oracle["max_diff_13"] = num(d13);
      oracle["max_diff_1234"] = num(d1234);
      worst = std::max({worst, d13, d1234});
    }
    if (checked_pow(S.size(), static_cast<std::size_t>(c.N), detail::kSublatticeSide) <= detail::kSublatticeSide) {
      const double dodd = max_abs_diff(sublattice_state_brute(spec, Parity::kOdd).matrix(),
                                       sublattice_state(spec, Parity::kOdd).matrix());
      oracle["max_diff_odd"] = num(dodd);
      worst = std::max(worst, dodd);
    }
    oracle["max_diff"] = num(worst);
    o.ok = worst <= acceptance::kOracleTol;
  }
  r["oracle"] = oracle;

  const double limit = nn_negativity_closed(S);
  r["limit_negativity"] = num(limit);
  Json series = Json::array();
  o.table.columns = {"N", "trace_M", "negativity_12", "deviation", "distance_13", "distance_odd"};
  for (int n = 1; n <= c.N; ++n) {
    const RingSpec sn{S, n, label};
    const double trace_n = covering_trace(sn);
    // M = 0 happens when the two coverings cancel (N = 1, 2a = 0 mod S, ab odd): no state to normalize.
    const bool vanishes = std::abs(trace_n) < 1e-12;
    std::optional<double> neg, dev, d13, dodd;
    if (!vanishes) {
      neg = negativity(closed_form_nn(sn).normalized(), 1);
      dev = std::abs(*neg - limit);
      if (n >= 2) d13 = noise_distance(closed_form_nnn(sn));
      if (checked_pow(S.size(), static_cast<std::size_t>(n), detail::kSublatticeSide) <= detail::kSublatticeSide) {
        dodd = noise_distance(sublattice_state(sn, Parity::kOdd));
      }
    }
    series.push_back({{"N", n},
                      {"trace_M", num(trace_n)},
                      {"negativity_12", detail::nullable(neg)},
                      {"deviation", detail::nullable(dev)},
                      {"distance_13", detail::nullable(d13)},
                      {"distance_odd", detail::nullable(dodd)}});
    o.table.add({std::to_string(n), fmt12(trace_n), detail::cell(neg), detail::cell(dev), detail::cell(d13),
                 detail::cell(dodd)});
  }
  r["series"] = series;

  o.summary.push_back("ring S=" + std::to_string(c.S) + " N=" + std::to_string(c.N) + " label=(" +
                      std::to_string(c.a) + "," + std::to_string(c.b) + ")");
  o.summary.push_back("trace M = " + fmt12(M) + (spec.coverings_overlap() ? " (coverings overlap)" : " (orthogonal coverings)"));
  if (!c.closed_form_only) {
    o.summary.push_back("closed form vs brute force: max deviation " + fmt12(oracle["max_diff"].get<double>()) +
                        (o.ok ? " (ok)" : " (MISMATCH)"));
  }
  o.summary.push_back("limit negativity (S-1)^2/4S = " + fmt12(limit));
  return o;
}

inline LatticeGraph build_lattice(const RunConfig& c, int L) {
  const Boundary b = c.boundary == "open" ? Boundary::kOpen : Boundary::kPeriodic;
  const auto n = static_cast<std::size_t>(L);
  if (c.family == "square") return build_square_grid(n, n, b);
  if (c.family == "honeycomb") return build_honeycomb(n, n, b);
  if (c.family == "cubic") return build_cubic_grid(n, n, n, b);
  std::ifstream in(c.file);
  if (!in) throw ArgumentError("cannot open edge list '" + c.file + "'");
  return read_edge_list(in);
}

inline std::vector<int> default_sizes(const RunConfig& c) {
  if (!c.sizes.empty()) return c.sizes;
  if (c.family == "cubic") return {2};
  if (c.family == "file") return {0};
  return {4, 6};
}

/// Smallest cell of the family on which the statevector oracle is affordable.
inline LatticeGraph oracle_cell(const RunConfig& c) {
  if (c.family == "square") return build_square_grid(2, 3, Boundary::kOpen);
  if (c.family == "honeycomb") return build_honeycomb(2, 3, Boundary::kOpen);
  if (c.family == "cubic") return build_cubic_grid(2, 2, 2, Boundary::kOpen);
  return build_lattice(c, 0);
}

inline std::string graph_name(const RunConfig& c, const LatticeGraph& g) {
  if (c.family == "file") return "file " + c.file;
  std::string dims;
  for (std::size_t i = 0; i < g.metadata().sizes.size(); ++i) {
    dims += (i ? "x" : "") + std::to_string(g.metadata().sizes[i]);
  }
  return c.family + " " + dims + " " + to_string(g.metadata().boundary);
}

inline Outcome cmd_lattice(const RunConfig& c) {
  Outcome o;
  auto& r = o.result;
  EnumerationOptions opts;
  opts.max_nodes = c.max_nodes;
  opts.threads = c.threads;

  o.table.columns = {"graph", "vertices", "edges", "matchings", "edge", "fraction", "truncated"};
  for (int s : c.spins) o.table.columns.push_back("negativity_S" + std::to_string(s));

  std::vector<double> fit_sizes, fit_fractions;
  bool any_truncated = false;
  Json rows = Json::array();
  for (int L : default_sizes(c)) {
    const auto g = build_lattice(c, L);
    const std::size_t e = central_edge(g);
    const auto [u, v] = g.oriented(e);
    Json row;
    row["graph"] = graph_name(c, g);
    row["size"] = L;
    row["vertices"] = g.num_vertices();
    row["edges"] = g.num_edges();
    row["degenerate"] = g.degenerate();
    row["central_edge"] = Json::array({u, v});
    std::vector<std::string> cells{graph_name(c, g), std::to_string(g.num_vertices()), std::to_string(g.num_edges())};
    try {
      const auto stats = enumerate_matchings(g, {}, opts);
      row["matchings"] = stats.total;
      row["truncated"] = false;
      cells.push_back(std::to_string(stats.total));
      cells.push_back(std::to_string(u) + "-" + std::to_string(v));
      if (stats.total == 0) {
        row["fraction"] = nullptr;
        cells.push_back("-");
        cells.push_back("no");
        for (std::size_t i = 0; i < c.spins.size(); ++i) cells.push_back("-");
      } else {
        const double f = stats.fraction(e);
        row["fraction"] = num(f);
        Json negs = Json::object();
        cells.push_back(fmt12(f));
        cells.push_back("no");
        for (int s : c.spins) {
          const double n = werner_negativity({SpinDim(s), f});
          negs[std::to_string(s)] = num(n);
          cells.push_back(fmt12(n));
        }
        row["negativity"] = negs;
        if (c.family != "file" && (fit_sizes.empty() || L > fit_sizes.back())) {
          fit_sizes.push_back(L);
          fit_fractions.push_back(f);
        }
      }
    } catch (const EnumerationCapExceeded&) {
      any_truncated = true;
      row["matchings"] = nullptr;
      row["truncated"] = true;
      row["fraction"] = nullptr;
      cells.insert(cells.end(), {"-", std::to_string(u) + "-" + std::to_string(v), "-", "yes"});
      for (std::size_t i = 0; i < c.spins.size(); ++i) cells.push_back("-");
    }
    rows.push_back(row);
    o.table.add(cells);
  }
  r["family"] = c.family;
  r["boundary"] = c.boundary;
  r["sizes"] = rows;
  r["truncated"] = any_truncated;
  r["node_cap"] = c.max_nodes;

  o.summary.push_back("lattice family=" + c.family + " boundary=" + c.boundary);
  if (fit_sizes.size() >= 2) {
    const auto fit = extrapolate_fraction(fit_sizes, fit_fractions);
    Json ex;
    ex["f_inf"] = num(fit.f_inf);
    ex["slope"] = num(fit.slope);
    ex["rms_residual"] = num(fit.rms_residual);
    ex["points"] = fit.points;
    ex["degenerate"] = fit.degenerate;
    Json negs = Json::object();
    const double f_clamped = std::clamp(fit.f_inf, 0.0, 1.0);
    for (int s : c.spins) negs[std::to_string(s)] = num(werner_negativity({SpinDim(s), f_clamped}));
    ex["negativity"] = negs;
    r["extrapolation"] = ex;
    o.summary.push_back("extrapolated f_inf = " + fmt12(fit.f_inf) + " from " + std::to_string(fit.points) + " sizes" +
                        (fit.degenerate ? " (two-point fit, no residual check)" : ""));
  } else {
    r["extrapolation"] = nullptr;
  }
  if (any_truncated) {
    o.summary.push_back("some sizes exceeded the enumeration cap of " + std::to_string(c.max_nodes) +
                        " nodes; raise --max-nodes to complete them");
  }

  if (c.check_oracle) {
    std::vector<LatticeGraph> targets;
    for (int L : default_sizes(c)) {
      auto g = build_lattice(c, L);
      if (g.num_vertices() <= 8) targets.push_back(std::move(g));
    }
    if (targets.empty()) targets.push_back(oracle_cell(c));
    Json checks = Json::array();
    const BellLabel label{c.a, c.b};
    for (const auto& g : targets) {
      const auto stats = enumerate_matchings(g, {}, opts);
      double worst = 0.0;
      for (int s : c.spins) {
        const SpinDim S(s);
        const BellLabel l{S.mod(label.a), S.mod(label.b)};
        if (checked_pow(S.size(), g.num_vertices(), limits().max_amplitudes) > limits().max_amplitudes) continue;
        for (std::size_t e = 0; e < g.num_edges(); ++e) {
          worst = std::max(worst, max_abs_diff(pair_state_from_stats(stats, e, S, l).matrix(),
                                               statevector_sigma_check(g, S, l, e).matrix()));
        }
      }
      const bool pass = worst <= acceptance::kOracleTol;
      o.ok = o.ok && pass;
      checks.push_back({{"graph", graph_name(c, g)}, {"max_diff", num(worst)}, {"pass", pass}});
      o.summary.push_back("statevector oracle on " + graph_name(c, g) + ": max deviation " + fmt12(worst) +
                          (pass ? " (pass)" : " (FAIL)"));
    }
    r["oracle"] = checks;
  }
  return o;
}

inline Outcome cmd_werner(const RunConfig& c) {
  Outcome o;
  std::vector<double> ps = c.weights;
  if (ps.empty()) ps = {1.0 / 2, 1.0 / 3, 1.0 / 4, 1.0 / 6};
  o.table.columns = {"S", "p", "noise", "negativity", "negativity_numeric", "entangled", "p_star", "critical_noise"};
  Json rows = Json::array();
  for (int s : c.spins) {
    const SpinDim S(s);
    for (double p : ps) {
      const WernerMixture w{S, p};
      const double n = werner_negativity(w);
      const double nn = werner_negativity_numeric(w);
      const bool ent = n > 1e-12;  // p = 1/(S+1) is PPT; rounding may leave a tiny positive value
      const double p_star = 1.0 / (s + 1.0);
      rows.push_back({{"S", s},
                      {"p", num(p)},
                      {"noise", num(1.0 - p)},
                      {"negativity", num(n)},
                      {"negativity_numeric", num(nn)},
                      {"entangled", ent},
                      {"p_star", num(p_star)},
                      {"critical_noise", num(critical_noise(S))}});
      o.table.add({std::to_string(s), fmt12(p), fmt12(1.0 - p), fmt12(n), fmt12(nn), ent ? "yes" : "no",
                   fmt12(p_star), fmt12(critical_noise(S))});
    }
  }
  o.result["rows"] = rows;
  return o;
}

inline Outcome cmd_thresholds(const RunConfig& c) {
  Outcome o;
  o.table.columns = {"z", "f", "noise", "S_min", "s_min", "negativity_at_S_min"};
  Json rows = Json::array();
  for (const auto& t : threshold_table(c.z)) {
    rows.push_back({{"z", t.z},
                    {"R", t.R},
                    {"f", num(t.f)},
                    {"noise", num(t.noise)},
                    {"S_min", t.S_min},
                    {"s_min", num(t.s_min)},
                    {"negativity_at_S_min", num(t.negativity_at_S_min)}});
    o.table.add({std::to_string(t.z), fmt12(t.f), fmt12(t.noise), std::to_string(t.S_min), fmt12(t.s_min),
                 fmt12(t.negativity_at_S_min)});
  }
  o.result["rows"] = rows;
  return o;
}

/// `progress`, when set, receives each criterion as it finishes (human format).
inline Outcome cmd_verify(const RunConfig& c, std::ostream* progress = nullptr) {
  Outcome o;
  auto on_result = [&](const acceptance::CriterionResult& res) {
    if (progress == nullptr) return;
    *progress << (res.passed ? "PASS" : "FAIL") << "  " << res.id << "  [" << res.group << "] " << res.title;
    if (res.elapsed_s) {
      std::ostringstream t;
      t.precision(3);
      t << std::fixed << *res.elapsed_s;
      *progress << "  (" << t.str() << " s)";
    }
    *progress << '\n';
    for (const auto& [k, v] : res.measured.items()) {
      if (!v.is_structured()) *progress << "      " << k << " = " << v.dump() << '\n';
    }
    if (!res.note.empty()) *progress << "      note: " << res.note << '\n';
    progress->flush();
  };
  const auto results = acceptance::run(c.only, on_result);
  o.ok = acceptance::all_passed(results);
  o.result["criteria"] = acceptance::results_json(results);
  o.result["all_passed"] = o.ok;
  o.table.columns = {"id", "group", "passed", "title"};
  int failed = 0;
  for (const auto& res : results) {
    failed += res.passed ? 0 : 1;
    if (c.format != Format::kHuman) {
      o.table.add({std::to_string(res.id), res.group, res.passed ? "true" : "false", res.title});
    } else if (progress == nullptr) {
      o.summary.push_back(std::string(res.passed ? "PASS" : "FAIL") + "  " + std::to_string(res.id) + "  [" +
                          res.group + "] " + res.title);
    }
  }
  o.summary.push_back(std::to_string(results.size()) + " criteria, " + std::to_string(failed) + " failed");
  return o;
}

/// Applies process-wide settings and dispatches. Errors propagate as exceptions.
inline Outcome run_command(const RunConfig& c, std::ostream* progress = nullptr) {
  c.validate();
  limits().threads = c.threads;
  limits().max_enumeration_nodes = c.max_nodes;
  if (c.command == "ring") return cmd_ring(c);
  if (c.command == "lattice") return cmd_lattice(c);
  if (c.command == "werner") return cmd_werner(c);
  if (c.command == "thresholds") return cmd_thresholds(c);
  return cmd_verify(c, c.format == Format::kHuman ? progress : nullptr);
}

}  // namespace dimerlab::cli
