#pragma once

// Reproduction checks, one per numbered criterion. Each check returns its
// measured values as JSON so the CLI and the acceptance binary share one
// rendering path. Elapsed times are kept out of the JSON so that reruns compare
// byte for byte.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dimerlab/analysis.hpp"
#include "dimerlab/bell.hpp"
#include "dimerlab/lattice.hpp"
#include "dimerlab/linalg.hpp"
#include "dimerlab/matchings.hpp"
#include "dimerlab/report.hpp"
#include "dimerlab/ring.hpp"

namespace dimerlab::acceptance {

using report::Json;
using report::num;

struct CriterionResult {
  int id = 0;
  std::string group;
  std::string title;
  bool passed = false;
  Json measured = Json::object();
  std::string note;
  std::optional<double> elapsed_s;  // human output only
};

inline Json to_json(const CriterionResult& r) {
  Json j;
  j["id"] = r.id;
  j["group"] = r.group;
  j["title"] = r.title;
  j["passed"] = r.passed;
  j["measured"] = r.measured;
  j["note"] = r.note;
  return j;
}

inline CriterionResult result_from_json(const Json& j) {
  CriterionResult r;
  r.id = j.at("id").get<int>();
  r.group = j.at("group").get<std::string>();
  r.title = j.at("title").get<std::string>();
  r.passed = j.at("passed").get<bool>();
  r.measured = j.at("measured");
  r.note = j.at("note").get<std::string>();
  return r;
}

inline CriterionResult make(int id, std::string group, std::string title) {
  CriterionResult r;
  r.id = id;
  r.group = std::move(group);
  r.title = std::move(title);
  return r;
}

namespace detail {

inline Json label_json(BellLabel l) { return Json::array({l.a, l.b}); }

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline constexpr double kOracleTol = 1e-12;
inline constexpr double kSpectrumTol = 1e-10;
inline constexpr double kConvergenceTol = 1e-2;
inline constexpr double kRatioBand = 0.1;
inline constexpr double kFractionTol = 0.03;
inline constexpr double kBisectionTol = 1e-9;
inline constexpr double kRuntimeBudget = 60.0;

// 1: brute-force reductions against the closed forms.
inline CriterionResult check_closed_forms() {
  auto r = make(1, "ring", "closed forms match brute-force reductions");
  const auto t0 = std::chrono::steady_clock::now();
  double worst_nn = 0.0, worst_nnn = 0.0, worst_odd = 0.0, worst_four = 0.0;
  int cases = 0;
  for (int s : {2, 3}) {
    const SpinDim S(s);
    for (int N : {2, 3, 4}) {
      for (const auto& label : all_labels(S)) {
        const RingSpec spec{S, N, label};
        const auto psi = build_spin_liquid(spec);
        worst_nn = std::max(worst_nn, max_abs_diff(reduced_state(psi, {1, 2}).matrix(), closed_form_nn(spec).matrix()));
        worst_nnn = std::max(worst_nnn, max_abs_diff(reduced_state(psi, {1, 3}).matrix(), closed_form_nnn(spec).matrix()));
        const auto odd = dimerlab::detail::sublattice_sites(spec, Parity::kOdd);
        worst_odd = std::max(worst_odd, max_abs_diff(reduced_state(psi, odd).matrix(),
                                                     sublattice_state(spec, Parity::kOdd).matrix()));
        worst_four = std::max(worst_four, max_abs_diff(reduced_state(psi, {1, 2, 3, 4}).matrix(),
                                                       closed_form_four_site(spec).matrix()));
        ++cases;
      }
    }
  }
  const double elapsed = detail::seconds_since(t0);
  const double worst = std::max({worst_nn, worst_nnn, worst_odd, worst_four});
  r.measured["cases"] = cases;
  r.measured["max_diff_12"] = num(worst_nn);
  r.measured["max_diff_13"] = num(worst_nnn);
  r.measured["max_diff_odd"] = num(worst_odd);
  r.measured["max_diff_1234"] = num(worst_four);
  r.measured["tolerance"] = num(kOracleTol);
  r.measured["within_runtime_budget"] = elapsed < kRuntimeBudget;
  r.passed = worst <= kOracleTol && elapsed < kRuntimeBudget;
  r.elapsed_s = elapsed;
  return r;
}

// 2: covering_trace against the brute-force trace of rho12.
inline CriterionResult check_trace_formula() {
  auto r = make(2, "ring", "trace formula matches brute-force norm");
  double worst = 0.0;
  int overlap_cases = 0, constant_cases = 0, nontrivial_cos = 0;
  for (int s : {2, 3}) {
    const SpinDim S(s);
    for (int N : {2, 3, 4}) {
      for (const auto& label : all_labels(S)) {
        const RingSpec spec{S, N, label};
        const auto brute = reduced_state(build_spin_liquid(spec), {1, 2}).trace();
        const double closed = covering_trace(spec);
        worst = std::max(worst, std::abs(brute - closed));
        if (spec.coverings_overlap()) {
          ++overlap_cases;
          if (S.mod(static_cast<long long>(label.a) * label.b * N) != 0) ++nontrivial_cos;
        } else {
          ++constant_cases;
        }
      }
    }
  }
  r.measured["max_abs_diff"] = num(worst);
  r.measured["overlap_cases"] = overlap_cases;
  r.measured["overlap_cases_with_nontrivial_phase"] = nontrivial_cos;
  r.measured["constant_two_cases"] = constant_cases;
  r.measured["tolerance"] = num(kOracleTol);
  r.passed = worst <= kOracleTol && overlap_cases > 0 && constant_cases > 0;
  return r;
}

// 3: negativity and partial-transpose spectrum of the infinite-ring neighbour state.
inline CriterionResult check_limit_negativity() {
  auto r = make(3, "ring", "limit neighbour negativity and PT spectrum");
  bool ok = true;
  Json rows = Json::array();
  for (int s = 2; s <= 8; ++s) {
    const SpinDim S(s);
    const auto rho = limit_nn_state(S, {1, 1});
    const double neg = negativity(rho, 1);
    const double expected = nn_negativity_closed(S);
    const auto spec = hermitian_eigenvalues(partial_transpose(rho, 1).matrix());
    int count = 0;
    double worst_mag = 0.0;
    const double magnitude = (s - 1.0) / (2.0 * s * s);
    for (double ev : spec.eigenvalues) {
      if (ev < -kSpectrumTol) {
        ++count;
        worst_mag = std::max(worst_mag, std::abs(-ev - magnitude));
      }
    }
    const int expected_count = (s * s - s) / 2;
    const bool row_ok = std::abs(neg - expected) <= kSpectrumTol && count == expected_count && worst_mag <= kSpectrumTol;
    ok = ok && row_ok;
    rows.push_back({{"S", s},
                    {"negativity", num(neg)},
                    {"expected", num(expected)},
                    {"negative_eigenvalues", count},
                    {"expected_count", expected_count},
                    {"max_magnitude_error", num(worst_mag)}});
  }
  r.measured["rows"] = rows;
  r.measured["tolerance"] = num(kSpectrumTol);
  r.passed = ok;
  return r;
}

// 4: finite-ring neighbour negativity approaches the limit monotonically.
inline CriterionResult check_finite_convergence() {
  auto r = make(4, "ring", "finite-ring neighbour negativity converges");
  const SpinDim S(2);
  const double limit = nn_negativity_closed(S);
  bool ok = true;
  Json per_label = Json::array();
  for (const BellLabel label : {BellLabel{0, 0}, BellLabel{0, 1}, BellLabel{1, 0}, BellLabel{1, 1}}) {
    Json devs = Json::array();
    double prev = INFINITY;
    bool monotone = true;
    double last = 0.0;
    for (int N = 3; N <= 10; ++N) {
      const RingSpec spec{S, N, label};
      const auto rho12 = reduced_state(build_spin_liquid(spec), {1, 2}).normalized();
      const double dev = std::abs(negativity(rho12, 1) - limit);
      monotone = monotone && dev <= prev + kOracleTol;
      prev = dev;
      last = dev;
      devs.push_back(num(dev));
    }
    ok = ok && monotone && last < kConvergenceTol;
    per_label.push_back({{"label", detail::label_json(label)},
                         {"deviation_N3_to_N10", devs},
                         {"monotone", monotone},
                         {"deviation_at_N10", num(last)}});
  }
  r.measured["limit"] = num(limit);
  r.measured["labels"] = per_label;
  r.measured["tolerance"] = num(kConvergenceTol);
  r.passed = ok;
  return r;
}

// 5: rho13 and the odd sublattice relax toward white noise at rate 1/S.
inline CriterionResult check_white_noise_decay() {
  auto r = make(5, "ring", "distance from white noise decays like S^-N");
  bool ok = true;
  Json per_S = Json::array();
  for (auto [s, max_n] : {std::pair{2, 8}, std::pair{3, 5}}) {
    const SpinDim S(s);
    const BellLabel label{1, 1};
    std::vector<double> d13, dodd, opodd;
    Json ns = Json::array();
    for (int N = 2; N <= max_n; ++N) {
      const RingSpec spec{S, N, label};
      const auto odd = sublattice_state(spec, Parity::kOdd);
      d13.push_back(noise_distance(closed_form_nnn(spec)));
      dodd.push_back(noise_distance(odd));
      // Context only: the operator-norm distance, which does fall like S^-N.
      const auto rho = odd.normalized();
      opodd.push_back(spectral_norm(rho.matrix() - ComplexMatrix::identity(rho.side()) *
                                                       Complex(1.0 / static_cast<double>(rho.side()))));
      ns.push_back(N);
    }
    const double target = 1.0 / s;
    auto last_ratio = [](const std::vector<double>& d) { return d[d.size() - 1] / d[d.size() - 2]; };
    const double r13 = last_ratio(d13);
    const double rodd = last_ratio(dodd);
    const bool ok13 = std::abs(r13 - target) <= kRatioBand;
    const bool okodd = std::abs(rodd - target) <= kRatioBand;
    ok = ok && ok13 && okodd;
    Json j13 = Json::array(), jodd = Json::array();
    for (double d : d13) j13.push_back(num(d));
    for (double d : dodd) jodd.push_back(num(d));
    per_S.push_back({{"S", s},
                     {"label", detail::label_json(label)},
                     {"N", ns},
                     {"distance_13", j13},
                     {"distance_odd", jodd},
                     {"last_ratio_13", num(r13)},
                     {"last_ratio_odd", num(rodd)},
                     {"last_ratio_odd_operator_norm", num(last_ratio(opodd))},
                     {"pass_13", ok13},
                     {"pass_odd", okodd}});
  }
  r.measured["band"] = num(kRatioBand);
  for (const auto& row : per_S) {
    const std::string s = std::to_string(row["S"].get<int>());
    r.measured["last_ratio_13_S" + s] = row["last_ratio_13"];
    r.measured["last_ratio_odd_S" + s] = row["last_ratio_odd"];
    r.measured["last_ratio_odd_operator_norm_S" + s] = row["last_ratio_odd_operator_norm"];
  }
  r.measured["per_S"] = per_S;
  r.passed = ok;
  if (!ok) {
    r.note =
        "odd-sublattice cross term is S^-N times a unitary on S^N dimensions, so its trace norm stays of order one "
        "and the trace distance from white noise does not decay; only the operator-norm distance falls like S^-N";
  }
  return r;
}

struct NamedGraph {
  std::string name;
  LatticeGraph graph;
};

inline std::vector<NamedGraph> cross_validation_graphs() {
  using B = Boundary;
  std::vector<NamedGraph> g;
  g.push_back({"square 2x2 open", build_square_grid(2, 2, B::kOpen)});
  g.push_back({"square 2x3 open", build_square_grid(2, 3, B::kOpen)});
  g.push_back({"square 3x4 open", build_square_grid(3, 4, B::kOpen)});
  g.push_back({"square 4x4 open", build_square_grid(4, 4, B::kOpen)});
  g.push_back({"square 4x6 open", build_square_grid(4, 6, B::kOpen)});
  g.push_back({"square 4x4 periodic", build_square_grid(4, 4, B::kPeriodic)});
  g.push_back({"square 4x6 periodic", build_square_grid(4, 6, B::kPeriodic)});
  g.push_back({"honeycomb 2x3 open", build_honeycomb(2, 3, B::kOpen)});
  g.push_back({"honeycomb 4x4 periodic", build_honeycomb(4, 4, B::kPeriodic)});
  g.push_back({"cubic 2x2x2 open", build_cubic_grid(2, 2, 2, B::kOpen)});
  g.push_back({"cubic 2x2x4 periodic", build_cubic_grid(2, 2, 4, B::kPeriodic)});
  return g;
}

// 6: enumeration totals against the Ryser permanent.
inline CriterionResult check_matching_engine() {
  auto r = make(6, "lattice", "matching enumeration agrees with the permanent");
  bool ok = true;
  Json rows = Json::array();
  for (const auto& [name, g] : cross_validation_graphs()) {
    const auto stats = enumerate_matchings(g);
    const auto perm = count_by_permanent(g);
    bool partition = true;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
      std::uint64_t sum = 0;
      for (const auto& inc : g.incident(v)) sum += stats.with_edge[inc.edge];
      partition = partition && sum == stats.total;
    }
    const bool row_ok = stats.total == perm && partition;
    ok = ok && row_ok;
    rows.push_back({{"graph", name},
                    {"enumerated", stats.total},
                    {"permanent", perm},
                    {"partition_identity", partition}});
  }
  r.measured["graphs"] = rows;
  r.passed = ok && rows.size() >= 10;
  return r;
}

// 7: Werner pair state from counts against the explicit superposition average.
inline CriterionResult check_werner_pipeline() {
  auto r = make(7, "lattice", "pair state from counts matches statevector oracle");
  using B = Boundary;
  const SpinDim S(2);
  std::vector<NamedGraph> graphs;
  graphs.push_back({"square 2x2 open", build_square_grid(2, 2, B::kOpen)});
  graphs.push_back({"square 2x3 open", build_square_grid(2, 3, B::kOpen)});
  graphs.push_back({"honeycomb 6-cycle", build_honeycomb(2, 3, B::kOpen)});
  double worst = 0.0;
  Json rows = Json::array();
  for (const auto& [name, g] : graphs) {
    const auto stats = enumerate_matchings(g);
    double graph_worst = 0.0;
    for (const auto& label : all_labels(S)) {
      for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const auto a = pair_state_from_stats(stats, e, S, label);
        const auto b = statevector_sigma_check(g, S, label, e);
        graph_worst = std::max(graph_worst, max_abs_diff(a.matrix(), b.matrix()));
      }
    }
    worst = std::max(worst, graph_worst);
    rows.push_back({{"graph", name}, {"edges", g.num_edges()}, {"matchings", stats.total}, {"max_diff", num(graph_worst)}});
  }
  r.measured["graphs"] = rows;
  r.measured["tolerance"] = num(kOracleTol);
  r.passed = worst <= kOracleTol;
  return r;
}

// 8: central-edge fraction on periodic square grids approaches 1/4.
inline CriterionResult check_fraction_trend() {
  auto r = make(8, "lattice", "periodic square fraction approaches 1/4");
  std::vector<double> sizes, fractions;
  Json rows = Json::array();
  for (std::size_t L : {4u, 6u, 8u}) {
    const auto g = build_square_grid(L, L, Boundary::kPeriodic);
    const auto e = central_edge(g);
    try {
      const auto stats = enumerate_matchings(g);
      const double f = stats.fraction(e);
      sizes.push_back(static_cast<double>(L));
      fractions.push_back(f);
      rows.push_back({{"L", L}, {"matchings", stats.total}, {"fraction", num(f)}, {"truncated", false}});
    } catch (const EnumerationCapExceeded&) {
      rows.push_back({{"L", L}, {"truncated", true}});
    }
  }
  bool monotone = true;
  for (std::size_t i = 1; i < fractions.size(); ++i) {
    monotone = monotone && std::abs(fractions[i] - 0.25) <= std::abs(fractions[i - 1] - 0.25) + kOracleTol;
  }
  r.measured["sizes"] = rows;
  if (fractions.size() >= 2) {
    const auto fit = extrapolate_fraction(sizes, fractions);
    r.measured["f_inf"] = num(fit.f_inf);
    r.measured["fit_points"] = fit.points;
    r.measured["fit_degenerate"] = fit.degenerate;
    r.measured["monotone"] = monotone;
    r.passed = monotone && std::abs(fit.f_inf - 0.25) <= kFractionTol;
  } else {
    r.note = "fewer than two sizes completed within the enumeration cap";
  }
  r.measured["tolerance"] = num(kFractionTol);
  return r;
}

// 9: lattice thresholds and the bisected Werner threshold.
inline CriterionResult check_thresholds() {
  auto r = make(9, "thresholds", "entanglement thresholds");
  auto neg = [](int S, int z) { return werner_negativity({SpinDim(S), 1.0 / z}); };
  auto neg_numeric = [](int S, int z) { return werner_negativity_numeric({SpinDim(S), 1.0 / z}); };
  const double z4s2 = neg_numeric(2, 4);
  const double z4s4 = neg_numeric(4, 4);
  const double z3s2 = neg_numeric(2, 3);
  const double z3s3 = neg_numeric(3, 3);
  bool ok = std::abs(z4s2) <= kOracleTol && z4s4 > kSpectrumTol && std::abs(z3s2) <= kOracleTol && z3s3 > kSpectrumTol;
  ok = ok && std::abs(neg(2, 4) - z4s2) <= kSpectrumTol && std::abs(neg(4, 4) - z4s4) <= kSpectrumTol;
  double worst = 0.0;
  Json bis = Json::array();
  for (int s = 2; s <= 10; ++s) {
    const double p = critical_weight_by_bisection(SpinDim(s));
    const double err = std::abs(p - 1.0 / (s + 1.0));
    worst = std::max(worst, err);
    bis.push_back({{"S", s}, {"p_star", num(p)}, {"abs_error", num(err)}});
  }
  ok = ok && worst <= kBisectionTol;
  r.measured["z4_S2"] = num(z4s2);
  r.measured["z4_S4"] = num(z4s4);
  r.measured["z3_S2"] = num(z3s2);
  r.measured["z3_S3"] = num(z3s3);
  r.measured["bisection"] = bis;
  r.measured["max_bisection_error"] = num(worst);
  r.passed = ok;
  return r;
}

struct Criterion {
  int id;
  const char* group;
  std::function<CriterionResult()> run;
};

inline const std::vector<Criterion>& catalogue() {
  static const std::vector<Criterion> all{
      {1, "ring", check_closed_forms},         {2, "ring", check_trace_formula},
      {3, "ring", check_limit_negativity},     {4, "ring", check_finite_convergence},
      {5, "ring", check_white_noise_decay},    {6, "lattice", check_matching_engine},
      {7, "lattice", check_werner_pipeline},   {8, "lattice", check_fraction_trend},
      {9, "thresholds", check_thresholds},
  };
  return all;
}

inline constexpr int kDeterminismId = 10;

/// Empty filter selects everything. Entries match a group name or a criterion id.
inline bool selected(int id, const char* group, std::span<const std::string> only) {
  if (only.empty()) return true;
  for (const auto& o : only) {
    if (o == group || o == std::to_string(id)) return true;
    if (id == kDeterminismId && o == "determinism") return true;
  }
  return false;
}

inline Json results_json(const std::vector<CriterionResult>& results) {
  Json arr = Json::array();
  for (const auto& r : results) arr.push_back(to_json(r));
  return arr;
}

/// Runs the selected criteria. The determinism check reruns the other selected
/// criteria (all of 1-9 when none are) and compares serialized output.
inline std::vector<CriterionResult> run(std::span<const std::string> only = {},
                                        const std::function<void(const CriterionResult&)>& on_result = {}) {
  std::vector<CriterionResult> out;
  std::vector<const Criterion*> chosen;
  for (const auto& c : catalogue()) {
    if (selected(c.id, c.group, only)) chosen.push_back(&c);
  }
  for (const auto* c : chosen) {
    const auto t0 = std::chrono::steady_clock::now();
    auto res = c->run();
    if (!res.elapsed_s) res.elapsed_s = detail::seconds_since(t0);
    if (on_result) on_result(res);
    out.push_back(std::move(res));
  }
  if (selected(kDeterminismId, "determinism", only)) {
    const auto t0 = std::chrono::steady_clock::now();
    auto det = make(kDeterminismId, "determinism", "identical reruns give identical output");
    std::vector<CriterionResult> first = out;
    if (chosen.empty()) {
      for (const auto& c : catalogue()) {
        chosen.push_back(&c);
        first.push_back(c.run());
      }
    }
    std::vector<CriterionResult> second;
    for (const auto* c : chosen) second.push_back(c->run());
    const auto a = results_json(first).dump();
    const auto b = results_json(second).dump();
    det.passed = a == b;
    det.measured["criteria_rerun"] = chosen.size();
    det.measured["bytes"] = a.size();
    det.measured["identical"] = det.passed;
    det.elapsed_s = detail::seconds_since(t0);
    if (on_result) on_result(det);
    out.push_back(std::move(det));
  }
  return out;
}

inline bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

}  // namespace dimerlab::acceptance
