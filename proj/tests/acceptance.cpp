// Acceptance runs. Each criterion prints one PASS/FAIL line followed by the
// measurements behind it; `--criterion N` runs a single one.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "oracles.hpp"
#include "unidisc/geometry.hpp"
#include "unidisc/norms.hpp"
#include "unidisc/parallel.hpp"
#include "unidisc/pointsets.hpp"
#include "unidisc/universality.hpp"

using namespace unidisc;

namespace {

// Pinned tolerances.
constexpr double kParsevalRelTol = 1e-10;
constexpr int kMaxNetT3 = 3;
constexpr double kCoveringFactor = 0.5;
constexpr int kGaussians = 200;
constexpr int kSpikes = 50;
constexpr double kMarginTarget = 0.5;
constexpr double kSpreadStability = 2.0;
constexpr double kDispersionBound = 8.0;
constexpr double kWitnessSlack = 0.05;
constexpr double kPeakRelTol = 1e-9;
constexpr double kMajorantSlack = 1e-9;
constexpr double kVp1Bound = 3.01;
constexpr double kOperatorBound = 10.0;
constexpr double kSnapBound = 50.0;

struct Outcome {
  bool pass = false;
  std::string details;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double e = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, e);
  return buf;
}

std::string s_text(const SubspaceIndex& s) {
  std::string out = "(";
  for (std::size_t j = 0; j < s.s.size(); ++j) out += (j ? "," : "") + std::to_string(s.s[j]);
  return out + ")";
}

Outcome exact_grid_identity() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    std::vector<int> n(static_cast<std::size_t>(d));
    for (int& v : n) v = static_cast<int>(rng() % 9);
    const FrequencyBox box(n);
    const auto f = random_poly(box, mix_seed(77, trial), trial % 5 == 4 ? SampleKind::spike : SampleKind::gaussian);
    const auto grid = tensor_grid(box, GridKind::P).points();
    const double parseval = lq_power(f, 2.0);
    const double mean = mean_abs_power(evaluate(f, grid), 2.0);
    worst = std::max(worst, std::abs(mean - parseval) / parseval);
  }
  return {worst <= kParsevalRelTol, fmt("500 polynomials, max relative error %.3g (tol %.0e)", worst, kParsevalRelTol)};
}

Outcome net_property() {
  bool pass = true;
  std::string worst_t3;
  int max_t3 = 0;
  for (int r = 1; r <= 12; ++r) {
    const auto two = net_points(default_generator_matrices(2, r));
    pass = pass && verify_net(two, 0).pass;
    const auto three = net_points(default_generator_matrices(3, r));
    const int t = minimal_t(three);
    max_t3 = std::max(max_t3, t);
    pass = pass && t <= kMaxNetT3 && verify_net(three, t).pass;
  }
  return {pass, fmt("d=2 t=0 for r<=12; d=3 measured t<=%g for r<=12 (limit %g)", max_t3, kMaxNetT3)};
}

Outcome covering_factor() {
  bool pass = true;
  double min_ratio = kInfinity;
  std::size_t violations = 0;
  std::size_t members = 0;
  std::size_t uncovered = 0;
  for (int d = 1; d <= 3; ++d) {
    for (int n = 0; n <= 8; ++n) {
      UniversalConstructionParams p;
      p.n = n;
      p.d = d;
      const auto u = universal_net(p);
      const auto r = covering_factor_check(u, kGaussians, kSpikes, mix_seed(3, n, d));
      members += r.subspaces.size();
      for (const auto& rec : r.subspaces) uncovered += rec.covering != CoveringStatus::pass;
      violations += r.violations;
      min_ratio = std::min(min_ratio, r.min_ratio);
      pass = pass && r.all_covered && r.violations == 0;
    }
  }
  std::ostringstream out;
  out << members << " members, " << uncovered << " without a covering certificate, " << violations
      << " violations of factor " << kCoveringFactor << ", smallest max/peak " << min_ratio;
  return {pass, out.str()};
}

Outcome lq_universality() {
  bool pass = true;
  std::ostringstream out;
  const std::vector<int> levels{4, 6, 8};
  for (double q : {1.0, 2.0, 4.0}) {
    const auto search = search_margin(levels, 2, q, kMarginTarget, 1, 6, 100, 25, 11);
    if (!search.a) {
      pass = false;
      out << "\n    q=" << q << ": no margin in [1,6] reaches C1_hat >= " << kMarginTarget;
      continue;
    }
    const auto& reports = search.steps.back().reports;
    double lo = kInfinity;
    double hi = 0.0;
    out << "\n    q=" << q << ": a=" << *search.a;
    for (const auto& r : reports) {
      const double spread = r.c2_hat / r.c1_hat;
      lo = std::min(lo, spread);
      hi = std::max(hi, spread);
      out << fmt("  n=%g m=%g C1=%.3f C2=%.3f", r.n, static_cast<double>(r.m), r.c1_hat, r.c2_hat);
    }
    const bool stable = hi / lo <= kSpreadStability;
    out << fmt("  spread range %.3f..%.3f", lo, hi);
    pass = pass && stable;
  }
  return {pass, "margin searched for C1_hat >= 0.5 at n in {4,6,8}, d=2; spread C2/C1 stable within 2x" + out.str()};
}

Outcome cardinality() {
  bool pass = true;
  std::ostringstream out;
  for (int d = 1; d <= 3; ++d) {
    for (auto mode : {UniversalMode::linf, UniversalMode::lq}) {
      std::uint64_t factor = 0;
      for (int n = 0; n <= 12; ++n) {
        UniversalConstructionParams p;
        p.mode = mode;
        p.n = n;
        p.d = d;
        p.a_dq = 4;
        p.q = 2.0;
        const auto u = universal_net(p);
        if (u.size() % (std::uint64_t{1} << n) != 0) pass = false;
        const std::uint64_t ratio = u.size() >> n;
        if (factor == 0) factor = ratio;
        pass = pass && ratio == factor;
      }
      out << " d=" << d << ' ' << to_string(mode) << ": m/2^n=" << factor << ';';
    }
  }
  std::size_t previous = 0;
  double prev_ratio = 0.0;
  bool growing = true;
  for (int n = 4; n <= 12; ++n) {
    const double ratio = static_cast<double>(sparse_grid(n, 2).size()) / std::ldexp(1.0, n);
    growing = growing && ratio > prev_ratio;
    prev_ratio = ratio;
    previous = sparse_grid(n, 2).size();
  }
  out << " |SG(n,2)|/2^n strictly increasing over n=4..12: " << (growing ? "yes" : "no") << " (|SG(12,2)|="
      << previous << ")";
  return {pass && growing, out.str()};
}

Outcome dispersion_decay() {
  double worst = 0.0;
  std::ostringstream out;
  for (int r = 4; r <= 10; ++r) {
    const auto pts = net_points(default_generator_matrices(2, r));
    const double scaled = dispersion_exact(pts, true).volume * std::ldexp(1.0, r);
    worst = std::max(worst, scaled);
    out << fmt(" r=%g:%.4f", r, scaled);
  }
  return {worst <= kDispersionBound, fmt("max disp*2^r = %.4f (assert <= %g);", worst, kDispersionBound) + out.str()};
}

Outcome witness_bound() {
  bool pass = true;
  double worst_excess = -kInfinity;
  double worst_peak_err = 0.0;
  int cases = 0;
  std::ostringstream out;
  const auto base = net_points(default_generator_matrices(2, 12));
  const auto small_base = net_points(default_generator_matrices(2, 8));
  std::mt19937_64 rng(5);
  for (int n : {4, 6, 8}) {
    for (int a = 1; a <= 2; ++a) {
      for (const auto& s : enumerate_compositions(n, 2)) {
        if (s.s[0] < a || s.s[1] < a) continue;
        // Plant an empty dyadic box of widths 2^{a - s_j}.
        std::vector<double> lower;
        std::vector<double> upper;
        for (int v : s.s) {
          const int cells = 1 << (v - a);
          const auto c = static_cast<double>(rng() % static_cast<std::uint64_t>(cells));
          lower.push_back(c / cells);
          upper.push_back((c + 1) / cells);
        }
        const Box hole{lower, upper};
        for (const auto* source : {&base, &small_base}) {
          std::vector<std::size_t> drop;
          const auto rows = oracle::rows(*source);
          for (std::size_t i = 0; i < rows.size(); ++i)
            if (hole.contains(rows[i])) drop.push_back(i);
          const auto holed = source->without(drop);
          const auto search = holed.size() <= 512 ? WitnessSearch::exact : WitnessSearch::dyadic;
          const auto w = fejer_witness(holed, n, a, search);
          ++cases;
          if (!w.found) {
            pass = false;
            continue;
          }
          const double bound = std::ldexp(1.0, -2 * a * 2) + kWitnessSlack;
          const double peak_err = std::abs(w.peak - std::ldexp(1.0, n)) / std::ldexp(1.0, n);
          worst_excess = std::max(worst_excess, w.ratio - bound);
          worst_peak_err = std::max(worst_peak_err, peak_err);
          pass = pass && w.ratio <= bound && peak_err <= kPeakRelTol;
          // The argument behind the bound only gives 2^{-2a}; report that too.
          if (w.ratio > std::ldexp(1.0, -2 * a)) out << " ratio above 2^{-2a} at n=" << n << " s=" << s_text(s);
        }
      }
    }
  }
  return {pass, fmt("%g planted boxes; max(ratio - (2^{-2ad} + 0.05)) = %.4f; max |f(w)/2^n - 1| = %.2e",
                    cases, worst_excess, worst_peak_err) +
                    out.str()};
}

Outcome kernel_inequalities() {
  bool pass = true;
  std::ostringstream out;
  double worst_majorant = -kInfinity;
  for (int n = 1; n <= 64; ++n) {
    for (int i = 0; i < 4096; ++i) {
      const double x = -oracle::kPi + kTwoPi * i / 4096.0;
      const double bound = x == 0.0 ? n : std::min<double>(n, oracle::kPi * oracle::kPi / (n * x * x));
      worst_majorant = std::max(worst_majorant, fejer_value(n, x) - bound);
    }
  }
  const bool majorant = worst_majorant <= kMajorantSlack;
  out << fmt("majorant max excess %.2e; ", worst_majorant);

  double worst_v1 = 0.0;
  for (int n = 1; n <= 64; ++n) {
    const auto r = norm_lq_quadrature(vallee_poussin(n), 1.0, 64);
    worst_v1 = std::max(worst_v1, r.value + r.error_bound);
  }
  const bool v1 = worst_v1 <= kVp1Bound;
  out << fmt("max ||V_n||_1 (+err) over n<=64 = %.5f; operator ratios:", worst_v1);

  struct Case {
    std::string name;
    PointSet points;
    FrequencyBox box;
  };
  std::vector<Case> cases;
  cases.push_back({"grid d=1 N=16", tensor_grid(FrequencyBox({16}), GridKind::Pprime).points(), FrequencyBox({16})});
  cases.push_back({"grid d=2 N=(4,16)", tensor_grid(FrequencyBox({4, 16}), GridKind::Pprime).points(), FrequencyBox({4, 16})});
  cases.push_back({"grid d=2 N=(16,16)", tensor_grid(FrequencyBox({16, 16}), GridKind::Pprime).points(), FrequencyBox({16, 16})});
  cases.push_back({"net d=1 r=8 N=16", net_points(default_generator_matrices(1, 8)), FrequencyBox({16})});
  cases.push_back({"net d=2 r=12 N=(16,16)", net_points(default_generator_matrices(2, 12)), FrequencyBox({16, 16})});
  cases.push_back({"net d=2 r=12 N=(4,16)", net_points(default_generator_matrices(2, 12)), FrequencyBox({4, 16})});
  cases.push_back({"net d=2 r=12 N=(8,8)", net_points(default_generator_matrices(2, 12)), FrequencyBox({8, 8})});
  bool operators = true;
  // Densities count the cells of the quarter-spaced partition. Counting
  // prod N_j instead multiplies each ratio by 4^{d(1-1/q)}; that figure is
  // reported for q = inf but carries no bound.
  double worst_by_degree = 0.0;
  for (const auto& c : cases) {
    out << "\n    " << c.name << ':';
    for (double q : {1.0, 2.0, 4.0, kInfinity}) {
      const auto r = vp_operator_check(c.points, c.box, q, 9, 31);
      operators = operators && r.max_ratio <= kOperatorBound;
      out << " q=" << format_q(q) << fmt(" %.3f", r.max_ratio) << (r.max_ratio > kOperatorBound ? "(>10)" : "");
      if (std::isinf(q)) worst_by_degree = std::max(worst_by_degree, r.max_ratio * std::ldexp(1.0, 2 * c.box.dim()));
    }
  }
  out << fmt("\n    q=inf ratio with prod N_j in the density: max %.3f (reported only)", worst_by_degree);
  pass = majorant && v1 && operators;
  return {pass, out.str()};
}

Outcome snap_scaling() {
  double worst = 0.0;
  bool uniform = true;
  std::ostringstream out;
  for (int margin = 3; margin <= 5; ++margin) {
    UniversalConstructionParams p;
    p.mode = UniversalMode::lq;
    p.n = 4;
    p.d = 2;
    p.a_dq = margin;
    const auto pts = universal_net(p).net.points();
    for (double q : {1.0, 2.0, 4.0}) {
      double here = 0.0;
      for (const auto& s : enumerate_compositions(4, 2)) {
        const auto r = snap_compare(pts, s, margin, q, 20, mix_seed(9, margin, static_cast<std::uint64_t>(q)));
        here = std::max(here, r.max_normalized);
        uniform = uniform && r.uniform_cells;
      }
      worst = std::max(worst, here);
      out << fmt(" a=%g q=%g:%.3f", margin, q, here);
    }
  }
  return {worst <= kSnapBound && uniform,
          fmt("max normalized snap change %.3f (assert <= %g);", worst, kSnapBound) + out.str()};
}

Outcome cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "unidisc_acceptance";
  fs::create_directories(dir);
  const std::string out = (dir / "run.json").string();
  const std::vector<std::vector<std::string>> runs{
      {"sweep", "--family", "universal-linf", "--n", "4", "--d", "2", "--q", "inf", "--samples", "30", "--spikes", "10",
       "--seed", "4", "--out", out},
      {"sweep", "--family", "universal-lq", "--n", "4", "--d", "2", "--q", "1", "--a", "3", "--samples", "30",
       "--spikes", "10", "--seed", "4", "--out", out},
      {"sweep", "--family", "random", "--m", "2000", "--n", "5", "--d", "3", "--q", "4", "--samples", "10",
       "--spikes", "5", "--out", out},
      {"gen", "--family", "sparse", "--n", "5", "--d", "2", "--out", out},
      {"dispersion", "--in", (dir / "grid.json").string(), "--out", out},
      {"witness", "--family", "net", "--n", "6", "--r", "8", "--d", "2", "--a-min", "1", "--out", out},
      {"compare", "--n", "4", "--d", "2", "--q", "2", "--samples", "10", "--spikes", "5", "--out", out}};
  cli::run({"gen", "--family", "net", "--n", "8", "--d", "2", "--out", (dir / "grid.json").string()});
  auto stripped = [&] {
    std::ifstream in(out);
    auto j = nlohmann::json::parse(in);
    j.erase("generated_at");
    return j.dump();
  };
  bool pass = true;
  int compared = 0;
  for (const auto& args : runs) {
    std::vector<std::string> reports;
    for (const char* threads : {"1", "3"}) {
      auto full = args;
      full.insert(full.begin(), {"--threads", threads});
      const int code = cli::run(full);
      pass = pass && code == 0;
      reports.push_back(stripped());
    }
    pass = pass && reports[0] == reports[1];
    ++compared;
  }
  set_thread_count(1);
  return {pass, fmt("%g commands run at 1 and 3 threads, reports byte-identical apart from generated_at", compared)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance runs"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-10)");
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
      {1, {"exact grid identity", exact_grid_identity}},
      {2, {"net property", net_property}},
      {3, {"factor-two covering bound", covering_factor}},
      {4, {"L_q universality with searched margin", lq_universality}},
      {5, {"cardinality linear in 2^n", cardinality}},
      {6, {"dispersion decay", dispersion_decay}},
      {7, {"Fejer witness bound", witness_bound}},
      {8, {"kernel inequalities", kernel_inequalities}},
      {9, {"snap scaling", snap_scaling}},
      {10, {"CLI determinism", cli_determinism}}};

  bool all = true;
  for (const auto& [id, entry] : criteria) {
    if (only != 0 && only != id) continue;
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = entry.second();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s  %s (%.1fs)\n    %s\n", id, o.pass ? "PASS" : "FAIL", entry.first, secs,
                o.details.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
