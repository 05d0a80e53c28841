#include "unidisc/universality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "unidisc/parallel.hpp"

namespace unidisc {

namespace {

// Exhaustive sup-norm evaluation budget, in point-coefficient products.
constexpr double kExhaustiveBudget = 4.0e6;

std::size_t member_index(const SubspaceIndex& s, int n, int d) {
  const auto all = enumerate_compositions(n, d);
  const auto it = std::find(all.begin(), all.end(), s);
  if (it == all.end()) throw std::invalid_argument("member s does not have ||s||_1 = n");
  return static_cast<std::size_t>(it - all.begin());
}

double max_abs(std::span<const Complex> values) {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

// Largest k with 2 pi 2^-k >= radius, so a radius interval meets at most
// three cells of that level.
int neighbourhood_level(double radius, int cap) {
  if (std::isinf(radius) || radius >= std::numbers::pi) return 0;
  int k = 0;
  while (k < cap && std::ldexp(kTwoPi, -(k + 1)) >= radius) ++k;
  return k;
}

std::vector<double> local_radius(const FrequencyBox& box) {
  std::vector<double> r;
  for (int n : box.degrees()) {
    r.push_back(n == 0 ? kInfinity : 2.0 / (box.dim() * static_cast<double>(n + 1)));
  }
  return r;
}

std::string kind_name(SampleKind kind) { return to_string(kind); }

}  // namespace

PointSource PointSource::listed(const PointSet& points, std::string descriptor) {
  PointSource s;
  s.d_ = points.dim();
  s.m_ = points.size();
  s.descriptor_ = std::move(descriptor);
  auto torus = std::make_shared<const PointSet>(points.scale_to_torus());
  s.coords_ = std::make_shared<const std::vector<double>>(torus->torus_coordinates());
  s.locator_ = std::make_shared<const PointLocator>(*torus);
  s.points_ = std::move(torus);
  return s;
}

PointSource PointSource::net(const DigitalNet& net, std::string descriptor) {
  PointSource s;
  s.d_ = net.dim();
  s.m_ = net.size();
  s.descriptor_ = std::move(descriptor);
  s.net_ = std::make_shared<const DigitalNet>(net);
  return s;
}

const PointSet& PointSource::points() const {
  if (!points_) throw std::logic_error("implicit point source has no listing");
  return *points_;
}

std::span<const double> PointSource::coordinates() const {
  if (!coords_) throw std::logic_error("implicit point source has no listing");
  return *coords_;
}

std::vector<double> PointSource::near(std::span<const double> x, std::span<const double> radius,
                                      std::size_t cap) const {
  std::vector<double> out;
  if (locator_) {
    locator_->for_each_near(x, radius, [&](std::size_t i) {
      if (out.size() / static_cast<std::size_t>(d_) >= cap) return;
      const auto p = locator_->coordinates(i);
      out.insert(out.end(), p.begin(), p.end());
    });
    return out;
  }
  const int r = net_->exponent();
  std::vector<int> shape;
  std::vector<std::vector<std::uint64_t>> cells(static_cast<std::size_t>(d_));
  for (int j = 0; j < d_; ++j) {
    const int k = neighbourhood_level(radius[j], r);
    shape.push_back(k);
    const std::uint64_t count = std::uint64_t{1} << k;
    if (k == 0) {
      cells[j].push_back(0);
      continue;
    }
    const double scale = static_cast<double>(count) / kTwoPi;
    const auto lo = static_cast<long long>(std::floor((x[j] - radius[j]) * scale));
    const auto hi = static_cast<long long>(std::floor((x[j] + radius[j]) * scale));
    for (long long c = lo; c <= hi; ++c) {
      const auto cell = static_cast<std::uint64_t>(((c % static_cast<long long>(count)) +
                                                    static_cast<long long>(count)) %
                                                   static_cast<long long>(count));
      if (std::find(cells[j].begin(), cells[j].end(), cell) == cells[j].end()) cells[j].push_back(cell);
    }
  }
  std::vector<std::size_t> pos(static_cast<std::size_t>(d_), 0);
  std::vector<std::uint64_t> cell(static_cast<std::size_t>(d_));
  const double unit = std::ldexp(kTwoPi, -r);
  for (;;) {
    for (int j = 0; j < d_; ++j) cell[j] = cells[j][pos[j]];
    const std::size_t have = out.size() / static_cast<std::size_t>(d_);
    if (have >= cap) break;
    for (std::uint64_t i : net_->indices_in_box(shape, cell, cap - have)) {
      bool inside = true;
      std::vector<double> p(static_cast<std::size_t>(d_));
      for (int j = 0; j < d_ && inside; ++j) {
        p[j] = unit * static_cast<double>(net_->numerator(i, j));
        inside = std::isinf(radius[j]) || torus_distance(p[j], x[j]) <= radius[j];
      }
      if (inside) out.insert(out.end(), p.begin(), p.end());
    }
    int j = d_ - 1;
    while (j >= 0 && ++pos[j] == cells[j].size()) pos[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

TrigPolynomial sweep_sample(const FrequencyBox& box, std::uint64_t seed, std::size_t member,
                            std::size_t sample, int gaussians) {
  const SampleKind kind =
      sample < static_cast<std::size_t>(gaussians) ? SampleKind::gaussian : SampleKind::spike;
  return random_poly(box, mix_seed(seed, member, sample, static_cast<std::uint64_t>(kind)), kind);
}

UniversalityReport sweep(const PointSource& source, const SweepOptions& options) {
  if (options.q < 1.0) throw std::invalid_argument("q must be at least 1");
  if (source.dim() != options.d) throw std::invalid_argument("point dimension does not match d");
  if (options.samples < 0 || options.spikes < 0 || options.samples + options.spikes < 1) {
    throw std::invalid_argument("need at least one sample per member");
  }
  if (source.size() == 0) throw std::invalid_argument("empty point set");
  const bool sup = std::isinf(options.q);

  std::vector<SubspaceIndex> members;
  std::vector<std::size_t> member_ids;
  if (options.only) {
    members.push_back(*options.only);
    member_ids.push_back(member_index(*options.only, options.n, options.d));
  } else {
    members = enumerate_compositions(options.n, options.d);
    for (std::size_t i = 0; i < members.size(); ++i) member_ids.push_back(i);
  }

  double widest = 1.0;
  for (const auto& s : members) widest = std::max(widest, static_cast<double>(box_of_s(s).cardinality()));
  EvaluationMode mode = options.evaluation;
  if (mode == EvaluationMode::automatic) {
    const bool affordable = static_cast<double>(source.size()) * widest <= kExhaustiveBudget;
    mode = (source.is_listed() && (!sup || affordable)) ? EvaluationMode::exhaustive : EvaluationMode::local;
  }
  if (mode == EvaluationMode::local && !sup) {
    throw std::invalid_argument("local evaluation applies to the sup norm only");
  }
  if (mode == EvaluationMode::exhaustive && !source.is_listed()) {
    throw std::invalid_argument("exhaustive evaluation needs a listed point set");
  }

  const std::size_t per_member = static_cast<std::size_t>(options.samples + options.spikes);
  const std::size_t total = members.size() * per_member;
  std::vector<double> low(total);
  std::vector<double> high(total);
  parallel_for(total, [&](std::size_t job) {
    const std::size_t mi = job / per_member;
    const std::size_t si = job % per_member;
    const FrequencyBox box = box_of_s(members[mi]);
    const TrigPolynomial f = sweep_sample(box, options.seed, member_ids[mi], si, options.samples);
    if (!sup) {
      const auto values = evaluate_flat(f, source.coordinates());
      const double ratio = mean_abs_power(values, options.q) / lq_power(f, options.q);
      low[job] = ratio;
      high[job] = ratio;
      return;
    }
    const NormResult bracket = norm_linf_certified(f, options.linf_slack);
    double discrete = 0.0;
    if (mode == EvaluationMode::exhaustive) {
      discrete = max_abs(evaluate_flat(f, source.coordinates()));
    } else {
      const auto radius = local_radius(box);
      const auto pts = source.near(bracket.argmax, radius);
      discrete = max_abs(evaluate_flat(f, pts));
    }
    low[job] = discrete / bracket.upper;
    high[job] = discrete / bracket.value;
  });

  UniversalityReport report;
  report.n = options.n;
  report.d = options.d;
  report.q = options.q;
  report.descriptor = source.descriptor();
  report.m = source.size();
  report.samples = options.samples;
  report.spikes = options.spikes;
  report.seed = options.seed;
  report.evaluation = to_string(mode);
  report.linf_slack = sup ? options.linf_slack : 0.0;
  report.c1_hat = kInfinity;
  report.c2_hat = 0.0;
  for (std::size_t mi = 0; mi < members.size(); ++mi) {
    SubspaceRecord rec;
    rec.s = members[mi];
    rec.samples = per_member;
    rec.min_ratio = kInfinity;
    rec.max_ratio = -kInfinity;
    for (std::size_t si = 0; si < per_member; ++si) {
      const std::size_t job = mi * per_member + si;
      const SampleKind kind =
          si < static_cast<std::size_t>(options.samples) ? SampleKind::gaussian : SampleKind::spike;
      if (low[job] < rec.min_ratio) {
        rec.min_ratio = low[job];
        rec.worst_low = SampleWitness{si, kind, low[job]};
      }
      if (high[job] > rec.max_ratio) {
        rec.max_ratio = high[job];
        rec.worst_high = SampleWitness{si, kind, high[job]};
      }
    }
    report.c1_hat = std::min(report.c1_hat, rec.min_ratio);
    report.c2_hat = std::max(report.c2_hat, rec.max_ratio);
    report.subspaces.push_back(std::move(rec));
  }
  return report;
}

nlohmann::json to_json(const UniversalityReport& report) {
  auto witness = [](const SampleWitness& w) {
    return nlohmann::json{{"sample", w.sample}, {"kind", kind_name(w.kind)}, {"ratio", w.ratio}};
  };
  nlohmann::json subspaces = nlohmann::json::array();
  for (const auto& rec : report.subspaces) {
    subspaces.push_back({{"s", rec.s.s},
                         {"min", rec.min_ratio},
                         {"max", rec.max_ratio},
                         {"samples", rec.samples},
                         {"worst_low", witness(rec.worst_low)},
                         {"worst_high", witness(rec.worst_high)}});
  }
  nlohmann::json j{{"n", report.n},
                   {"d", report.d},
                   {"q", format_q(report.q)},
                   {"points", {{"descriptor", report.descriptor}, {"m", report.m}}},
                   {"samples", report.samples},
                   {"spikes", report.spikes},
                   {"seed", report.seed},
                   {"evaluation", report.evaluation},
                   {"C1_hat", report.c1_hat},
                   {"C2_hat", report.c2_hat},
                   {"subspaces", std::move(subspaces)}};
  if (std::isinf(report.q)) j["linf_slack"] = report.linf_slack;
  return j;
}

std::string to_csv(const UniversalityReport& report) {
  std::string out = "s,min_ratio,max_ratio,samples\n";
  char buf[96];
  for (const auto& rec : report.subspaces) {
    std::string s;
    for (std::size_t j = 0; j < rec.s.s.size(); ++j) {
      if (j > 0) s += ' ';
      s += std::to_string(rec.s.s[j]);
    }
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%zu\n", rec.min_ratio, rec.max_ratio, rec.samples);
    out += s + buf;
  }
  return out;
}

WitnessResult fejer_witness(const PointSet& input, int n, int a_min, WitnessSearch search) {
  if (n < 0) throw std::invalid_argument("level n must be nonnegative");
  const PointSet points = input.to_unit();
  const int d = points.dim();
  WitnessResult result;
  result.a_min = a_min;
  const double needed = std::ldexp(1.0, a_min) * (1.0 - 1e-12);
  if (search == WitnessSearch::automatic) {
    search = points.size() <= exact_dispersion_limit(d) ? WitnessSearch::exact : WitnessSearch::dyadic;
  }
  result.search = search == WitnessSearch::exact ? "exact" : "dyadic";

  if (search == WitnessSearch::exact) {
    for_each_empty_box(points, [&](const Box& box) {
      // Spread n doublings so the smallest width_j 2^{s_j} is as large as possible.
      std::vector<int> s(static_cast<std::size_t>(d), 0);
      std::vector<double> scaled(box.upper.size());
      for (int j = 0; j < d; ++j) scaled[j] = box.width(j);
      for (int step = 0; step < n; ++step) {
        const auto j = static_cast<std::size_t>(std::min_element(scaled.begin(), scaled.end()) - scaled.begin());
        ++s[j];
        scaled[j] *= 2.0;
      }
      const double margin = *std::min_element(scaled.begin(), scaled.end());
      if (margin >= needed && margin > result.margin) {
        result.found = true;
        result.margin = margin;
        result.box = box;
        result.s = SubspaceIndex{s};
      }
    });
  } else {
    for (const auto& s : enumerate_compositions(n, d)) {
      if (std::any_of(s.s.begin(), s.s.end(), [&](int v) { return v < a_min; })) continue;
      std::vector<int> shape;
      int level = 0;
      for (int v : s.s) {
        shape.push_back(v - a_min);
        level += shape.back();
      }
      if (level > 28) continue;
      std::vector<bool> occupied(std::size_t{1} << level, false);
      for (std::size_t i = 0; i < points.size(); ++i) {
        std::uint64_t key = 0;
        for (int j = 0; j < d; ++j) {
          std::uint64_t lead;
          if (points.is_dyadic()) {
            const int e = points.exponent();
            const std::uint64_t v = points.numerator(i, j);
            lead = shape[j] <= e ? v >> (e - shape[j]) : v << (shape[j] - e);
          } else {
            lead = static_cast<std::uint64_t>(std::floor(std::ldexp(points.unit_coordinate(i, j), shape[j])));
          }
          key = (key << shape[j]) | lead;
        }
        occupied[key] = true;
      }
      const auto it = std::find(occupied.begin(), occupied.end(), false);
      if (it == occupied.end()) continue;
      std::uint64_t rest = static_cast<std::uint64_t>(it - occupied.begin());
      Box box{std::vector<double>(static_cast<std::size_t>(d)), std::vector<double>(static_cast<std::size_t>(d))};
      for (int j = d - 1; j >= 0; --j) {
        const std::uint64_t c = rest & ((std::uint64_t{1} << shape[j]) - 1);
        rest >>= shape[j];
        box.lower[j] = std::ldexp(static_cast<double>(c), -shape[j]);
        box.upper[j] = std::ldexp(static_cast<double>(c + 1), -shape[j]);
      }
      result.found = true;
      result.s = s;
      result.box = box;
      result.margin = std::ldexp(1.0, a_min);
      break;
    }
  }
  if (!result.found) return result;

  std::vector<int> orders;
  for (int v : result.s.s) orders.push_back(1 << v);
  result.center.resize(static_cast<std::size_t>(d));
  std::vector<double> shift(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    result.center[j] = 0.5 * (result.box.lower[j] + result.box.upper[j]);
    shift[j] = kTwoPi * result.center[j];
  }
  const TrigPolynomial f = translate(tensor_kernel(KernelKind::fejer, orders), shift);
  result.peak = std::abs(f(shift));
  std::vector<double> diff(static_cast<std::size_t>(d));
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int j = 0; j < d; ++j) diff[j] = points.torus_coordinate(i, j) - shift[j];
    best = std::max(best, tensor_kernel_value(KernelKind::fejer, orders, diff));
  }
  result.max_on_points = best;
  result.ratio = best / result.peak;
  return result;
}

nlohmann::json to_json(const WitnessResult& w) {
  nlohmann::json j{{"found", w.found}, {"a_min", w.a_min}, {"search", w.search}};
  if (w.found) {
    j["s"] = w.s.s;
    j["box"] = to_json(w.box);
    j["center"] = w.center;
    j["margin"] = w.margin;
    j["peak"] = w.peak;
    j["max_on_points"] = w.max_on_points;
    j["ratio"] = w.ratio;
  }
  return j;
}

CoveringFactorReport covering_factor_check(const UniversalConstruction& construction, int samples,
                                           int spikes, std::uint64_t seed) {
  const int n = construction.params.n;
  const int d = construction.params.d;
  const auto members = enumerate_compositions(n, d);
  const PointSource source = construction.r <= kMaxMaterializedExponent
                                 ? PointSource::listed(construction.net.points(), "universal")
                                 : PointSource::net(construction.net, "universal");
  CoveringFactorReport report;
  report.n = n;
  report.d = d;
  report.m = construction.size();
  report.all_covered = true;
  const auto per_member = static_cast<std::size_t>(samples + spikes);
  std::vector<double> ratios(members.size() * per_member);
  std::vector<CoveringResult> covering(members.size());
  parallel_for(members.size(), [&](std::size_t mi) {
    covering[mi] = covering_certificate(construction.net, dyadic_box(members[mi]));
  });
  parallel_for(ratios.size(), [&](std::size_t job) {
    const std::size_t mi = job / per_member;
    const std::size_t si = job % per_member;
    const TrigPolynomial f = sweep_sample(box_of_s(members[mi]), seed, mi, si, samples);
    const Peak peak = linf_peak(f);
    const auto radius = covering_radius(dyadic_box(members[mi]));
    const auto pts = source.near(peak.location, radius);
    ratios[job] = max_abs(evaluate_flat(f, pts)) / peak.value;
  });
  report.min_ratio = kInfinity;
  for (std::size_t mi = 0; mi < members.size(); ++mi) {
    CoveringFactorRecord rec;
    rec.s = members[mi];
    rec.covering = covering[mi].status;
    rec.covering_method = covering[mi].method;
    rec.samples = per_member;
    rec.min_ratio = kInfinity;
    for (std::size_t si = 0; si < per_member; ++si) {
      const double r = ratios[mi * per_member + si];
      rec.min_ratio = std::min(rec.min_ratio, r);
      if (r < 0.5 - 1e-9) ++rec.violations;
    }
    report.min_ratio = std::min(report.min_ratio, rec.min_ratio);
    report.violations += rec.violations;
    report.all_covered = report.all_covered && rec.covering == CoveringStatus::pass;
    report.subspaces.push_back(std::move(rec));
  }
  return report;
}

nlohmann::json to_json(const CoveringFactorReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& rec : r.subspaces) {
    rows.push_back({{"s", rec.s.s},
                    {"covering", to_string(rec.covering)},
                    {"covering_method", rec.covering_method},
                    {"min_ratio", rec.min_ratio},
                    {"samples", rec.samples},
                    {"violations", rec.violations}});
  }
  return {{"n", r.n},          {"d", r.d},
          {"m", r.m},          {"min_ratio", r.min_ratio},
          {"violations", r.violations}, {"all_covered", r.all_covered},
          {"subspaces", std::move(rows)}};
}

MarginSearchResult search_margin(const std::vector<int>& levels, int d, double q, double target,
                                 int a_lo, int a_hi, int samples, int spikes, std::uint64_t seed) {
  MarginSearchResult result;
  for (int a = a_lo; a <= a_hi; ++a) {
    MarginSearchStep step;
    step.a = a;
    step.accepted = true;
    for (int n : levels) {
      UniversalConstructionParams params;
      params.mode = UniversalMode::lq;
      params.n = n;
      params.d = d;
      params.a_dq = a;
      params.q = q;
      const UniversalConstruction c = universal_net(params);
      const PointSource source = PointSource::listed(c.net.points(), "universal-lq");
      SweepOptions opt;
      opt.n = n;
      opt.d = d;
      opt.q = q;
      opt.samples = samples;
      opt.spikes = spikes;
      opt.seed = seed;
      step.reports.push_back(sweep(source, opt));
      step.accepted = step.accepted && step.reports.back().c1_hat >= target;
    }
    result.steps.push_back(std::move(step));
    if (result.steps.back().accepted) {
      result.a = a;
      break;
    }
  }
  return result;
}

std::vector<ComparisonRow> compare_constructions(int n, int d, double q, int samples, int spikes,
                                                 std::uint64_t seed, int a_dq) {
  UniversalConstructionParams params;
  params.mode = std::isinf(q) ? UniversalMode::linf : UniversalMode::lq;
  params.n = n;
  params.d = d;
  params.a_dq = a_dq;
  params.q = q;
  const UniversalConstruction c = universal_net(params);
  SweepOptions opt;
  opt.n = n;
  opt.d = d;
  opt.q = q;
  opt.samples = samples;
  opt.spikes = spikes;
  opt.seed = seed;

  std::vector<ComparisonRow> rows;
  auto run = [&](const std::string& family, const PointSource& source) {
    const UniversalityReport r = sweep(source, opt);
    rows.push_back(ComparisonRow{family, source.size(), r.c1_hat, r.c2_hat});
  };
  const bool listable = c.r <= kMaxMaterializedExponent;
  run("net", listable ? PointSource::listed(c.net.points(), "net") : PointSource::net(c.net, "net"));
  run("sparse_grid", PointSource::listed(sparse_grid(n, d), "sparse_grid"));
  if (listable) {
    run("iid_uniform", PointSource::listed(random_points(c.size(), d, seed), "iid_uniform"));
  }
  return rows;
}

std::string to_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "family,m,C1_hat,C2_hat\n";
  char buf[96];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, ",%llu,%.17g,%.17g\n", static_cast<unsigned long long>(row.m),
                  row.c1_hat, row.c2_hat);
    out += row.family + buf;
  }
  return out;
}

nlohmann::json to_json(const ComparisonRow& row) {
  return {{"family", row.family}, {"m", row.m}, {"C1_hat", row.c1_hat}, {"C2_hat", row.c2_hat}};
}

const char* to_string(EvaluationMode mode) {
  switch (mode) {
    case EvaluationMode::exhaustive: return "exhaustive";
    case EvaluationMode::local: return "local";
    case EvaluationMode::automatic: return "auto";
  }
  return "?";
}

std::string format_q(double q) {
  if (std::isinf(q)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", q);
  return buf;
}

double parse_q(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInfinity;
  std::size_t used = 0;
  const double q = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("not a number: " + text);
  if (!(q >= 1.0)) throw std::invalid_argument("q must be at least 1");
  return q;
}

}  // namespace unidisc
