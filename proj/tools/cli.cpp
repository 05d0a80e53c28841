#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "unidisc/geometry.hpp"
#include "unidisc/norms.hpp"
#include "unidisc/parallel.hpp"
#include "unidisc/pointsets.hpp"
#include "unidisc/universality.hpp"

namespace unidisc::cli {

namespace {

template <typename T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <typename T>
void read_optional(const nlohmann::json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j.at(key).is_null()) v = j.at(key).get<T>();
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

PointSet load_points(const std::string& path) { return point_set_from_json(load_json(path)); }

bool is_universal(const std::string& family) {
  return family == "universal-linf" || family == "universal-lq";
}

UniversalConstructionParams universal_params(const RunConfig& c) {
  UniversalConstructionParams p;
  p.mode = c.family == "universal-linf" ? UniversalMode::linf : UniversalMode::lq;
  p.n = c.n;
  p.d = c.d;
  p.a_dq = c.a;
  p.q = parse_q(c.q);
  return p;
}

PointSet generate(const RunConfig& c) {
  if (c.family == "net") {
    return net_points(default_generator_matrices(c.d, c.r < 0 ? c.n : c.r));
  }
  if (c.family == "sparse") return sparse_grid(c.n, c.d);
  if (c.family == "tensorP" || c.family == "tensorPprime") {
    if (c.degrees.empty()) throw std::invalid_argument("tensor grids need --N");
    const auto kind = c.family == "tensorP" ? GridKind::P : GridKind::Pprime;
    return tensor_grid(FrequencyBox(c.degrees), kind).points();
  }
  if (c.family == "random") return random_points(c.m, c.d, c.seed);
  if (is_universal(c.family)) return universal_set(universal_params(c));
  throw std::invalid_argument("unknown family: " + c.family);
}

PointSource make_source(const RunConfig& c) {
  if (!c.input.empty()) return PointSource::listed(load_points(c.input), c.input);
  if (c.family.empty()) throw std::invalid_argument("give --points or --family");
  if (is_universal(c.family)) {
    const UniversalConstruction u = universal_net(universal_params(c));
    if (u.r <= kMaxMaterializedExponent) return PointSource::listed(u.net.points(), c.family);
    return PointSource::net(u.net, c.family);
  }
  return PointSource::listed(generate(c), c.family);
}

EvaluationMode parse_evaluation(const std::string& text) {
  if (text == "auto") return EvaluationMode::automatic;
  if (text == "exhaustive") return EvaluationMode::exhaustive;
  if (text == "local") return EvaluationMode::local;
  throw std::invalid_argument("unknown evaluation mode: " + text);
}

Outcome cmd_gen(const RunConfig& c) {
  nlohmann::json meta;
  PointSet points = PointSet::empty(c.d);
  if (is_universal(c.family)) {
    const UniversalConstruction u = universal_net(universal_params(c));
    meta = construction_metadata(u);
    points = u.net.points().scale_to_torus();
  } else {
    points = generate(c);
    meta = {{"m", points.size()}};
    if (points.is_dyadic()) meta["r"] = points.exponent();
    if (c.family == "net") meta["t"] = default_generator_matrices(c.d, c.r < 0 ? c.n : c.r).quality();
  }
  std::cout << "family " << c.family << ": m=" << points.size();
  for (const char* key : {"r", "t", "log_term"}) {
    if (meta.contains(key)) std::cout << ' ' << key << '=' << meta[key].dump();
  }
  std::cout << '\n';
  nlohmann::json result = to_json(points);
  result["metadata"] = std::move(meta);
  return {std::move(result), 0};
}

Outcome cmd_check_net(const RunConfig& c) {
  const NetCheck check = verify_net(load_points(c.input), c.t);
  std::cout << "t=" << c.t << ": " << (check.pass ? "pass" : "fail") << '\n';
  return {to_json(check), check.pass ? 0 : 1};
}

Outcome cmd_min_t(const RunConfig& c) {
  const int t = minimal_t(load_points(c.input));
  std::cout << "minimal t=" << t << '\n';
  return {{{"t", t}}, 0};
}

Outcome cmd_dispersion(const RunConfig& c) {
  const PointSet points = load_points(c.input).to_unit();
  DispersionResult r;
  if (c.method == "exact") {
    r = dispersion_exact(points, c.allow_large);
  } else if (c.method == "dyadic") {
    r = dispersion_dyadic(points);
  } else {
    throw std::invalid_argument("unknown dispersion method: " + c.method);
  }
  nlohmann::json j = to_json(r);
  j["m"] = points.size();
  j["scaled"] = r.volume * static_cast<double>(points.size());
  std::cout << "dispersion=" << r.volume << " m*dispersion=" << j["scaled"].get<double>() << '\n';
  return {std::move(j), 0};
}

Outcome cmd_sweep(const RunConfig& c) {
  const PointSource source = make_source(c);
  SweepOptions opt;
  opt.n = c.n;
  opt.d = c.d;
  opt.q = parse_q(c.q);
  opt.samples = c.samples;
  opt.spikes = c.spikes;
  opt.seed = c.seed;
  if (!c.only.empty()) opt.only = SubspaceIndex{c.only};
  opt.evaluation = parse_evaluation(c.evaluation);
  opt.linf_slack = c.linf_slack;
  const UniversalityReport report = sweep(source, opt);
  if (!c.csv.empty()) write_text(c.csv, to_csv(report));

  int code = 0;
  nlohmann::json checks = nlohmann::json::object();
  if (c.assert_c1) {
    const bool ok = report.c1_hat >= *c.assert_c1;
    checks["C1_hat"] = {{"min", *c.assert_c1}, {"pass", ok}};
    code |= ok ? 0 : 1;
  }
  if (c.assert_c2) {
    const bool ok = report.c2_hat <= *c.assert_c2;
    checks["C2_hat"] = {{"max", *c.assert_c2}, {"pass", ok}};
    code |= ok ? 0 : 1;
  }
  std::cout << "m=" << report.m << " members=" << report.subspaces.size() << " evaluation=" << report.evaluation
            << " C1_hat=" << report.c1_hat << " C2_hat=" << report.c2_hat << '\n';
  nlohmann::json j = to_json(report);
  j["assertions"] = std::move(checks);
  return {std::move(j), code};
}

Outcome cmd_witness(const RunConfig& c) {
  const PointSet points = c.input.empty() ? generate(c) : load_points(c.input);
  WitnessSearch search = WitnessSearch::automatic;
  if (c.search == "exact") search = WitnessSearch::exact;
  else if (c.search == "dyadic") search = WitnessSearch::dyadic;
  else if (c.search != "auto") throw std::invalid_argument("unknown search: " + c.search);
  const WitnessResult w = fejer_witness(points, c.n, c.a_min, search);
  int code = 0;
  nlohmann::json j = to_json(w);
  if (c.assert_ratio) {
    const bool ok = w.found && w.ratio <= *c.assert_ratio;
    j["assertion"] = {{"max_ratio", *c.assert_ratio}, {"pass", ok}};
    code = ok ? 0 : 1;
  }
  if (w.found) {
    std::cout << "witness found: margin=" << w.margin << " peak=" << w.peak << " ratio=" << w.ratio << '\n';
  } else {
    std::cout << "no empty box with margin 2^" << c.a_min << '\n';
  }
  return {std::move(j), code};
}

Outcome cmd_compare(const RunConfig& c) {
  const auto rows = compare_constructions(c.n, c.d, parse_q(c.q), c.samples, c.spikes, c.seed, c.a);
  const std::string table = to_csv(rows);
  if (!c.csv.empty()) write_text(c.csv, table);
  std::cout << table;
  nlohmann::json j = nlohmann::json::array();
  for (const auto& row : rows) j.push_back(to_json(row));
  return {{{"rows", std::move(j)}}, 0};
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--n", c.n, "level n");
  sub->add_option("--d", c.d, "dimension");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--out", c.output, "output JSON file");
}

void add_assert(CLI::App* sub, const char* flag, std::optional<double>& target, const char* help) {
  sub->add_option_function<double>(flag, [&target](const double& v) { target = v; }, help);
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"family", c.family},
          {"n", c.n},
          {"d", c.d},
          {"q", c.q},
          {"a", c.a},
          {"N", c.degrees},
          {"r", c.r},
          {"m", c.m},
          {"seed", c.seed},
          {"samples", c.samples},
          {"spikes", c.spikes},
          {"only", c.only},
          {"evaluation", c.evaluation},
          {"linf_slack", c.linf_slack},
          {"t", c.t},
          {"method", c.method},
          {"allow_large", c.allow_large},
          {"a_min", c.a_min},
          {"search", c.search},
          {"input", c.input},
          {"output", c.output},
          {"csv", c.csv},
          {"assert_c1", optional_json(c.assert_c1)},
          {"assert_c2", optional_json(c.assert_c2)},
          {"assert_ratio", optional_json(c.assert_ratio)}};
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.family = j.value("family", c.family);
  c.n = j.value("n", c.n);
  c.d = j.value("d", c.d);
  c.q = j.value("q", c.q);
  c.a = j.value("a", c.a);
  c.degrees = j.value("N", c.degrees);
  c.r = j.value("r", c.r);
  c.m = j.value("m", c.m);
  c.seed = j.value("seed", c.seed);
  c.samples = j.value("samples", c.samples);
  c.spikes = j.value("spikes", c.spikes);
  c.only = j.value("only", c.only);
  c.evaluation = j.value("evaluation", c.evaluation);
  c.linf_slack = j.value("linf_slack", c.linf_slack);
  c.t = j.value("t", c.t);
  c.method = j.value("method", c.method);
  c.allow_large = j.value("allow_large", c.allow_large);
  c.a_min = j.value("a_min", c.a_min);
  c.search = j.value("search", c.search);
  c.input = j.value("input", c.input);
  c.output = j.value("output", c.output);
  c.csv = j.value("csv", c.csv);
  read_optional(j, "assert_c1", c.assert_c1);
  read_optional(j, "assert_c2", c.assert_c2);
  read_optional(j, "assert_ratio", c.assert_ratio);
  return c;
}

Outcome execute(const RunConfig& c) {
  if (c.command == "gen") return cmd_gen(c);
  if (c.command == "check-net") return cmd_check_net(c);
  if (c.command == "min-t") return cmd_min_t(c);
  if (c.command == "dispersion") return cmd_dispersion(c);
  if (c.command == "sweep") return cmd_sweep(c);
  if (c.command == "witness") return cmd_witness(c);
  if (c.command == "compare") return cmd_compare(c);
  throw std::invalid_argument("unknown command: " + c.command);
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Universal discretization experiments on the torus", "unidisc"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: UNIDISC_THREADS or 1)");

  RunConfig c;
  std::string rerun_path;

  auto* gen = app.add_subcommand("gen", "generate a point set");
  add_common(gen, c);
  gen->add_option("--family", c.family, "net|sparse|tensorP|tensorPprime|random|universal-linf|universal-lq")
      ->required();
  gen->add_option("--q", c.q, "q for universal-lq");
  gen->add_option("--a", c.a, "per-axis margin for universal-lq");
  gen->add_option("--N", c.degrees, "tensor grid degrees")->delimiter(',');
  gen->add_option("--r", c.r, "net exponent (default n)");
  gen->add_option("--m", c.m, "number of random points");

  auto* check = app.add_subcommand("check-net", "verify the (t,r,d)-net property");
  check->add_option("--in", c.input, "point-set JSON")->required();
  check->add_option("--t", c.t, "quality parameter");
  check->add_option("--out", c.output, "output JSON file");

  auto* min_t = app.add_subcommand("min-t", "smallest t of a net");
  min_t->add_option("--in", c.input, "point-set JSON")->required();
  min_t->add_option("--out", c.output, "output JSON file");

  auto* disp = app.add_subcommand("dispersion", "largest empty box");
  disp->add_option("--in", c.input, "point-set JSON")->required();
  disp->add_option("--method", c.method, "exact|dyadic");
  disp->add_flag("--allow-large", c.allow_large, "lift the exact-scan size guard");
  disp->add_option("--out", c.output, "output JSON file");

  auto* sw = app.add_subcommand("sweep", "discretization ratios over the collection");
  add_common(sw, c);
  sw->add_option("--points", c.input, "point-set JSON");
  sw->add_option("--family", c.family, "generate the points instead of reading them");
  sw->add_option("--q", c.q, "q >= 1 or inf");
  sw->add_option("--a", c.a, "margin for universal-lq");
  sw->add_option("--N", c.degrees, "tensor grid degrees")->delimiter(',');
  sw->add_option("--r", c.r, "net exponent");
  sw->add_option("--m", c.m, "number of random points");
  sw->add_option("--samples", c.samples, "Gaussian samples per member");
  sw->add_option("--spikes", c.spikes, "spike samples per member");
  sw->add_option("--only", c.only, "single member s")->delimiter(',');
  sw->add_option("--evaluation", c.evaluation, "auto|exhaustive|local");
  sw->add_option("--linf-slack", c.linf_slack, "relative slack of the sup-norm bracket");
  sw->add_option("--csv", c.csv, "per-member CSV file");
  add_assert(sw, "--assert-c1", c.assert_c1, "fail unless C1_hat >= value");
  add_assert(sw, "--assert-c2", c.assert_c2, "fail unless C2_hat <= value");

  auto* wit = app.add_subcommand("witness", "empty box and Fejer kernel witness");
  add_common(wit, c);
  wit->add_option("--points", c.input, "point-set JSON");
  wit->add_option("--family", c.family, "generate the points instead of reading them");
  wit->add_option("--N", c.degrees, "tensor grid degrees")->delimiter(',');
  wit->add_option("--r", c.r, "net exponent");
  wit->add_option("--m", c.m, "number of random points");
  wit->add_option("--a-min", c.a_min, "required margin exponent");
  wit->add_option("--search", c.search, "auto|exact|dyadic");
  add_assert(wit, "--assert-ratio", c.assert_ratio, "fail unless ratio <= value");

  auto* cmp = app.add_subcommand("compare", "net vs sparse grid vs random points");
  add_common(cmp, c);
  cmp->add_option("--q", c.q, "q >= 1 or inf");
  cmp->add_option("--a", c.a, "margin for finite q");
  cmp->add_option("--samples", c.samples, "Gaussian samples per member");
  cmp->add_option("--spikes", c.spikes, "spike samples per member");
  cmp->add_option("--csv", c.csv, "CSV file");

  auto* rerun = app.add_subcommand("rerun", "replay the config embedded in an output file");
  rerun->add_option("--config", rerun_path, "output or config JSON")->required();
  std::string rerun_out;
  rerun->add_option("--out", rerun_out, "output JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (threads > 0) set_thread_count(threads);

  try {
    if (*rerun) {
      const nlohmann::json doc = load_json(rerun_path);
      c = config_from_json(doc.contains("config") ? doc.at("config") : doc);
      c.output = rerun_out;
    } else {
      for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
    }
    if (c.command == "witness" && c.input.empty() && c.family.empty()) {
      throw std::invalid_argument("give --points or --family");
    }
    Outcome outcome = execute(c);
    if (!c.output.empty()) {
      nlohmann::json doc = std::move(outcome.result);
      if (!doc.is_object()) doc = {{"result", std::move(doc)}};
      doc["tool"] = "unidisc";
      doc["version"] = kVersion;
      doc["config"] = to_json(c);
      doc["generated_at"] = timestamp();
      write_text(c.output, doc.dump(2) + "\n");
    }
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("unidisc");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace unidisc::cli
