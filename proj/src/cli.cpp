#include "d4census/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "d4census/arith.hpp"
#include "d4census/asymptotic.hpp"
#include "d4census/census.hpp"
#include "d4census/error.hpp"
#include "d4census/localsolve.hpp"
#include "d4census/verify.hpp"

namespace d4::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::vector<double> x;
  std::uint64_t pmax = 1'000'000;
  double tol = 1e-8;
  std::string suite;
  std::optional<std::uint64_t> bound;
  int workers = 1;
  std::string format = "text";
  std::string out_path;
  std::string sieve_cache;

  std::vector<std::int64_t> triple;
  std::uint64_t twist = 1;
  std::optional<std::uint64_t> prime;

  double start = 10.0;
  double stop = 80.0;
  std::optional<double> x4;
};

struct Outcome {
  json payload = json::object();
  std::string csv;  // command-specific CSV body, when the format asks for it
  int code = kOk;
};

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

BoundBox box_of(const RunConfig& c) {
  if (c.x.size() != 4) throw PreconditionError("--x needs four bounds X1 X2 X3 X4");
  return {c.x[0], c.x[1], c.x[2], c.x[3]};
}

json box_json(const BoundBox& b) { return json::array({b.x1, b.x2, b.x3, b.x4}); }

SieveTables obtain_sieve(std::uint64_t need, const RunConfig& c) {
  namespace fs = std::filesystem;
  if (!c.sieve_cache.empty() && fs::exists(c.sieve_cache)) {
    SieveTables cached = load_sieve_cache(c.sieve_cache);
    if (cached.covers(need)) return cached;
  }
  SieveTables t = SieveTables::build(need);
  if (!c.sieve_cache.empty()) save_sieve_cache(t, c.sieve_cache);
  return t;
}

EulerProductSpec euler_spec(const RunConfig& c) {
  EulerProductSpec s;
  s.pmax = c.pmax;
  return s;
}

Outcome cmd_count(const RunConfig& c) {
  const BoundBox box = box_of(c);
  const SieveTables tables = obtain_sieve(required_sieve_limit(box), c);
  CensusOptions opt;
  opt.workers = c.workers;
  opt.breakdown = c.format == "csv";
  opt.spec = euler_spec(c);
  const CensusReport r = exact_census(box, tables, opt);

  Outcome o;
  o.payload["box"] = box_json(box);
  o.payload["exact"] = r.exact;
  o.payload["predicted"] = r.predicted;
  o.payload["ratio"] = r.ratio;
  o.payload["triples_visited"] = r.triples_visited;
  if (opt.breakdown) {
    std::ostringstream csv;
    csv << "m1,m2,m3,twists,cumulative\n";
    for (const BreakdownRow& row : r.breakdown) {
      csv << row.triple.m1 << ',' << row.triple.m2 << ',' << row.triple.m3 << ',' << row.twists << ','
          << row.cumulative << '\n';
    }
    o.csv = csv.str();
  }
  return o;
}

Outcome cmd_predict(const RunConfig& c) {
  const BoundBox box = box_of(c);
  const EulerValue lead = leading_constant(euler_spec(c));
  Outcome o;
  o.payload["box"] = box_json(box);
  o.payload["leading_constant"] = lead.value;
  o.payload["leading_constant_error"] = lead.abs_error();
  o.payload["predicted"] = predicted_count(box, lead);
  return o;
}

Outcome cmd_constants(const RunConfig& c) {
  const EulerProductSpec spec = euler_spec(c);
  const EulerValue c1 = c_constant(1, spec);
  const EulerValue ct = c_tilde(spec);
  const EulerValue lead = leading_constant(spec);
  const IdentityResidual id = constant_identity(spec);
  const TamagawaReport tam = tamagawa_constant(spec);
  Outcome o;
  o.payload["c1"] = c1.value;
  o.payload["c_tilde"] = ct.value;
  o.payload["c_tilde_correction"] = c_tilde_correction(spec).value;
  o.payload["odd_zeta2_inverse"] = odd_zeta2_inverse(spec).value;
  o.payload["leading_constant"] = lead.value;
  o.payload["leading_constant_error"] = lead.abs_error();
  o.payload["identity_residual"] = id.residual;
  o.payload["identity_tail_bound"] = id.tail_bound;
  o.payload["tau2_etale"] = tam.tau2_etale.get_str();
  o.payload["rational_prefactor"] = tam.rational_prefactor.get_str();
  o.payload["tamagawa_product"] = tam.product;
  o.payload["odd_squarefree_density"] = odd_squarefree_density();
  return o;
}

Outcome cmd_verify(const RunConfig& c) {
  SuiteOptions opt;
  opt.pmax = c.pmax;
  opt.tol = c.tol;
  opt.bound = c.bound;
  opt.workers = c.workers;
  if (!c.x.empty()) opt.box = box_of(c);
  const SuiteResult r = run_suite(c.suite, opt);

  Outcome o;
  json checks = json::array();
  std::ostringstream csv;
  csv << "name,expected,actual,pass,hard\n";
  for (const Check& ch : r.checks) {
    checks.push_back({{"name", ch.name}, {"expected", ch.expected}, {"actual", ch.actual},
                      {"pass", ch.pass}, {"hard", ch.hard}});
    csv << '"' << ch.name << "\",\"" << ch.expected << "\",\"" << ch.actual << "\"," << ch.pass << ','
        << ch.hard << '\n';
  }
  o.payload["suite"] = r.suite;
  o.payload["checks"] = checks;
  o.payload["passed"] = r.passed();
  o.csv = csv.str();
  o.code = r.passed() ? kOk : kCheckFailure;
  return o;
}

Outcome cmd_classify(const RunConfig& c) {
  if (c.triple.size() != 3) throw PreconditionError("--triple needs m1 m2 m3");
  const SignedTriple t{c.triple[0], c.triple[1], c.triple[2]};
  const DecomposedTriple d = decompose_triple(t);
  const std::int64_t a = t.m1 * t.m2;
  const std::int64_t b = t.m1 * t.m3;

  Outcome o;
  o.payload["triple"] = {t.m1, t.m2, t.m3};
  o.payload["odd_parts"] = {d.m1p, d.m2p, d.m3p};
  o.payload["delta"] = {d.delta.d2, d.delta.d3};
  o.payload["nu"] = {d.nu.mu, d.nu.alpha, d.nu.beta};
  o.payload["eps"] = {d.eps[0], d.eps[1], d.eps[2]};
  o.payload["nondegenerate"] = is_nondegenerate(t);

  json symbols = json::object();
  std::vector<Place> places{RealPlace{}, TwoPlace{}};
  std::int64_t n = odd_part(t.m1 * t.m2 * t.m3);
  for (std::int64_t p = 3; p <= n; p += 2) {
    if (n % p != 0) continue;
    places.push_back(OddPrime{p});
    while (n % p == 0) n /= p;
  }
  for (const Place& v : places) symbols[to_string(v)] = hilbert_symbol(a, b, v);
  o.payload["hilbert_symbols"] = symbols;
  o.payload["odd_conditions"] = odd_place_conditions(t);
  o.payload["two_adic_condition"] = in_E_set({d.nu, d.eps}, d.delta);
  o.payload["soluble"] = satisfies_local_conditions(t);
  const auto point = find_conic_point(a, b, static_cast<std::int64_t>(c.bound.value_or(100)));
  o.payload["conic_point"] = point ? json{(*point)[0], (*point)[1], (*point)[2]} : json(nullptr);

  const InvariantVector inv = invariants_of(t, c.twist);
  o.payload["invariants"] = {inv.inv1, inv.inv2, inv.inv3, inv.inv4};
  if (c.prime) {
    const InertiaClass cls = inertia_class(*c.prime, t, c.twist);
    o.payload["prime"] = *c.prime;
    o.payload["inertia_class"] = std::string(to_string(cls));
    json rows = json::array();
    if (cls != InertiaClass::Unramified) {
      for (const SplittingRow& r : splitting_rows(cls)) {
        rows.push_back({{"M", r.m}, {"K1", r.k1}, {"K2", r.k2}, {"L", r.l}, {"K", r.k}});
      }
    }
    o.payload["splitting"] = rows;
  }
  return o;
}

Outcome cmd_sweep(const RunConfig& c, std::ostream& err) {
  if (!(c.start > 0.0)) throw PreconditionError("--start must be positive");
  std::vector<BoundBox> grid;
  for (double x = c.start; x <= c.stop * (1 + 1e-12); x *= 2) grid.push_back({x, x, x, c.x4.value_or(x)});

  Outcome o;
  json rows = json::array();
  std::ostringstream csv;
  csv << "x1,x2,x3,x4,exact,predicted,ratio\n";
  std::optional<SieveTables> tables;
  CensusOptions opt;
  opt.workers = c.workers;
  opt.spec = euler_spec(c);
  for (const BoundBox& box : grid) {
    try {
      const std::uint64_t need = required_sieve_limit(box);
      if (!tables || !tables->covers(need)) tables = obtain_sieve(need, c);
      const CensusReport r = exact_census(box, *tables, opt);
      csv << format_double(box.x1) << ',' << format_double(box.x2) << ',' << format_double(box.x3) << ','
          << format_double(box.x4) << ',' << r.exact << ',' << format_double(r.predicted) << ','
          << format_double(r.ratio) << '\n';
      rows.push_back({{"box", box_json(box)}, {"exact", r.exact}, {"predicted", r.predicted}, {"ratio", r.ratio}});
    } catch (const CapacityError& e) {
      err << "sweep: box X=" << format_double(box.x1) << ": " << e.what() << '\n';
      o.code = kCapacityError;
    }
  }
  o.payload["rows"] = rows;
  o.csv = csv.str();
  return o;
}

json config_echo(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["pmax"] = c.pmax;
  j["tol"] = c.tol;
  j["workers"] = c.workers;
  j["format"] = c.format;
  if (!c.x.empty()) j["x"] = c.x;
  if (!c.suite.empty()) j["suite"] = c.suite;
  if (c.bound) j["bound"] = *c.bound;
  if (!c.triple.empty()) j["triple"] = c.triple;
  if (c.command == "classify") j["twist"] = c.twist;
  if (c.prime) j["prime"] = *c.prime;
  if (c.command == "sweep") {
    j["start"] = c.start;
    j["stop"] = c.stop;
    if (c.x4) j["x4"] = *c.x4;
  }
  return j;
}

std::string render_text(const RunConfig& c, const Outcome& o) {
  std::ostringstream os;
  if (c.command == "verify") {
    os << "suite " << o.payload["suite"].get<std::string>() << '\n';
    for (const json& ch : o.payload["checks"]) {
      os << (ch["pass"].get<bool>() ? "PASS " : (ch["hard"].get<bool>() ? "FAIL " : "SOFT-FAIL "))
         << ch["name"].get<std::string>() << ": expected " << ch["expected"].get<std::string>() << ", actual "
         << ch["actual"].get<std::string>() << '\n';
    }
    os << (o.payload["passed"].get<bool>() ? "passed" : "failed") << '\n';
    return os.str();
  }
  if (c.command == "sweep") return o.csv;
  for (const auto& [key, value] : o.payload.items()) {
    os << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
  return os.str();
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--pmax", c.pmax, "Largest prime in truncated Euler products")
      ->check(CLI::Range(std::uint64_t{3}, std::uint64_t{4'000'000'000}));
  sub->add_option("--workers", c.workers, "Worker threads")->check(CLI::Range(1, 1024));
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  sub->add_option("--out", c.out_path, "Write the report to this file");
  sub->add_option("--sieve-cache", c.sieve_cache, "Sieve cache file (read, or written when missing)");
}

void add_box(CLI::App* sub, RunConfig& c, bool required) {
  auto* opt = sub->add_option("--x", c.x, "Bounds X1 X2 X3 X4")->expected(4)->check(CLI::NonNegativeNumber);
  if (required) opt->required();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Census of D4 octic fields by multi-invariants", "d4census"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* count = app.add_subcommand("count", "Exact census and main term over a box");
  add_box(count, c, true);
  add_common(count, c);

  auto* predict = app.add_subcommand("predict", "Main term C X1 X2 X3 X4");
  add_box(predict, c, true);
  add_common(predict, c);

  auto* constants = app.add_subcommand("constants", "Euler-product constants and identities");
  add_common(constants, c);

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", c.suite, "Suite name")->required();
  verify->add_option("--tol", c.tol, "Tolerance for floating checks")->check(CLI::PositiveNumber);
  verify->add_option("--bound", c.bound, "Suite-specific search bound");
  add_box(verify, c, false);
  add_common(verify, c);

  auto* classify = app.add_subcommand("classify", "Local data and invariants of one triple");
  classify->add_option("--triple", c.triple, "m1 m2 m3")->expected(3)->required();
  classify->add_option("--twist", c.twist, "Odd squarefree twist t");
  classify->add_option("--prime", c.prime, "Odd prime to classify");
  classify->add_option("--bound", c.bound, "Height bound for the conic point search");
  add_common(classify, c);

  auto* sweep = app.add_subcommand("sweep", "Doubling sweep over symmetric boxes");
  sweep->add_option("--start", c.start, "First X");
  sweep->add_option("--stop", c.stop, "Last X (inclusive)");
  sweep->add_option("--x4", c.x4, "Hold X4 fixed")->check(CLI::NonNegativeNumber);
  add_common(sweep, c);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
  if (c.command == "verify") {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), c.suite) == names.end()) {
      err << "error: --suite: unknown suite '" << c.suite << "'\n";
      return kUsageError;
    }
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    if (c.command == "count") o = cmd_count(c);
    else if (c.command == "predict") o = cmd_predict(c);
    else if (c.command == "constants") o = cmd_constants(c);
    else if (c.command == "verify") o = cmd_verify(c);
    else if (c.command == "classify") o = cmd_classify(c);
    else o = cmd_sweep(c, err);
  } catch (const CapacityError& e) {
    err << "error: capacity: " << e.what() << '\n';
    return kCapacityError;
  } catch (const FormatError& e) {
    err << "error: --sieve-cache: " << e.what() << '\n';
    return kCapacityError;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::string body;
  if (c.format == "json") {
    json env;
    env["tool"] = "d4census";
    env["version"] = kVersion;
    env["config"] = config_echo(c);
    env["result"] = o.payload;
    env["timing"] = {{"seconds", seconds}};
    body = env.dump(2) + "\n";
  } else if (c.format == "csv" && !o.csv.empty()) {
    body = o.csv;
  } else if (c.format == "csv") {
    std::ostringstream csv;
    csv << "key,value\n";
    for (const auto& [key, value] : o.payload.items()) {
      csv << key << ',' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
    body = csv.str();
  } else {
    body = render_text(c, o);
  }

  if (c.out_path.empty()) {
    out << body;
  } else {
    std::ofstream f(c.out_path, std::ios::binary);
    if (!f) {
      err << "error: --out: cannot open " << c.out_path << '\n';
      return kUsageError;
    }
    f << body;
  }
  return o.code;
}

}  // namespace d4::cli
