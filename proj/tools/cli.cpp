#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "riesz/gindikin.hpp"
#include "riesz/jordan.hpp"
#include "riesz/json_io.hpp"
#include "riesz/random.hpp"
#include "riesz/sampler.hpp"
#include "riesz/verify.hpp"

namespace riesz::cli {

namespace {

// Carries an exit code out of a command together with its message.
struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) { throw Failure{code, message}; }

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\n\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\n\r");
  return std::string(text.substr(first, last - first + 1));
}

double parse_number(const std::string& token) {
  const std::string t = trim(token);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw std::invalid_argument("not a finite number: '" + t + "'");
  return v;
}

// Inline JSON if the text starts with '{' or '[', otherwise a file path.
Json load_json(const std::string& text, const char* what) {
  const std::string t = trim(text);
  try {
    if (!t.empty() && (t.front() == '{' || t.front() == '[')) return Json::parse(t);
    std::ifstream in(t);
    if (!in) fail(kUsage, std::string(what) + ": cannot open '" + t + "'");
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(kUsage, std::string(what) + ": invalid JSON (" + e.what() + ")");
  }
}

SymElement load_element(const std::string& text, const char* what) {
  const Json j = load_json(text, what);
  try {
    return sym_element_from_json(j);
  } catch (const std::exception& e) {
    fail(kUsage, std::string(what) + ": " + e.what());
  }
}

// Shared --s / --u / --d / --zero-tol handling.
struct ParamOptions {
  std::string s;
  std::string u;
  double d = 1.0;
  double zero_tol = 0.0;
  CLI::Option* s_opt = nullptr;
  CLI::Option* u_opt = nullptr;

  void attach(CLI::App* cmd, bool with_d) {
    s_opt = cmd->add_option("--s", s, "parameter s (comma list or JSON array)");
    u_opt = cmd->add_option("--u", u, "Gindikin coordinates u (comma list or JSON array)");
    s_opt->excludes(u_opt);
    if (with_d) cmd->add_option("--d", d, "Peirce constant (1 for real symmetric matrices)");
    cmd->add_option("--zero-tol", zero_tol, "snap recovered |u_i| <= tol to 0")->check(CLI::NonNegativeNumber);
  }

  bool given() const { return s_opt->count() + u_opt->count() > 0; }

  std::vector<double> list() const {
    try {
      return parse_list(s_opt->count() ? s : u);
    } catch (const std::exception& e) {
      fail(kUsage, std::string(s_opt->count() ? "--s" : "--u") + ": " + e.what());
    }
  }

  void require_given() const {
    if (!given()) fail(kUsage, "one of --s or --u is required");
    if (!(d > 0.0) || !std::isfinite(d)) fail(kUsage, "--d must be a positive number");
  }

  // The verdict together with the s it refers to.
  std::pair<XiVerdict, std::vector<double>> verdict() const {
    require_given();
    const auto values = list();
    if (s_opt->count()) return {u_from_s(values, d, zero_tol), values};
    XiVerdict v;
    v.u = values;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] < 0.0) {
        v.first_negative = static_cast<int>(i);
        return {v, {}};
      }
    }
    v.in_xi = true;
    v.param = param_from_u(values, d);
    return {v, v.param->s};
  }

  GindikinParam certified() const {
    const auto [v, s] = verdict();
    if (!v.in_xi) {
      std::ostringstream msg;
      msg << "parameter is not in the Gindikin set: u_" << v.first_negative + 1 << " = " << v.u[v.first_negative]
          << " < 0";
      fail(kNotInXi, msg.str());
    }
    return *v.param;
  }
};

SymElement tilt_or_default(const std::string& text, const CLI::Option* opt, int r, const char* what) {
  const SymElement theta = opt->count() ? load_element(text, what) : -SymElement::identity(r);
  if (theta.r() != r) {
    std::ostringstream msg;
    msg << what << " is " << theta.r() << " x " << theta.r() << " but the parameter has length " << r;
    fail(kUsage, msg.str());
  }
  try {
    require_interior_tilt(theta, what);
  } catch (const DomainError& e) {
    fail(kBadTilt, e.what());
  }
  return theta;
}

void require_real(const GindikinParam& param) {
  if (!param.samplable()) fail(kUsage, "this command is only available for d = 1 (real symmetric matrices)");
}

// ---------------------------------------------------------------- check

int cmd_check(const ParamOptions& p, std::ostream& out, std::ostream& err) {
  const auto [v, s] = p.verdict();
  out << to_json(v, s).dump() << '\n';
  if (!v.in_xi) {
    err << "not in the Gindikin set: u_" << v.first_negative + 1 << " = " << v.u[v.first_negative] << " < 0\n";
    return kNotInXi;
  }
  return kOk;
}

// ---------------------------------------------------------------- sample

struct SampleOptions {
  ParamOptions param;
  std::string theta;
  std::string spec;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "ndjson";
  unsigned threads = 0;
  CLI::Option* theta_opt = nullptr;
  CLI::Option* spec_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

int cmd_sample(const SampleOptions& o, std::ostream& out, std::ostream& err) {
  GindikinParam param;
  SymElement theta;
  std::size_t n = o.n;
  std::uint64_t seed = o.seed;
  if (o.spec_opt->count()) {
    if (o.param.given() || o.theta_opt->count()) fail(kUsage, "--spec cannot be combined with --s, --u or --theta");
    SampleJob job;
    try {
      job = sample_job_from_json(load_json(o.spec, "--spec"));
    } catch (const Failure&) {
      throw;
    } catch (const std::exception& e) {
      fail(kUsage, std::string("--spec: ") + e.what());
    }
    const auto v = u_from_s(job.s, 1.0, o.param.zero_tol);
    if (!v.in_xi) fail(kNotInXi, "--spec: s is not in the Gindikin set");
    param = *v.param;
    try {
      require_interior_tilt(job.theta, "--spec theta");
    } catch (const DomainError& e) {
      fail(kBadTilt, e.what());
    }
    theta = job.theta;
    if (theta.r() != param.r) fail(kUsage, "--spec: theta and s sizes differ");
    if (!o.n_opt->count()) n = job.n;
    if (!o.seed_opt->count()) seed = job.seed;
  } else {
    param = o.param.certified();
    require_real(param);
    theta = tilt_or_default(o.theta, o.theta_opt, param.r, "--theta");
  }
  if (n < 1) fail(kUsage, "--n must be at least 1");

  const RieszSpec spec = RieszSpec::make(param, theta, seed, n);
  const SampleBatch batch = sample_riesz(spec, SamplerOptions{o.threads});

  std::ofstream file;
  std::ostream* sink = &out;
  if (o.out_opt->count()) {
    file.open(o.out_path, std::ios::binary | std::ios::trunc);
    if (!file) fail(kUsage, "--out: cannot open '" + o.out_path + "'");
    sink = &file;
  }
  if (o.format == "ndjson") {
    write_ndjson(batch, *sink);
  } else if (o.format == "csv") {
    write_csv(batch, *sink);
  } else {
    Json samples = Json::array();
    for (const auto& x : batch.samples) samples.push_back(to_json(x));
    Json doc{{"spec", spec_to_json(spec)}, {"partition", to_json(batch.partition)}, {"samples", std::move(samples)}};
    *sink << doc.dump() << '\n';
  }
  sink->flush();
  if (!*sink) fail(kUsage, "failed writing samples");
  err << "wrote " << n << " samples (rank " << batch.partition.total_rank() << ", k = " << batch.partition.k()
      << ")\n";
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
  ParamOptions param;
  std::string theta;
  std::string zeta;
  std::size_t n = 200000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double z_limit = 4.0;
  CLI::Option* theta_opt = nullptr;
};

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  const GindikinParam param = o.param.certified();
  require_real(param);
  const SymElement theta = tilt_or_default(o.theta, o.theta_opt, param.r, "--theta");
  const SymElement zeta = load_element(o.zeta, "--zeta");
  if (zeta.r() != param.r) fail(kUsage, "--zeta has the wrong size");
  if (o.n < 1) fail(kUsage, "--n must be at least 1");
  try {
    require_interior_tilt(zeta, "--zeta");
    require_interior_tilt(2.0 * zeta - theta, "variance guard");
  } catch (const DomainError& e) {
    fail(kBadTilt, std::string(e.what()) +
                       "; the estimator exp(<zeta - theta, X>) needs -(2 zeta - theta) positive definite");
  }
  const RieszSpec spec = RieszSpec::make(param, theta, o.seed, o.n);
  const LaplaceReport rep = laplace_mc(sample_riesz(spec, SamplerOptions{o.threads}), zeta);
  Json j = to_json(rep);
  j["z_limit"] = o.z_limit;
  j["pass"] = rep.within(o.z_limit);
  out << j.dump() << '\n';
  if (!rep.within(o.z_limit)) {
    err << "Monte Carlo Laplace estimate is " << rep.z_score << " standard errors from the exact value\n";
    return kTestFailed;
  }
  return kOk;
}

// ---------------------------------------------------------------- density

int cmd_density(const ParamOptions& p, const std::string& x_text, std::ostream& out) {
  const GindikinParam param = p.certified();
  require_real(param);
  if (!param.absolutely_continuous()) {
    fail(kUsage,
         "R_s is singular for this s (some u_i = 0): it is carried by the boundary of the cone and has no density "
         "with respect to Lebesgue measure");
  }
  const SymElement x = load_element(x_text, "--x");
  if (x.r() != param.r) fail(kUsage, "--x has the wrong size");
  double log_f = 0.0;
  try {
    log_f = log_density_ac(param.s, x);
  } catch (const DomainError& e) {
    fail(kUsage, e.what());
  }
  out << Json{{"s", param.s}, {"x", to_json(x)}, {"log_density", log_f}, {"density", std::exp(log_f)}}.dump()
      << '\n';
  return kOk;
}

// ---------------------------------------------------------------- selftest

struct Section {
  explicit Section(std::string n) : name(std::move(n)) {}

  std::string name;
  bool pass = true;
  Json details = Json::array();
  std::vector<std::string> failures;

  void record(const std::string& what, bool ok, Json info) {
    info["name"] = what;
    info["pass"] = ok;
    details.push_back(std::move(info));
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

Section selftest_identities(const std::vector<int>& ranks, int trials) {
  Section sec{"identities"};
  for (int r : ranks) {
    for (const auto& rep : identity_suite(r, trials, 17)) {
      Json j = to_json(rep);
      j.erase("name");
      j.erase("pass");
      sec.record(rep.name + " (r=" + std::to_string(r) + ")", rep.pass, std::move(j));
    }
  }
  return sec;
}

Section selftest_gindikin(int trials) {
  Section sec{"gindikin"};
  std::size_t mismatches = 0;
  const int count = std::max(100, 4 * trials);
  for (int t = 0; t < count; ++t) {
    RandomStream rng(29, static_cast<std::uint64_t>(t));
    const int r = 1 + static_cast<int>(rng() % 6);
    std::vector<double> u(r);
    for (double& v : u) v = rng.uniform() < 0.3 ? 0.0 : static_cast<double>(1 + rng() % 4096) / 1024.0;
    const auto s = s_from_u(u, 1.0);
    const auto v = u_from_s(s, 1.0);
    bool ok = v.in_xi && v.u == u;
    if (ok) {
      std::vector<double> sum(r, 0.0);
      for (const auto& bp : block_params(build_partition(*v.param)))
        for (int i = 0; i < r; ++i) sum[i] += bp.s[i];
      ok = sum == s;
    }
    if (!ok) ++mismatches;
  }
  sec.record("round_trip", mismatches == 0, Json{{"vectors", count}, {"mismatches", mismatches}});

  Json grid = Json::array();
  bool grid_ok = true;
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0, 1.25}) {
    const std::vector<double> s{p, p, p};
    const bool in = u_from_s(s, 1.0).in_xi;
    const bool expected = p == 0.0 || p == 0.5 || p >= 1.0;
    grid_ok = grid_ok && in == expected;
    grid.push_back(Json{{"p", p}, {"in_xi", in}});
  }
  sec.record("diagonal_membership_r3", grid_ok, Json{{"grid", std::move(grid)}});
  return sec;
}

Section selftest_quadrature() {
  Section sec{"quadrature"};
  Matrix mixed(2, 2);
  mixed << -1.5, 0.4, 0.4, -1.0;
  const std::vector<std::pair<std::array<double, 2>, SymElement>> points{
      {{2.0, 1.0}, -SymElement::identity(2)},
      {{2.0, 2.0}, SymElement::from_dense(mixed)},
      {{0.7, 0.6}, -2.0 * SymElement::identity(2)},
  };
  for (const auto& [s, theta] : points) {
    const QuadratureResult res = quadrature_r2(s, theta, 1e-6);
    std::ostringstream name;
    name << "s=(" << s[0] << "," << s[1] << ")";
    sec.record(name.str(), res.relative_error <= 1e-6, to_json(res));
  }
  return sec;
}

Section selftest_laplace(std::size_t n, Section& rank) {
  Section sec{"laplace"};
  struct Case {
    std::string name;
    std::vector<double> s;
    SymElement theta;
    SymElement zeta;
    int expected_rank;
  };
  const std::vector<Case> cases{
      {"wishart_rank1_r2", {0.5, 0.5}, -0.5 * SymElement::identity(2), -0.6 * SymElement::identity(2), 1},
      {"singular_r4", {1.2, 0.5, 1.2, 1.0}, -SymElement::identity(4), -1.25 * SymElement::identity(4), 2},
      {"ac_r3", {2.0, 1.5, 1.8}, -SymElement::identity(3), -1.3 * SymElement::identity(3), 3},
  };
  for (const auto& c : cases) {
    const auto v = u_from_s(c.s, 1.0);
    const SampleBatch batch = sample_riesz(RieszSpec::make(*v.param, c.theta, 41, n));
    const LaplaceReport rep = laplace_mc(batch, c.zeta);
    Json j = to_json(rep);
    j.erase("theta");
    j.erase("zeta");
    sec.record(c.name, rep.within(4.0), std::move(j));
    const RankProfile prof = rank_profile(batch, c.expected_rank);
    rank.record(c.name, prof.pass, to_json(prof));
  }
  return sec;
}

int cmd_selftest(int r, int trials, std::ostream& out, std::ostream& err) {
  if (trials < 1) fail(kUsage, "--trials must be at least 1");
  std::vector<int> ranks;
  if (r == 0) {
    ranks = {2, 3, 4, 5, 6};
  } else if (r >= 2 && r <= 12) {
    ranks = {r};
  } else {
    fail(kUsage, "--r must be between 2 and 12");
  }
  std::vector<Section> sections;
  sections.push_back(selftest_identities(ranks, trials));
  sections.push_back(selftest_gindikin(trials));
  sections.push_back(selftest_quadrature());
  Section rank{"rank"};
  sections.push_back(selftest_laplace(static_cast<std::size_t>(std::max(2000, 200 * trials)), rank));
  sections.push_back(std::move(rank));

  bool pass = true;
  Json js = Json::array();
  for (const auto& sec : sections) {
    pass = pass && sec.pass;
    js.push_back(Json{{"name", sec.name}, {"pass", sec.pass}, {"checks", sec.details}});
    for (const auto& f : sec.failures) err << "FAIL " << sec.name << ": " << f << '\n';
  }
  out << Json{{"pass", pass}, {"sections", std::move(js)}}.dump() << '\n';
  return pass ? kOk : kTestFailed;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  const std::string t = trim(text);
  std::vector<double> values;
  if (!t.empty() && t.front() == '[') {
    Json j;
    try {
      j = Json::parse(t);
    } catch (const Json::exception& e) {
      throw std::invalid_argument(std::string("invalid JSON array: ") + e.what());
    }
    if (!j.is_array()) throw std::invalid_argument("expected a JSON array");
    for (const auto& v : j) {
      if (!v.is_number() || !std::isfinite(v.get<double>()))
        throw std::invalid_argument("array entries must be finite numbers");
      values.push_back(v.get<double>());
    }
  } else {
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = t.find(',', pos);
      values.push_back(parse_number(t.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (values.empty()) throw std::invalid_argument("empty list");
  return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Riesz measures on the cone of positive semidefinite matrices"};
  app.name("riesz");
  app.require_subcommand(1, 1);

  ParamOptions check_opts;
  auto* check = app.add_subcommand("check", "decide membership in the Gindikin set and print the block partition");
  check_opts.attach(check, true);

  SampleOptions sample_opts;
  auto* sample = app.add_subcommand("sample", "draw from the tilted Riesz law exp(<theta,x>) R_s(dx) / L(theta)");
  sample_opts.param.attach(sample, true);
  sample_opts.theta_opt = sample->add_option("--theta", sample_opts.theta, "tilt: JSON file or inline (default -e)");
  sample_opts.spec_opt = sample->add_option("--spec", sample_opts.spec, "sampling job: JSON file or inline");
  sample_opts.n_opt = sample->add_option("--n", sample_opts.n, "number of samples");
  sample_opts.seed_opt = sample->add_option("--seed", sample_opts.seed, "random seed");
  sample_opts.out_opt = sample->add_option("--out", sample_opts.out_path, "output file (default stdout)");
  sample->add_option("--format", sample_opts.format, "ndjson, json or csv")
      ->check(CLI::IsMember({"ndjson", "json", "csv"}));
  sample->add_option("--threads", sample_opts.threads, "worker threads (0: all cores)");

  VerifyOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "Monte Carlo check of the Laplace transform at zeta");
  verify_opts.param.attach(verify, true);
  verify_opts.theta_opt = verify->add_option("--theta", verify_opts.theta, "tilt: JSON file or inline (default -e)");
  verify->add_option("--zeta", verify_opts.zeta, "evaluation point: JSON file or inline")->required();
  verify->add_option("--n", verify_opts.n, "number of samples");
  verify->add_option("--seed", verify_opts.seed, "random seed");
  verify->add_option("--threads", verify_opts.threads, "worker threads (0: all cores)");
  verify->add_option("--z-limit", verify_opts.z_limit, "pass threshold on |z|")->check(CLI::PositiveNumber);

  ParamOptions density_opts;
  std::string density_x;
  auto* density = app.add_subcommand("density", "Lebesgue density of R_s at x (absolutely continuous s only)");
  density_opts.attach(density, true);
  density->add_option("--x", density_x, "point: JSON file or inline")->required();

  int self_r = 0;
  int self_trials = 500;
  auto* selftest = app.add_subcommand("selftest", "run the built-in verification suite");
  selftest->add_option("--r", self_r, "restrict the identity checks to one rank (default 2..6)");
  selftest->add_option("--trials", self_trials, "random trials per identity");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    for (auto* sub : app.get_subcommands()) err << sub->help();
    return kUsage;
  }

  try {
    if (check->parsed()) return cmd_check(check_opts, out, err);
    if (sample->parsed()) return cmd_sample(sample_opts, out, err);
    if (verify->parsed()) return cmd_verify(verify_opts, out, err);
    if (density->parsed()) return cmd_density(density_opts, density_x, out);
    return cmd_selftest(self_r, self_trials, out, err);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kBadTilt;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace riesz::cli
