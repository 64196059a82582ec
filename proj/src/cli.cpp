#include <cslab/bounds.hpp>
#include <cslab/certify.hpp>
#include <cslab/cli.hpp>
#include <cslab/experiments.hpp>
#include <cslab/io.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace cslab {

namespace {

namespace fs = std::filesystem;

const char* const kRecoveryCsvHelp =
  "CSV (--csv): successes,trials,rate,wilson_low,wilson_high\n"
  "Records (--records): trial,seed,certificate_holds,max_correlation,solver_converged,"
  "solver_recovered,solver_iterations,recovery_error,success";
const char* const kPhaseCsvHelp =
  "CSV (--csv): s,m,successes,trials,rate,wilson_low,wilson_high,overlay_m\n"
  "SVG (--svg): gray-scale heatmap, overlay bound as a red polyline";
const char* const kTailCsvHelp =
  "CSV (--csv): bound,parameter,exceedances,trials,frequency,bound_value,slack,passes";
const char* const kGramCsvHelp =
  "CSV (--csv): m,successes,trials,rate,wilson_low,wilson_high,target,slack,passes";
const char* const kCertifyCsvHelp = "CSV (--csv): column,correlation  (off-support columns, 1-based)";

int default_workers()
{
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Removes --config FILE from args and splices its key=value lines in as
// --key value right after the subcommand words.
std::vector<std::string> expand_config(const std::vector<std::string>& args)
{
  std::vector<std::string> rest;
  std::string config;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw DomainError("--config requires a file name");
      config = args[++k];
    } else if (args[k].rfind("--config=", 0) == 0) {
      config = args[k].substr(9);
    } else {
      rest.push_back(args[k]);
    }
  }
  if (config.empty()) return rest;

  std::ifstream in(config);
  if (!in) throw IoError("cannot open config file '" + config + "'");
  std::vector<std::string> injected;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError(config + ":" + std::to_string(line_no) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    if (key.empty() || key == "config")
      throw IoError(config + ":" + std::to_string(line_no) + ": bad key");
    injected.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }

  std::size_t words = 0;
  while (words < rest.size() && !rest[words].empty() && rest[words][0] != '-') ++words;
  rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(words), injected.begin(), injected.end());
  return rest;
}

complexd parse_sign(const std::string& token)
{
  if (token == "+" || token == "+1" || token == "1") return 1.0;
  if (token == "-" || token == "-1") return -1.0;
  const auto colon = token.find(':');
  try {
    if (colon != std::string::npos)
      return {parse_double(token.substr(0, colon)), parse_double(token.substr(colon + 1))};
    return parse_double(token);
  } catch (const IoError&) {
    throw DomainError("bad sign '" + token + "' (expected +, -, a real number or re:im)");
  }
}

std::vector<std::string> split_list(const std::string& text)
{
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw DomainError("empty item in list '" + text + "'");
    items.push_back(item);
  }
  return items;
}

std::vector<double> parse_reals(const std::string& text)
{
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    try {
      out.push_back(parse_double(item));
    } catch (const IoError&) {
      throw DomainError("not a number: '" + item + "'");
    }
  }
  return out;
}

std::vector<Index> parse_indices(const std::string& text)
{
  std::vector<Index> out;
  for (const auto& item : split_list(text)) {
    Index v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw DomainError("not an integer: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::string join(const std::vector<std::string>& items, const char* sep)
{
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) out += (k ? sep : "") + items[k];
  return out;
}

std::string format_short(double v)
{
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string describe(const RateEstimate& r)
{
  return "rate=" + format_short(r.rate) + " (" + std::to_string(r.successes) + "/"
         + std::to_string(r.trials) + ", 95% Wilson [" + format_short(r.wilson_low) + ", "
         + format_short(r.wilson_high) + "])";
}

// Options shared by the Monte Carlo commands.
struct Common
{
  std::uint64_t seed = 1;
  std::int64_t trials = 1000;
  std::string out_dir;
  std::string csv;
  int workers = default_workers();
};

void add_common(CLI::App* sub, Common& c)
{
  sub->add_option("--seed", c.seed, "master seed");
  sub->add_option("--trials", c.trials, "number of Monte Carlo trials")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out_dir, "output directory (manifest.json; relative --csv/--svg paths)");
  sub->add_option("--csv", c.csv, "CSV output file");
  sub->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
}

struct Outputs
{
  fs::path dir;
  std::vector<std::string> written;

  explicit Outputs(const Common& c) : dir(c.out_dir.empty() ? fs::path(".") : fs::path(c.out_dir))
  {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  }

  fs::path resolve(const std::string& name) const
  {
    const fs::path p(name);
    return p.is_relative() ? dir / p : p;
  }

  void csv(const std::string& name, const CsvTable& table)
  {
    if (name.empty()) return;
    const auto path = resolve(name);
    write_csv(path, table);
    written.push_back(path.string());
  }

  void text(const std::string& name, const std::string& content)
  {
    if (name.empty()) return;
    const auto path = resolve(name);
    write_text(path, content);
    written.push_back(path.string());
  }
};

std::map<std::string, std::string> resolved_parameters(const CLI::App* sub)
{
  std::map<std::string, std::string> params;
  for (const CLI::Option* opt : sub->get_options()) {
    std::string name = opt->get_name(false, false);
    while (!name.empty() && name[0] == '-') name.erase(0, 1);
    if (name.empty() || name == "help") continue;
    params[name] = opt->count() > 0 ? join(opt->reduced_results(), ",") : opt->get_default_str();
  }
  return params;
}

void emit_manifest(Outputs& outputs, const std::string& command, const CLI::App* sub,
                   const std::vector<std::string>& args, std::uint64_t seed,
                   std::chrono::steady_clock::time_point start)
{
  RunManifest m;
  m.command = command;
  m.arguments = args;
  m.parameters = resolved_parameters(sub);
  m.master_seed = seed;
  m.version = kVersion;
  m.duration_seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.outputs = outputs.written;
  write_text(outputs.dir / "manifest.json", to_json(m));
}

EnsembleSpec make_ensemble(const std::string& name, const std::optional<double>& c_tilde)
{
  EnsembleSpec spec = parse_ensemble(name);
  if (c_tilde) spec.concentration_constant = *c_tilde;
  validate(spec);
  return spec;
}

SignalSpec make_signal_spec(const std::string& signal, const std::string& magnitudes)
{
  SignalSpec spec;
  if (signal == "complex")
    spec.sign_model = SignModel::complex_uniform_phase;
  else if (signal != "real")
    throw DomainError("--signal must be real or complex");
  if (magnitudes == "uniform")
    spec.magnitude_model = MagnitudeModel::uniform;
  else if (magnitudes != "unit")
    throw DomainError("--magnitudes must be unit or uniform");
  return spec;
}

struct BoundOptions
{
  std::string theorem, tail;
  bool covering = false;
  BoundParams p;
};

int run_bound(const BoundOptions& o, std::ostream& out)
{
  const int selected = !o.theorem.empty() + !o.tail.empty() + o.covering;
  if (selected != 1) throw DomainError("bound: give exactly one of --theorem, --tail, --covering");
  if (!o.theorem.empty()) {
    const auto kind = parse_measurement_bound(o.theorem);
    const auto r = min_measurements(kind, o.p);
    out << o.theorem << ": m=" << r.m << " rhs=" << format_double(r.rhs);
    if (r.alpha) out << " alpha=" << format_double(*r.alpha);
    if (r.gamma) out << " gamma=" << format_double(*r.gamma);
    if (r.delta) out << " delta=" << format_double(*r.delta);
    if (r.covering_C) out << " C=" << format_double(*r.covering_C);
    out << '\n';
  } else if (!o.tail.empty()) {
    const auto kind = parse_tail_bound(o.tail);
    out << o.tail << ": " << format_double(tail_bound(kind, o.p)) << '\n';
  } else {
    if (!o.p.c_tilde) throw DomainError("bound --covering requires --c-tilde");
    const auto cc = covering_constant(*o.p.c_tilde);
    out << "covering: C=" << format_double(cc.C) << " rho=" << format_double(cc.rho) << '\n';
  }
  return kExitOk;
}

struct CertifyOptions
{
  std::string matrix;
  std::string support; // 1-based, comma-separated
  std::string signs;
  std::string csv;
};

template <typename Scalar>
int certify_with(const Matrix<Scalar>& A, const IndexSet& S, const Vector<Scalar>& signs,
                 const std::string& csv, std::ostream& out)
{
  const auto r = fuchs_certificate(A, S, signs);
  out << "holds=" << (r.holds ? "true" : "false") << " max_corr=" << format_short(r.max_correlation)
      << " injective=" << (r.injective ? "true" : "false")
      << " sigma_min=" << format_short(r.sigma_min) << " boundary=" << (r.boundary ? "true" : "false")
      << '\n';
  if (!csv.empty()) {
    CsvTable t{{"column", "correlation"}, {}};
    for (std::size_t k = 0; k < r.off_support.size(); ++k)
      t.rows.push_back({std::to_string(r.off_support[k] + 1), format_double(r.correlations[k])});
    write_csv(fs::path(csv), t);
  }
  return kExitOk;
}

int run_certify(const CertifyOptions& o, std::ostream& out)
{
  const auto file = read_matrix(fs::path(o.matrix));
  IndexSet S;
  for (Index j : parse_indices(o.support)) {
    if (j < 1 || j > file.values.cols())
      throw DomainError("certify: support index " + std::to_string(j) + " outside 1.."
                        + std::to_string(file.values.cols()));
    S.push_back(j - 1);
  }
  std::vector<complexd> signs;
  for (const auto& tok : split_list(o.signs)) signs.push_back(parse_sign(tok));
  if (signs.size() != S.size())
    throw DimensionError("certify: " + std::to_string(signs.size()) + " signs for "
                         + std::to_string(S.size()) + " support indices");

  const bool real_signs =
    std::all_of(signs.begin(), signs.end(), [](complexd z) { return z.imag() == 0.0; });
  if (!file.is_complex && real_signs) {
    Eigen::VectorXd sv(static_cast<Index>(signs.size()));
    for (std::size_t k = 0; k < signs.size(); ++k) sv(static_cast<Index>(k)) = signs[k].real();
    return certify_with<double>(file.real(), S, sv, o.csv, out);
  }
  Eigen::VectorXcd sv = Eigen::Map<const Eigen::VectorXcd>(signs.data(), static_cast<Index>(signs.size()));
  return certify_with<complexd>(file.values, S, sv, o.csv, out);
}

struct SolveOptions
{
  std::string matrix, rhs, output;
  SolverOptions solver;
};

template <typename Scalar>
int solve_with(const Matrix<Scalar>& A, const Vector<Scalar>& y, const SolveOptions& o,
               std::ostream& out, std::ostream& err)
{
  const auto r = basis_pursuit<Scalar>(A, y, o.solver);
  std::vector<std::string> support;
  for (Index j : r.support) support.push_back(std::to_string(j + 1));
  out << "converged=" << (r.converged ? "true" : "false") << " iterations=" << r.iterations
      << " objective=" << format_double(r.objective)
      << " residual=" << format_short(r.feasibility_residual) << " support=" << join(support, ",")
      << '\n';
  if (!o.output.empty()) write_matrix(fs::path(o.output), Matrix<Scalar>(r.z));
  if (!r.converged) {
    err << "solve: no convergence within " << o.solver.max_iterations << " iterations\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

int run_solve(const SolveOptions& o, std::ostream& out, std::ostream& err)
{
  const auto A = read_matrix(fs::path(o.matrix));
  const auto y = read_matrix(fs::path(o.rhs));
  if (y.values.cols() != 1) throw DimensionError("solve: --rhs must be a single column");
  if (y.values.rows() != A.values.rows())
    throw DimensionError("solve: --rhs has " + std::to_string(y.values.rows()) + " rows, A has "
                         + std::to_string(A.values.rows()));
  if (!A.is_complex && !y.is_complex)
    return solve_with<double>(A.real(), y.real().col(0), o, out, err);
  return solve_with<complexd>(A.values, y.values.col(0), o, out, err);
}

struct McOptions
{
  Common common;
  std::string ensemble = "gaussian";
  std::optional<double> c_tilde;
  Index N = 1000, m = 100, s = 5;
  std::string mode = "certificate";
  std::string signal = "real";
  std::string magnitudes = "unit";
  std::string records;
  std::string svg;
  std::string s_values, m_values;
  std::string overlay;
  std::optional<double> eps, c, delta;
  std::string values; // r or t grid
  std::optional<Index> M;
  std::string a;
  bool refinement = false;
  std::optional<Index> m_override;
};

std::string describe_tail(const TailTable& table)
{
  bool all = true;
  std::ostringstream s;
  for (const auto& row : table) {
    all &= row.passes;
    s << " [" << row.bound_name << " " << format_short(row.parameter)
      << ": freq=" << format_short(row.frequency) << " bound=" << format_short(row.bound)
      << (row.passes ? "" : " EXCEEDED") << "]";
  }
  return std::string(all ? "within bounds" : "BOUND EXCEEDED") + s.str();
}

} // namespace

int run_command(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }

  CLI::App app{"Sparse recovery laboratory: bounds, certificates, basis pursuit, Monte Carlo"};
  app.name("cslab");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  BoundOptions bo;
  auto* bound = app.add_subcommand("bound", "evaluate a sample-complexity or tail bound");
  bound->add_option("--theorem", bo.theorem,
                    "gaussian_2_1 | gaussian_asymptotic_2_2 | subgaussian_2_5 | bernoulli_2_7 | gram_E_2");
  bound->add_option("--tail", bo.tail,
                    "gaussian_smin_B1 | gaussian_C1 | subgaussian_sum_D1 | concentration_E1 | "
                    "bernoulli_concentration_2_6");
  bound->add_flag("--covering", bo.covering, "covering constant C and rho for --c-tilde");
  bound->add_option("--s", bo.p.s);
  bound->add_option("--N", bo.p.N);
  bound->add_option("--eps", bo.p.eps);
  bound->add_option("--c", bo.p.c, "subgaussian constant");
  bound->add_option("--c-tilde", bo.p.c_tilde, "concentration constant");
  bound->add_option("--delta", bo.p.delta);
  bound->add_option("--r", bo.p.r);
  bound->add_option("--t", bo.p.t);
  bound->add_option("--sigma", bo.p.sigma);
  bound->add_option("--a-norm", bo.p.a_norm);
  bound->add_option("--m", bo.p.m);

  CertifyOptions co;
  auto* certify = app.add_subcommand("certify", "check the dual certificate for (A, S, signs)");
  certify->add_option("--matrix", co.matrix, "matrix file")->required();
  certify->add_option("--support", co.support, "1-based column indices, comma-separated")->required();
  certify->add_option("--signs", co.signs, "+, -, real or re:im per support index")->required();
  certify->add_option("--csv", co.csv, "per-column correlations");
  certify->footer(kCertifyCsvHelp);

  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "basis pursuit min ||z||_1 subject to Az = y");
  solve->add_option("--matrix", so.matrix, "matrix file")->required();
  solve->add_option("--rhs", so.rhs, "right-hand side, an m x 1 matrix file")->required();
  solve->add_option("--output", so.output, "write z as an N x 1 matrix file");
  solve->add_option("--tol", so.solver.feasibility_tolerance, "feasibility tolerance");
  solve->add_option("--max-iter", so.solver.max_iterations);
  solve->add_option("--polish", so.solver.polish, "least-squares refit on the detected support");

  McOptions mo;
  auto* mc = app.add_subcommand("mc", "Monte Carlo experiments");
  mc->require_subcommand(1);

  auto add_ensemble = [&](CLI::App* sub) {
    sub->add_option("--ensemble", mo.ensemble, "gaussian | bernoulli");
    sub->add_option("--c-tilde", mo.c_tilde, "concentration constant (required for gaussian where used)");
  };

  auto* recovery = mc->add_subcommand("recovery", "recovery probability for one (m, N, s)");
  add_common(recovery, mo.common);
  add_ensemble(recovery);
  recovery->add_option("--N", mo.N);
  recovery->add_option("--m", mo.m);
  recovery->add_option("--s", mo.s);
  recovery->add_option("--mode", mo.mode, "certificate | solver | both");
  recovery->add_option("--signal", mo.signal, "real | complex");
  recovery->add_option("--magnitudes", mo.magnitudes, "unit | uniform");
  recovery->add_option("--records", mo.records, "per-trial CSV");
  recovery->footer(kRecoveryCsvHelp);

  auto* phase = mc->add_subcommand("phase", "recovery rates over an (s, m) grid");
  add_common(phase, mo.common);
  add_ensemble(phase);
  phase->add_option("--N", mo.N);
  phase->add_option("--s-values", mo.s_values, "comma-separated")->required();
  phase->add_option("--m-values", mo.m_values, "comma-separated")->required();
  phase->add_option("--mode", mo.mode, "certificate | solver | both");
  phase->add_option("--signal", mo.signal, "real | complex");
  phase->add_option("--magnitudes", mo.magnitudes, "unit | uniform");
  phase->add_option("--overlay", mo.overlay, "bound drawn over the grid (e.g. gaussian_2_1)");
  phase->add_option("--eps", mo.eps, "overlay failure probability");
  phase->add_option("--c", mo.c, "overlay subgaussian constant");
  phase->add_option("--delta", mo.delta, "overlay Gram deviation");
  phase->add_option("--svg", mo.svg, "heatmap file");
  phase->footer(kPhaseCsvHelp);

  auto* smin = mc->add_subcommand("smin", "smallest singular value tail of m x s Gaussian matrices");
  add_common(smin, mo.common);
  smin->add_option("--m", mo.m);
  smin->add_option("--s", mo.s);
  smin->add_option("--r-values", mo.values, "comma-separated")->required();
  smin->footer(kTailCsvHelp);

  auto* sumtail = mc->add_subcommand("sumtail", "tail of sum_j a_j X_j");
  add_common(sumtail, mo.common);
  add_ensemble(sumtail);
  sumtail->add_option("--M", mo.M, "use a = (1, ..., 1) / sqrt(M)");
  sumtail->add_option("--a", mo.a, "explicit coefficients, comma-separated");
  sumtail->add_option("--t-values", mo.values, "comma-separated")->required();
  sumtail->footer(kTailCsvHelp);

  auto* conc = mc->add_subcommand("concentration", "concentration of ||A x||^2 for unit x");
  add_common(conc, mo.common);
  add_ensemble(conc);
  conc->add_option("--m", mo.m);
  conc->add_option("--N", mo.N);
  conc->add_option("--t-values", mo.values, "comma-separated")->required();
  conc->add_flag("--refinement", mo.refinement, "also compare against the Bernoulli refinement");
  conc->footer(kTailCsvHelp);

  auto* gram = mc->add_subcommand("gram", "conditioning of A_S^* A_S at the Gram bound");
  add_common(gram, mo.common);
  add_ensemble(gram);
  gram->add_option("--s", mo.s);
  gram->add_option("--delta", mo.delta)->required();
  gram->add_option("--eps", mo.eps)->required();
  gram->add_option("--m", mo.m_override, "override the number of measurements");
  gram->footer(kGramCsvHelp);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitDomain;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (bound->parsed()) return run_bound(bo, out);
    if (certify->parsed()) return run_certify(co, out);
    if (solve->parsed()) return run_solve(so, out, err);

    Outputs outputs(mo.common);
    const auto& c = mo.common;
    CLI::App* sub = nullptr;
    if (recovery->parsed()) {
      sub = recovery;
      ExperimentConfig cfg;
      cfg.ensemble = make_ensemble(mo.ensemble, mo.c_tilde);
      cfg.signal = make_signal_spec(mo.signal, mo.magnitudes);
      cfg.N = mo.N;
      cfg.m = mo.m;
      cfg.s = mo.s;
      cfg.trials = c.trials;
      cfg.master_seed = c.seed;
      cfg.mode = parse_recovery_mode(mo.mode);
      cfg.workers = c.workers;
      cfg.keep_records = !mo.records.empty();
      const auto r = recovery_probability(cfg);
      outputs.csv(c.csv, rate_csv({r.rate}));
      outputs.csv(mo.records, recovery_records_csv(r.records));
      out << "recovery " << mo.mode << ": " << describe(r.rate);
      if (cfg.mode == RecoveryMode::both)
        out << " certificate-without-recovery=" << r.implication_violations;
      out << '\n';
    } else if (phase->parsed()) {
      sub = phase;
      PhaseGridConfig cfg;
      cfg.ensemble = make_ensemble(mo.ensemble, mo.c_tilde);
      cfg.signal = make_signal_spec(mo.signal, mo.magnitudes);
      cfg.N = mo.N;
      cfg.s_values = parse_indices(mo.s_values);
      cfg.m_values = parse_indices(mo.m_values);
      cfg.trials = c.trials;
      cfg.master_seed = c.seed;
      cfg.mode = parse_recovery_mode(mo.mode);
      cfg.workers = c.workers;
      if (!mo.overlay.empty()) {
        cfg.overlay = parse_measurement_bound(mo.overlay);
        cfg.overlay_params.eps = mo.eps;
        cfg.overlay_params.c = mo.c;
        cfg.overlay_params.c_tilde = mo.c_tilde ? mo.c_tilde : cfg.ensemble.concentration_constant;
        cfg.overlay_params.delta = mo.delta;
      }
      const auto grid = phase_grid(cfg);
      outputs.csv(c.csv, phase_grid_csv(grid));
      outputs.text(mo.svg, phase_grid_svg(grid));
      out << "phase grid: " << grid.s_values.size() << " x " << grid.m_values.size()
          << " cells, " << c.trials << " trials each\n";
    } else if (smin->parsed()) {
      sub = smin;
      const auto table = verify_smin_tail(mo.m, mo.s, parse_reals(mo.values), c.trials, c.seed, c.workers);
      outputs.csv(c.csv, tail_table_csv(table));
      out << "smin tail: " << describe_tail(table) << '\n';
    } else if (sumtail->parsed()) {
      sub = sumtail;
      Eigen::VectorXd a;
      if (!mo.a.empty() && mo.M) throw DomainError("sumtail: give either --M or --a");
      if (!mo.a.empty()) {
        const auto coeffs = parse_reals(mo.a);
        a = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), static_cast<Index>(coeffs.size()));
      }
      else if (mo.M && *mo.M > 0)
        a = Eigen::VectorXd::Constant(*mo.M, 1.0 / std::sqrt(static_cast<double>(*mo.M)));
      else
        throw DomainError("sumtail: give a positive --M or coefficients --a");
      const auto table = verify_sum_tail(make_ensemble(mo.ensemble, mo.c_tilde), a, parse_reals(mo.values),
                                         c.trials, c.seed, c.workers);
      outputs.csv(c.csv, tail_table_csv(table));
      out << "sum tail: " << describe_tail(table) << '\n';
    } else if (conc->parsed()) {
      sub = conc;
      const auto table = verify_concentration(make_ensemble(mo.ensemble, mo.c_tilde), mo.m, mo.N,
                                              parse_reals(mo.values), c.trials, c.seed, mo.refinement, c.workers);
      outputs.csv(c.csv, tail_table_csv(table));
      out << "concentration: " << describe_tail(table) << '\n';
    } else if (gram->parsed()) {
      sub = gram;
      const auto g = verify_gram(make_ensemble(mo.ensemble, mo.c_tilde), mo.s, *mo.delta, *mo.eps,
                                 c.trials, c.seed, c.workers, mo.m_override);
      outputs.csv(c.csv, gram_csv(g));
      out << "gram: m=" << g.m << " " << describe(g.rate) << " target=" << format_short(g.target)
          << (g.passes ? " within bound" : " BELOW TARGET") << '\n';
    }
    if (sub == nullptr) throw DomainError("no command given");
    emit_manifest(outputs, "mc " + sub->get_name(), sub, args, c.seed, start);
    return kExitOk;
  } catch (const NonpositiveDenominator& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

} // namespace cslab
