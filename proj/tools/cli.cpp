#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "bianchi/autoforms.hpp"
#include "bianchi/error.hpp"
#include "bianchi/parallel.hpp"
#include "cli_internal.hpp"

namespace bianchi::cli {

namespace {

using detail::Json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::window:
    case ErrorCode::pole:
    case ErrorCode::degenerate: return exit_window;
    case ErrorCode::nonconvergence:
    case ErrorCode::truncation_failure: return exit_nonconvergence;
    case ErrorCode::verification: return exit_verification;
    default: return exit_usage;
  }
}

void report_error(std::ostream& err, std::string_view code, const std::string& message, int exit_code) {
  err << Json{{"error", code}, {"message", message}, {"exit_code", exit_code}}.dump() << '\n';
}

class Writer {
 public:
  Writer(const RunConfig& config, std::ostream& log) : dir_(config.out_dir), log_(log) {
    std::filesystem::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) fail(ErrorCode::usage, "cannot write '" + path.string() + "'");
    file << content;
    log_ << "wrote " << path.string() << '\n';
  }

 private:
  std::filesystem::path dir_;
  std::ostream& log_;
};

std::string join(std::initializer_list<std::string> cells) {
  std::string line;
  for (const auto& c : cells) {
    if (!line.empty()) line += ',';
    line += c;
  }
  return line + '\n';
}

std::string f17(double v) { return format_double(v); }

int cmd_eval_eisenstein(const RunConfig& config, Writer& writer) {
  const EisensteinEvaluator ev(Field::make(config.field_D), {config.tail_tolerance, 200'000});
  std::vector<std::complex<double>> values(config.points.size());
  parallel_for(config.points.size(), config.threads,
               [&](std::size_t i) { values[i] = ev.eval(config.points[i], config.t); });
  if (config.format == Format::csv) {
    std::string csv = "x,y,r,t,re,im,abs\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto& p = config.points[i];
      csv += join({f17(p.x), f17(p.y), f17(p.r), f17(config.t), f17(values[i].real()), f17(values[i].imag()),
                   f17(std::abs(values[i]))});
    }
    writer.write("eisenstein.csv", csv);
  } else {
    Json rows = Json::array();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto& p = config.points[i];
      rows.push_back({{"x", p.x}, {"y", p.y}, {"r", p.r}, {"t", config.t}, {"re", values[i].real()},
                      {"im", values[i].imag()}, {"abs", std::abs(values[i])}});
    }
    writer.write("eisenstein.json", Json{{"D", config.field_D}, {"rows", rows}}.dump(2) + "\n");
  }
  return exit_ok;
}

int cmd_verify(const std::string& suite, const RunConfig& config, Writer& writer, std::ostream& out) {
  const detail::SuiteResult result = detail::run_suite(suite, config);
  Json report = result.report;
  report["pass"] = result.passed;
  writer.write("verify_" + suite + ".json", report.dump(2) + "\n");
  if (config.format == Format::csv) {
    std::string csv = "name,pass,value,bound\n";
    for (const auto& p : report["properties"]) {
      csv += join({"\"" + p["name"].get<std::string>() + "\"", p["pass"].get<bool>() ? "true" : "false",
                   f17(p["value"].get<double>()), f17(p["bound"].get<double>())});
    }
    writer.write("verify_" + suite + ".csv", csv);
  }
  out << "verify " << suite << ": " << (result.passed ? "pass" : "FAIL") << '\n';
  return result.passed ? exit_ok : exit_verification;
}

int sweep_supnorm(const RunConfig& config, Writer& writer) {
  if (config.supnorm_t_grid.empty()) fail(ErrorCode::usage, "sweep supnorm: empty t grid");
  const EisensteinEvaluator ev(Field::make(config.field_D), {config.tail_tolerance, 200'000});
  ScanOptions options;
  options.threads = config.threads;
  options.resolve = config.resolve;
  options.polish_starts = config.polish_starts;
  const auto& b = config.box;
  const ScanTable table =
      supnorm_scan(ev, box_grid(b[0], b[1], b[2], b[3], b[4], b[5], config.supnorm_n), config.supnorm_t_grid, options);

  // intercept of the fitted line over the same upper half as the slope
  double intercept = 0.0;
  int count = 0;
  for (std::size_t i = table.rows.size() / 2; i < table.rows.size(); ++i) {
    intercept += std::log(table.rows[i].sup_value) - table.fitted_exponent * std::log(table.rows[i].t);
    ++count;
  }
  intercept /= count;
  auto fit = [&](double t) { return std::exp(intercept + table.fitted_exponent * std::log(t)); };

  if (config.format == Format::csv) {
    std::string csv = "t,sup,grid_sup,fit\n";
    for (const auto& row : table.rows) csv += join({f17(row.t), f17(row.sup_value), f17(row.grid_sup), f17(fit(row.t))});
    csv += "# fitted_exponent," + f17(table.fitted_exponent) + "\n";
    csv += "# grid_fitted_exponent," + f17(table.grid_fitted_exponent) + "\n";
    writer.write("supnorm.csv", csv);
  } else {
    Json rows = Json::array();
    for (const auto& row : table.rows) {
      rows.push_back({{"t", row.t}, {"sup", row.sup_value}, {"grid_sup", row.grid_sup}, {"fit", fit(row.t)}});
    }
    writer.write("supnorm.json", Json{{"rows", rows},
                                      {"fitted_exponent", table.fitted_exponent},
                                      {"grid_fitted_exponent", table.grid_fitted_exponent}}
                                         .dump(2) +
                                     "\n");
  }
  std::string dat;
  for (const auto& row : table.rows) dat += f17(row.t) + " " + f17(row.sup_value) + "\n";
  writer.write("supnorm.dat", dat);
  return exit_ok;
}

int sweep_aggregate(const RunConfig& config, Writer& writer, std::ostream& out) {
  if (config.t_f_grid.size() < 2) fail(ErrorCode::usage, "sweep aggregate: t_f grid needs at least 2 values");
  AggregateOptions options;
  options.density_exponent = config.density_exponent;
  options.eps = config.eps;
  std::vector<BoundReport> reports(config.t_f_grid.size());
  parallel_for(reports.size(), config.threads, [&](std::size_t i) {
    const double tf = config.t_f_grid[i];
    reports[i] = aggregate_spectral_sum(tf, tf, config.t_k, config.policy, options);
  });
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    xs.push_back(std::log(config.t_f_grid[i]));
    ys.push_back(reports[i].aggregate);
  }
  const double slope = fit_slope(xs, ys);
  const bool in_band = slope >= config.slope_band[0] && slope <= config.slope_band[1];

  if (config.format == Format::csv) {
    std::string csv = "t_f,t_g,t_k,q1,envelope,regime,theorem_regime,aggregate,tail,threshold\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      const double tf = config.t_f_grid[i];
      csv += join({f17(tf), f17(tf), f17(config.t_k), f17(r.q1), f17(r.envelope), std::string(to_string(r.regime)),
                   std::string(to_string(r.regimes.theorem_split)), f17(r.aggregate), f17(r.tail), f17(r.threshold)});
    }
    csv += "# slope," + f17(slope) + "\n";
    csv += "# density_exponent," + f17(config.density_exponent) + "\n";
    writer.write("aggregate.csv", csv);
  } else {
    Json rows = Json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      rows.push_back({{"t_f", config.t_f_grid[i]}, {"t_g", config.t_f_grid[i]}, {"t_k", config.t_k},
                      {"q1", r.q1}, {"envelope", r.envelope}, {"regime", to_string(r.regime)},
                      {"theorem_regime", to_string(r.regimes.theorem_split)}, {"aggregate", r.aggregate},
                      {"tail", r.tail}, {"threshold", r.threshold}});
    }
    writer.write("aggregate.json",
                 Json{{"rows", rows}, {"slope", slope}, {"density_exponent", config.density_exponent}}.dump(2) + "\n");
  }
  std::string dat;
  for (std::size_t i = 0; i < xs.size(); ++i) dat += f17(xs[i]) + " " + f17(ys[i]) + "\n";
  writer.write("aggregate.dat", dat);
  out << "aggregate slope " << format_double(slope) << (in_band ? " inside" : " outside") << " the band\n";
  return in_band ? exit_ok : exit_verification;
}

int sweep_subconvexity(const RunConfig& config, Writer& writer, std::ostream& out) {
  if (config.t_f_grid.size() < 2) fail(ErrorCode::usage, "sweep subconvexity: t_f grid needs at least 2 values");
  SubconvexityOptions options;
  options.t_k = config.t_k;
  options.density_exponent = config.density_exponent;
  std::vector<double> es;
  for (int i = 0; i <= 12; ++i) es.push_back(0.025 * i);
  std::vector<double> slopes(es.size());
  parallel_for(es.size(), config.threads,
               [&](std::size_t i) { slopes[i] = subconvexity_slope(config.t_f_grid, es[i], options); });
  const double e_star = subconvexity_requirement(config.t_f_grid, options);
  const bool in_band = e_star >= config.subconvexity_band[0] && e_star <= config.subconvexity_band[1];
  if (config.format == Format::csv) {
    std::string csv = "E,slope\n";
    for (std::size_t i = 0; i < es.size(); ++i) csv += join({f17(es[i]), f17(slopes[i])});
    csv += "# E_star," + f17(e_star) + "\n";
    csv += "# density_exponent," + f17(config.density_exponent) + "\n";
    writer.write("subconvexity.csv", csv);
  } else {
    Json rows = Json::array();
    for (std::size_t i = 0; i < es.size(); ++i) rows.push_back({{"E", es[i]}, {"slope", slopes[i]}});
    writer.write("subconvexity.json",
                 Json{{"rows", rows}, {"E_star", e_star}, {"density_exponent", config.density_exponent}}.dump(2) + "\n");
  }
  std::string dat;
  for (std::size_t i = 0; i < es.size(); ++i) dat += f17(es[i]) + " " + f17(slopes[i]) + "\n";
  writer.write("subconvexity.dat", dat);
  out << "subconvexity E* " << format_double(e_star) << (in_band ? " inside" : " outside") << " the band\n";
  return in_band ? exit_ok : exit_verification;
}

int cmd_sweep(const std::string& target, const RunConfig& config, Writer& writer, std::ostream& out) {
  if (target == "supnorm") return sweep_supnorm(config, writer);
  if (target == "aggregate") return sweep_aggregate(config, writer, out);
  if (target == "subconvexity") return sweep_subconvexity(config, writer, out);
  fail(ErrorCode::usage, "unknown sweep target '" + target + "' (expected supnorm, aggregate or subconvexity)");
}

int cmd_ingest(const RunConfig& config, Writer& writer) {
  if (config.input.empty()) fail(ErrorCode::usage, "ingest-coefficients: no input file (use --input or [ingest] input)");
  const CuspFormData form = load_coefficients_file(config.input);
  std::ostringstream csv;
  write_coefficients(csv, form);
  writer.write("coefficients.csv", csv.str());
  writer.write("ingest.json", Json{{"D", form.D},
                                   {"t", form.t},
                                   {"rows", form.coefficients.size()},
                                   {"norm_coverage", form.norm_coverage}}
                                      .dump(2) +
                                  "\n");
  return exit_ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eisenstein series, triple products and exponent bounds on Bianchi groups", "bianchi"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  int threads = 1;
  app.add_option("--config", config_path, "configuration file (INI)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "worker threads");
  app.fallthrough();

  auto* eval = app.add_subcommand("eval-eisenstein", "evaluate E(P, it) at the configured points");
  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "mellin, watson, automorphy, supnorm, q1 or scattering")->required();
  std::string target;
  auto* sweep = app.add_subcommand("sweep", "write a sweep table");
  sweep->add_option("target", target, "supnorm, aggregate or subconvexity")->required();
  std::string input;
  auto* ingest = app.add_subcommand("ingest-coefficients", "validate and normalize a coefficient file");
  ingest->add_option("--input", input, "coefficient CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return exit_ok;
    }
    report_error(err, "usage", e.what(), exit_usage);
    return exit_usage;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    config.format = format == "json" ? Format::json : Format::csv;
    config.threads = threads;
    if (!input.empty()) config.input = input;
    validate(config);
    Writer writer(config, out);
    if (eval->parsed()) return cmd_eval_eisenstein(config, writer);
    if (verify->parsed()) return cmd_verify(suite, config, writer, out);
    if (sweep->parsed()) return cmd_sweep(target, config, writer, out);
    if (ingest->parsed()) return cmd_ingest(config, writer);
    fail(ErrorCode::usage, "no command given");
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    report_error(err, to_string(e.code()), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what(), exit_usage);
    return exit_usage;
  }
}

}  // namespace bianchi::cli
