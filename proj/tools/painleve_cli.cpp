// Command-line front end: trace, series, blowup, crossings, verify.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "painleve/blowup.hpp"
#include "painleve/form.hpp"
#include "painleve/format.hpp"
#include "painleve/integrate.hpp"
#include "painleve/oscillation.hpp"
#include "painleve/series.hpp"
#include "painleve/verify.hpp"
#include "painleve/version.hpp"

using namespace painleve;

namespace {

constexpr double kGuardOnlyHorizon = 4.0;  // beyond every real blow-up time of the family

struct OutputTarget {
  std::string path;  // empty means stdout

  void write(const std::string& content) const {
    if (path.empty()) {
      std::cout << content;
      return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
    os << content;
  }
};

// --csv/--json may carry the output path directly; --out is the fallback.
std::string resolve_path(const CLI::Option* fmt_opt, const std::string& fmt_path,
                         const std::string& out_path) {
  if (fmt_opt->count() > 0 && !fmt_path.empty()) return fmt_path;
  return out_path;
}

struct TraceOptions {
  std::string form_name;
  std::optional<double> t_max;
  std::optional<double> s_max;
  double sample_dt = 0.01;
  IntegratorConfig config;
  std::string csv_path, json_path, out_path;
  CLI::Option* csv_opt = nullptr;
  CLI::Option* json_opt = nullptr;
};

int run_trace(const TraceOptions& opt) {
  if (!opt.t_max && !opt.s_max)
    throw CLI::ValidationError("trace", "one of --t-max or --s-max is required");
  IntegratorConfig config = opt.config;
  config.t_max = opt.t_max ? *opt.t_max : kGuardOnlyHorizon;
  if (opt.s_max) config.s_max = *opt.s_max;
  const Trajectory traj = integrate(parse_form(opt.form_name), config);

  const bool json = opt.json_opt->count() > 0;
  OutputTarget target{resolve_path(json ? opt.json_opt : opt.csv_opt,
                                   json ? opt.json_path : opt.csv_path, opt.out_path)};
  if (json) {
    target.write(trajectory_json(traj).dump(2) + "\n");
  } else {
    std::ostringstream os;
    write_trajectory_csv(os, traj, opt.sample_dt);
    target.write(os.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"triple-zero Painleve I transcendent: tracing, bounds and verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(painleve::kToolVersion));

  // ---- trace ------------------------------------------------------------
  TraceOptions trace;
  CLI::App* trace_cmd = app.add_subcommand("trace", "integrate one form and write the trajectory");
  trace_cmd->add_option("--form", trace.form_name, "pi, pi-plus or pi-minus")
      ->required()
      ->check(CLI::IsMember({"pi", "pi-plus", "pi-minus"}));
  trace_cmd->add_option("--t-max", trace.t_max, "integration target (signed)");
  trace_cmd->add_option("--s-max", trace.s_max, "blow-up guard on |s|")
      ->check(CLI::PositiveNumber);
  trace_cmd->add_option("--sample-dt", trace.sample_dt, "CSV sample spacing")
      ->default_val(0.01)
      ->check(CLI::PositiveNumber);
  trace_cmd->add_option("--rel-tol", trace.config.rel_tol, "relative tolerance")
      ->check(CLI::PositiveNumber);
  trace_cmd->add_option("--abs-tol", trace.config.abs_tol, "absolute tolerance")
      ->check(CLI::PositiveNumber);
  trace_cmd->add_option("--max-step", trace.config.max_step, "largest step size")
      ->check(CLI::PositiveNumber);
  trace_cmd->add_option("--initial-step", trace.config.initial_step, "first step size")
      ->check(CLI::PositiveNumber);
  trace.csv_opt = trace_cmd->add_option("--csv", trace.csv_path, "CSV output (optional path)")
                      ->expected(0, 1);
  trace.json_opt =
      trace_cmd->add_option("--json", trace.json_path, "JSON output with step metadata (optional path)")
          ->expected(0, 1);
  trace_cmd->add_option("--out", trace.out_path, "output path (default stdout)");
  trace.csv_opt->excludes(trace.json_opt);

  // ---- series -----------------------------------------------------------
  struct {
    std::string form_name;
    int order = kDefaultSeriesOrder;
    std::string json_path, out_path;
    CLI::Option* json_opt = nullptr;
  } series_opts;
  CLI::App* series_cmd =
      app.add_subcommand("series", "exact Taylor coefficients of the origin expansion");
  series_cmd->add_option("--form", series_opts.form_name, "pi, pi-plus or pi-minus")
      ->required()
      ->check(CLI::IsMember({"pi", "pi-plus", "pi-minus"}));
  series_cmd->add_option("--order", series_opts.order, "expansion order")
      ->default_val(kDefaultSeriesOrder)
      ->check(CLI::NonNegativeNumber);
  series_opts.json_opt =
      series_cmd->add_option("--json", series_opts.json_path, "JSON output (optional path)")
          ->expected(0, 1);
  series_cmd->add_option("--out", series_opts.out_path, "output path (default stdout)");

  // ---- blowup -----------------------------------------------------------
  struct {
    double width_tol = 0.01;
    IntegratorConfig config;
    std::string json_path, out_path;
    CLI::Option* json_opt = nullptr;
  } blowup_opts;
  CLI::App* blowup_cmd = app.add_subcommand("blowup", "bracket the finite blow-up time");
  blowup_cmd->add_option("--width-tol", blowup_opts.width_tol, "target bracket width")
      ->default_val(0.01)
      ->check(CLI::PositiveNumber);
  blowup_cmd->add_option("--rel-tol", blowup_opts.config.rel_tol, "relative tolerance")
      ->check(CLI::PositiveNumber);
  blowup_cmd->add_option("--abs-tol", blowup_opts.config.abs_tol, "absolute tolerance")
      ->check(CLI::PositiveNumber);
  blowup_opts.json_opt =
      blowup_cmd->add_option("--json", blowup_opts.json_path, "JSON output (optional path)")
          ->expected(0, 1);
  blowup_cmd->add_option("--out", blowup_opts.out_path, "output path (default stdout)");

  // ---- crossings --------------------------------------------------------
  struct {
    double t_max = 100.0;
    double root_tol = kDefaultRootTol;
    IntegratorConfig config;
    std::string csv_path, out_path, envelope_path;
    CLI::Option* csv_opt = nullptr;
  } crossing_opts;
  CLI::App* crossings_cmd =
      app.add_subcommand("crossings", "crossings with sqrt(t) and the gap-bound audit");
  crossings_cmd->add_option("--t-max", crossing_opts.t_max, "horizon")
      ->default_val(100.0)
      ->check(CLI::PositiveNumber);
  crossings_cmd->add_option("--root-tol", crossing_opts.root_tol, "crossing refinement tolerance")
      ->check(CLI::PositiveNumber);
  crossings_cmd->add_option("--rel-tol", crossing_opts.config.rel_tol, "relative tolerance")
      ->check(CLI::PositiveNumber);
  crossings_cmd->add_option("--abs-tol", crossing_opts.config.abs_tol, "absolute tolerance")
      ->check(CLI::PositiveNumber);
  crossing_opts.csv_opt =
      crossings_cmd->add_option("--csv", crossing_opts.csv_path, "CSV output (optional path)")
          ->expected(0, 1);
  crossings_cmd->add_option("--out", crossing_opts.out_path, "output path (default stdout)");
  crossings_cmd->add_option("--envelope-json", crossing_opts.envelope_path,
                            "also write envelope statistics over (0, t_max] to this path");

  // ---- verify -----------------------------------------------------------
  VerifyConfig verify_cfg;
  std::string verify_out;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the whole check registry and emit the report");
  verify_cmd->add_option("--t-max", verify_cfg.t_max, "oscillation horizon")->default_val(500.0);
  verify_cmd->add_option("--rel-tol", verify_cfg.rel_tol, "relative tolerance")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--abs-tol", verify_cfg.abs_tol, "absolute tolerance")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_flag("--corrupt-rhs", verify_cfg.corrupt_rhs,
                       "negative control: flip the quadratic term and watch checks fail");
  verify_cmd->add_option("--out", verify_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\nRun with --help for usage.\n";
    return 2;
  }

  try {
    if (trace_cmd->parsed()) return run_trace(trace);

    if (series_cmd->parsed()) {
      const SeriesExpansion series =
          taylor_coefficients(parse_form(series_opts.form_name), series_opts.order);
      OutputTarget target{
          resolve_path(series_opts.json_opt, series_opts.json_path, series_opts.out_path)};
      target.write(series_json(series).dump(2) + "\n");
      return 0;
    }

    if (blowup_cmd->parsed()) {
      const BlowupEstimate est = estimate_blowup(blowup_opts.config, blowup_opts.width_tol);
      OutputTarget target{
          resolve_path(blowup_opts.json_opt, blowup_opts.json_path, blowup_opts.out_path)};
      target.write(blowup_json(est).dump(2) + "\n");
      return 0;
    }

    if (crossings_cmd->parsed()) {
      IntegratorConfig config = crossing_opts.config;
      config.t_max = crossing_opts.t_max;
      const Trajectory traj = integrate(Form::PiMinus, config);
      const std::vector<CrossingEvent> events =
          crossings(traj, crossing_opts.t_max, crossing_opts.root_tol);
      const std::vector<GapRecord> gaps = gap_audit(events);
      std::ostringstream os;
      write_crossings_csv(os, events, gaps);
      OutputTarget target{
          resolve_path(crossing_opts.csv_opt, crossing_opts.csv_path, crossing_opts.out_path)};
      target.write(os.str());
      if (!crossing_opts.envelope_path.empty()) {
        OutputTarget env{crossing_opts.envelope_path};
        env.write(envelope_json(envelope_stats(traj, 0.0, crossing_opts.t_max)).dump(2) + "\n");
      }
      return 0;
    }

    if (verify_cmd->parsed()) {
      const VerificationReport report = run_verification(verify_cfg);
      OutputTarget target{verify_out};
      target.write(report_json(report).dump(2) + "\n");
      return report.all_passed() ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\nRun with --help for usage.\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
