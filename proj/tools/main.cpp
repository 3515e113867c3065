#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "hocpoles/error.hpp"

namespace {

using namespace hocpoles;

struct RunArgs {
  std::string order = "1,0";
  std::optional<int> levels;
  std::string mean = "zero";
  std::uint64_t mean_warmup = 50;
  std::optional<double> ewma;
  bool use_ewma = false;
  std::optional<int> k_start;
  double dt = 1.0;
  double zeta_threshold = kDefaultZetaThreshold;
  std::optional<int> column;
  bool header = false;
  std::string input;

  RunConfig config() const {
    RunConfig c;
    const auto comma = order.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument(order);
      std::size_t used = 0;
      c.n = std::stoi(order.substr(0, comma), &used);
      c.m = std::stoi(order.substr(comma + 1));
    } catch (const std::exception&) {
      throw InvalidArgument("--order expects n,m (e.g. 2,1)");
    }
    c.levels = levels;
    if (mean.rfind("fixed:", 0) == 0) {
      c.mean_mode = MeanMode::Fixed;
      try {
        c.fixed_level = std::stod(mean.substr(6));
      } catch (const std::exception&) {
        throw InvalidArgument("--mean fixed:<value> needs a number");
      }
    } else {
      c.mean_mode = mean_mode_from_string(mean);
    }
    c.mean_warmup = mean_warmup;
    c.ewma_lambda = ewma;
    c.use_ewma = use_ewma;
    c.k_start = k_start;
    c.dt = dt;
    c.zeta_threshold = zeta_threshold;
    return c;
  }

  cli::InputOptions input_options() const { return {column, header}; }
};

void add_run_options(CLI::App* app, RunArgs& a) {
  app->add_option("--order", a.order, "AR and MA order as n,m")->required();
  app->add_option("--levels", a.levels, "Crossing levels tracked (default: lags the solve needs)");
  app->add_option("--mean", a.mean, "Level-1 reference: zero | running | fixed:<value>")->capture_default_str();
  app->add_option("--mean-warmup", a.mean_warmup, "Samples before running-mean clipping starts")
      ->capture_default_str();
  app->add_option("--ewma", a.ewma, "Forgetting factor for EWMA crossing periods");
  app->add_flag("--use-ewma", a.use_ewma, "Report EWMA crossing rates instead of cumulative counts");
  app->add_option("--k-start", a.k_start, "Lag offset of the extended Yule-Walker equations (default m+1)");
  app->add_option("--dt", a.dt, "Sampling period")->capture_default_str();
  app->add_option("--zeta-threshold", a.zeta_threshold, "Damping below which a mode is oscillatory")
      ->capture_default_str();
  app->add_option("--column", a.column, "0-based CSV column to read");
  app->add_flag("--header", a.header, "Skip the first input line");
  app->add_option("--input", a.input, "Input file (default stdin)");
}

template <typename F>
int with_input(const std::string& path, F&& f) {
  if (path.empty() || path == "-") return f(std::cin);
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    return cli::kUsage;
  }
  return f(in);
}

template <typename F>
int guard_config(F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pole estimation from higher-order zero-crossing counts"};
  app.require_subcommand(1);
  int rc = 0;

  RunArgs stream_args;
  cli::StreamOptions stream_opts;
  auto* stream = app.add_subcommand("stream", "Ingest samples and emit JSON-line reports");
  add_run_options(stream, stream_args);
  stream->add_option("--report-every", stream_opts.run.report_every, "Report interval in samples (0: end only)");
  stream->add_flag("--strict", stream_opts.strict, "Exit 3 on an ill-conditioned estimate");
  stream->add_option("--trace", stream_opts.trace_path, "Write poles and damping per report as CSV");
  stream->callback([&] {
    rc = guard_config([&] {
      const auto every = stream_opts.run.report_every;
      stream_opts.run = stream_args.config();
      stream_opts.run.report_every = every;
      stream_opts.input = stream_args.input_options();
      return with_input(stream_args.input,
                        [&](std::istream& in) { return cli::cmd_stream(stream_opts, in, std::cout, std::cerr); });
    });
  });

  RunArgs est_args;
  cli::EstimateOptions est_opts;
  std::string est_file;
  auto* estimate = app.add_subcommand("estimate", "One-shot estimate from a sample file");
  add_run_options(estimate, est_args);
  estimate->add_option("file", est_file, "Sample file (or --input; default stdin)");
  estimate->add_flag("--oracle", est_opts.oracle, "Also run the batch-ACF path and report RMSE");
  estimate->add_flag("--strict", est_opts.strict, "Exit 3 on an ill-conditioned estimate");
  estimate->callback([&] {
    rc = guard_config([&] {
      est_opts.run = est_args.config();
      est_opts.input = est_args.input_options();
      const std::string path = est_file.empty() ? est_args.input : est_file;
      return with_input(path, [&](std::istream& in) { return cli::cmd_estimate(est_opts, in, std::cout, std::cerr); });
    });
  });

  cli::SimulateOptions sim_opts;
  std::string num = "1", den, model_path;
  bool closed_loop = false;
  ClosedLoopSpec cl;
  std::optional<long long> count;
  auto* simulate = app.add_subcommand("simulate", "Generate a seeded ARMA or closed-loop signal");
  simulate->add_option("--num", num, "Numerator coefficients, e.g. 1,-0.5");
  simulate->add_option("--den", den, "Denominator coefficients, e.g. 1,-1.85,0.855");
  simulate->add_option("--model", model_path, "JSON model file {num, den}");
  simulate->add_flag("--closed-loop", closed_loop, "Simulate the integrating-control loop");
  simulate->add_option("--alpha", cl.alpha, "Plant pole")->capture_default_str();
  simulate->add_option("--delay", cl.delay, "Plant delay in samples")->capture_default_str();
  simulate->add_option("--kc", cl.kc, "Controller gain")->capture_default_str();
  simulate->add_option("--dt", cl.dt, "Sampling period")->capture_default_str();
  simulate->add_option("--n", count, "Number of samples")->required();
  simulate->add_option("--seed", sim_opts.noise.seed, "PRNG seed")->capture_default_str();
  simulate->add_option("--variance", sim_opts.noise.variance, "Noise variance")->capture_default_str();
  simulate->add_option("--warmup", sim_opts.sim.warmup, "Samples discarded before output")->capture_default_str();
  simulate->add_flag("--force", sim_opts.sim.force, "Allow unstable denominators");
  simulate->add_option("--out", sim_opts.out_path, "Sample file (default stdout)");
  simulate->add_option("--sidecar", sim_opts.sidecar_path, "True poles/damping JSON (default <out>.json)");
  simulate->callback([&] {
    rc = guard_config([&] {
      if (!count || *count < 2) throw InvalidArgument("--n must be at least 2");
      sim_opts.noise.count = static_cast<std::size_t>(*count);
      if (closed_loop) {
        sim_opts.closed_loop = cl;
      } else if (!model_path.empty()) {
        std::ifstream f(model_path);
        if (!f) throw InvalidArgument("cannot read " + model_path);
        std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        try {
          sim_opts.model = arma_from_json(text);
        } catch (const DataError& e) {
          throw InvalidArgument(e.what());
        }
      } else {
        if (den.empty()) throw InvalidArgument("give --den, --model or --closed-loop");
        sim_opts.model = ArmaSpec{parse_coefficients(num), parse_coefficients(den)};
      }
      return cli::cmd_simulate(sim_opts, std::cout, std::cerr);
    });
  });

  std::string table;
  auto* repro = app.add_subcommand("repro", "Rerun the benchmark experiments with fixed seeds");
  repro->add_option("table", table, "table1 | table2")->required();
  repro->callback([&] { rc = guard_config([&] { return cli::cmd_repro(table, std::cout, std::cerr); }); });

  RunArgs snap_args;
  cli::SnapshotOptions snap_opts;
  auto* snapshot = app.add_subcommand("snapshot", "Ingest samples and save the crossing state");
  add_run_options(snapshot, snap_args);
  snapshot->add_option("--state", snap_opts.state_out, "State file to write")->required();
  snapshot->callback([&] {
    rc = guard_config([&] {
      snap_opts.run = snap_args.config();
      snap_opts.input = snap_args.input_options();
      return with_input(snap_args.input,
                        [&](std::istream& in) { return cli::cmd_snapshot(snap_opts, in, std::cout, std::cerr); });
    });
  });

  RunArgs rest_args;
  cli::RestoreOptions rest_opts;
  auto* restore = app.add_subcommand("restore", "Resume from a saved state, ingest more samples, report");
  add_run_options(restore, rest_args);
  restore->add_option("--state", rest_opts.state_in, "State file to resume from")->required();
  restore->add_option("--save", rest_opts.state_out, "Write the updated state here");
  restore->add_flag("--strict", rest_opts.strict, "Exit 3 on an ill-conditioned estimate");
  restore->callback([&] {
    rc = guard_config([&] {
      rest_opts.run = rest_args.config();
      rest_opts.input = rest_args.input_options();
      return with_input(rest_args.input,
                        [&](std::istream& in) { return cli::cmd_restore(rest_opts, in, std::cout, std::cerr); });
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsage;
  }
  return rc;
}
