#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "hocpoles/error.hpp"
#include "hocpoles/myw.hpp"

namespace hocpoles::cli {

namespace {

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnstableModel& e) {
    err << "error: " << e.what() << " (use --force to simulate anyway)\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << text;
  if (!f) throw InvalidArgument("failed writing " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<double> read_all(std::istream& in, const InputOptions& input) {
  SampleReader reader(in, input);
  std::vector<double> y;
  double v = 0.0;
  while (reader.next(v)) y.push_back(v);
  return y;
}

nlohmann::json poles_json(const std::vector<Complex>& poles) {
  auto arr = nlohmann::json::array();
  for (const auto& p : poles) arr.push_back({{"re", p.real()}, {"im", p.imag()}});
  return arr;
}

void write_trace_rows(std::ostream& trace, const Report& r) {
  for (std::size_t i = 0; i < r.poles.size(); ++i) {
    trace << r.samples << ",pole_re," << i << "," << r.poles[i].real() << "\n";
    trace << r.samples << ",pole_im," << i << "," << r.poles[i].imag() << "\n";
  }
  for (std::size_t i = 0; i < r.damping.size(); ++i)
    if (r.damping[i].zeta) trace << r.samples << ",zeta," << i << "," << *r.damping[i].zeta << "\n";
}

}  // namespace

SampleReader::SampleReader(std::istream& in, InputOptions options) : in_(in), options_(options) {}

bool SampleReader::next(double& value) {
  std::string raw;
  while (std::getline(in_, raw)) {
    ++line_;
    if (options_.header && line_ == 1) continue;
    std::string field = raw;
    if (options_.column) {
      std::stringstream ss(raw);
      std::string cell;
      int idx = 0;
      bool found = false;
      while (std::getline(ss, cell, ',')) {
        if (idx++ == *options_.column) {
          field = cell;
          found = true;
          break;
        }
      }
      if (!found && !trim(raw).empty())
        throw DataError("line " + std::to_string(line_) + ": no column " + std::to_string(*options_.column));
    }
    field = trim(field);
    if (field.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != field.size() || used == 0 || !std::isfinite(v))
      throw DataError("line " + std::to_string(line_) + ": not a finite decimal sample: '" + field + "'");
    value = v;
    return true;
  }
  return false;
}

std::uint64_t repro_seed() {
  if (const char* env = std::getenv("HOCPOLES_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidArgument("HOCPOLES_SEED must be a non-negative integer");
    }
  }
  return kReproSeed;
}

int cmd_stream(const StreamOptions& options, std::istream& in, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    options.run.validate();
    HocState state(options.run.crossing_config());
    std::ofstream trace;
    if (!options.trace_path.empty()) {
      trace.open(options.trace_path);
      if (!trace) throw InvalidArgument("cannot write " + options.trace_path);
      trace << "samples,quantity,index,value\n" << std::setprecision(17);
    }

    SampleReader reader(in, options.input);
    const std::uint64_t every = options.run.report_every;
    std::uint64_t last_report = 0;
    auto emit = [&]() -> bool {
      const Report r = report_from_state(state, options.run);
      out << report_to_json(r) << "\n";
      if (trace.is_open()) write_trace_rows(trace, r);
      last_report = state.samples();
      return !(options.strict && r.flags.ill_conditioned);
    };

    double v = 0.0;
    while (reader.next(v)) {
      try {
        state.ingest(v);
      } catch (const DataError& e) {
        throw DataError("line " + std::to_string(reader.line()) + ": " + e.what());
      }
      if (every > 0 && state.samples() % every == 0 && state.samples() >= options.run.min_samples())
        if (!emit()) return static_cast<int>(kNumerical);
    }

    if (state.samples() == 0) {
      err << "no data\n";
      return static_cast<int>(kOk);
    }
    if (state.samples() < options.run.min_samples()) {
      err << "report withheld: " << state.samples() << " samples, need " << options.run.min_samples() << "\n";
      return static_cast<int>(kOk);
    }
    if (last_report != state.samples() && !emit()) return static_cast<int>(kNumerical);
    return static_cast<int>(kOk);
  });
}

int cmd_estimate(const EstimateOptions& options, std::istream& in, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    options.run.validate();
    const std::vector<double> y = read_all(in, options.input);
    if (y.size() < options.run.min_samples())
      throw DataError("need at least " + std::to_string(options.run.min_samples()) + " samples, got " +
                      std::to_string(y.size()));

    HocState state(options.run.crossing_config());
    state.ingest(y);
    Report hoc = report_from_state(state, options.run);
    if (!options.oracle) {
      out << report_to_json(hoc) << "\n";
      return static_cast<int>(options.strict && hoc.flags.ill_conditioned ? kNumerical : kOk);
    }

    auto rmse_of = [&](const Report& r) -> std::optional<double> {
      if (r.solve_failed) return std::nullopt;
      DenominatorEstimate est;
      est.a = r.a_hat;
      return prediction_rmse(y, est);
    };
    // The HOC report goes out before the batch path can fail on the data.
    try {
      hoc.rmse = rmse_of(hoc);
    } catch (const DataError&) {
      out << report_to_json(hoc) << "\n";
      throw;
    }
    out << report_to_json(hoc) << "\n";

    Report batch = batch_report(y, options.run);
    batch.rmse = rmse_of(batch);
    out << report_to_json(batch) << "\n";
    return static_cast<int>(options.strict && hoc.flags.ill_conditioned ? kNumerical : kOk);
  });
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (options.model.has_value() == options.closed_loop.has_value())
      throw InvalidArgument("give exactly one of a model (--num/--den or --model) or --closed-loop");
    ArmaSpec spec;
    double dt = 1.0;
    if (options.closed_loop) {
      spec = closed_loop_to_arma(*options.closed_loop);
      dt = options.closed_loop->dt;
    } else {
      spec = *options.model;
    }
    const std::vector<double> y = generate_arma(spec, options.noise, options.sim);

    std::ostringstream samples;
    samples << std::setprecision(17);
    for (double v : y) samples << v << "\n";

    nlohmann::json side;
    side["num"] = spec.num;
    side["den"] = spec.den;
    side["seed"] = options.noise.seed;
    side["samples"] = y.size();
    side["variance"] = options.noise.variance;
    side["dt"] = dt;
    if (spec.ar_order() >= 1) {
      const auto poles = true_poles(spec);
      side["poles"] = poles_json(poles);
      DenominatorEstimate exact;
      exact.a.assign(spec.den.begin() + 1, spec.den.end());
      const PoleReport rep = assess(exact, dt);
      auto damping = nlohmann::json::array();
      for (const auto& m : rep.modes)
        damping.push_back({{"zeta", m.zeta ? nlohmann::json(*m.zeta) : nlohmann::json(nullptr)},
                           {"mode", to_string(m.kind)}});
      side["damping"] = damping;
    } else {
      side["poles"] = nlohmann::json::array();
      side["damping"] = nlohmann::json::array();
    }

    if (options.out_path.empty()) {
      out << samples.str();
      if (!options.sidecar_path.empty()) write_text(options.sidecar_path, side.dump(2) + "\n");
      else err << side.dump() << "\n";
    } else {
      write_text(options.out_path, samples.str());
      const std::string sidecar = options.sidecar_path.empty() ? options.out_path + ".json" : options.sidecar_path;
      write_text(sidecar, side.dump(2) + "\n");
    }
    return static_cast<int>(kOk);
  });
}

int cmd_snapshot(const SnapshotOptions& options, std::istream& in, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    options.run.validate();
    if (options.state_out.empty()) throw InvalidArgument("--state is required");
    HocState state(options.run.crossing_config());
    SampleReader reader(in, options.input);
    double v = 0.0;
    while (reader.next(v)) state.ingest(v);
    write_text(options.state_out, state_to_json(state, options.run.hash_context()));
    out << "wrote " << options.state_out << " (" << state.samples() << " samples)\n";
    return static_cast<int>(kOk);
  });
}

int cmd_restore(const RestoreOptions& options, std::istream& in, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    options.run.validate();
    if (options.state_in.empty()) throw InvalidArgument("--state is required");
    HocState state =
        state_from_json(read_text(options.state_in), options.run.crossing_config(), options.run.hash_context());
    SampleReader reader(in, options.input);
    double v = 0.0;
    while (reader.next(v)) state.ingest(v);
    if (!options.state_out.empty())
      write_text(options.state_out, state_to_json(state, options.run.hash_context()));

    if (state.samples() < options.run.min_samples()) {
      err << "report withheld: " << state.samples() << " samples, need " << options.run.min_samples() << "\n";
      return static_cast<int>(kOk);
    }
    const Report r = report_from_state(state, options.run);
    out << report_to_json(r) << "\n";
    return static_cast<int>(options.strict && r.flags.ill_conditioned ? kNumerical : kOk);
  });
}

}  // namespace hocpoles::cli
