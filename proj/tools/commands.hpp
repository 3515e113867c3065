#ifndef HOCPOLES_TOOLS_COMMANDS_HPP
#define HOCPOLES_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "hocpoles/model.hpp"
#include "hocpoles/pipeline.hpp"

namespace hocpoles::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

// Default seeds of the repro subcommand. HOCPOLES_SEED replaces kReproSeed;
// each experiment adds its own offset.
inline constexpr std::uint64_t kReproSeed = 7;
inline constexpr std::size_t kReproSamples = 10000;

struct InputOptions {
  // 0-based CSV column; plain one-value-per-line text when empty.
  std::optional<int> column;
  // Skip the first line (CSV header).
  bool header = false;
};

// Reads decimal samples, one per line (or one CSV field per line). Blank
// lines are skipped. Malformed lines raise DataError naming the line number.
class SampleReader {
 public:
  SampleReader(std::istream& in, InputOptions options);
  bool next(double& value);
  std::uint64_t line() const { return line_; }

 private:
  std::istream& in_;
  InputOptions options_;
  std::uint64_t line_ = 0;
};

struct StreamOptions {
  RunConfig run;
  InputOptions input;
  bool strict = false;
  // Long-format CSV (samples,quantity,index,value) of poles and damping
  // per report.
  std::string trace_path;
};

struct EstimateOptions {
  RunConfig run;
  InputOptions input;
  bool oracle = false;
  bool strict = false;
};

struct SimulateOptions {
  std::optional<ArmaSpec> model;
  std::optional<ClosedLoopSpec> closed_loop;
  NoiseConfig noise;
  SimulationOptions sim;
  // Samples go to `out` when empty.
  std::string out_path;
  // Defaults to out_path + ".json" when out_path is set.
  std::string sidecar_path;
};

struct SnapshotOptions {
  RunConfig run;
  InputOptions input;
  std::string state_out;
};

struct RestoreOptions {
  RunConfig run;
  InputOptions input;
  std::string state_in;
  std::string state_out;
  bool strict = false;
};

int cmd_stream(const StreamOptions& options, std::istream& in, std::ostream& out, std::ostream& err);
int cmd_estimate(const EstimateOptions& options, std::istream& in, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);
int cmd_repro(std::string_view table, std::ostream& out, std::ostream& err);
int cmd_snapshot(const SnapshotOptions& options, std::istream& in, std::ostream& out, std::ostream& err);
int cmd_restore(const RestoreOptions& options, std::istream& in, std::ostream& out, std::ostream& err);

// Base repro seed, honouring HOCPOLES_SEED.
std::uint64_t repro_seed();

}  // namespace hocpoles::cli

#endif  // HOCPOLES_TOOLS_COMMANDS_HPP
