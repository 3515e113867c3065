#ifndef HOCPOLES_PIPELINE_HPP
#define HOCPOLES_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hocpoles/acf.hpp"
#include "hocpoles/crossings.hpp"
#include "hocpoles/poles.hpp"

namespace hocpoles {

// Everything needed to go from a sample stream to a pole report.
struct RunConfig {
  int n = 1;  // AR order
  int m = 0;  // MA order
  // Defaults to the highest lag the extended Yule-Walker solve needs
  // (k_start + n - 1, i.e. n + m for the default offset).
  std::optional<int> levels;
  MeanMode mean_mode = MeanMode::Zero;
  double fixed_level = 0.0;
  std::uint64_t mean_warmup = 50;
  std::optional<double> ewma_lambda;
  // Report EWMA rates instead of cumulative counts (needs ewma_lambda).
  bool use_ewma = false;
  std::optional<int> k_start;
  double dt = 1.0;
  double zeta_threshold = kDefaultZetaThreshold;
  // 0 means only at end of stream.
  std::uint64_t report_every = 0;

  void validate() const;
  int effective_k_start() const { return k_start.value_or(m + 1); }
  int required_lag() const { return effective_k_start() + n - 1; }
  int effective_levels() const { return levels.value_or(required_lag()); }
  CrossingConfig crossing_config() const;
  // Fewest samples for which a report is produced.
  std::uint64_t min_samples() const;
  // Mixed into the state-file hash so a state cannot be resumed under a
  // different model order.
  std::string hash_context() const;
};

struct Report {
  struct Damping {
    std::optional<double> zeta;
    std::string mode;
  };
  struct Flags {
    bool unstable = false;
    bool oscillatory = false;
    bool ill_conditioned = false;
  };

  std::uint64_t samples = 0;
  std::vector<std::uint64_t> hoc;
  std::vector<double> d_tilde;
  std::vector<double> acf;
  std::vector<bool> acf_clamped;
  std::vector<double> a_hat;
  double cond = 0.0;
  std::vector<Complex> poles;
  std::vector<Damping> damping;
  Flags flags;
  std::optional<double> rmse;

  // Set when the lag matrix was refused outright; a_hat and poles are empty.
  bool solve_failed = false;
};

// Lags -> extended Yule-Walker -> roots -> damping. A refused (hard
// ill-conditioned) solve yields a report with the flag set instead of
// throwing. Root-finder failures propagate.
Report report_from_acf(std::uint64_t samples, const AcfSequence& acf, const RunConfig& config);

// Steps 2-4 on the state's counts. Throws DataError when some needed level
// has too few samples.
Report report_from_state(const HocState& state, const RunConfig& config);

// Batch path on a stored series: sample ACF in place of crossing counts.
Report batch_report(std::span<const double> y, const RunConfig& config);

// One JSON object on one line, fields exactly as in docs/report.schema.json.
std::string report_to_json(const Report& report);

}  // namespace hocpoles

#endif  // HOCPOLES_PIPELINE_HPP
