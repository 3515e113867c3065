#ifndef HOCPOLES_CROSSINGS_HPP
#define HOCPOLES_CROSSINGS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hocpoles {

// Reference level used to clip the undifferenced signal. Differenced levels
// always clip at zero.
enum class MeanMode { Zero, Fixed, Running };

std::string to_string(MeanMode mode);
MeanMode mean_mode_from_string(std::string_view text);

struct CrossingConfig {
  int levels = 2;
  MeanMode mean_mode = MeanMode::Zero;
  double fixed_level = 0.0;
  // Running mode only: samples absorbed into the mean before level 1 starts
  // clipping.
  std::uint64_t mean_warmup = 50;
  std::optional<double> ewma_lambda;

  void validate() const;
  bool operator==(const CrossingConfig&) const = default;
};

// Exponentially weighted mean of the spacing between successive crossings.
struct EwmaState {
  double lambda = 0.0;
  std::optional<double> mean_period;
  // Samples since the last crossing; empty before the first one.
  std::optional<std::uint64_t> run_length;

  EwmaState() = default;
  explicit EwmaState(double lambda);

  // Crossings per sample implied by the mean period.
  std::optional<double> rate() const;

  bool operator==(const EwmaState&) const = default;
};

// Tbar <- (1 - lambda) Tbar + lambda T; the first period initialises Tbar.
EwmaState ewma_update(EwmaState e, double period);

struct LevelState {
  // Last raw value of the (k-1)th difference; meaningless while samples == 0.
  double tail = 0.0;
  // Previous clipped value, -1 while unset.
  std::int8_t bit = -1;
  std::uint64_t count = 0;
  std::uint64_t samples = 0;
  std::optional<EwmaState> ewma;

  bool operator==(const LevelState&) const = default;
};

// Normalised higher-order crossing counts.
struct HocCounts {
  std::vector<std::uint64_t> d;
  std::vector<double> d_tilde;
  std::vector<bool> valid;
  std::uint64_t n = 0;

  // Number of leading valid levels.
  std::size_t valid_levels() const;
};

enum class CountSource { Cumulative, Ewma };

// Streaming crossing counter over the difference cascade
// y, diff(y), diff^2(y), ... Memory is O(levels) regardless of stream length.
class HocState {
 public:
  explicit HocState(CrossingConfig config);

  // Pushes one sample through every level. Throws DataError on NaN or
  // infinity and leaves the state untouched.
  void ingest(double y);
  void ingest(std::span<const double> ys) {
    for (double y : ys) ingest(y);
  }

  HocCounts snapshot(CountSource source = CountSource::Cumulative) const;

  // Same boundary context (tails, bits, mean, EWMA) with zeroed counts, for
  // counting a contiguous continuation that is later merged back.
  HocState resume() const;

  const CrossingConfig& config() const { return config_; }
  const std::vector<LevelState>& levels() const { return levels_; }
  double mean_sum() const { return mean_sum_; }
  std::uint64_t mean_count() const { return mean_count_; }
  std::uint64_t samples() const { return levels_.front().samples; }

  // Values actually clipped at a level (excludes the running-mean warm-up).
  std::uint64_t clipped_samples(std::size_t level) const;

  // Rebuilds a state from stored parts, checking the structural invariants.
  static HocState from_parts(CrossingConfig config, std::vector<LevelState> levels,
                             double mean_sum, std::uint64_t mean_count);

  bool operator==(const HocState&) const = default;

 private:
  CrossingConfig config_;
  std::vector<LevelState> levels_;
  double mean_sum_ = 0.0;
  std::uint64_t mean_count_ = 0;
};

// Folds a continuation segment (built with resume()) back onto the state it
// was resumed from: counts add, everything else comes from the continuation.
HocState merge(const HocState& head, const HocState& continuation);

// Stable 64-bit FNV-1a digest of the configuration plus an arbitrary context
// string (the CLI passes the model order), as 16 hex digits.
std::string config_hash(const CrossingConfig& config, std::string_view context = {});

// JSON state file. Doubles are written in shortest round-trip form so a
// restore is bit-exact.
std::string state_to_json(const HocState& state, std::string_view context = {});

// Throws InvalidArgument when the file's config_hash does not match
// `expected` and DataError when the file is malformed.
HocState state_from_json(const std::string& text, const CrossingConfig& expected,
                         std::string_view context = {});

}  // namespace hocpoles

#endif  // HOCPOLES_CROSSINGS_HPP
