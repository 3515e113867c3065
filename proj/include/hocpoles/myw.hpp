#ifndef HOCPOLES_MYW_HPP
#define HOCPOLES_MYW_HPP

#include <optional>
#include <span>
#include <vector>

#include "hocpoles/acf.hpp"

namespace hocpoles {

// Condition number of the lag matrix above which a solve is still returned
// but flagged.
inline constexpr double kSoftConditionLimit = 1e3;
// Above this the solve is refused.
inline constexpr double kHardConditionLimit = 1e8;
// Lags this close to unity put the poles near z = 1 where small lag errors
// move the roots a long way; flagged even when the condition number is
// below the soft limit.
inline constexpr double kNearUnitLag = 0.97;

// Estimated AR part A(z^-1) = 1 + a_1 z^-1 + ... + a_n z^-n.
struct DenominatorEstimate {
  std::vector<double> a;  // a_1..a_n
  int k_start = 1;
  // 1-norm condition number of the lag matrix.
  double cond = 1.0;
  bool ill_conditioned = false;
  // Some input lag was clamped upstream.
  bool clamped_input = false;

  // Monic coefficient vector (1, a_1, ..., a_n).
  std::vector<double> monic() const;
};

struct MywOptions {
  // Lag offset k of the extended equations; must exceed the MA order.
  // Defaults to m + 1.
  std::optional<int> k_start;
};

// Sample autocorrelation with the sample mean removed and the biased
// (divide by the full sum of squares) normalisation.
AcfSequence batch_acf(std::span<const double> y, std::size_t max_lag);

// Extended Yule-Walker solve for the AR coefficients of an ARMA(n, m)
// process. Uses lags rho_{k-n}..rho_{k+n-1}, with negative indices mirrored.
// Throws IllConditioned when the lag matrix is singular or its condition
// number exceeds kHardConditionLimit.
DenominatorEstimate solve_myw(const AcfSequence& rho, int n, int m,
                              const MywOptions& options = {});

// Normalised one-step prediction error of the AR part,
//   sqrt( sum_{t>n} (y_t - yhat_t)^2 / (N var(y)) ),  yhat_t = -sum a_i y_{t-i}.
double prediction_rmse(std::span<const double> y, const DenominatorEstimate& a);

// Normalised error between y and the output of num / A_hat driven by the
// same noise sequence that produced y. Needs the driving noise, so it only
// applies to simulated data. `noise` may start earlier than y (warm-up);
// its trailing y.size() values line up with y.
double model_output_rmse(std::span<const double> y, std::span<const double> noise,
                         std::span<const double> num, const DenominatorEstimate& a);

}  // namespace hocpoles

#endif  // HOCPOLES_MYW_HPP
