#include "hocpoles/myw.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "hocpoles/error.hpp"

namespace hocpoles {

std::vector<double> DenominatorEstimate::monic() const {
  std::vector<double> out{1.0};
  out.insert(out.end(), a.begin(), a.end());
  return out;
}

AcfSequence batch_acf(std::span<const double> y, std::size_t max_lag) {
  const std::size_t q = y.size();
  if (max_lag >= q) throw DataError("max lag must be below the sample count");
  if (q < max_lag + 2)
    throw DataError("batch ACF to lag " + std::to_string(max_lag) + " needs at least " +
                    std::to_string(max_lag + 2) + " samples");

  double mu = 0.0;
  for (double v : y) mu += v;
  mu /= static_cast<double>(q);

  double denom = 0.0;
  for (double v : y) denom += (v - mu) * (v - mu);
  if (!(denom > 0.0)) throw DataError("series has zero variance");

  std::vector<double> rho(max_lag + 1, 0.0);
  rho[0] = 1.0;
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double s = 0.0;
    for (std::size_t t = k; t < q; ++t) s += (y[t - k] - mu) * (y[t] - mu);
    rho[k] = s / denom;
  }
  return AcfSequence::from_lags(std::move(rho));
}

DenominatorEstimate solve_myw(const AcfSequence& rho, int n, int m, const MywOptions& options) {
  if (n < 1) throw InvalidArgument("AR order must be at least 1");
  if (m < 0) throw InvalidArgument("MA order must be non-negative");
  const int k = options.k_start.value_or(m + 1);
  if (k <= m) throw InvalidArgument("lag offset must exceed the MA order");
  const std::size_t needed = static_cast<std::size_t>(k + n - 1);
  if (rho.max_lag() < needed)
    throw InvalidArgument("extended Yule-Walker needs lags up to " + std::to_string(needed));

  Eigen::MatrixXd omega(n, n);
  Eigen::VectorXd p(n);
  bool near_unit = false;
  for (int i = 0; i < n; ++i) {
    p(i) = rho.at(k + i);
    for (int j = 0; j < n; ++j) omega(i, j) = rho.at(k - 1 + i - j);
  }
  for (int lag = k - n; lag <= k + n - 1; ++lag)
    if (lag != 0 && std::abs(rho.at(lag)) > kNearUnitLag) near_unit = true;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(omega);
  const Eigen::MatrixXd inv = lu.inverse();
  double cond = omega.cwiseAbs().colwise().sum().maxCoeff() * inv.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(cond)) cond = std::numeric_limits<double>::infinity();
  if (!(cond <= kHardConditionLimit))
    throw IllConditioned("lag matrix is singular or ill-conditioned (cond " + std::to_string(cond) + ")", cond);

  const Eigen::VectorXd x = lu.solve(p);
  DenominatorEstimate est;
  est.k_start = k;
  est.cond = cond;
  est.a.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) est.a[static_cast<std::size_t>(i)] = -x(i);
  est.ill_conditioned = cond > kSoftConditionLimit || near_unit;
  est.clamped_input = rho.any_clamped();
  return est;
}

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // divides by N
};

Moments moments(std::span<const double> y) {
  Moments m;
  for (double v : y) m.mean += v;
  m.mean /= static_cast<double>(y.size());
  for (double v : y) m.var += (v - m.mean) * (v - m.mean);
  m.var /= static_cast<double>(y.size());
  return m;
}

}  // namespace

double prediction_rmse(std::span<const double> y, const DenominatorEstimate& a) {
  const std::size_t n = a.a.size();
  if (y.size() < n + 1) throw DataError("too few samples for the prediction error");
  const Moments mo = moments(y);
  if (!(mo.var > 0.0)) throw DataError("series has zero variance");

  double sse = 0.0;
  for (std::size_t t = n; t < y.size(); ++t) {
    double pred = 0.0;
    for (std::size_t i = 1; i <= n; ++i) pred -= a.a[i - 1] * y[t - i];
    const double e = y[t] - pred;
    sse += e * e;
  }
  return std::sqrt(sse / (static_cast<double>(y.size()) * mo.var));
}

double model_output_rmse(std::span<const double> y, std::span<const double> noise,
                         std::span<const double> num, const DenominatorEstimate& a) {
  if (noise.size() < y.size()) throw InvalidArgument("noise sequence is shorter than the signal");
  if (num.empty()) throw InvalidArgument("numerator is empty");
  if (y.size() < 2) throw DataError("too few samples for the model output error");
  const Moments mo = moments(y);
  if (!(mo.var > 0.0)) throw DataError("series has zero variance");

  // Direct-form num / A_hat over the whole noise record.
  const std::vector<double> den = a.monic();
  std::vector<double> out(noise.size(), 0.0);
  for (std::size_t t = 0; t < noise.size(); ++t) {
    double acc = 0.0;
    for (std::size_t j = 0; j < num.size() && j <= t; ++j) acc += num[j] * noise[t - j];
    for (std::size_t i = 1; i < den.size() && i <= t; ++i) acc -= den[i] * out[t - i];
    out[t] = acc;
  }

  const std::size_t offset = noise.size() - y.size();
  double sse = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double e = y[t] - out[offset + t];
    sse += e * e;
  }
  return std::sqrt(sse / (static_cast<double>(y.size()) * mo.var));
}

}  // namespace hocpoles
