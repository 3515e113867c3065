#include "hocpoles/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "hocpoles/error.hpp"
#include "hocpoles/poles.hpp"

namespace hocpoles {

namespace {

void check_poly(const std::vector<double>& p, const char* name) {
  if (p.empty()) throw InvalidArgument(std::string(name) + " polynomial is empty");
  for (double c : p)
    if (!std::isfinite(c))
      throw InvalidArgument(std::string(name) + " polynomial has a non-finite coefficient");
  if (p.front() != 1.0)
    throw InvalidArgument(std::string(name) + " polynomial must be monic (leading coefficient 1)");
}

// psi_0..psi_count-1 of the impulse response B/A.
std::vector<double> impulse_response(const ArmaSpec& spec, std::size_t count) {
  std::vector<double> impulse(count, 0.0);
  if (count > 0) impulse[0] = 1.0;
  return arma_filter(spec, impulse);
}

}  // namespace

void ArmaSpec::validate() const {
  check_poly(num, "numerator");
  check_poly(den, "denominator");
}

bool ArmaSpec::is_stable() const {
  if (den.size() <= 1) return true;
  for (const auto& p : find_roots(den))
    if (std::abs(p) >= 1.0) return false;
  return true;
}

void NoiseConfig::validate() const {
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw InvalidArgument("noise variance must be positive");
  if (count < 2) throw InvalidArgument("sample count must be at least 2");
}

void ClosedLoopSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (delay < 1) throw InvalidArgument("delay must be at least 1");
  if (!(kc >= 0.0) || !std::isfinite(kc)) throw InvalidArgument("kc must be non-negative");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
}

double GaussianSource::uniform_open() {
  // (0, 1]: never zero, so log() below is finite.
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianSource::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::vector<double> arma_filter(const ArmaSpec& spec, std::span<const double> input) {
  spec.validate();
  const auto& a = spec.den;
  const auto& b = spec.num;
  std::vector<double> y(input.size(), 0.0);
  for (std::size_t t = 0; t < input.size(); ++t) {
    double acc = 0.0;
    for (std::size_t j = 0; j < b.size() && j <= t; ++j) acc += b[j] * input[t - j];
    for (std::size_t i = 1; i < a.size() && i <= t; ++i) acc -= a[i] * y[t - i];
    y[t] = acc;
  }
  return y;
}

Simulation simulate_arma(const ArmaSpec& spec, const NoiseConfig& noise,
                         const SimulationOptions& options) {
  spec.validate();
  noise.validate();
  if (!options.force && !spec.is_stable())
    throw UnstableModel("denominator has roots on or outside the unit circle");

  const std::size_t total = noise.count + options.warmup;
  GaussianSource gauss(noise.seed);
  const double scale = std::sqrt(noise.variance);
  std::vector<double> e(total);
  for (double& v : e) v = scale * gauss();

  std::vector<double> y = arma_filter(spec, e);
  Simulation sim;
  sim.y.assign(y.begin() + static_cast<std::ptrdiff_t>(options.warmup), y.end());
  sim.noise = std::move(e);
  sim.warmup = options.warmup;
  return sim;
}

std::vector<double> generate_arma(const ArmaSpec& spec, const NoiseConfig& noise,
                                  const SimulationOptions& options) {
  return simulate_arma(spec, noise, options).y;
}

ArmaSpec closed_loop_to_arma(const ClosedLoopSpec& cl) {
  cl.validate();
  const int degree = std::max(2, cl.delay);
  ArmaSpec spec;
  spec.num = {1.0, -1.0};
  spec.den.assign(static_cast<std::size_t>(degree) + 1, 0.0);
  spec.den[0] = 1.0;
  spec.den[1] -= 1.0 + cl.alpha;
  spec.den[2] += cl.alpha;
  spec.den[static_cast<std::size_t>(cl.delay)] += (1.0 - cl.alpha) * cl.kc;
  return spec;
}

AcfSequence analytic_acf(const ArmaSpec& spec, std::size_t max_lag) {
  spec.validate();
  if (!spec.is_stable()) throw UnstableModel("analytic ACF needs a stable denominator");

  const auto& a = spec.den;
  const auto& b = spec.num;
  const int n = spec.ar_order();
  const int m = spec.ma_order();
  const int p = std::max(n, m);

  // rhs_k = sum_{j=k}^{m} b_j psi_{j-k}, unit noise variance.
  const auto psi = impulse_response(spec, static_cast<std::size_t>(m) + 1);
  auto rhs = [&](int k) {
    double s = 0.0;
    for (int j = k; j <= m; ++j) s += b[static_cast<std::size_t>(j)] * psi[static_cast<std::size_t>(j - k)];
    return s;
  };

  // gamma_k + sum_i a_i gamma_{|k-i|} = rhs_k for k = 0..p.
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(p + 1, p + 1);
  Eigen::VectorXd r(p + 1);
  for (int k = 0; k <= p; ++k) {
    lhs(k, k) += 1.0;
    for (int i = 1; i <= n; ++i) lhs(k, std::abs(k - i)) += a[static_cast<std::size_t>(i)];
    r(k) = rhs(k);
  }
  const Eigen::VectorXd head = lhs.partialPivLu().solve(r);

  const std::size_t len = std::max<std::size_t>(max_lag, static_cast<std::size_t>(p)) + 1;
  std::vector<double> gamma(len, 0.0);
  for (int k = 0; k <= p; ++k) gamma[static_cast<std::size_t>(k)] = head(k);
  for (std::size_t k = static_cast<std::size_t>(p) + 1; k < len; ++k) {
    double g = 0.0;
    for (int i = 1; i <= n; ++i) g -= a[static_cast<std::size_t>(i)] * gamma[k - static_cast<std::size_t>(i)];
    gamma[k] = g;
  }

  std::vector<double> rho(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) rho[k] = gamma[k] / gamma[0];
  rho[0] = 1.0;
  return AcfSequence::from_lags(std::move(rho));
}

std::vector<std::complex<double>> true_poles(const ArmaSpec& spec) {
  spec.validate();
  if (spec.ar_order() < 1) throw InvalidArgument("model has no poles (AR order 0)");
  return find_roots(spec.den);
}

ArmaSpec arma_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("num") || !j.contains("den"))
    throw DataError("model file needs \"num\" and \"den\" arrays");
  ArmaSpec spec;
  try {
    spec.num = j.at("num").get<std::vector<double>>();
    spec.den = j.at("den").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model coefficients must be numbers: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::string arma_to_json(const ArmaSpec& spec) {
  return nlohmann::json{{"num", spec.num}, {"den", spec.den}}.dump();
}

std::vector<double> parse_coefficients(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("bad coefficient '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw InvalidArgument("bad coefficient '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("empty coefficient list");
  return out;
}

}  // namespace hocpoles
