#ifndef HOCPOLES_MODEL_HPP
#define HOCPOLES_MODEL_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hocpoles/acf.hpp"

namespace hocpoles {

// Rational transfer function B(z^-1)/A(z^-1) driven by white noise.
// Both polynomials are monic and stored in ascending powers of z^-1:
// num = (1, b_1, ..., b_m), den = (1, a_1, ..., a_n).
struct ArmaSpec {
  std::vector<double> num{1.0};
  std::vector<double> den{1.0};

  int ar_order() const { return static_cast<int>(den.size()) - 1; }
  int ma_order() const { return static_cast<int>(num.size()) - 1; }

  // Throws InvalidArgument unless both polynomials are non-empty, finite
  // and monic.
  void validate() const;

  // All roots of the denominator strictly inside the unit circle.
  bool is_stable() const;
};

struct NoiseConfig {
  std::uint64_t seed = 0;
  double variance = 1.0;
  std::size_t count = 0;

  void validate() const;
};

// First-order-plus-delay plant (1-alpha) z^-d / (1 - alpha z^-1) under an
// integrating controller kc / (1 - z^-1), with noise model equal to the
// plant denominator.
struct ClosedLoopSpec {
  double alpha = 0.9;
  int delay = 2;
  double kc = 0.1;
  double dt = 1.0;

  void validate() const;
};

struct SimulationOptions {
  // Samples produced and then thrown away before the first emitted one.
  std::size_t warmup = 100;
  // Allow unstable denominators.
  bool force = false;
};

// Standard normal variates from a 64-bit Mersenne Twister (std::mt19937_64)
// via the Box-Muller transform. Both are fully specified, so a seed gives the
// same stream on every conforming platform. Uniforms use the top 53 bits of
// each draw.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double operator()();

 private:
  double uniform_open();

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Direct-form difference equation
//   y_t = -sum a_i y_{t-i} + sum b_j e_{t-j}
// with zero initial conditions.
std::vector<double> arma_filter(const ArmaSpec& spec, std::span<const double> input);

struct Simulation {
  std::vector<double> y;
  // Full driving sequence including the warm-up: noise.size() ==
  // y.size() + warmup, and the trailing y.size() values line up with y.
  std::vector<double> noise;
  std::size_t warmup = 0;
};

Simulation simulate_arma(const ArmaSpec& spec, const NoiseConfig& noise,
                         const SimulationOptions& options = {});

// The output series of simulate_arma.
std::vector<double> generate_arma(const ArmaSpec& spec, const NoiseConfig& noise,
                                  const SimulationOptions& options = {});

ArmaSpec closed_loop_to_arma(const ClosedLoopSpec& cl);

// Exact autocorrelation of a stable ARMA process up to max_lag. Solves the
// linear system for gamma_0..gamma_p (p = max(n, m)) and then extends with
// the homogeneous recursion for k > m.
AcfSequence analytic_acf(const ArmaSpec& spec, std::size_t max_lag);

// Roots of z^n + a_1 z^{n-1} + ... + a_n.
std::vector<std::complex<double>> true_poles(const ArmaSpec& spec);

// {"num": [...], "den": [...]}
ArmaSpec arma_from_json(const std::string& text);
std::string arma_to_json(const ArmaSpec& spec);

// Parses "1,-1.85,0.855".
std::vector<double> parse_coefficients(const std::string& text);

}  // namespace hocpoles

#endif  // HOCPOLES_MODEL_HPP
