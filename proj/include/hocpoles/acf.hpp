#ifndef HOCPOLES_ACF_HPP
#define HOCPOLES_ACF_HPP

#include <cstddef>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "hocpoles/error.hpp"

namespace hocpoles {

// Autocorrelation lags rho_0..rho_K. rho_0 is always 1.
struct AcfSequence {
  std::vector<double> rho{1.0};
  // One flag per lag; set when a computed value fell outside [-1, 1].
  std::vector<bool> clamped{false};

  std::size_t max_lag() const { return rho.size() - 1; }

  // Symmetric extension rho_{-k} = rho_k.
  double at(long k) const { return rho.at(static_cast<std::size_t>(std::labs(k))); }

  bool any_clamped() const {
    for (bool c : clamped)
      if (c) return true;
    return false;
  }

  // Throws InvalidArgument unless rho_0 == 1 and every lag is finite with
  // magnitude at most 1 (up to rounding).
  static AcfSequence from_lags(std::vector<double> rho) {
    if (rho.empty() || rho.front() != 1.0) throw InvalidArgument("autocorrelation must start with rho_0 = 1");
    for (double r : rho)
      if (!std::isfinite(r) || std::abs(r) > 1.0 + 1e-12)
        throw InvalidArgument("autocorrelation lags must lie in [-1, 1]");
    AcfSequence s;
    s.clamped.assign(rho.size(), false);
    s.rho = std::move(rho);
    return s;
  }
};

}  // namespace hocpoles

#endif  // HOCPOLES_ACF_HPP
