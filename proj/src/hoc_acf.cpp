#include "hocpoles/hoc_acf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hocpoles/error.hpp"

namespace hocpoles {

std::int64_t binomial(int n, int r) {
  if (n < 0 || r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::int64_t c = 1;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

namespace {

// Psi and Phi in extended precision: the binomial weights reach C(24, 12)
// and the alternating sums cancel heavily.
struct WidePsiPhi {
  long double psi;
  long double phi;
};

WidePsiPhi wide_psi_phi(int k, const AcfSequence& rho) {
  if (k < 0) throw InvalidArgument("recursion index must be non-negative");
  if (rho.max_lag() < static_cast<std::size_t>(k))
    throw InvalidArgument("psi/phi at k=" + std::to_string(k) + " needs lags up to " + std::to_string(k));

  const int n = 2 * k;
  long double psi = static_cast<long double>(binomial(n, k));
  long double phi = -static_cast<long double>(binomial(n, k - 1));
  for (int j = 1; j <= k; ++j) {
    const long double r = rho.rho[static_cast<std::size_t>(j)];
    const long double sign = (j % 2 == 0) ? 1.0L : -1.0L;
    psi += 2.0L * sign * r * static_cast<long double>(binomial(n, k - j));
    phi -= sign * r * static_cast<long double>(binomial(n, k - j + 1) + binomial(n, k - j - 1));
  }
  return {psi, phi};
}

constexpr long double kPi = std::numbers::pi_v<long double>;

}  // namespace

PsiPhi psi_phi(int k, const AcfSequence& rho) {
  const WidePsiPhi w = wide_psi_phi(k, rho);
  return {static_cast<double>(w.psi), static_cast<double>(w.phi), k};
}

double next_lag(int k, const AcfSequence& rho, double d_tilde_next, bool* clamped) {
  if (!(d_tilde_next >= 0.0 && d_tilde_next <= 1.0))
    throw InvalidArgument("normalised crossing count must lie in [0, 1]");
  const WidePsiPhi pp = wide_psi_phi(k, rho);
  const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
  const double raw =
      static_cast<double>(sign * (pp.psi * std::cos(kPi * static_cast<long double>(d_tilde_next)) - pp.phi));
  const double out = std::clamp(raw, -1.0, 1.0);
  if (clamped) *clamped = out != raw;
  return out;
}

AcfSequence acf_from_hoc(const std::vector<double>& d_tilde, int max_lag) {
  if (max_lag < 0) throw InvalidArgument("max lag must be non-negative");
  if (max_lag > kMaxRecursionDepth)
    throw InvalidArgument("max lag exceeds the supported recursion depth of " +
                          std::to_string(kMaxRecursionDepth));
  if (static_cast<std::size_t>(max_lag) > d_tilde.size())
    throw InvalidArgument("need " + std::to_string(max_lag) + " crossing levels, have " +
                          std::to_string(d_tilde.size()));
  AcfSequence rho;
  for (int k = 0; k < max_lag; ++k) {
    bool clamped = false;
    const double r = next_lag(k, rho, d_tilde[static_cast<std::size_t>(k)], &clamped);
    rho.rho.push_back(r);
    rho.clamped.push_back(clamped);
  }
  return rho;
}

AcfSequence acf_from_hoc(const HocCounts& counts, int max_lag) {
  if (max_lag >= 0 && counts.valid_levels() < static_cast<std::size_t>(max_lag))
    throw DataError("crossing level " + std::to_string(counts.valid_levels() + 1) +
                    " has too few samples for a lag estimate");
  return acf_from_hoc(counts.d_tilde, max_lag);
}

std::vector<double> hoc_from_acf(const AcfSequence& rho, int levels) {
  if (levels < 0) throw InvalidArgument("level count must be non-negative");
  if (rho.max_lag() < static_cast<std::size_t>(levels))
    throw InvalidArgument("expected counts for " + std::to_string(levels) + " levels need lags up to " +
                          std::to_string(levels));
  constexpr double kTolerance = 1e-9;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(levels));
  for (int k = 0; k < levels; ++k) {
    const WidePsiPhi pp = wide_psi_phi(k, rho);
    const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
    const long double numer = pp.phi + sign * rho.rho[static_cast<std::size_t>(k) + 1];
    if (!(pp.psi > 0.0L))
      throw DataError("difference " + std::to_string(k) + " has zero variance under these lags");
    const long double ratio = numer / pp.psi;
    if (!(std::abs(ratio) <= 1.0L + kTolerance))
      throw DataError("lags are not a valid autocorrelation (level " + std::to_string(k + 1) + " ratio " +
                      std::to_string(static_cast<double>(ratio)) + ")");
    out.push_back(static_cast<double>(std::acos(std::clamp(ratio, -1.0L, 1.0L)) / kPi));
  }
  return out;
}

}  // namespace hocpoles
