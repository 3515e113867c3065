#ifndef HOCPOLES_HOC_ACF_HPP
#define HOCPOLES_HOC_ACF_HPP

#include <cstdint>
#include <vector>

#include "hocpoles/acf.hpp"
#include "hocpoles/crossings.hpp"

namespace hocpoles {

// Deepest recursion acf_from_hoc accepts. Count noise is amplified by
// binomial weights at every step, so lags past the first few are rough.
inline constexpr int kMaxRecursionDepth = 12;

// Binomial coefficient, zero outside 0 <= r <= n.
std::int64_t binomial(int n, int r);

// Normalised lag-0 (psi) and lag-1 (phi, without its rho_{k+1} term)
// autocovariances of the k-th difference, written in terms of rho_1..rho_k.
struct PsiPhi {
  double psi = 1.0;
  double phi = 0.0;
  int k = 0;
};

PsiPhi psi_phi(int k, const AcfSequence& rho);

// rho_{k+1} = (-1)^k (psi cos(pi d_tilde) - phi), clamped into [-1, 1].
// `clamped` is set when clamping changed the value.
double next_lag(int k, const AcfSequence& rho, double d_tilde_next, bool* clamped = nullptr);

// Lags rho_0..rho_K from the first K normalised counts.
AcfSequence acf_from_hoc(const HocCounts& counts, int max_lag);
AcfSequence acf_from_hoc(const std::vector<double>& d_tilde, int max_lag);

// Expected normalised counts D~_1..D~_L of a process with the given lags
// (needs rho_1..rho_L). Throws DataError if the lags are not a valid
// autocorrelation.
std::vector<double> hoc_from_acf(const AcfSequence& rho, int levels);

}  // namespace hocpoles

#endif  // HOCPOLES_HOC_ACF_HPP
