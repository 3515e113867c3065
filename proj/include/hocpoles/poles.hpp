#ifndef HOCPOLES_POLES_HPP
#define HOCPOLES_POLES_HPP

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hocpoles/myw.hpp"

namespace hocpoles {

using Complex = std::complex<double>;

inline constexpr double kDefaultZetaThreshold = 0.1;
// Poles this close to the unit circle count as unstable.
inline constexpr double kUnitCircleTolerance = 1e-9;

// Roots of the monic polynomial coeffs[0] z^n + coeffs[1] z^{n-1} + ... with
// coeffs[0] == 1. Companion matrix eigenvalues followed by Newton polishing;
// conjugate pairs are made exact and near-real roots snapped to the axis.
// Roots are ordered by decreasing modulus, then decreasing imaginary part.
std::vector<Complex> find_roots(std::span<const double> coeffs);
std::vector<Complex> find_roots(const DenominatorEstimate& a);

// Principal-branch log(p_z) / dt. Throws InvalidArgument for p_z == 0.
Complex to_continuous(Complex p_z, double dt = 1.0);

// zeta = -a / |a + ib| for a continuous conjugate pair a +- ib.
double damping_conjugate(Complex p_s);
// zeta = -(p1 + p2) / (2 sqrt(p1 p2)) for two real continuous poles.
// Throws NumericalError when p1 p2 <= 0.
double damping_real_pair(double p1, double p2);

enum class ModeKind { ConjugatePair, RealPair, UnpairedReal };

std::string to_string(ModeKind kind);

struct Mode {
  ModeKind kind = ModeKind::UnpairedReal;
  // Indices into PoleReport::discrete.
  std::vector<std::size_t> poles;
  std::optional<double> zeta;
  bool oscillatory = false;
};

struct PoleReport {
  std::vector<Complex> discrete;
  // Empty entry when the discrete pole is zero.
  std::vector<std::optional<Complex>> continuous;
  std::vector<bool> unstable;
  std::vector<Mode> modes;
  // Some discrete pole was exactly zero.
  bool has_zero_pole = false;

  bool any_unstable() const;
  bool any_oscillatory() const;
};

// Roots, continuous images, damping per mode and the stability and
// oscillation flags. Conjugate pairs form one mode each; positive real
// poles are paired by proximity, slowest first, and a leftover one is
// reported unpaired. A
// negative real discrete pole maps to a + i pi/dt and is treated as a
// conjugate pair at the Nyquist frequency.
PoleReport assess(const DenominatorEstimate& a, double dt = 1.0,
                  double zeta_threshold = kDefaultZetaThreshold);

}  // namespace hocpoles

#endif  // HOCPOLES_POLES_HPP
