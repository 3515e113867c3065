#include "hocpoles/poles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "hocpoles/error.hpp"

namespace hocpoles {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kPairTolerance = 1e-8;

// Parlett-Reinsch style diagonal balancing; only powers of two are applied
// so no rounding is introduced.
void balance(Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  bool changed = true;
  while (changed) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double col = m.col(i).cwiseAbs().sum() - std::abs(m(i, i));
      const double row = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
      if (col == 0.0 || row == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double scaled = std::ldexp(col, exponent) + std::ldexp(row, -exponent);
      if (scaled < 0.95 * (col + row)) {
        m.col(i) *= std::ldexp(1.0, exponent);
        m.row(i) *= std::ldexp(1.0, -exponent);
        changed = true;
      }
    }
  }
}

Complex horner(std::span<const double> c, Complex z, Complex* derivative) {
  Complex p = c[0];
  Complex d = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    d = d * z + p;
    p = p * z + c[i];
  }
  if (derivative) *derivative = d;
  return p;
}

Complex polish(std::span<const double> c, Complex z) {
  double best = std::abs(horner(c, z, nullptr));
  for (int it = 0; it < 50 && best > 0.0; ++it) {
    Complex d;
    const Complex p = horner(c, z, &d);
    if (d == 0.0) break;
    const Complex next = z - p / d;
    const double r = std::abs(horner(c, next, nullptr));
    if (!(r < best)) break;
    z = next;
    best = r;
  }
  return z;
}

void enforce_conjugates(std::vector<Complex>& roots) {
  for (auto& r : roots)
    if (std::abs(r.imag()) <= kPairTolerance * std::max(1.0, std::abs(r))) r = {r.real(), 0.0};

  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i] || roots[i].imag() <= 0.0) continue;
    std::size_t best = roots.size();
    double best_dist = 0.0;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (used[j] || j == i || roots[j].imag() >= 0.0) continue;
      const double dist = std::abs(roots[j] - std::conj(roots[i]));
      if (best == roots.size() || dist < best_dist) {
        best = j;
        best_dist = dist;
      }
    }
    if (best == roots.size()) continue;
    const Complex mid = 0.5 * (roots[i] + std::conj(roots[best]));
    roots[i] = mid;
    roots[best] = std::conj(mid);
    used[i] = used[best] = true;
  }
  // A complex root without a partner cannot come from a real polynomial.
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (!used[i] && roots[i].imag() != 0.0) roots[i] = {roots[i].real(), 0.0};
}

}  // namespace

std::vector<Complex> find_roots(std::span<const double> coeffs) {
  if (coeffs.empty() || coeffs[0] != 1.0) throw InvalidArgument("polynomial must be monic");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw InvalidArgument("polynomial has a non-finite coefficient");
  const std::size_t degree = coeffs.size() - 1;
  if (degree == 0) return {};

  std::vector<Complex> roots;
  if (degree == 1) {
    roots.push_back(-coeffs[1]);
  } else {
    const auto n = static_cast<Eigen::Index>(degree);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) companion(0, i) = -coeffs[static_cast<std::size_t>(i) + 1];
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    balance(companion);

    Eigen::EigenSolver<Eigen::MatrixXd> solver;
    solver.setMaxIterations(kMaxIterations);
    solver.compute(companion, false);
    if (solver.info() != Eigen::Success)
      throw RootFindingError("companion eigenvalue iteration did not converge");
    for (Eigen::Index i = 0; i < n; ++i) roots.push_back(polish(coeffs, solver.eigenvalues()(i)));
  }

  enforce_conjugates(roots);

  double norm1 = 0.0;
  for (double c : coeffs) norm1 += std::abs(c);
  const double limit = 1e-8 * std::max(1.0, norm1);
  for (const auto& r : roots)
    if (!(std::abs(horner(coeffs, r, nullptr)) <= limit))
      throw RootFindingError("root residual above tolerance");

  std::sort(roots.begin(), roots.end(), [](const Complex& x, const Complex& y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax > ay;
    return x.imag() > y.imag();
  });
  return roots;
}

std::vector<Complex> find_roots(const DenominatorEstimate& a) {
  if (a.a.empty()) throw InvalidArgument("estimate has no coefficients");
  const auto monic = a.monic();
  return find_roots(monic);
}

Complex to_continuous(Complex p_z, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("sampling period must be positive");
  if (p_z == 0.0) throw InvalidArgument("a zero discrete pole has no continuous-time image");
  return std::log(p_z) / dt;
}

double damping_conjugate(Complex p_s) {
  const double mag = std::abs(p_s);
  if (mag == 0.0) throw NumericalError("damping is undefined for a pole at the origin");
  return -p_s.real() / mag;
}

double damping_real_pair(double p1, double p2) {
  const double prod = p1 * p2;
  if (!(prod > 0.0)) throw NumericalError("damping is undefined: real pole product is not positive");
  return -(p1 + p2) / (2.0 * std::sqrt(prod));
}

std::string to_string(ModeKind kind) {
  switch (kind) {
    case ModeKind::ConjugatePair: return "conjugate-pair";
    case ModeKind::RealPair: return "real-pair";
    case ModeKind::UnpairedReal: return "unpaired-real";
  }
  return "unpaired-real";
}

bool PoleReport::any_unstable() const {
  return std::any_of(unstable.begin(), unstable.end(), [](bool u) { return u; });
}

bool PoleReport::any_oscillatory() const {
  return std::any_of(modes.begin(), modes.end(), [](const Mode& m) { return m.oscillatory; });
}

PoleReport assess(const DenominatorEstimate& a, double dt, double zeta_threshold) {
  if (!(dt > 0.0)) throw InvalidArgument("sampling period must be positive");
  PoleReport rep;
  rep.discrete = find_roots(a);
  const std::size_t n = rep.discrete.size();
  for (const auto& p : rep.discrete) {
    rep.unstable.push_back(std::abs(p) >= 1.0 - kUnitCircleTolerance);
    if (p == 0.0) {
      rep.continuous.emplace_back();
      rep.has_zero_pole = true;
    } else {
      rep.continuous.emplace_back(to_continuous(p, dt));
    }
  }

  std::vector<bool> used(n, false);
  std::vector<std::size_t> positive_real;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex p = rep.discrete[i];
    if (used[i] || p == 0.0) continue;
    if (p.imag() > 0.0) {
      Mode mode{ModeKind::ConjugatePair, {i}, damping_conjugate(*rep.continuous[i]), false};
      for (std::size_t j = 0; j < n; ++j)
        if (!used[j] && j != i && rep.discrete[j] == std::conj(p)) {
          mode.poles.push_back(j);
          used[j] = true;
          break;
        }
      used[i] = true;
      rep.modes.push_back(mode);
    } else if (p.imag() == 0.0 && p.real() < 0.0) {
      // log of a negative real is ln|p| + i pi: a mode at the Nyquist frequency.
      used[i] = true;
      rep.modes.push_back({ModeKind::ConjugatePair, {i}, damping_conjugate(*rep.continuous[i]), false});
    } else if (p.imag() == 0.0) {
      positive_real.push_back(i);
    }
  }

  std::sort(positive_real.begin(), positive_real.end(),
            [&](std::size_t x, std::size_t y) { return rep.discrete[x].real() > rep.discrete[y].real(); });
  for (std::size_t idx = 0; idx + 1 < positive_real.size(); idx += 2) {
    const std::size_t i = positive_real[idx], j = positive_real[idx + 1];
    Mode mode{ModeKind::RealPair, {i, j}, std::nullopt, false};
    try {
      mode.zeta = damping_real_pair(rep.continuous[i]->real(), rep.continuous[j]->real());
    } catch (const NumericalError&) {
    }
    rep.modes.push_back(mode);
  }
  if (positive_real.size() % 2 == 1)
    rep.modes.push_back({ModeKind::UnpairedReal, {positive_real.back()}, std::nullopt, false});

  for (auto& m : rep.modes)
    m.oscillatory = m.kind == ModeKind::ConjugatePair && m.zeta && *m.zeta < zeta_threshold;
  return rep;
}

}  // namespace hocpoles
