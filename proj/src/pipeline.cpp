#include "hocpoles/pipeline.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "hocpoles/error.hpp"
#include "hocpoles/hoc_acf.hpp"
#include "hocpoles/myw.hpp"

namespace hocpoles {

void RunConfig::validate() const {
  if (n < 1) throw InvalidArgument("AR order must be at least 1");
  if (m < 0) throw InvalidArgument("MA order must be non-negative");
  if (effective_k_start() <= m) throw InvalidArgument("lag offset must exceed the MA order");
  if (effective_levels() < required_lag())
    throw InvalidArgument("need at least " + std::to_string(required_lag()) + " crossing levels for order (" +
                          std::to_string(n) + "," + std::to_string(m) + ")");
  if (effective_levels() > kMaxRecursionDepth)
    throw InvalidArgument("at most " + std::to_string(kMaxRecursionDepth) + " crossing levels are supported");
  if (use_ewma && !ewma_lambda) throw InvalidArgument("EWMA reporting needs a forgetting factor");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("sampling period must be positive");
  if (!std::isfinite(zeta_threshold)) throw InvalidArgument("damping threshold must be finite");
  crossing_config().validate();
}

CrossingConfig RunConfig::crossing_config() const {
  CrossingConfig c;
  c.levels = effective_levels();
  c.mean_mode = mean_mode;
  c.fixed_level = fixed_level;
  c.mean_warmup = mean_warmup;
  c.ewma_lambda = ewma_lambda;
  return c;
}

std::uint64_t RunConfig::min_samples() const {
  std::uint64_t base = static_cast<std::uint64_t>(effective_levels()) + 2;
  if (mean_mode == MeanMode::Running) base += mean_warmup;
  return base;
}

std::string RunConfig::hash_context() const {
  return "order=" + std::to_string(n) + "," + std::to_string(m) + ";k=" + std::to_string(effective_k_start());
}

Report report_from_acf(std::uint64_t samples, const AcfSequence& acf, const RunConfig& config) {
  Report rep;
  rep.samples = samples;
  rep.acf = acf.rho;
  rep.acf_clamped = acf.clamped;

  DenominatorEstimate est;
  try {
    est = solve_myw(acf, config.n, config.m, MywOptions{config.k_start});
  } catch (const IllConditioned& e) {
    rep.cond = e.cond();
    rep.flags.ill_conditioned = true;
    rep.solve_failed = true;
    return rep;
  }
  rep.a_hat = est.a;
  rep.cond = est.cond;
  rep.flags.ill_conditioned = est.ill_conditioned;

  const PoleReport poles = assess(est, config.dt, config.zeta_threshold);
  rep.poles = poles.discrete;
  for (const auto& mode : poles.modes) rep.damping.push_back({mode.zeta, to_string(mode.kind)});
  rep.flags.unstable = poles.any_unstable();
  rep.flags.oscillatory = poles.any_oscillatory();
  return rep;
}

Report report_from_state(const HocState& state, const RunConfig& config) {
  const HocCounts counts =
      state.snapshot(config.use_ewma ? CountSource::Ewma : CountSource::Cumulative);
  const int lags = config.effective_levels();
  const AcfSequence acf = acf_from_hoc(counts, lags);
  Report rep = report_from_acf(counts.n, acf, config);
  rep.hoc = counts.d;
  rep.d_tilde = counts.d_tilde;
  return rep;
}

Report batch_report(std::span<const double> y, const RunConfig& config) {
  const AcfSequence acf = batch_acf(y, static_cast<std::size_t>(config.effective_levels()));
  return report_from_acf(y.size(), acf, config);
}

std::string report_to_json(const Report& r) {
  using nlohmann::json;
  json poles = json::array();
  for (const auto& p : r.poles) poles.push_back({{"re", p.real()}, {"im", p.imag()}});
  json damping = json::array();
  for (const auto& d : r.damping) damping.push_back({{"zeta", d.zeta ? json(*d.zeta) : json(nullptr)}, {"mode", d.mode}});
  json clamped = json::array();
  for (bool c : r.acf_clamped) clamped.push_back(c);

  json j = {
      {"samples", r.samples},
      {"hoc", r.hoc},
      {"d_tilde", r.d_tilde},
      {"acf", r.acf},
      {"acf_clamped", clamped},
      {"a_hat", r.a_hat},
      {"cond", std::isfinite(r.cond) ? json(r.cond) : json(nullptr)},
      {"poles", poles},
      {"damping", damping},
      {"flags",
       {{"unstable", r.flags.unstable},
        {"oscillatory", r.flags.oscillatory},
        {"ill_conditioned", r.flags.ill_conditioned}}},
      {"rmse", r.rmse ? json(*r.rmse) : json(nullptr)},
  };
  return j.dump();
}

}  // namespace hocpoles
