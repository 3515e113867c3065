#include "hocpoles/crossings.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "hocpoles/error.hpp"

namespace hocpoles {

std::string to_string(MeanMode mode) {
  switch (mode) {
    case MeanMode::Zero: return "zero";
    case MeanMode::Fixed: return "fixed";
    case MeanMode::Running: return "running";
  }
  return "zero";
}

MeanMode mean_mode_from_string(std::string_view text) {
  if (text == "zero") return MeanMode::Zero;
  if (text == "fixed") return MeanMode::Fixed;
  if (text == "running") return MeanMode::Running;
  throw InvalidArgument("unknown mean mode '" + std::string(text) + "'");
}

void CrossingConfig::validate() const {
  if (levels < 1) throw InvalidArgument("at least one crossing level is required");
  if (!std::isfinite(fixed_level)) throw InvalidArgument("fixed level must be finite");
  if (ewma_lambda && !(*ewma_lambda >= 0.0 && *ewma_lambda <= 1.0))
    throw InvalidArgument("forgetting factor must lie in [0, 1]");
}

EwmaState::EwmaState(double l) : lambda(l) {
  if (!(l >= 0.0 && l <= 1.0)) throw InvalidArgument("forgetting factor must lie in [0, 1]");
}

std::optional<double> EwmaState::rate() const {
  if (!mean_period) return std::nullopt;
  return 1.0 / *mean_period;
}

EwmaState ewma_update(EwmaState e, double period) {
  if (!(period >= 1.0) || !std::isfinite(period))
    throw InvalidArgument("crossing period must be at least one sample");
  if (!e.mean_period)
    e.mean_period = period;
  else
    e.mean_period = (1.0 - e.lambda) * *e.mean_period + e.lambda * period;
  return e;
}

std::size_t HocCounts::valid_levels() const {
  std::size_t k = 0;
  while (k < valid.size() && valid[k]) ++k;
  return k;
}

HocState::HocState(CrossingConfig config) : config_(std::move(config)) {
  config_.validate();
  levels_.resize(static_cast<std::size_t>(config_.levels));
  if (config_.ewma_lambda)
    for (auto& lv : levels_) lv.ewma = EwmaState(*config_.ewma_lambda);
}

void HocState::ingest(double y) {
  if (!std::isfinite(y)) throw DataError("non-finite sample");

  if (config_.mean_mode == MeanMode::Running) {
    mean_sum_ += y;
    ++mean_count_;
  }

  double value = y;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    LevelState& lv = levels_[k];
    const bool has_next = lv.samples > 0;
    const double next = has_next ? value - lv.tail : 0.0;
    lv.tail = value;
    ++lv.samples;

    bool clip = true;
    double reference = 0.0;
    if (k == 0) {
      switch (config_.mean_mode) {
        case MeanMode::Zero: break;
        case MeanMode::Fixed: reference = config_.fixed_level; break;
        case MeanMode::Running:
          clip = mean_count_ > config_.mean_warmup;
          reference = mean_sum_ / static_cast<double>(mean_count_);
          break;
      }
    }

    if (clip) {
      const std::int8_t bit = value >= reference ? 1 : 0;
      const bool crossed = lv.bit >= 0 && bit != lv.bit;
      if (crossed) ++lv.count;
      if (lv.ewma) {
        auto& e = *lv.ewma;
        if (e.run_length) ++*e.run_length;
        if (crossed) {
          if (e.run_length) e = ewma_update(e, static_cast<double>(*e.run_length));
          e.run_length = 0;
        }
      }
      lv.bit = bit;
    }

    if (!has_next) break;
    value = next;
  }
}

std::uint64_t HocState::clipped_samples(std::size_t level) const {
  const std::uint64_t n = levels_.at(level).samples;
  if (level == 0 && config_.mean_mode == MeanMode::Running)
    return n > config_.mean_warmup ? n - config_.mean_warmup : 0;
  return n;
}

HocCounts HocState::snapshot(CountSource source) const {
  HocCounts out;
  out.n = samples();
  out.d.reserve(levels_.size());
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    const LevelState& lv = levels_[k];
    out.d.push_back(lv.count);
    if (source == CountSource::Ewma) {
      const auto r = lv.ewma ? lv.ewma->rate() : std::nullopt;
      out.valid.push_back(r.has_value());
      out.d_tilde.push_back(r.value_or(0.0));
    } else {
      const std::uint64_t n = clipped_samples(k);
      const bool ok = n >= 2;
      out.valid.push_back(ok);
      out.d_tilde.push_back(ok ? static_cast<double>(lv.count) / static_cast<double>(n - 1) : 0.0);
    }
  }
  return out;
}

HocState HocState::resume() const {
  HocState next = *this;
  for (auto& lv : next.levels_) lv.count = 0;
  return next;
}

HocState HocState::from_parts(CrossingConfig config, std::vector<LevelState> levels,
                              double mean_sum, std::uint64_t mean_count) {
  HocState s(std::move(config));
  if (levels.size() != s.levels_.size())
    throw DataError("state has " + std::to_string(levels.size()) + " levels, configuration expects " +
                    std::to_string(s.levels_.size()));
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const LevelState& lv = levels[k];
    if (k > 0) {
      const std::uint64_t above = levels[k - 1].samples;
      if (lv.samples != (above > 0 ? above - 1 : 0))
        throw DataError("level sample counts are inconsistent");
    }
    if (lv.bit < -1 || lv.bit > 1) throw DataError("clipped bit out of range");
    if (lv.samples > 0 && lv.count > lv.samples - 1) throw DataError("crossing count exceeds samples");
    if (!std::isfinite(lv.tail)) throw DataError("non-finite tail value");
    if (lv.ewma.has_value() != s.config_.ewma_lambda.has_value())
      throw DataError("EWMA state does not match configuration");
    if (lv.ewma && lv.ewma->lambda != *s.config_.ewma_lambda)
      throw DataError("EWMA forgetting factor does not match configuration");
  }
  if (s.config_.mean_mode == MeanMode::Running && mean_count != levels.front().samples)
    throw DataError("running-mean count does not match samples seen");
  s.levels_ = std::move(levels);
  s.mean_sum_ = mean_sum;
  s.mean_count_ = mean_count;
  return s;
}

HocState merge(const HocState& head, const HocState& continuation) {
  if (!(head.config() == continuation.config()))
    throw InvalidArgument("cannot merge states with different configurations");
  if (continuation.samples() < head.samples())
    throw InvalidArgument("continuation precedes the state it is merged onto");
  std::vector<LevelState> levels = continuation.levels();
  for (std::size_t k = 0; k < levels.size(); ++k) levels[k].count += head.levels()[k].count;
  return HocState::from_parts(continuation.config(), std::move(levels), continuation.mean_sum(),
                              continuation.mean_count());
}

namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string config_hash(const CrossingConfig& config, std::string_view context) {
  std::string canon = "levels=" + std::to_string(config.levels) + ";mean=" + to_string(config.mean_mode);
  if (config.mean_mode == MeanMode::Fixed) canon += ";fixed=" + exact(config.fixed_level);
  if (config.mean_mode == MeanMode::Running) canon += ";warmup=" + std::to_string(config.mean_warmup);
  canon += ";ewma=" + (config.ewma_lambda ? exact(*config.ewma_lambda) : std::string("none"));
  canon += ";ctx=";
  canon += context;

  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string state_to_json(const HocState& state, std::string_view context) {
  using nlohmann::json;
  const auto& cfg = state.config();
  json counts = json::array(), samples = json::array(), tails = json::array(), bits = json::array();
  for (const auto& lv : state.levels()) {
    counts.push_back(lv.count);
    samples.push_back(lv.samples);
    tails.push_back(lv.tail);
    bits.push_back(static_cast<int>(lv.bit));
  }

  json mean_state = json::object();
  if (cfg.mean_mode == MeanMode::Fixed) mean_state["level"] = cfg.fixed_level;
  if (cfg.mean_mode == MeanMode::Running) {
    mean_state["sum"] = state.mean_sum();
    mean_state["count"] = state.mean_count();
    mean_state["warmup"] = cfg.mean_warmup;
  }

  json ewma = nullptr;
  if (cfg.ewma_lambda) {
    json periods = json::array(), runs = json::array();
    for (const auto& lv : state.levels()) {
      periods.push_back(lv.ewma->mean_period ? json(*lv.ewma->mean_period) : json(nullptr));
      runs.push_back(lv.ewma->run_length ? json(*lv.ewma->run_length) : json(nullptr));
    }
    ewma = {{"lambda", *cfg.ewma_lambda}, {"periods", periods}, {"run_lengths", runs}};
  }

  json j = {{"levels", cfg.levels},     {"counts", counts},
            {"samples", samples},       {"tails", tails},
            {"bits", bits},             {"mean_mode", to_string(cfg.mean_mode)},
            {"mean_state", mean_state}, {"ewma", ewma},
            {"config_hash", config_hash(cfg, context)}};
  return j.dump(2) + "\n";
}

HocState state_from_json(const std::string& text, const CrossingConfig& expected,
                         std::string_view context) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("state file is not valid JSON: ") + e.what());
  }
  try {
    const auto hash = j.at("config_hash").get<std::string>();
    if (hash != config_hash(expected, context))
      throw InvalidArgument("config mismatch: state file has config_hash " + hash + ", current settings give " +
                            config_hash(expected, context));

    const auto L = j.at("levels").get<int>();
    const auto counts = j.at("counts").get<std::vector<std::uint64_t>>();
    const auto samples = j.at("samples").get<std::vector<std::uint64_t>>();
    const auto tails = j.at("tails").get<std::vector<double>>();
    const auto bits = j.at("bits").get<std::vector<int>>();
    const std::size_t n = static_cast<std::size_t>(L);
    if (L != expected.levels || counts.size() != n || samples.size() != n || tails.size() != n ||
        bits.size() != n)
      throw DataError("state arrays do not match the level count");
    if (mean_mode_from_string(j.at("mean_mode").get<std::string>()) != expected.mean_mode)
      throw DataError("state mean mode does not match configuration");

    std::vector<LevelState> levels(n);
    for (std::size_t k = 0; k < n; ++k) {
      levels[k].count = counts[k];
      levels[k].samples = samples[k];
      levels[k].tail = tails[k];
      levels[k].bit = static_cast<std::int8_t>(bits[k]);
    }

    const json& ewma = j.at("ewma");
    if (!ewma.is_null()) {
      const json& periods = ewma.at("periods");
      const json& runs = ewma.at("run_lengths");
      if (periods.size() != n || runs.size() != n) throw DataError("EWMA arrays do not match the level count");
      for (std::size_t k = 0; k < n; ++k) {
        EwmaState e(ewma.at("lambda").get<double>());
        if (!periods[k].is_null()) e.mean_period = periods[k].get<double>();
        if (!runs[k].is_null()) e.run_length = runs[k].get<std::uint64_t>();
        levels[k].ewma = e;
      }
    }

    double mean_sum = 0.0;
    std::uint64_t mean_count = 0;
    if (expected.mean_mode == MeanMode::Running) {
      const json& ms = j.at("mean_state");
      mean_sum = ms.at("sum").get<double>();
      mean_count = ms.at("count").get<std::uint64_t>();
    }
    return HocState::from_parts(expected, std::move(levels), mean_sum, mean_count);
  } catch (const json::exception& e) {
    throw DataError(std::string("corrupt state file: ") + e.what());
  }
}

}  // namespace hocpoles
