#include "cvqkd/region.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvqkd/errors.hpp"
#include "cvqkd/parallel.hpp"

namespace cvqkd {
namespace {

double key_rate_value(const ProtocolConfig& config, const XChannel& channel, double v_p_b,
                      double c_p) {
  return key_rate_at(config, channel, {v_p_b, c_p}).key_rate;
}

// Zero of K(C_p) between a (sign of pos_a) and b.
double bisect_c_p(const ProtocolConfig& config, const XChannel& channel, double v_p_b, double a,
                  double b) {
  const bool pos_a = key_rate_value(config, channel, v_p_b, a) > 0.0;
  for (int iter = 0; iter < 200 && std::abs(b - a) > 1e-14 * std::max(1.0, std::abs(a)); ++iter) {
    const double m = 0.5 * (a + b);
    if ((key_rate_value(config, channel, v_p_b, m) > 0.0) == pos_a) {
      a = m;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[i] = (i == n - 1) ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  return out;
}

double worst_case_at(const ProtocolConfig& config, const XChannel& channel, double v_p_b,
                     const SearchSettings& settings) {
  return worst_case_key_rate(config, channel, v_p_b, settings).key_rate;
}

}  // namespace

std::vector<double> RegionMap::v_p_b_axis() const {
  std::vector<double> axis;
  axis.reserve(records.size());
  for (const auto& r : records) axis.push_back(r.v_p_b);
  return axis;
}

std::vector<double> LossGrid::points() const {
  if (!(step_db > 0.0) || !(max_db >= min_db) || !(min_db >= 0.0)) {
    throw DomainError("loss grid needs 0 <= min <= max and step > 0");
  }
  const auto count = static_cast<std::size_t>(std::floor((max_db - min_db) / step_db + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = min_db + step_db * static_cast<double>(i);
  }
  return out;
}

double transmittance_from_loss_db(double loss_db) {
  if (!(loss_db >= 0.0) || !std::isfinite(loss_db)) {
    throw DomainError("loss in dB must be finite and >= 0, got " + std::to_string(loss_db));
  }
  return std::pow(10.0, -loss_db / 10.0);
}

double loss_db_from_transmittance(double eta) {
  validate(XChannel{eta, 0.0});
  return -10.0 * std::log10(eta);
}

std::vector<Interval> secure_subintervals(const ProtocolConfig& config, const XChannel& channel,
                                          double v_p_b, const SearchSettings& settings) {
  validate(settings);
  const Interval chord = physicality_parabola(config, channel).c_p_range(v_p_b);
  std::vector<Interval> secure;
  if (chord.width() <= 0.0) {
    if (key_rate_value(config, channel, v_p_b, chord.lo) > 0.0) secure.push_back(chord);
    return secure;
  }

  const std::vector<double> grid = linspace(chord.lo, chord.hi, settings.grid_points);
  bool prev_pos = key_rate_value(config, channel, v_p_b, grid[0]) > 0.0;
  double start = chord.lo;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const bool pos = key_rate_value(config, channel, v_p_b, grid[i]) > 0.0;
    if (pos != prev_pos) {
      const double root = bisect_c_p(config, channel, v_p_b, grid[i - 1], grid[i]);
      if (pos) {
        start = root;
      } else {
        secure.push_back({start, root});
      }
    }
    prev_pos = pos;
  }
  if (prev_pos) secure.push_back({start, chord.hi});
  return secure;
}

RegionMap scan_region(const ProtocolConfig& config, const XChannel& channel,
                      const Interval& v_p_b_range, int resolution,
                      const SearchSettings& settings) {
  validate(settings);
  if (resolution < 2) {
    throw DomainError("region resolution must be >= 2");
  }
  const PhysicalityParabola parabola = physicality_parabola(config, channel);
  if (v_p_b_range.hi < parabola.v0) {
    throw EmptyRegion("V_p^B range lies entirely below the vertex " + std::to_string(parabola.v0));
  }
  const double lo = std::max(v_p_b_range.lo, parabola.v0);
  const std::vector<double> axis = linspace(lo, v_p_b_range.hi, resolution);

  RegionMap map;
  map.records = parallel_map(axis.size(), [&](std::size_t i) {
    RegionRecord rec;
    rec.v_p_b = axis[i];
    rec.physical = parabola.c_p_range(axis[i]);
    rec.secure = secure_subintervals(config, channel, axis[i], settings);
    const KeyRateResult worst = worst_case_key_rate(config, channel, axis[i], settings);
    rec.worst_case_c_p = worst.c_p_evaluated;
    rec.worst_case_key_rate = worst.key_rate;
    return rec;
  });

  for (std::size_t i = 0; i < map.records.size(); ++i) {
    if (map.records[i].secure_for_all()) continue;
    if (i == 0) {
      map.v_p_b_max = map.records[0].v_p_b;
    } else {
      map.v_p_b_max = find_security_crossing(config, channel, map.records[i - 1].v_p_b,
                                             map.records[i].v_p_b, settings);
    }
    break;
  }
  return map;
}

double find_security_crossing(const ProtocolConfig& config, const XChannel& channel,
                              double secure_v_p_b, double insecure_v_p_b,
                              const SearchSettings& settings, double tol) {
  double a = secure_v_p_b;
  double b = insecure_v_p_b;
  if (!(worst_case_at(config, channel, a, settings) > 0.0) ||
      worst_case_at(config, channel, b, settings) > 0.0) {
    throw DomainError("security crossing is not bracketed");
  }
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    if (worst_case_at(config, channel, m, settings) > 0.0) {
      a = m;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

SweepCurve key_rate_vs_cp(const ProtocolConfig& config, const XChannel& channel, double v_p_b,
                          int resolution) {
  if (resolution < 2) {
    throw DomainError("C_p resolution must be >= 2");
  }
  const Interval chord = physicality_parabola(config, channel).c_p_range(v_p_b);
  SweepCurve curve;
  curve.label = "v_p_b=" + std::to_string(v_p_b);
  curve.abscissa_name = "c_p";
  curve.ordinate_name = "key_rate";
  curve.abscissa =
      chord.width() > 0.0 ? linspace(chord.lo, chord.hi, resolution) : std::vector{chord.lo};
  curve.ordinate.reserve(curve.abscissa.size());
  for (double c : curve.abscissa) {
    curve.ordinate.push_back(key_rate_value(config, channel, v_p_b, c));
  }
  return curve;
}

std::vector<SweepCurve> key_rate_vs_loss(const ProtocolConfig& config, double eps,
                                         const LossGrid& loss, const std::vector<Variant>& variants,
                                         const SearchSettings& settings) {
  const std::vector<double> losses = loss.points();
  std::vector<SweepCurve> curves;
  for (Variant v : variants) {
    ProtocolConfig cfg = config;
    cfg.variant = v;
    SweepCurve curve;
    curve.label = std::string(variant_name(v));
    curve.abscissa_name = "loss_db";
    curve.ordinate_name = "key_rate";
    curve.abscissa = losses;
    curve.ordinate = parallel_map(losses.size(), [&](std::size_t i) {
      const double eta = transmittance_from_loss_db(losses[i]);
      return variant_key_rate(cfg, ChannelParams::symmetric(eta, eps), settings).key_rate;
    });
    curves.push_back(std::move(curve));
  }
  return curves;
}

double max_tolerable_noise(const ProtocolConfig& config, double loss_db, Variant variant,
                           const SearchSettings& settings, const NoiseSearch& search) {
  const double eta = transmittance_from_loss_db(loss_db);
  ProtocolConfig cfg = config;
  cfg.variant = variant;
  auto rate = [&](double eps) {
    return variant_key_rate(cfg, ChannelParams::symmetric(eta, eps), settings).key_rate;
  };

  if (!(rate(0.0) > 0.0)) {
    throw NoPositiveRate("no positive key rate at " + std::to_string(loss_db) + " dB for " +
                         std::string(variant_name(variant)));
  }
  double lo = 0.0;
  double hi = search.eps_start;
  while (rate(hi) > 0.0) {
    if (hi > search.eps_cap) return search.eps_cap;
    lo = hi;
    hi *= 2.0;
  }
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    const double k = rate(mid);
    if ((hi - lo <= search.eps_tol && std::abs(k) < search.rate_tol) ||
        hi - lo <= 1e-15 * std::max(1.0, hi)) {
      return mid;
    }
    if (k > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
}

std::vector<NoiseCurve> tolerable_noise_vs_loss(const ProtocolConfig& config,
                                                const LossGrid& loss,
                                                const std::vector<Variant>& variants,
                                                const SearchSettings& settings,
                                                const NoiseSearch& search) {
  const std::vector<double> losses = loss.points();
  std::vector<NoiseCurve> curves;
  for (Variant v : variants) {
    NoiseCurve curve;
    curve.variant = v;
    curve.loss_db = losses;
    curve.eps_max = parallel_map(losses.size(), [&](std::size_t i) -> std::optional<double> {
      try {
        return max_tolerable_noise(config, losses[i], v, settings, search);
      } catch (const NoPositiveRate&) {
        return std::nullopt;
      }
    });
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace cvqkd
