#include "cvqkd/keyrate.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cvqkd/errors.hpp"

namespace cvqkd {
namespace {

constexpr double kLog2E = std::numbers::log2e;
constexpr double kInvPhi = 0.6180339887498948482;  // 1/golden ratio

KeyRateResult assemble(double i_ab, double chi, double c_p, bool worst_case) {
  return {i_ab, chi, i_ab - chi, c_p, worst_case};
}

// Pessimistic search over a fixed chord, evaluating through key_rate_at.
class ChordSearch {
 public:
  ChordSearch(const ProtocolConfig& config, const XChannel& channel, double v_p_b)
      : config_(config), channel_(channel), v_p_b_(v_p_b) {}

  KeyRateResult at(double c_p) const { return key_rate_at(config_, channel_, {v_p_b_, c_p}); }

  // Golden-section minimisation of K on [a, b].
  KeyRateResult golden(double a, double b, double tol) const {
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    KeyRateResult f1 = at(x1);
    KeyRateResult f2 = at(x2);
    while (b - a > tol) {
      if (f1.key_rate <= f2.key_rate) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kInvPhi * (b - a);
        f1 = at(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kInvPhi * (b - a);
        f2 = at(x2);
      }
    }
    return f1.key_rate <= f2.key_rate ? f1 : f2;
  }

 private:
  ProtocolConfig config_;
  XChannel channel_;
  double v_p_b_;
};

double strong_modulation_d(const XChannel& ch, double v_p_b) {
  const double ee = ch.eta * ch.eps;
  const double d = ch.eta * (1.0 + ee - ch.eta) * (v_p_b * (1.0 + ee) - 1.0);
  if (d < -1e-15) {
    throw DomainError("V_p^B = " + std::to_string(v_p_b) + " lies below the parabola vertex");
  }
  return std::max(d, 0.0);
}

}  // namespace

void validate(const SearchSettings& settings) {
  if (settings.grid_points < 101 || settings.grid_points % 2 == 0) {
    throw DomainError("grid points must be odd and >= 101, got " +
                      std::to_string(settings.grid_points));
  }
  if (!(settings.refine_tol > 0.0)) {
    throw DomainError("refinement tolerance must be > 0");
  }
}

double mutual_information(const ProtocolConfig& config, const XChannel& channel) {
  validate(channel);
  const double vm = config.modulation_variance;
  if (!(vm >= 0.0)) {
    throw DomainError("modulation variance V_M must be >= 0");
  }
  const double snr = channel.eta * vm / (1.0 + channel.eta * channel.eps);
  return config.reconciliation_efficiency * 0.5 * std::log2(1.0 + snr);
}

double mutual_information_from_covariance(const TwoModeCovariance& gamma) {
  const ConditionalCovariance cond = condition_on_x_homodyne(gamma);
  return 0.5 * std::log2(gamma(0, 0) / cond(0, 0));
}

double holevo_bound(const TwoModeCovariance& gamma_out) {
  const SymplecticSpectrum spectrum = symplectic_eigenvalues(gamma_out);
  const ConditionalCovariance cond = condition_on_x_homodyne(gamma_out);
  return entropy_of_symplectic(spectrum.nu1) + entropy_of_symplectic(spectrum.nu2) -
         entropy_of_symplectic(cond.symplectic_eigenvalue());
}

double holevo_bound_on_boundary(const TwoModeCovariance& gamma_out) {
  const double nu1 = std::sqrt(std::max(gamma_out.determinant(), 0.0));
  const ConditionalCovariance cond = condition_on_x_homodyne(gamma_out);
  return entropy_of_symplectic(nu1) - entropy_of_symplectic(cond.symplectic_eigenvalue());
}

KeyRateResult key_rate_at(const ProtocolConfig& config, const XChannel& channel,
                          const PQuadObservation& obs) {
  if (!obs.c_p) {
    throw DomainError("key_rate_at needs a concrete C_p");
  }
  const PhysicalityParabola parabola = physicality_parabola(config, channel);
  parabola.c_p_range(obs.v_p_b);  // EmptyRegion below the vertex
  const TwoModeCovariance gamma = ud_channel_output(config, channel, obs);
  return assemble(mutual_information(config, channel), holevo_bound(gamma), *obs.c_p, false);
}

KeyRateResult worst_case_key_rate(const ProtocolConfig& config, const XChannel& channel,
                                  double v_p_b, const SearchSettings& settings) {
  validate(settings);
  const Interval chord = physicality_parabola(config, channel).c_p_range(v_p_b);
  const ChordSearch search(config, channel, v_p_b);

  if (chord.width() <= 0.0) {
    KeyRateResult r = search.at(chord.lo);
    r.worst_case = true;
    return r;
  }

  const int n = settings.grid_points;
  auto grid_at = [&](int i) {
    return i == n - 1 ? chord.hi : chord.lo + chord.width() * static_cast<double>(i) / (n - 1);
  };

  int best_index = 0;
  KeyRateResult best = search.at(chord.lo);
  for (int i = 1; i < n; ++i) {
    const KeyRateResult r = search.at(grid_at(i));
    if (r.key_rate < best.key_rate) {
      best = r;
      best_index = i;
    }
  }

  const double a = grid_at(std::max(best_index - 1, 0));
  const double b = grid_at(std::min(best_index + 1, n - 1));
  const KeyRateResult refined = search.golden(a, b, settings.refine_tol);
  if (refined.key_rate < best.key_rate) {
    best = refined;
  }
  best.worst_case = true;
  return best;
}

KeyRateResult optimistic_key_rate(const ProtocolConfig& config, const XChannel& channel,
                                  double v_p_b) {
  const double c_p_max = physicality_parabola(config, channel).c_p_max(v_p_b);
  return key_rate_at(config, channel, {v_p_b, c_p_max});
}

KeyRateResult estimated_key_rate(const ProtocolConfig& config, const ChannelParams& channel) {
  validate(channel);
  return key_rate_at(config, channel.x_part(),
                     {channel.p_output_variance(), estimated_c_p(config, channel)});
}

KeyRateResult gg02_key_rate(const ProtocolConfig& config, const ChannelParams& channel) {
  const TwoModeCovariance gamma = gg02_output(config, channel);
  return assemble(mutual_information(config, channel.x_part()), holevo_bound(gamma), gamma(1, 3),
                  false);
}

KeyRateResult variant_key_rate(const ProtocolConfig& config, const ChannelParams& channel,
                               const SearchSettings& settings) {
  validate(channel);
  switch (config.variant) {
    case Variant::UdPessimistic:
      return worst_case_key_rate(config, channel.x_part(), channel.p_output_variance(), settings);
    case Variant::UdOptimistic:
      return optimistic_key_rate(config, channel.x_part(), channel.p_output_variance());
    case Variant::UdPEstimated:
      return estimated_key_rate(config, channel);
    case Variant::Gg02:
      return gg02_key_rate(config, channel);
  }
  throw DomainError("unknown protocol variant");
}

double asymptotic_key_rate_strong_modulation(const XChannel& channel, double v_p_b) {
  validate(channel);
  const double eta = channel.eta;
  const double eps = channel.eps;
  const double d = strong_modulation_d(channel, v_p_b);
  // (1 + eta eps)^2 (V_p^B - c^2) with c = C_p^max / V_M^{1/4}, expanded
  const double denom =
      1.0 - 2.0 * eta + eta * eps + eta * v_p_b * (1.0 + eta * eps) + 2.0 * std::sqrt(d);
  return 0.5 * std::log2(eta / denom) - std::log2(std::numbers::e / 2.0) +
         bosonic_entropy(0.5 * (std::sqrt(1.0 / eta + eps) - 1.0));
}

double asymptotic_key_rate_strong_modulation_symmetric(double eta, double eps) {
  validate(XChannel{eta, eps});
  const double d = 2.0 * eta * eta * eps * (1.0 + eta * eps - eta) * (1.0 + 0.5 * eta * eps);
  const double ee = eta * eps;
  const double denom = 1.0 - eta + ee + 2.0 * eta * ee + eta * ee * ee + 2.0 * std::sqrt(d);
  return 0.5 * std::log2(eta / denom) - std::log2(std::numbers::e / 2.0) +
         bosonic_entropy(0.5 * (std::sqrt(1.0 / eta + eps) - 1.0));
}

double asymptotic_key_rate_strong_loss(const XChannel& channel, double v_p_b) {
  validate(channel);
  const double d = strong_modulation_d(channel, v_p_b);
  return ((1.0 / 3.0 + 0.5 * (1.0 - v_p_b)) * channel.eta - std::sqrt(d)) * kLog2E;
}

double asymptotic_key_rate_strong_loss_symmetric(double eta, double eps) {
  validate(XChannel{eta, eps});
  return (1.0 / 3.0 - std::sqrt(2.0 * eps)) * eta * kLog2E;
}

double ud_noiseless_exact(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw DomainError("noiseless closed form needs 0 < eta < 1, got " + std::to_string(eta));
  }
  const double s = std::sqrt(eta);
  return std::log2((1.0 + s) / (1.0 - s)) / (2.0 * s) - kLog2E;
}

}  // namespace cvqkd
