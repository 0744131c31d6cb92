#include "cvqkd/protocols.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "cvqkd/errors.hpp"

namespace cvqkd {
namespace {

constexpr std::array<std::pair<Variant, std::string_view>, 4> kVariantNames{{
    {Variant::UdPessimistic, "ud-pessimistic"},
    {Variant::UdOptimistic, "ud-optimistic"},
    {Variant::UdPEstimated, "ud-estimated"},
    {Variant::Gg02, "gg02"},
}};

void check_transmittance(double eta, const char* name) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw DomainError(std::string("transmittance ") + name + " must lie in (0, 1], got " +
                      std::to_string(eta));
  }
}

void check_noise(double eps, const char* name) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw DomainError(std::string("excess noise ") + name + " must be >= 0, got " +
                      std::to_string(eps));
  }
}

// Input-state p-correlation magnitude, sqrt(V_M) / (1 + V_M)^{1/4}.
double input_p_correlation(double vm) { return std::sqrt(vm) / std::pow(1.0 + vm, 0.25); }

}  // namespace

std::string_view variant_name(Variant v) {
  for (const auto& [variant, name] : kVariantNames) {
    if (variant == v) return name;
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (const auto& [variant, n] : kVariantNames) {
    if (n == name) return variant;
  }
  return std::nullopt;
}

double ProtocolConfig::epr_variance() const { return std::sqrt(1.0 + modulation_variance); }

void validate(const ProtocolConfig& config) {
  if (!(config.modulation_variance > 0.0) || !std::isfinite(config.modulation_variance)) {
    throw DomainError("modulation variance V_M must be > 0, got " +
                      std::to_string(config.modulation_variance));
  }
  if (!(config.reconciliation_efficiency > 0.0 && config.reconciliation_efficiency <= 1.0)) {
    throw DomainError("reconciliation efficiency must lie in (0, 1]");
  }
}

void validate(const XChannel& channel) {
  check_transmittance(channel.eta, "eta_x");
  check_noise(channel.eps, "eps_x");
}

void validate(const ChannelParams& channel) {
  check_transmittance(channel.eta_x, "eta_x");
  check_transmittance(channel.eta_p, "eta_p");
  check_noise(channel.eps_x, "eps_x");
  check_noise(channel.eps_p, "eps_p");
}

Interval PhysicalityParabola::c_p_range(double v_p_b) const {
  const double dv = v_p_b - v0;
  if (dv < -1e-14 * std::max(1.0, std::abs(v0)) || std::isnan(dv)) {
    throw EmptyRegion("V_p^B = " + std::to_string(v_p_b) + " lies below the parabola vertex " +
                      std::to_string(v0));
  }
  const double w = std::sqrt(std::max(0.0, curvature_coeff * dv));
  return {c0 - w, c0 + w};
}

double PhysicalityParabola::slack(double v_p_b, double c_p) const {
  const double d = c_p - c0;
  return curvature_coeff * (v_p_b - v0) - d * d;
}

TwoModeCovariance build_epr_input(const ProtocolConfig& config) {
  validate(config);
  const double v = config.epr_variance();
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = v;
  m(1, 1) = v;
  m(2, 2) = v * v;
  m(3, 3) = 1.0;
  m(0, 2) = m(2, 0) = std::sqrt(v * (v * v - 1.0));
  m(1, 3) = m(3, 1) = -std::sqrt((v * v - 1.0) / v);
  return TwoModeCovariance(m);
}

TwoModeCovariance ud_channel_output(const ProtocolConfig& config, const XChannel& channel,
                                    const PQuadObservation& obs) {
  validate(config);
  validate(channel);
  if (!obs.c_p) {
    throw DomainError("C_p must be resolved before building the output state");
  }
  const double vm = config.modulation_variance;
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = m(1, 1) = std::sqrt(1.0 + vm);
  m(2, 2) = 1.0 + channel.eta * (vm + channel.eps);
  m(3, 3) = obs.v_p_b;
  m(0, 2) = m(2, 0) = std::sqrt(channel.eta * vm) * std::pow(1.0 + vm, 0.25);
  m(1, 3) = m(3, 1) = *obs.c_p;
  return TwoModeCovariance(m);
}

PhysicalityParabola physicality_parabola(const ProtocolConfig& config, const XChannel& channel) {
  validate(config);
  validate(channel);
  const double vm = config.modulation_variance;
  PhysicalityParabola parabola;
  parabola.v0 = 1.0 / (1.0 + channel.eta * channel.eps);
  parabola.c0 = -parabola.v0 * std::sqrt(channel.eta * vm) / std::pow(1.0 + vm, 0.25);
  parabola.curvature_coeff = vm / std::sqrt(1.0 + vm) * (1.0 - channel.eta * parabola.v0);
  return parabola;
}

double estimated_c_p(const ProtocolConfig& config, const ChannelParams& channel) {
  validate(config);
  if (!(channel.eta_p >= 0.0 && channel.eta_p <= 1.0)) {
    throw DomainError("transmittance eta_p must lie in [0, 1], got " +
                      std::to_string(channel.eta_p));
  }
  return -std::sqrt(channel.eta_p) * input_p_correlation(config.modulation_variance);
}

TwoModeCovariance gg02_output(const ProtocolConfig& config, const ChannelParams& channel) {
  validate(config);
  validate(channel);
  const double vm = config.modulation_variance;
  const double v = 1.0 + vm;  // TMSV variance of the two-quadrature source
  const double squeeze = v * v - 1.0;
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = m(1, 1) = v;
  m(2, 2) = 1.0 + channel.eta_x * (vm + channel.eps_x);
  m(3, 3) = 1.0 + channel.eta_p * (vm + channel.eps_p);
  m(0, 2) = m(2, 0) = std::sqrt(channel.eta_x * squeeze);
  m(1, 3) = m(3, 1) = -std::sqrt(channel.eta_p * squeeze);
  return TwoModeCovariance(m);
}

}  // namespace cvqkd
