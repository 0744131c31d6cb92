#pragma once

#include <optional>
#include <string_view>

#include "cvqkd/symplectic.hpp"

namespace cvqkd {

enum class Variant {
  UdPessimistic,  // worst-case C_p over the physical chord
  UdOptimistic,   // C_p taken at the physicality bound C_p^max
  UdPEstimated,   // C_p estimated from a p-quadrature transmittance
  Gg02,           // symmetric two-quadrature modulation
};

std::string_view variant_name(Variant v);  // "ud-pessimistic", ...
std::optional<Variant> parse_variant(std::string_view name);

struct ProtocolConfig {
  double modulation_variance = 10.0;  // V_M, SNU
  Variant variant = Variant::UdPessimistic;
  // beta multiplying I_AB; the analysis assumes perfect reconciliation.
  double reconciliation_efficiency = 1.0;

  // EPR variance of the unidimensional source, sqrt(1 + V_M).
  double epr_variance() const;
};

void validate(const ProtocolConfig& config);

// The x-quadrature part of a channel: the only part the unidimensional
// protocol can estimate.
struct XChannel {
  double eta = 1.0;  // transmittance in (0, 1]
  double eps = 0.0;  // excess noise referred to the input, SNU
};

struct ChannelParams {
  double eta_x = 1.0;
  double eta_p = 1.0;
  double eps_x = 0.0;
  double eps_p = 0.0;

  static ChannelParams symmetric(double eta, double eps) { return {eta, eta, eps, eps}; }
  XChannel x_part() const { return {eta_x, eps_x}; }
  // Bob's p variance for a phase-insensitive channel in p: 1 + eta_p eps_p.
  double p_output_variance() const { return 1.0 + eta_p * eps_p; }
};

void validate(const XChannel& channel);
void validate(const ChannelParams& channel);

struct PQuadObservation {
  double v_p_b = 1.0;             // Bob's measured p variance
  std::optional<double> c_p;      // A-B correlation in p, unknown unless estimated
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Set of p-correlations compatible with the uncertainty principle for a
/// given x-channel:  (C_p - C_0)^2 <= k (V_p^B - V_0^B).
struct PhysicalityParabola {
  double v0 = 1.0;               // vertex abscissa V_0^B
  double c0 = 0.0;               // vertex ordinate C_0
  double curvature_coeff = 0.0;  // k = V_M (1+V_M)^{-1/2} (1 - eta_x V_0^B)

  // Closed interval [C_0 - w, C_0 + w]; throws EmptyRegion below the vertex.
  Interval c_p_range(double v_p_b) const;
  // (k (V_p^B - V_0^B) - (C_p - C_0)^2); >= 0 inside the parabola.
  double slack(double v_p_b, double c_p) const;
  bool contains(double v_p_b, double c_p) const { return slack(v_p_b, c_p) >= 0.0; }
  // Upper end of the chord: the physicality-saturating C_p^max.
  double c_p_max(double v_p_b) const { return c_p_range(v_p_b).hi; }
};

TwoModeCovariance build_epr_input(const ProtocolConfig& config);

TwoModeCovariance ud_channel_output(const ProtocolConfig& config, const XChannel& channel,
                                    const PQuadObservation& obs);

PhysicalityParabola physicality_parabola(const ProtocolConfig& config, const XChannel& channel);

// C_p for a p-channel of known transmittance: sqrt(eta_p) times the input correlation.
double estimated_c_p(const ProtocolConfig& config, const ChannelParams& channel);

TwoModeCovariance gg02_output(const ProtocolConfig& config, const ChannelParams& channel);

}  // namespace cvqkd
