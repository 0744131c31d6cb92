#pragma once

#include "cvqkd/protocols.hpp"
#include "cvqkd/symplectic.hpp"

namespace cvqkd {

// Bits per channel use. key_rate = i_ab - chi_be; negative means insecure.
struct KeyRateResult {
  double i_ab = 0.0;
  double chi_be = 0.0;
  double key_rate = 0.0;
  double c_p_evaluated = 0.0;
  bool worst_case = false;
};

struct SearchSettings {
  int grid_points = 2001;     // odd, >= 101
  double refine_tol = 1e-10;  // golden-section tolerance on C_p
  double v_m_large = 1e6;     // modulation used for asymptotic comparisons
};

void validate(const SearchSettings& settings);

// I_AB = 1/2 log2(1 + eta_x V_M / (1 + eta_x eps_x)), scaled by beta.
double mutual_information(const ProtocolConfig& config, const XChannel& channel);

// 1/2 log2(V_A / V_{A|x_B}) read off the unidimensional output matrix.
double mutual_information_from_covariance(const TwoModeCovariance& gamma);

// chi_BE = G(nu1) + G(nu2) - G(nu_cond), with Eve purifying AB.
double holevo_bound(const TwoModeCovariance& gamma_out);

// chi_BE for states saturating the uncertainty relation (nu2 = 1,
// nu1 = sqrt(det)). Only valid on the parabola.
double holevo_bound_on_boundary(const TwoModeCovariance& gamma_out);

KeyRateResult key_rate_at(const ProtocolConfig& config, const XChannel& channel,
                          const PQuadObservation& obs);

/// Pessimistic key rate: minimum of key_rate_at over the whole physical
/// chord [C_0 - w, C_0 + w] for the measured v_p_b.
///
/// The curve K(C_p) can be multi-modal, so the chord is scanned on a dense
/// grid that includes both end points, and the best grid cell is refined by
/// golden-section search. Ties resolve to the lowest C_p.
KeyRateResult worst_case_key_rate(const ProtocolConfig& config, const XChannel& channel,
                                  double v_p_b, const SearchSettings& settings = {});

// Key rate at the physicality bound C_p^max (upper end of the chord).
KeyRateResult optimistic_key_rate(const ProtocolConfig& config, const XChannel& channel,
                                  double v_p_b);

// Key rate with C_p estimated from the p-channel transmittance; V_p^B = 1 + eta_p eps_p.
KeyRateResult estimated_key_rate(const ProtocolConfig& config, const ChannelParams& channel);

// Symmetric-modulation baseline, x-homodyne reverse reconciliation.
KeyRateResult gg02_key_rate(const ProtocolConfig& config, const ChannelParams& channel);

// Dispatch on config.variant. UD variants use V_p^B = 1 + eta_p eps_p.
KeyRateResult variant_key_rate(const ProtocolConfig& config, const ChannelParams& channel,
                               const SearchSettings& settings = {});

// Strong-modulation closed form at C_p^max (upper bound on the pessimistic rate):
//   1/2 log2(eta / (1 - 2 eta + eta eps + eta V_p^B (1 + eta eps) + 2 sqrt(D)))
//   - log2(e/2) + G((sqrt(1/eta + eps) - 1) / 2)
double asymptotic_key_rate_strong_modulation(const XChannel& channel, double v_p_b);
// The same, specialised to eta_x = eta_p, eps_x = eps_p, V_p^B = 1 + eta eps.
double asymptotic_key_rate_strong_modulation_symmetric(double eta, double eps);

// Leading order of the strong-modulation form for eta_x << 1.
double asymptotic_key_rate_strong_loss(const XChannel& channel, double v_p_b);
// (1/3 - sqrt(2 eps)) eta log2 e
double asymptotic_key_rate_strong_loss_symmetric(double eta, double eps);

// Noiseless-channel rate of the unidimensional protocol at infinite modulation:
//   1/(2 sqrt(eta)) log2((1 + sqrt(eta)) / (1 - sqrt(eta))) - log2 e,  0 < eta < 1.
double ud_noiseless_exact(double eta);

}  // namespace cvqkd
