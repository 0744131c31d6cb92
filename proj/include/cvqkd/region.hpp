#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvqkd/keyrate.hpp"
#include "cvqkd/protocols.hpp"

namespace cvqkd {

struct RegionRecord {
  double v_p_b = 1.0;
  Interval physical;              // chord of the physicality parabola
  std::vector<Interval> secure;   // sub-intervals of `physical` with K > 0
  double worst_case_c_p = 0.0;
  double worst_case_key_rate = 0.0;

  bool secure_for_all() const { return worst_case_key_rate > 0.0; }
};

struct RegionMap {
  std::vector<RegionRecord> records;  // sorted by v_p_b
  // Where the security region leaves the physicality region; empty if the
  // whole scanned range is secure for every physical C_p.
  std::optional<double> v_p_b_max;

  std::vector<double> v_p_b_axis() const;
};

struct SweepCurve {
  std::string label;
  std::string abscissa_name;
  std::string ordinate_name;
  std::vector<double> abscissa;  // strictly increasing
  std::vector<double> ordinate;
};

struct LossGrid {
  double min_db = 0.0;
  double max_db = 30.0;
  double step_db = 0.5;

  std::vector<double> points() const;
};

// loss_dB = -10 log10(eta)
double transmittance_from_loss_db(double loss_db);
double loss_db_from_transmittance(double eta);

// Points where K(C_p) is positive on the chord, by sign scan plus bisection
// of each crossing.
std::vector<Interval> secure_subintervals(const ProtocolConfig& config, const XChannel& channel,
                                          double v_p_b, const SearchSettings& settings = {});

RegionMap scan_region(const ProtocolConfig& config, const XChannel& channel,
                      const Interval& v_p_b_range, int resolution,
                      const SearchSettings& settings = {});

// Bisection on V_p^B for the zero of the worst-case key rate, inside a
// bracket whose lower end is secure and upper end is not.
double find_security_crossing(const ProtocolConfig& config, const XChannel& channel,
                              double secure_v_p_b, double insecure_v_p_b,
                              const SearchSettings& settings = {}, double tol = 1e-6);

SweepCurve key_rate_vs_cp(const ProtocolConfig& config, const XChannel& channel, double v_p_b,
                          int resolution);

// Symmetric channel: eta_x = eta_p = 10^(-dB/10), eps_x = eps_p = eps.
std::vector<SweepCurve> key_rate_vs_loss(const ProtocolConfig& config, double eps,
                                         const LossGrid& loss, const std::vector<Variant>& variants,
                                         const SearchSettings& settings = {});

struct NoiseSearch {
  double eps_tol = 1e-5;   // bracket width on eps, SNU
  double rate_tol = 1e-6;  // |K| at the returned eps, bits
  double eps_start = 0.01;
  double eps_cap = 10.0;
};

// Largest symmetric excess noise with a positive key rate at this loss.
// Throws NoPositiveRate when K(eps = 0) <= 0.
double max_tolerable_noise(const ProtocolConfig& config, double loss_db, Variant variant,
                           const SearchSettings& settings = {}, const NoiseSearch& search = {});

struct NoiseCurve {
  Variant variant = Variant::UdPessimistic;
  std::vector<double> loss_db;
  std::vector<std::optional<double>> eps_max;  // empty where no positive rate exists
};

std::vector<NoiseCurve> tolerable_noise_vs_loss(const ProtocolConfig& config,
                                                const LossGrid& loss,
                                                const std::vector<Variant>& variants,
                                                const SearchSettings& settings = {},
                                                const NoiseSearch& search = {});

}  // namespace cvqkd
