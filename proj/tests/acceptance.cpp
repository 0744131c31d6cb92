// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cvqkd/errors.hpp"
#include "cvqkd/keyrate.hpp"
#include "cvqkd/region.hpp"
#include "support/random_params.hpp"

using namespace cvqkd;
using testing_support::log_uniform;
using testing_support::uniform;

namespace {

const double kLog2E = std::numbers::log2e;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got / want - 1.0); }

// Independent evaluation of the noiseless closed form.
double noiseless_closed_form(double eta) {
  const double s = std::sqrt(eta);
  return 1.0 / (2.0 * s) * std::log2((1.0 + s) / (1.0 - s)) - kLog2E;
}

Outcome gg02_noiseless() {
  const double k = gg02_key_rate(ProtocolConfig{1e4}, ChannelParams::symmetric(0.5, 0.0)).key_rate;
  const double target = -0.5 * std::log2(1.0 - 0.5);
  const double e = rel_err(k, target);
  return {e <= 0.01, fmt("K=%.6f target=%.6f rel.err=%.2e (tol 1e-2)", k, target, e)};
}

Outcome gg02_slope() {
  const double eta = 0.01;
  const double slope =
      gg02_key_rate(ProtocolConfig{1e6}, ChannelParams::symmetric(eta, 0.0)).key_rate / eta;
  const double target = 0.5 * kLog2E;
  const double e = rel_err(slope, target);
  return {e <= 0.02, fmt("K/eta=%.6f target=%.6f rel.err=%.2e (tol 2e-2)", slope, target, e)};
}

Outcome ud_noiseless() {
  const double k = worst_case_key_rate(ProtocolConfig{1e6}, XChannel{0.1, 0.0}, 1.0).key_rate;
  const double target = noiseless_closed_form(0.1);
  const double e = rel_err(k, target);
  return {e <= 0.01, fmt("K=%.7f closed form=%.7f rel.err=%.2e (tol 1e-2)", k, target, e)};
}

Outcome ud_slope() {
  const double eta = 0.01;
  const double slope =
      worst_case_key_rate(ProtocolConfig{1e6}, XChannel{eta, 0.0}, 1.0).key_rate / eta;
  const double target = kLog2E / 3.0;
  const double e = rel_err(slope, target);
  return {e <= 0.02, fmt("K/eta=%.6f target=%.6f rel.err=%.2e (tol 2e-2)", slope, target, e)};
}

Outcome lost_and_restored() {
  const ProtocolConfig cfg{10.0};
  const XChannel ch{0.1, 0.05};
  const double vpb = 1.00535;
  const int n = 2001;
  const Interval chord = physicality_parabola(cfg, ch).c_p_range(vpb);
  int changes = 0;
  bool prev = false;
  for (int i = 0; i < n; ++i) {
    const double cp = chord.lo + chord.width() * i / (n - 1);
    const bool pos = key_rate_at(cfg, ch, {vpb, cp}).key_rate > 0.0;
    if (i > 0 && pos != prev) ++changes;
    prev = pos;
  }
  return {changes >= 2, fmt("%d sign changes over %d points (need >= 2)", changes, n)};
}

Outcome region_structure() {
  const ProtocolConfig cfg{10.0};
  const XChannel ch{0.1, 0.05};
  const double v0 = 1.0 / 1.005;
  const auto map = scan_region(cfg, ch, {v0, 1.02}, 81);
  const bool starts_at_vertex = std::abs(map.records.front().v_p_b - v0) < 1e-15;
  // the secure-for-all interval must contain more than the vertex itself
  const bool secure_interval = map.records[0].secure_for_all() && map.records[1].secure_for_all();
  if (!map.v_p_b_max) {
    return {false, "no V_p^B,max found up to 1.02"};
  }
  const double vmax = *map.v_p_b_max;
  const bool beyond_insecure =
      worst_case_key_rate(cfg, ch, vmax + 1e-5).key_rate <= 0.0 &&
      std::all_of(map.records.begin(), map.records.end(),
                  [&](const RegionRecord& r) { return r.v_p_b <= vmax || !r.secure_for_all(); });
  const bool below_secure = worst_case_key_rate(cfg, ch, vmax - 1e-5).key_rate > 0.0;
  return {starts_at_vertex && secure_interval && beyond_insecure && below_secure &&
              vmax > v0 && std::isfinite(vmax),
          fmt("secure for all C_p from V_0^B=%.8f up to V_p^B,max=%.6f", v0, vmax)};
}

double eps_or_zero(const std::optional<double>& e) { return e.value_or(0.0); }

Outcome ordering() {
  const ProtocolConfig cfg{100.0};
  const LossGrid grid{0.0, 30.0, 0.5};
  const std::vector<Variant> order = {Variant::Gg02, Variant::UdPEstimated, Variant::UdPessimistic};
  const auto rates = key_rate_vs_loss(cfg, 0.05, grid, order);
  int bad_rate = 0;
  for (std::size_t i = 0; i < rates[0].ordinate.size(); ++i) {
    if (!(rates[0].ordinate[i] >= rates[1].ordinate[i] &&
          rates[1].ordinate[i] >= rates[2].ordinate[i])) {
      ++bad_rate;
    }
  }
  const auto noise = tolerable_noise_vs_loss(cfg, grid, order);
  int bad_noise = 0;
  for (std::size_t i = 0; i < noise[0].loss_db.size(); ++i) {
    const double g = eps_or_zero(noise[0].eps_max[i]);
    const double e = eps_or_zero(noise[1].eps_max[i]);
    const double p = eps_or_zero(noise[2].eps_max[i]);
    if (!(g >= e && e >= p)) ++bad_noise;
  }
  return {bad_rate == 0 && bad_noise == 0,
          fmt("%zu loss points: %d key-rate and %d tolerable-noise ordering violations",
              rates[0].ordinate.size(), bad_rate, bad_noise)};
}

Outcome optimistic_vs_pessimistic() {
  const ProtocolConfig cfg{100.0};
  double worst = 0.0;
  std::string detail;
  for (double loss : {0.0, 0.5, 1.0}) {
    const double opt = max_tolerable_noise(cfg, loss, Variant::UdOptimistic);
    const double pess = max_tolerable_noise(cfg, loss, Variant::UdPessimistic);
    const double e = std::abs(opt - pess) / pess;
    worst = std::max(worst, e);
    detail += fmt("%.1f dB: %.5f vs %.5f; ", loss, opt, pess);
  }
  return {worst <= 0.05, detail + fmt("max rel.diff=%.2e (tol 5e-2)", worst)};
}

Outcome physicality_equivalence() {
  std::mt19937_64 rng(20260901);
  const int n = 10000;
  int discrepancies = 0, in_band = 0, inside = 0;
  for (int i = 0; i < n; ++i) {
    const double vm = log_uniform(rng, 0.5, 1e3);
    const double eta = uniform(rng, 0.01, 1.0);
    const double eps = uniform(rng, 0.0, 0.3);
    const ProtocolConfig cfg{vm};
    const XChannel ch{eta, eps};
    const auto par = physicality_parabola(cfg, ch);
    // one draw in ten below the vertex, where no C_p is physical
    const double vpb = (i % 10 == 0) ? par.v0 - log_uniform(rng, 1e-4, 0.5)
                                     : par.v0 + log_uniform(rng, 1e-4, 2.0);
    double cp;
    if (vpb >= par.v0) {
      const Interval chord = par.c_p_range(vpb);
      const double pad = std::max(chord.width(), 1e-3);
      cp = uniform(rng, chord.lo - pad, chord.hi + pad);
    } else {
      cp = par.c0 + uniform(rng, -1.0, 1.0);
    }
    const auto g = ud_channel_output(cfg, ch, {vpb, cp});
    const double slack = par.slack(vpb, cp);
    const double margin = uncertainty_margin(g);
    const bool member = par.contains(vpb, cp);
    inside += member;
    if (member == is_physical(g)) continue;
    if (std::abs(slack) <= 1e-9 || std::abs(margin) <= 1e-9) {
      ++in_band;
    } else {
      ++discrepancies;
    }
  }
  return {discrepancies == 0,
          fmt("%d draws (%d inside): %d discrepancies, %d disagreements inside the 1e-9 band", n,
              inside, discrepancies, in_band)};
}

Outcome boundary_purity() {
  std::mt19937_64 rng(20260902);
  const int n = 1000;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto d = testing_support::draw_ud(rng);
    const ProtocolConfig cfg{d.vm};
    const XChannel ch{d.eta, d.eps};
    const Interval chord = physicality_parabola(cfg, ch).c_p_range(d.v_p_b);
    const double cp = (i % 2 == 0) ? chord.lo : chord.hi;
    const auto s = symplectic_eigenvalues(ud_channel_output(cfg, ch, {d.v_p_b, cp}));
    worst = std::max(worst, std::abs(s.nu2 - 1.0));
  }
  return {worst <= 1e-7, fmt("%d boundary states, max |nu2 - 1| = %.2e (tol 1e-7)", n, worst)};
}

Outcome asymptotic_consistency() {
  const ProtocolConfig cfg{1e6};
  double worst = 0.0;
  double at_eta = 0.0, at_eps = 0.0;
  for (double eta : {0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99}) {
    for (double eps : {0.0, 0.001, 0.0025, 0.005, 0.0075, 0.01}) {
      const double vpb = 1.0 + eta * eps;
      const double numeric = worst_case_key_rate(cfg, XChannel{eta, eps}, vpb).key_rate;
      const double closed = asymptotic_key_rate_strong_modulation(XChannel{eta, eps}, vpb);
      const double d = std::abs(numeric - closed);
      if (d > worst) {
        worst = d;
        at_eta = eta;
        at_eps = eps;
      }
    }
  }
  return {worst <= 1e-3, fmt("42 points, max |K_num - K_closed| = %.2e bits at eta=%.2f "
                             "eps=%.4f (tol 1e-3)",
                             worst, at_eta, at_eps)};
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  status = ::pclose(pipe);
  return out;
}

Outcome determinism() {
  const std::string cmd = std::string("\"") + CVQKD_RATES_EXE + "\" figure --id 5";
  int s1 = 0, s2 = 0;
  const std::string a = capture(cmd, s1);
  const std::string b = capture(cmd, s2);
  const bool ok = s1 == 0 && s2 == 0 && !a.empty() && a == b;
  return {ok, fmt("two runs: %zu and %zu bytes, exit %d/%d, identical=%s", a.size(), b.size(), s1,
                  s2, a == b ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"GG02 noiseless limit", gg02_noiseless},
      {"GG02 low-loss slope", gg02_slope},
      {"UD noiseless exact", ud_noiseless},
      {"UD low-loss slope", ud_slope},
      {"lost-and-restored security", lost_and_restored},
      {"region structure", region_structure},
      {"GG02 >= UD-estimated >= UD-pessimistic", ordering},
      {"optimistic/pessimistic agreement at low loss", optimistic_vs_pessimistic},
      {"physicality oracle equivalence", physicality_equivalence},
      {"boundary purity", boundary_purity},
      {"asymptotic consistency", asymptotic_consistency},
      {"figure 5 determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
