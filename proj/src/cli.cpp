#include "cvqkd/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cvqkd/errors.hpp"
#include "cvqkd/keyrate.hpp"
#include "cvqkd/region.hpp"
#include "cvqkd/table.hpp"

namespace cvqkd::cli {
namespace {

const std::vector<Variant> kAllVariants = {Variant::Gg02, Variant::UdPEstimated,
                                           Variant::UdPessimistic, Variant::UdOptimistic};

std::string column_suffix(Variant v) {
  std::string s(variant_name(v));
  for (char& c : s) {
    if (c == '-') c = '_';
  }
  return s;
}

struct RunConfig {
  std::string command;
  std::optional<double> vm;
  double eta_x = 0.1;
  std::optional<double> eta_p;
  double eps_x = 0.05;
  std::optional<double> eps_p;
  std::optional<double> vpb;
  std::optional<double> cp;
  std::vector<std::string> variants;
  double loss_min = 0.0;
  double loss_max = 30.0;
  double loss_step = 0.5;
  std::optional<double> vpb_min;
  std::optional<double> vpb_max;
  int grid_points = 2001;
  std::optional<int> resolution;
  int figure_id = 0;
  double beta = 1.0;
  std::string format;
  std::string out_path;

  double modulation(double fallback) const { return vm.value_or(fallback); }
  ProtocolConfig protocol(double vm_fallback) const {
    return {modulation(vm_fallback), Variant::UdPessimistic, beta};
  }
  ChannelParams channel() const {
    return {eta_x, eta_p.value_or(eta_x), eps_x, eps_p.value_or(eps_x)};
  }
  SearchSettings settings() const {
    SearchSettings s;
    s.grid_points = grid_points;
    return s;
  }
  LossGrid loss() const { return {loss_min, loss_max, loss_step}; }
};

std::vector<Variant> resolve_variants(const RunConfig& rc, std::vector<Variant> fallback) {
  if (rc.variants.empty()) return fallback;
  std::vector<Variant> out;
  for (const auto& name : rc.variants) {
    auto v = parse_variant(name);
    if (!v) throw DomainError("unknown variant '" + name + "'");
    out.push_back(*v);
  }
  return out;
}

Json config_echo(const RunConfig& rc, std::optional<double> vm) {
  Json j = Json::object();
  j["command"] = rc.command;
  if (vm) j["vm"] = round_significant(*vm);
  if (rc.beta != 1.0) j["beta"] = round_significant(rc.beta);
  return j;
}

void echo_channel(Json& j, const ChannelParams& ch) {
  j["eta_x"] = round_significant(ch.eta_x);
  j["eta_p"] = round_significant(ch.eta_p);
  j["eps_x"] = round_significant(ch.eps_x);
  j["eps_p"] = round_significant(ch.eps_p);
}

void echo_loss(Json& j, const RunConfig& rc) {
  j["loss_db_min"] = round_significant(rc.loss_min);
  j["loss_db_max"] = round_significant(rc.loss_max);
  j["loss_db_step"] = round_significant(rc.loss_step);
}

Json variant_list(const std::vector<Variant>& variants) {
  Json arr = Json::array();
  for (Variant v : variants) arr.push_back(std::string(variant_name(v)));
  return arr;
}

std::string format_intervals(const std::vector<Interval>& intervals) {
  if (intervals.empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (i) s += ';';
    s += format_number(intervals[i].lo) + ":" + format_number(intervals[i].hi);
  }
  return s;
}

KeyRateResult keyrate_for(const ProtocolConfig& cfg, const ChannelParams& ch, double v_p_b,
                          const RunConfig& rc) {
  if (cfg.variant == Variant::Gg02) return gg02_key_rate(cfg, ch);
  if (rc.cp) return key_rate_at(cfg, ch.x_part(), {v_p_b, *rc.cp});
  switch (cfg.variant) {
    case Variant::UdPessimistic:
      return worst_case_key_rate(cfg, ch.x_part(), v_p_b, rc.settings());
    case Variant::UdOptimistic:
      return optimistic_key_rate(cfg, ch.x_part(), v_p_b);
    default:
      return key_rate_at(cfg, ch.x_part(), {v_p_b, estimated_c_p(cfg, ch)});
  }
}

Document keyrate_command(const RunConfig& rc) {
  ProtocolConfig cfg = rc.protocol(10.0);
  validate(cfg);
  const auto variants = resolve_variants(rc, {Variant::UdPessimistic});
  const ChannelParams ch = rc.channel();
  validate(ch);
  const double v_p_b = rc.vpb.value_or(ch.p_output_variance());

  Document doc;
  doc.config = config_echo(rc, cfg.modulation_variance);
  echo_channel(doc.config, ch);
  doc.config["vpb"] = round_significant(v_p_b);
  if (rc.cp) doc.config["cp"] = round_significant(*rc.cp);
  doc.config["variants"] = variant_list(variants);
  doc.config["grid_points"] = rc.grid_points;
  doc.results.columns = {"variant", "v_p_b", "i_ab", "chi_be", "key_rate", "c_p_evaluated",
                         "worst_case"};
  for (Variant v : variants) {
    cfg.variant = v;
    const KeyRateResult r = keyrate_for(cfg, ch, v_p_b, rc);
    doc.results.add_row({std::string(variant_name(v)), v_p_b, r.i_ab, r.chi_be, r.key_rate,
                         r.c_p_evaluated, r.worst_case});
  }
  return doc;
}

Document region_document(const RunConfig& rc, double vm, double v_hi_default, int res_default) {
  const ProtocolConfig cfg = rc.protocol(vm);
  const XChannel xch = rc.channel().x_part();
  const PhysicalityParabola parabola = physicality_parabola(cfg, xch);
  const Interval range{rc.vpb_min.value_or(parabola.v0), rc.vpb_max.value_or(v_hi_default)};
  const int resolution = rc.resolution.value_or(res_default);
  const RegionMap map = scan_region(cfg, xch, range, resolution, rc.settings());

  Document doc;
  doc.config = config_echo(rc, vm);
  doc.config["eta_x"] = round_significant(xch.eta);
  doc.config["eps_x"] = round_significant(xch.eps);
  doc.config["vpb_min"] = round_significant(range.lo);
  doc.config["vpb_max"] = round_significant(range.hi);
  doc.config["resolution"] = resolution;
  doc.config["grid_points"] = rc.grid_points;
  doc.results.columns = {"v_p_b",          "c_lo",           "c_hi",
                         "worst_case_c_p", "worst_case_key_rate", "secure_for_all",
                         "secure_intervals"};
  for (const auto& rec : map.records) {
    doc.results.add_row({rec.v_p_b, rec.physical.lo, rec.physical.hi, rec.worst_case_c_p,
                         rec.worst_case_key_rate, rec.secure_for_all(),
                         format_intervals(rec.secure)});
  }
  doc.summary = Json::object();
  doc.summary["v_p_b_0"] = round_significant(parabola.v0);
  doc.summary["c_0"] = round_significant(parabola.c0);
  doc.summary["v_p_b_max"] = map.v_p_b_max ? Json(round_significant(*map.v_p_b_max)) : Json();
  return doc;
}

Document sweep_cp_document(const RunConfig& rc, double vm, const std::vector<double>& v_p_bs,
                           int res_default) {
  const ProtocolConfig cfg = rc.protocol(vm);
  const XChannel xch = rc.channel().x_part();
  const int resolution = rc.resolution.value_or(res_default);
  Document doc;
  doc.config = config_echo(rc, vm);
  doc.config["eta_x"] = round_significant(xch.eta);
  doc.config["eps_x"] = round_significant(xch.eps);
  doc.config["resolution"] = resolution;
  doc.results.columns = {"v_p_b", "c_p", "key_rate"};
  for (double v : v_p_bs) {
    const SweepCurve curve = key_rate_vs_cp(cfg, xch, v, resolution);
    for (std::size_t i = 0; i < curve.abscissa.size(); ++i) {
      doc.results.add_row({v, curve.abscissa[i], curve.ordinate[i]});
    }
  }
  return doc;
}

Document sweep_loss_document(const RunConfig& rc, double vm) {
  const ProtocolConfig cfg = rc.protocol(vm);
  validate(cfg);
  const auto variants = resolve_variants(rc, kAllVariants);
  const auto curves = key_rate_vs_loss(cfg, rc.eps_x, rc.loss(), variants, rc.settings());
  Document doc;
  doc.config = config_echo(rc, vm);
  doc.config["eps"] = round_significant(rc.eps_x);
  echo_loss(doc.config, rc);
  doc.config["variants"] = variant_list(variants);
  doc.config["grid_points"] = rc.grid_points;
  doc.results.columns = {"loss_db"};
  for (Variant v : variants) doc.results.columns.push_back("key_rate_" + column_suffix(v));
  const std::vector<double> losses = rc.loss().points();
  for (std::size_t i = 0; i < losses.size(); ++i) {
    std::vector<Cell> row{losses[i]};
    for (const auto& c : curves) row.emplace_back(c.ordinate[i]);
    doc.results.add_row(std::move(row));
  }
  return doc;
}

Document figure5_document(const RunConfig& rc, double vm) {
  const ProtocolConfig cfg = rc.protocol(vm);
  validate(cfg);
  const auto curves = tolerable_noise_vs_loss(cfg, rc.loss(), kAllVariants, rc.settings());
  Document doc;
  doc.config = config_echo(rc, vm);
  doc.config["id"] = rc.figure_id;
  echo_loss(doc.config, rc);
  doc.config["grid_points"] = rc.grid_points;
  doc.results.columns = {"loss_db"};
  for (Variant v : kAllVariants) doc.results.columns.push_back("eps_max_" + column_suffix(v));
  const std::vector<double> losses = rc.loss().points();
  for (std::size_t i = 0; i < losses.size(); ++i) {
    std::vector<Cell> row{losses[i]};
    // no positive rate even without noise: tolerable noise is zero
    for (const auto& c : curves) row.emplace_back(c.eps_max[i].value_or(0.0));
    doc.results.add_row(std::move(row));
  }
  return doc;
}

struct Outcome {
  Document doc;
  int code = kExitOk;
};

Outcome tolerable_noise_command(const RunConfig& rc) {
  const double vm = rc.modulation(100.0);
  const ProtocolConfig cfg = rc.protocol(vm);
  validate(cfg);
  const auto variants = resolve_variants(rc, kAllVariants);
  const auto curves = tolerable_noise_vs_loss(cfg, rc.loss(), variants, rc.settings());
  Outcome o;
  o.doc.config = config_echo(rc, vm);
  echo_loss(o.doc.config, rc);
  o.doc.config["variants"] = variant_list(variants);
  o.doc.config["grid_points"] = rc.grid_points;
  o.doc.results.columns = {"loss_db", "variant", "eps_max", "status"};
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.loss_db.size(); ++i) {
      const bool ok = c.eps_max[i].has_value();
      if (!ok) o.code = kExitNoRate;
      o.doc.results.add_row({c.loss_db[i], std::string(variant_name(c.variant)),
                             c.eps_max[i].value_or(0.0),
                             std::string(ok ? "ok" : "NoPositiveRate")});
    }
  }
  return o;
}

Outcome figure_command(const RunConfig& rc) {
  switch (rc.figure_id) {
    case 2:
      return {region_document(rc, rc.modulation(10.0), 1.02, 81)};
    case 3:
      return {sweep_cp_document(rc, rc.modulation(10.0), {1.0, 1.005, 1.00535, 1.01}, 401)};
    case 4: {
      Document doc = sweep_loss_document(rc, rc.modulation(100.0));
      doc.config["id"] = rc.figure_id;
      return {doc};
    }
    case 5:
      return {figure5_document(rc, rc.modulation(100.0))};
    default:
      throw DomainError("figure id must be one of 2, 3, 4, 5");
  }
}

Outcome dispatch(RunConfig& rc) {
  if (rc.command == "keyrate") return {keyrate_command(rc)};
  if (rc.command == "region") return {region_document(rc, rc.modulation(10.0), 1.02, 101)};
  if (rc.command == "sweep-loss") return {sweep_loss_document(rc, rc.modulation(100.0))};
  if (rc.command == "sweep-cp") {
    const ChannelParams ch = rc.channel();
    return {sweep_cp_document(rc, rc.modulation(10.0), {rc.vpb.value_or(ch.p_output_variance())},
                              2001)};
  }
  if (rc.command == "tolerable-noise") return tolerable_noise_command(rc);
  return figure_command(rc);
}

void add_common(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--vm", rc.vm, "modulation variance V_M (SNU)");
  sub->add_option("--eta-x", rc.eta_x, "transmittance in x")->capture_default_str();
  sub->add_option("--eta-p", rc.eta_p, "transmittance in p (default: eta-x)");
  sub->add_option("--eps-x", rc.eps_x, "excess noise in x (SNU, decimal: 5% = 0.05)")
      ->capture_default_str();
  sub->add_option("--eps-p", rc.eps_p, "excess noise in p (default: eps-x)");
  sub->add_option("--vpb", rc.vpb, "Bob's p variance V_p^B (default 1 + eta_p eps_p)");
  sub->add_option("--beta", rc.beta, "reconciliation efficiency in (0, 1]")->capture_default_str();
  sub->add_option("--cp", rc.cp, "evaluate at this A-B correlation in p");
  sub->add_option("--variant", rc.variants, "gg02|ud-pessimistic|ud-optimistic|ud-estimated");
  sub->add_option("--loss-db-min", rc.loss_min)->capture_default_str();
  sub->add_option("--loss-db-max", rc.loss_max)->capture_default_str();
  sub->add_option("--loss-db-step", rc.loss_step)->capture_default_str();
  sub->add_option("--vpb-min", rc.vpb_min, "region scan lower V_p^B (default: vertex)");
  sub->add_option("--vpb-max", rc.vpb_max, "region scan upper V_p^B");
  sub->add_option("--grid-points", rc.grid_points, "worst-case grid size (odd, >= 101)")
      ->capture_default_str();
  sub->add_option("--resolution", rc.resolution, "samples per V_p^B axis or C_p chord");
  sub->add_option("--format", rc.format)->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", rc.out_path, "write output to PATH instead of stdout");
}

int emit(const RunConfig& rc, const Document& doc, std::ostream& out, std::ostream& err) {
  const std::string fmt = !rc.format.empty() ? rc.format : (rc.command == "keyrate" ? "json" : "csv");
  const std::string text = fmt == "json" ? to_json_text(doc) : to_csv_text(doc);
  if (rc.out_path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(rc.out_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot open output file " << rc.out_path << "\n";
    return kExitInvalid;
  }
  file << text;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Key rates and security regions for unidimensional CV-QKD", "cvqkd-rates"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"keyrate", "key rate for one parameter set"},
      {"region", "physicality and security regions in the (C_p, V_p^B) plane"},
      {"sweep-loss", "key rate versus loss on a symmetric channel"},
      {"sweep-cp", "key rate versus C_p over the physical chord"},
      {"tolerable-noise", "maximal tolerable excess noise versus loss"},
      {"figure", "regenerate figure data (--id 2..5)"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, rc);
    if (name == "figure") sub->add_option("--id", rc.figure_id, "figure id")->required();
    sub->callback([&rc, n = name] { rc.command = n; });
  }

  std::vector<const char*> argv{"cvqkd-rates"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    Outcome o = dispatch(rc);
    const int io = emit(rc, o.doc, out, err);
    return io != kExitOk ? io : o.code;
  } catch (const Error& e) {
    const bool no_rate = dynamic_cast<const EmptyRegion*>(&e) != nullptr ||
                         dynamic_cast<const NoPositiveRate*>(&e) != nullptr;
    if (no_rate) {
      Document doc;
      doc.config = config_echo(rc, rc.vm);
      doc.config["args"] = args;
      doc.error = {{e.kind(), e.what()}};
      err << "error: " << e.kind() << ": " << e.what() << "\n";
      emit(rc, doc, out, err);
      return kExitNoRate;
    }
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace cvqkd::cli
