#ifndef RRU_IO_HPP_
#define RRU_IO_HPP_

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rru/inference.hpp"
#include "rru/model.hpp"
#include "rru/montecarlo.hpp"
#include "rru/urn.hpp"

// Configuration ingestion and bit-exact report emission. Floating-point
// values are serialized with shortest round-trip representations (to_chars
// for CSV, nlohmann::json for JSON), so identical reports are identical bytes.

namespace rru {

using json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

// ---- config parsing ------------------------------------------------------

inline ResponseModel parse_response_model(const json& j, const std::string& who) {
  std::string kind = j.at("kind").get<std::string>();
  const json& p = j.at("params");
  if (kind == "bernoulli") return ResponseModel::bernoulli(p.at("p").get<double>());
  if (kind == "normal")
    return ResponseModel::normal(p.at("mean").get<double>(), p.at("sd").get<double>());
  if (kind == "uniform")
    return ResponseModel::uniform(p.at("lo").get<double>(), p.at("hi").get<double>());
  if (kind == "exponential") return ResponseModel::exponential(p.at("rate").get<double>());
  if (kind == "point_mass") return ResponseModel::point_mass(p.at("v").get<double>());
  if (kind == "beta")
    return ResponseModel::beta(p.at("a").get<double>(), p.at("b").get<double>());
  throw ConfigError(who + ": unknown response kind '" + kind + "'");
}

inline UtilityTransform parse_utility(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  const json& p = j.at("params");
  if (kind == "identity") return UtilityTransform::identity(p.at("u_max").get<double>());
  if (kind == "clip_affine")
    return UtilityTransform::clip_affine(p.at("lo").get<double>(), p.at("hi").get<double>());
  if (kind == "indicator") return UtilityTransform::indicator(p.at("threshold").get<double>());
  if (kind == "logistic")
    return UtilityTransform::logistic(p.at("center").get<double>(), p.at("scale").get<double>());
  throw ConfigError("utility: unknown kind '" + kind + "'");
}

struct ParsedConfig {
  DesignConfig cfg;
  double alpha = 0.05;
};

inline ParsedConfig parse_config_json(const json& j) {
  ParsedConfig out;
  out.cfg.arm_B = parse_response_model(j.at("arms").at("B"), "arms.B");
  out.cfg.arm_W = parse_response_model(j.at("arms").at("W"), "arms.W");
  out.cfg.utility = parse_utility(j.at("utility"));
  out.cfg.b = j.at("urn").at("b").get<double>();
  out.cfg.w = j.at("urn").at("w").get<double>();
  out.cfg.horizon = j.at("horizon").get<std::uint64_t>();
  for (const auto& c : j.at("checkpoints")) out.cfg.checkpoints.push_back(c.get<std::uint64_t>());
  if (j.contains("alpha")) out.alpha = j.at("alpha").get<double>();
  return out;
}

inline ParsedConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  json j;
  try {
    in >> j;
    return parse_config_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
}

// ---- serialization -------------------------------------------------------

inline std::string trajectory_csv(const TrialPath& path) {
  std::string out = "i,delta,y,u,z_before\n";
  for (const auto& rec : path.records) {
    out += std::to_string(rec.i);
    out += ',';
    out += std::to_string(rec.delta);
    out += ',';
    out += format_double(rec.y);
    out += ',';
    out += format_double(rec.u);
    out += ',';
    out += format_double(rec.z_before);
    out += '\n';
  }
  return out;
}

inline json checkpoint_stats_json(const CheckpointStats& s, double alpha) {
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  json j;
  j["n"] = s.n;
  j["n_B"] = s.n_B;
  j["n_W"] = s.n_W;
  j["ybar_B"] = opt(s.ybar_B);
  j["ybar_W"] = opt(s.ybar_W);
  j["var_B"] = opt(s.var_B);
  j["var_W"] = opt(s.var_W);
  j["z"] = s.z_n;
  j["zeta0"] = opt(s.zeta0);
  j["zeta"] = opt(s.zeta);
  j["lambda"] = opt(s.lambda_n);
  j["phi_hat"] = opt(s.phi_hat);
  j["eta_sq_hat"] = opt(s.eta_sq_hat);
  j["psi_hat"] = opt(s.psi_hat);
  j["remark2_residual"] = opt(s.remark2_residual);
  j["corollary2_ratio"] = opt(s.corollary2_ratio);
  j["reject"] = s.zeta0 ? json(reject_h0(*s.zeta0, alpha)) : json(nullptr);
  return j;
}

inline std::string trial_summary_json(const TrialPath& path, double alpha) {
  json j;
  j["seed"] = path.seed;
  j["horizon"] = path.cfg.horizon;
  json snaps = json::array();
  for (const auto& s : path.snapshots) snaps.push_back(checkpoint_stats_json(s, alpha));
  j["checkpoints"] = std::move(snaps);
  return j.dump(2) + "\n";
}

/// One row per replicate per checkpoint; absent statistics are empty fields.
inline std::string study_csv(const StudyReport& report) {
  std::string out =
      "replicate,n,n_B,n_W,ybar_B,ybar_W,var_B,var_W,z,zeta0,zeta,lambda,"
      "eta_sq_hat,psi_hat,reject\n";
  double z_alpha = normal_quantile(1.0 - report.alpha);
  for (std::uint64_t r = 0; r < report.replicates; ++r) {
    for (const CheckpointStats& s : report.per_replicate[r]) {
      out += std::to_string(r);
      out += ',';
      out += std::to_string(s.n);
      out += ',';
      out += std::to_string(s.n_B);
      out += ',';
      out += std::to_string(s.n_W);
      out += ',';
      out += format_optional(s.ybar_B);
      out += ',';
      out += format_optional(s.ybar_W);
      out += ',';
      out += format_optional(s.var_B);
      out += ',';
      out += format_optional(s.var_W);
      out += ',';
      out += format_double(s.z_n);
      out += ',';
      out += format_optional(s.zeta0);
      out += ',';
      out += format_optional(s.zeta);
      out += ',';
      out += format_optional(s.lambda_n);
      out += ',';
      out += format_optional(s.eta_sq_hat);
      out += ',';
      out += format_optional(s.psi_hat);
      out += ',';
      out += s.zeta0 ? (*s.zeta0 > z_alpha ? "1" : "0") : "";
      out += '\n';
    }
  }
  return out;
}

inline json gof_json(const std::optional<GofResult>& g) {
  if (!g) return json(nullptr);
  json j;
  j["d"] = g->statistic;
  j["p_value"] = g->p_value;
  j["sample_size"] = g->sample_size;
  return j;
}

inline json aggregate_json(const Aggregate& a) {
  json j;
  j["defined"] = a.defined;
  if (a.defined > 0) {
    j["mean"] = a.mean;
    j["median"] = a.median;
    j["q05"] = a.q05;
    j["q95"] = a.q95;
  }
  return j;
}

inline std::string study_aggregate_json(const StudyReport& report) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j;
  j["replicates"] = report.replicates;
  j["alpha"] = report.alpha;
  if (report.truth) {
    json t;
    t["mu_B"] = report.truth->mu_B;
    t["mu_W"] = report.truth->mu_W;
    t["sigma_B"] = report.truth->sigma_B;
    t["sigma_W"] = report.truth->sigma_W;
    t["m_B"] = report.truth->m_B;
    t["m_W"] = report.truth->m_W;
    j["truth"] = std::move(t);
  }
  json aggs = json::array();
  for (const auto& a : report.aggregates) {
    json ja;
    ja["n"] = a.n;
    ja["z"] = aggregate_json(a.z);
    ja["zeta0"] = aggregate_json(a.zeta0);
    ja["zeta"] = aggregate_json(a.zeta);
    ja["lambda"] = aggregate_json(a.lambda);
    ja["eta_sq_hat"] = aggregate_json(a.eta_sq_hat);
    ja["psi_hat"] = aggregate_json(a.psi_hat);
    ja["remark2_residual"] = aggregate_json(a.remark2_residual);
    ja["corollary2_ratio"] = aggregate_json(a.corollary2_ratio);
    ja["rejection_rate"] = a.rejection_rate;
    aggs.push_back(std::move(ja));
  }
  j["checkpoints"] = std::move(aggs);
  j["zeta0_ks"] = gof_json(report.zeta0_ks);
  j["zeta_ks"] = gof_json(report.zeta_ks);
  j["std_mean_B_ks"] = gof_json(report.std_mean_B_ks);
  j["std_mean_W_ks"] = gof_json(report.std_mean_W_ks);
  j["zeta0_minus_phi_ks"] = gof_json(report.zeta0_minus_phi_ks);
  j["z_beta_ks"] = gof_json(report.z_beta_ks);
  j["corr_std_means"] = opt(report.corr_std_means);
  j["corr_zeta_eta"] = opt(report.corr_zeta_eta);
  j["rejection_rate"] = opt(report.rejection_rate);
  j["rejection_rate_zeta"] = opt(report.rejection_rate_zeta);
  j["subsequence_pass_rate"] = opt(report.subsequence_pass_rate);
  j["z_extreme_fraction"] = report.z_extreme_fraction;
  return j.dump(2) + "\n";
}

inline std::string power_table_csv(const std::vector<PowerRow>& rows) {
  std::string out = "effect,n,R,alpha,empirical_power,mean_NW_share,mean_eta_sq\n";
  for (const auto& r : rows) {
    out += format_double(r.effect);
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.replicates);
    out += ',';
    out += format_double(r.alpha);
    out += ',';
    out += format_double(r.empirical_power);
    out += ',';
    out += format_double(r.mean_nw_share);
    out += ',';
    out += format_double(r.mean_eta_sq);
    out += '\n';
  }
  return out;
}

// ---- run manifest --------------------------------------------------------

inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

struct RunManifest {
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::string tolerance_version;
  std::map<std::string, std::string> file_checksums;  // file name -> fnv1a
};

inline std::string run_manifest_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["config"] = m.config_path;
  j["out_dir"] = m.out_dir;
  j["tolerance_version"] = m.tolerance_version;
  json files;
  for (const auto& [name, sum] : m.file_checksums) files[name] = sum;
  j["files"] = std::move(files);
  return j.dump(2) + "\n";
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << contents;
}

}  // namespace rru

#endif  // RRU_IO_HPP_
