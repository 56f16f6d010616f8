// Deterministic artifact writers: CSV tables with shortest round-trip
// numeric formatting and JSON report serialization.
#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpl/nonlinearity.hpp"
#include "dpl/solver.hpp"
#include "dpl/verification.hpp"

namespace dpl {

// Shortest decimal representation that round-trips to the same double.
inline std::string fmt_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << body;
}

inline std::string solutions_csv(const std::vector<SolutionRecord>& records) {
  std::string s = "n,k,u_k\n";
  for (const auto& rec : records) {
    for (index_t k = rec.u.lo(); k <= rec.u.hi(); ++k) {
      s += std::to_string(rec.n);
      s += ',';
      s += std::to_string(k);
      s += ',';
      s += fmt_double(rec.u[k]);
      s += '\n';
    }
  }
  return s;
}

inline std::string summary_csv(const std::vector<SolutionRecord>& records,
                               const std::vector<bool>& claim2,
                               const std::vector<bool>& claim3) {
  std::string s =
      "n,eta,norm_x,u_max,residual_inf,iterations,window_lo,window_hi,"
      "claim2,claim3\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    s += std::to_string(rec.n);
    s += ',';
    s += fmt_double(rec.eta);
    s += ',';
    s += fmt_double(rec.norm_x);
    s += ',';
    s += fmt_double(rec.u_max);
    s += ',';
    s += fmt_double(rec.residual_inf);
    s += ',';
    s += std::to_string(rec.iterations);
    s += ',';
    s += std::to_string(rec.window_lo);
    s += ',';
    s += std::to_string(rec.window_hi);
    s += ',';
    s += claim2[i] ? '1' : '0';
    s += ',';
    s += claim3[i] ? '1' : '0';
    s += '\n';
  }
  return s;
}

inline nlohmann::json claim_to_json(const ClaimReport& r) {
  return nlohmann::json{
      {"id", claim_id_name(r.id)},
      {"pass", r.pass},
      {"witness",
       {{"index", r.witness.index},
        {"value", r.witness.value},
        {"margin", r.witness.margin},
        {"note", r.witness.note}}}};
}

inline nlohmann::json band_to_json(const BandEstimate& b) {
  return nlohmann::json{{"k_hi", b.k_hi},       {"t_hi", b.t_hi},
                        {"value", b.value},     {"argmax_k", b.argmax_k},
                        {"argmax_t", b.argmax_t}, {"samples", b.samples}};
}

inline nlohmann::json bprobe_to_json(const BProbeReport& r) {
  nlohmann::json j;
  j["k_grid"] = r.k_grid;
  j["t_grid"] = r.t_grid;
  j["plus"] = nlohmann::json::array();
  for (const auto& b : r.plus) j["plus"].push_back(band_to_json(b));
  j["minus"] = nlohmann::json::array();
  for (const auto& b : r.minus) j["minus"].push_back(band_to_json(b));
  j["zero"] = nlohmann::json::array();
  for (const auto& b : r.zero) j["zero"].push_back(band_to_json(b));
  j["b_plus_est"] = r.B_plus_est;
  j["b_minus_est"] = r.B_minus_est;
  j["b_zero_est"] = r.B_zero_est;
  j["b_est"] = r.B_est;
  j["plus_increasing"] = r.plus_increasing;
  j["minus_increasing"] = r.minus_increasing;
  j["zero_increasing"] = r.zero_increasing;
  return j;
}

inline nlohmann::json f1_to_json(const F1Report& r) {
  return nlohmann::json{{"t_grid", r.t_grid},
                        {"sup_ratios", r.sup_ratios},
                        {"monotone_nonincreasing", r.monotone_nonincreasing},
                        {"final_ratio", r.final_ratio},
                        {"limit_tol", r.limit_tol},
                        {"pass", r.pass}};
}

inline nlohmann::json f2_to_json(const F2Report& r) {
  return nlohmann::json{{"max_value", r.max_value},
                        {"witness_k", r.witness_k},
                        {"witness_n", r.witness_n},
                        {"witness_t", r.witness_t},
                        {"pass", r.pass}};
}

inline nlohmann::json f3_to_json(const F3Report& r) {
  return nlohmann::json{{"K", r.K},
                        {"total", r.total},
                        {"tail_sum", r.tail_sum},
                        {"tail_ratio", r.tail_ratio},
                        {"partial_sums", r.partial_sums}};
}

inline nlohmann::json record_to_json(const SolutionRecord& rec) {
  return nlohmann::json{{"n", rec.n},
                        {"eta", rec.eta},
                        {"norm_x", rec.norm_x},
                        {"u_max", rec.u_max},
                        {"residual_inf", rec.residual_inf},
                        {"pg_norm", rec.pg_norm},
                        {"iterations", rec.iterations},
                        {"window_lo", rec.window_lo},
                        {"window_hi", rec.window_hi},
                        {"converged", rec.converged},
                        {"descent_ok", rec.descent_ok},
                        {"spike_k0", rec.spike_k0},
                        {"spike_t", rec.spike_t},
                        {"spike_bound", rec.spike_bound},
                        {"claim2_bounds", rec.certificates.claim2_bounds},
                        {"residual_ok", rec.certificates.residual_ok},
                        {"tail_ok", rec.certificates.tail_ok},
                        {"note", rec.note}};
}

}  // namespace dpl
