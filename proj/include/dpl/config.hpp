// Run configuration: one JSON document, schema-validated before any
// computation, unknown keys rejected at every level. Scalar fields can be
// overridden from the command line with dotted key paths.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dpl/lattice.hpp"
#include "dpl/nonlinearity.hpp"
#include "dpl/solver.hpp"

namespace dpl {

using json = nlohmann::json;

namespace cfg {

inline void expect_object(const json& v, const std::string& where) {
  detail::require(v.is_object(), where + " must be a JSON object");
}

inline void expect_keys(const json& obj, const std::string& where,
                        std::initializer_list<const char*> allowed) {
  expect_object(obj, where);
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (item.key() == a) {
        ok = true;
        break;
      }
    }
    detail::require(ok, "unknown key '" + item.key() + "' in " + where);
  }
}

inline double get_number(const json& obj, const char* key,
                         const std::string& where) {
  detail::require(obj.contains(key),
                  where + " is missing required key '" + key + "'");
  const json& v = obj.at(key);
  detail::require(v.is_number(), where + "." + key + " must be a number");
  return v.get<double>();
}

inline double opt_number(const json& obj, const char* key, double fallback,
                         const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  detail::require(v.is_number(), where + "." + key + " must be a number");
  return v.get<double>();
}

inline std::int64_t get_integer(const json& obj, const char* key,
                                const std::string& where) {
  detail::require(obj.contains(key),
                  where + " is missing required key '" + key + "'");
  const json& v = obj.at(key);
  detail::require(v.is_number_integer(), where + "." + key + " must be an integer");
  return v.get<std::int64_t>();
}

inline std::int64_t opt_integer(const json& obj, const char* key,
                                std::int64_t fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  detail::require(v.is_number_integer(), where + "." + key + " must be an integer");
  return v.get<std::int64_t>();
}

inline std::string get_string(const json& obj, const char* key,
                              const std::string& where) {
  detail::require(obj.contains(key),
                  where + " is missing required key '" + key + "'");
  const json& v = obj.at(key);
  detail::require(v.is_string(), where + "." + key + " must be a string");
  return v.get<std::string>();
}

inline std::string opt_string(const json& obj, const char* key,
                              const std::string& fallback,
                              const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  detail::require(v.is_string(), where + "." + key + " must be a string");
  return v.get<std::string>();
}

inline WeightSeq parse_weight(const json& obj, const std::string& where) {
  expect_object(obj, where);
  const std::string kind = get_string(obj, "kind", where);
  WeightSeq w = WeightSeq::constant(1.0);
  if (kind == "constant") {
    expect_keys(obj, where, {"kind", "c", "coercive_from"});
    w = WeightSeq::constant(get_number(obj, "c", where));
  } else if (kind == "affine_abs") {
    expect_keys(obj, where, {"kind", "c0", "c1", "coercive_from"});
    w = WeightSeq::affine_abs(get_number(obj, "c0", where),
                              get_number(obj, "c1", where));
  } else if (kind == "power") {
    expect_keys(obj, where, {"kind", "c0", "c1", "alpha", "coercive_from"});
    w = WeightSeq::power(get_number(obj, "c0", where),
                         get_number(obj, "c1", where),
                         get_number(obj, "alpha", where));
  } else if (kind == "table") {
    expect_keys(obj, where, {"kind", "values", "lo", "default", "coercive_from"});
    detail::require(obj.contains("values") && obj.at("values").is_array(),
                    where + ".values must be an array");
    std::vector<double> values;
    for (const json& v : obj.at("values")) {
      detail::require(v.is_number(), where + ".values entries must be numbers");
      values.push_back(v.get<double>());
    }
    detail::require(obj.contains("default"), where + " needs a default rule");
    w = WeightSeq::table(std::move(values), get_integer(obj, "lo", where),
                         parse_weight(obj.at("default"), where + ".default"));
  } else {
    detail::require(false, where + ".kind must be one of constant | affine_abs"
                           " | power | table");
  }
  if (obj.contains("coercive_from")) {
    w.declare_coercive(get_integer(obj, "coercive_from", where));
  }
  return w;
}

inline SeqRule parse_seq_rule(const json& obj, const std::string& where) {
  expect_object(obj, where);
  const std::string kind = get_string(obj, "kind", where);
  if (kind == "linear") {
    expect_keys(obj, where, {"kind", "a", "b"});
    return SeqRule::linear(get_number(obj, "a", where),
                           get_number(obj, "b", where));
  }
  if (kind == "power") {
    expect_keys(obj, where, {"kind", "a", "alpha", "b"});
    return SeqRule::power(get_number(obj, "a", where),
                          get_number(obj, "alpha", where),
                          get_number(obj, "b", where));
  }
  if (kind == "list") {
    expect_keys(obj, where, {"kind", "values", "overflow"});
    detail::require(obj.contains("values") && obj.at("values").is_array(),
                    where + ".values must be an array");
    std::vector<double> values;
    for (const json& v : obj.at("values")) {
      detail::require(v.is_number(), where + ".values entries must be numbers");
      values.push_back(v.get<double>());
    }
    detail::require(obj.contains("overflow"), where + " needs an overflow rule");
    return SeqRule::list(std::move(values),
                         parse_seq_rule(obj.at("overflow"), where + ".overflow"));
  }
  detail::require(false,
                  where + ".kind must be one of linear | power | list");
  return SeqRule::linear(1.0, 0.0);  // unreachable
}

inline SolverParams parse_solver(const json& obj, const std::string& where) {
  expect_keys(obj, where,
              {"tol_pg", "tol_residual", "max_iter", "armijo_c", "backtrack",
               "step0", "window_K0", "window_growth", "tail_eps", "r"});
  SolverParams s;
  s.tol_pg = opt_number(obj, "tol_pg", s.tol_pg, where);
  s.tol_residual = opt_number(obj, "tol_residual", s.tol_residual, where);
  s.max_iter = static_cast<int>(opt_integer(obj, "max_iter", s.max_iter, where));
  s.armijo_c = opt_number(obj, "armijo_c", s.armijo_c, where);
  s.backtrack = opt_number(obj, "backtrack", s.backtrack, where);
  s.step0 = opt_number(obj, "step0", s.step0, where);
  s.window_K0 =
      static_cast<int>(opt_integer(obj, "window_K0", s.window_K0, where));
  s.window_growth = opt_number(obj, "window_growth", s.window_growth, where);
  s.tail_eps = opt_number(obj, "tail_eps", s.tail_eps, where);
  s.r = opt_number(obj, "r", s.r, where);
  s.validate();
  return s;
}

}  // namespace cfg

class RunConfig {
 public:
  double p = 2.0;
  double lambda = 1.0;
  int N = 1;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  std::string builtin = "zero";
  double mu = 2.0;
  double nu = 1.0;
  SolverParams solver;
  Weights weights;
  OscillatorySpec spec;
  Nonlinearity nl;
  json echo;

  Exponent exponent() const { return Exponent(p); }

  static RunConfig from_json(const json& doc) {
    cfg::expect_keys(doc, "config",
                     {"p", "lambda", "weights", "nonlinearity", "solver", "N",
                      "seed", "output_dir"});

    const double p_val = cfg::get_number(doc, "p", "config");
    detail::require(p_val > 1.0, "config.p: exponent must satisfy p > 1");
    const Exponent p(p_val);

    const double lambda = cfg::get_number(doc, "lambda", "config");
    detail::require(std::isfinite(lambda) && lambda > 0.0,
                    "config.lambda must be a positive real parameter");

    detail::require(doc.contains("weights"), "config is missing 'weights'");
    cfg::expect_keys(doc.at("weights"), "config.weights", {"a", "b"});
    detail::require(doc.at("weights").contains("a") &&
                        doc.at("weights").contains("b"),
                    "config.weights needs both 'a' and 'b'");
    Weights weights{
        cfg::parse_weight(doc.at("weights").at("a"), "config.weights.a"),
        cfg::parse_weight(doc.at("weights").at("b"), "config.weights.b")};
    detail::require(weights.b.min_value() > 0.0,
                    "config.weights.b must have a positive lower bound");

    detail::require(doc.contains("nonlinearity"),
                    "config is missing 'nonlinearity'");
    const json& nlj = doc.at("nonlinearity");
    cfg::expect_keys(nlj, "config.nonlinearity", {"builtin", "spec", "params"});
    const std::string builtin = cfg::get_string(nlj, "builtin", "config.nonlinearity");
    detail::require(builtin == "example1" || builtin == "example2" ||
                        builtin == "kuang" || builtin == "zero",
                    "config.nonlinearity.builtin must be one of example1 | "
                    "example2 | kuang | zero");

    double mu = 2.0;
    double nu = 1.0;
    if (nlj.contains("params")) {
      cfg::expect_keys(nlj.at("params"), "config.nonlinearity.params",
                       {"mu", "nu"});
      mu = cfg::opt_number(nlj.at("params"), "mu", mu, "config.nonlinearity.params");
      nu = cfg::opt_number(nlj.at("params"), "nu", nu, "config.nonlinearity.params");
    }

    // Oscillation spec; defaults give the interlaced c_n = n, d_n = n + 1/2.
    SeqRule c_rule = SeqRule::linear(1.0, 0.0);
    SeqRule d_rule = SeqRule::linear(1.0, 0.5);
    int n_max = 16;
    bool h_auto = true;
    double h_margin = 1.0;
    SeqRule h_rule = SeqRule::linear(0.0, 1.0);
    if (nlj.contains("spec")) {
      const json& sj = nlj.at("spec");
      cfg::expect_keys(sj, "config.nonlinearity.spec", {"c", "d", "h", "n_max"});
      if (sj.contains("c")) c_rule = cfg::parse_seq_rule(sj.at("c"), "spec.c");
      if (sj.contains("d")) d_rule = cfg::parse_seq_rule(sj.at("d"), "spec.d");
      n_max = static_cast<int>(cfg::opt_integer(sj, "n_max", n_max, "spec"));
      detail::require(n_max >= 1, "spec.n_max must be >= 1");
      if (sj.contains("h")) {
        const json& hj = sj.at("h");
        cfg::expect_object(hj, "spec.h");
        if (cfg::get_string(hj, "kind", "spec.h") == "auto") {
          cfg::expect_keys(hj, "spec.h", {"kind", "margin"});
          h_auto = true;
          h_margin = cfg::opt_number(hj, "margin", 1.0, "spec.h");
        } else {
          h_auto = false;
          h_rule = cfg::parse_seq_rule(hj, "spec.h");
        }
      }
    }
    if (h_auto && builtin != "example1" && builtin != "example2") {
      h_auto = false;
      h_rule = SeqRule::linear(0.0, 1.0);
    }

    OscillatorySpec spec =
        h_auto ? (builtin == "example1"
                      ? OscillatorySpec::auto_h_single_site(c_rule, d_rule,
                                                            h_margin, weights,
                                                            p, n_max)
                      : OscillatorySpec::auto_h_cumulative(c_rule, d_rule,
                                                           h_margin, weights,
                                                           p, n_max))
               : OscillatorySpec(c_rule, d_rule, h_rule, n_max);

    Nonlinearity nl;
    if (builtin == "example1") {
      nl = make_example1(spec, weights, p);
    } else if (builtin == "example2") {
      nl = make_example2(spec, weights, p);
    } else if (builtin == "kuang") {
      nl = make_kuang_family(mu, nu, p);
    } else {
      nl = zero_nonlinearity();
    }

    SolverParams solver;
    if (doc.contains("solver")) {
      solver = cfg::parse_solver(doc.at("solver"), "config.solver");
    }

    const std::int64_t N = cfg::get_integer(doc, "N", "config");
    detail::require(N >= 1, "config.N must be >= 1");
    const std::int64_t seed = cfg::opt_integer(doc, "seed", 0, "config");
    detail::require(seed >= 0, "config.seed must be >= 0");

    RunConfig rc(std::move(weights), std::move(spec), std::move(nl));
    rc.p = p_val;
    rc.lambda = lambda;
    rc.N = static_cast<int>(N);
    rc.seed = static_cast<std::uint64_t>(seed);
    rc.output_dir = cfg::opt_string(doc, "output_dir", "out", "config");
    rc.builtin = builtin;
    rc.mu = mu;
    rc.nu = nu;
    rc.solver = solver;
    rc.echo = doc;
    return rc;
  }

 private:
  RunConfig(Weights w, OscillatorySpec s, Nonlinearity n)
      : weights(std::move(w)), spec(std::move(s)), nl(std::move(n)) {}
};

// Applies "path.to.key=value" onto the raw document; value is parsed as a
// JSON scalar when possible, else taken as a string. Validation of the
// resulting document happens afterwards in RunConfig::from_json.
inline void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  detail::require(eq != std::string::npos && eq > 0,
                  "override must have the form key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
    detail::require(value.is_primitive(), "override value must be a scalar");
  } catch (const json::parse_error&) {
    value = raw;  // unquoted string
  }

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    detail::require(!key.empty(), "override path has an empty segment");
    if (dot == std::string::npos) {
      detail::require(!node->contains(key) || node->at(key).is_primitive(),
                      "override may only replace scalar fields");
      (*node)[key] = value;
      return;
    }
    if (!node->contains(key)) (*node)[key] = json::object();
    node = &(*node)[key];
    detail::require(node->is_object(), "override path crosses a non-object");
    start = dot + 1;
  }
}

}  // namespace dpl
