#include <cmath>
#include <set>

#include "detail.hpp"

namespace ptdilate::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys{
    "r",       "r_list",     "grid",         "margin",        "substeps",  "m0",
    "seed",    "repetitions", "p_e",         "pl_rates",      "nv",        "output_dir",
    "workers", "sample_stride", "lab_audit", "audit_times",   "fit_range", "inputs"};

const std::vector<std::string> kNvFields{"D", "Q", "A_hf", "B0", "gamma_e", "gamma_n"};

double* nv_field(NVParams& nv, const std::string& name) {
  if (name == "D") return &nv.D;
  if (name == "Q") return &nv.Q;
  if (name == "A_hf") return &nv.A_hf;
  if (name == "B0") return &nv.B0;
  if (name == "gamma_e") return &nv.gamma_e;
  if (name == "gamma_n") return &nv.gamma_n;
  return nullptr;
}

class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  void number(const json& v, const std::string& key, double& out) {
    if (v.is_number()) {
      out = v.get<double>();
    } else {
      problems_.push_back(key + " must be a number");
    }
  }

  template <typename Int>
  void integer(const json& v, const std::string& key, Int& out) {
    if (v.is_number_integer() || v.is_number_unsigned()) {
      if (v.is_number_unsigned() || v.get<std::int64_t>() >= 0 || std::is_signed_v<Int>) {
        out = v.get<Int>();
        return;
      }
    }
    problems_.push_back(key + " must be a non-negative integer");
  }

  void numbers(const json& v, const std::string& key, std::vector<double>& out) {
    if (!v.is_array()) {
      problems_.push_back(key + " must be an array of numbers");
      return;
    }
    out.clear();
    for (const auto& x : v) {
      if (!x.is_number()) {
        problems_.push_back(key + " must contain only numbers");
        return;
      }
      out.push_back(x.get<double>());
    }
  }

 private:
  std::vector<std::string>& problems_;
};

bool finite(double v) { return std::isfinite(v); }

}  // namespace

json RunConfig::to_json() const {
  json j;
  j["r_list"] = r_list;
  j["grid"] = {{"t0", t0}, {"t1", t1}, {"n_nodes", n_nodes}};
  j["margin"] = margin;
  j["substeps"] = substeps;
  j["m0"] = m0 ? json(*m0) : json(nullptr);
  j["seed"] = seed;
  j["repetitions"] = repetitions;
  j["p_e"] = p_e;
  j["pl_rates"] = pl_rates.n;
  j["nv"] = {{"D", nv.D}, {"Q", nv.Q}, {"A_hf", nv.A_hf},
             {"B0", nv.B0}, {"gamma_e", nv.gamma_e}, {"gamma_n", nv.gamma_n}};
  j["sample_stride"] = sample_stride;
  j["lab_audit"] = lab_audit;
  j["audit_times"] = audit_times;
  j["fit_range"] = {fit_lo, fit_hi};
  return j;
}

RunConfig config_from_json(const json& doc) {
  RunConfig cfg;
  std::vector<std::string> problems;
  if (!doc.is_object()) throw ValidationError({"config must be a JSON object"});
  Reader rd(problems);

  for (const auto& [key, value] : doc.items()) {
    if (!kKnownKeys.count(key)) problems.push_back("unknown config key '" + key + "'");
  }
  if (doc.contains("r") && doc.contains("r_list")) {
    problems.push_back("give either r or r_list, not both");
  }
  if (doc.contains("r")) {
    double r = 0.0;
    rd.number(doc["r"], "r", r);
    cfg.r_list = {r};
  }
  if (doc.contains("r_list")) rd.numbers(doc["r_list"], "r_list", cfg.r_list);
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    if (!g.is_object()) {
      problems.push_back("grid must be an object with t0, t1, n_nodes");
    } else {
      for (const auto& [key, value] : g.items()) {
        if (key != "t0" && key != "t1" && key != "n_nodes") {
          problems.push_back("unknown grid key '" + key + "'");
        }
      }
      if (g.contains("t0")) rd.number(g["t0"], "grid.t0", cfg.t0);
      if (g.contains("t1")) rd.number(g["t1"], "grid.t1", cfg.t1);
      if (g.contains("n_nodes")) rd.integer(g["n_nodes"], "grid.n_nodes", cfg.n_nodes);
    }
  }
  if (doc.contains("margin")) rd.number(doc["margin"], "margin", cfg.margin);
  if (doc.contains("substeps")) rd.integer(doc["substeps"], "substeps", cfg.substeps);
  if (doc.contains("m0") && !doc["m0"].is_null()) {
    double m0 = 0.0;
    rd.number(doc["m0"], "m0", m0);
    cfg.m0 = m0;
  }
  if (doc.contains("seed")) rd.integer(doc["seed"], "seed", cfg.seed);
  if (doc.contains("repetitions")) rd.integer(doc["repetitions"], "repetitions", cfg.repetitions);
  if (doc.contains("p_e")) rd.number(doc["p_e"], "p_e", cfg.p_e);
  if (doc.contains("pl_rates")) {
    std::vector<double> rates;
    rd.numbers(doc["pl_rates"], "pl_rates", rates);
    if (rates.size() == 4) {
      std::copy(rates.begin(), rates.end(), cfg.pl_rates.n.begin());
    } else {
      problems.push_back("pl_rates must hold exactly 4 values");
    }
  }
  if (doc.contains("nv")) {
    const json& nv = doc["nv"];
    if (!nv.is_object()) {
      problems.push_back("nv must be an object");
    } else {
      for (const auto& [key, value] : nv.items()) {
        if (double* field = nv_field(cfg.nv, key)) {
          rd.number(value, "nv." + key, *field);
        } else {
          problems.push_back("unknown nv key '" + key + "'");
        }
      }
      for (const auto& f : kNvFields) {
        if (!nv.contains(f)) cfg.nv_missing.push_back(f);
      }
      cfg.nv_explicit = cfg.nv_missing.empty();
    }
  } else {
    cfg.nv_missing = kNvFields;
  }
  if (doc.contains("output_dir")) {
    if (doc["output_dir"].is_string()) {
      cfg.output_dir = doc["output_dir"].get<std::string>();
    } else {
      problems.push_back("output_dir must be a string");
    }
  }
  if (doc.contains("workers")) rd.integer(doc["workers"], "workers", cfg.workers);
  if (doc.contains("sample_stride")) rd.integer(doc["sample_stride"], "sample_stride", cfg.sample_stride);
  if (doc.contains("lab_audit")) {
    if (doc["lab_audit"].is_boolean()) {
      cfg.lab_audit = doc["lab_audit"].get<bool>();
    } else {
      problems.push_back("lab_audit must be true or false");
    }
  }
  if (doc.contains("audit_times")) rd.numbers(doc["audit_times"], "audit_times", cfg.audit_times);
  if (doc.contains("fit_range")) {
    std::vector<double> range;
    rd.numbers(doc["fit_range"], "fit_range", range);
    if (range.size() == 2) {
      cfg.fit_lo = range[0];
      cfg.fit_hi = range[1];
    } else {
      problems.push_back("fit_range must be [lo, hi]");
    }
  }
  if (doc.contains("inputs")) {
    const json& in = doc["inputs"];
    if (!in.is_array()) {
      problems.push_back("inputs must be an array of file names");
    } else {
      for (const auto& x : in) {
        if (x.is_string()) {
          cfg.inputs.push_back(x.get<std::string>());
        } else {
          problems.push_back("inputs must contain only strings");
        }
      }
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return cfg;
}

void validate_config(const RunConfig& cfg, std::string_view command) {
  std::vector<std::string> p;
  const bool needs_r = command != "fit";
  if (needs_r && cfg.r_list.empty()) p.push_back("r_list must not be empty");
  for (double r : cfg.r_list) {
    if (!finite(r) || r < 0.0) p.push_back("r = " + format_double(r) + " must be finite and >= 0");
  }
  if (!finite(cfg.t0) || !finite(cfg.t1) || !(cfg.t1 > cfg.t0)) {
    p.push_back("grid needs finite t1 > t0");
  }
  if (cfg.n_nodes < 2) p.push_back("grid.n_nodes must be >= 2");
  if (!finite(cfg.margin) || !(cfg.margin > 0.0)) p.push_back("margin must be > 0");
  if (cfg.substeps < 1) p.push_back("substeps must be >= 1");
  if (cfg.m0 && (!finite(*cfg.m0) || !(*cfg.m0 > 1.0))) p.push_back("m0 must exceed 1");
  if (cfg.repetitions < 0) p.push_back("repetitions must be >= 0");
  if (!finite(cfg.p_e) || !(cfg.p_e > 0.0) || cfg.p_e > 1.0) p.push_back("p_e must lie in (0, 1]");
  for (double v : cfg.pl_rates.n) {
    if (!finite(v) || v < 0.0) {
      p.push_back("pl_rates must be finite and >= 0");
      break;
    }
  }
  if (cfg.sample_stride < 1) p.push_back("sample_stride must be >= 1");
  try {
    cfg.nv.validate();
  } catch (const ValidationError& e) {
    p.insert(p.end(), e.problems().begin(), e.problems().end());
  }
  if (command == "pulses" && cfg.lab_audit) {
    if (!cfg.nv_explicit) {
      std::string missing;
      for (const auto& f : cfg.nv_missing) missing += (missing.empty() ? "" : ", ") + f;
      p.push_back("lab audit needs an explicit nv block; missing fields: " + missing);
    }
    if (cfg.audit_times.empty()) p.push_back("audit_times must not be empty");
    for (double t : cfg.audit_times) {
      if (!finite(t) || !(t > cfg.t0) || t > cfg.t1) {
        p.push_back("audit time " + format_double(t) + " must lie in (t0, t1]");
      }
    }
  }
  if (command == "fit") {
    if (cfg.inputs.empty()) p.push_back("fit needs at least one input file");
    if (!(cfg.fit_lo >= 0.0) || !(cfg.fit_hi <= 2.0) || !(cfg.fit_lo < cfg.fit_hi)) {
      p.push_back("fit_range must satisfy 0 <= lo < hi <= 2");
    }
  }
  if (!p.empty()) throw ValidationError(std::move(p));
}

}  // namespace ptdilate::cli
