#include "stochmatch/report.hpp"

#include <initializer_list>
#include <optional>
#include <sstream>

#include "stochmatch/error.hpp"

namespace stochmatch {

using nlohmann::json;

json to_json(const VimParams& p) {
  json j{{"epsilon", p.epsilon},      {"alpha", p.alpha},
         {"depth", p.depth},          {"walk_cap", p.walk_cap},
         {"gamma_samples", p.gamma_samples}, {"saturation_slack", p.slack()},
         {"gamma_z", p.gamma_z},      {"mis_round_constant", p.mis_round_constant}};
  return j;
}

json to_json(const ThresholdChoice& t) {
  return json{{"tau_minus", t.tau_minus},
              {"tau_plus", t.tau_plus},
              {"j", t.j},
              {"schedule", t.schedule},
              {"bucket_mass", t.bucket_mass}};
}

namespace {

json ci(const MeanCI& m) { return json{{"mean", m.mean}, {"se", m.se}, {"n", m.n}}; }

}  // namespace

json to_json(const CertificateSummary& s) {
  return json{{"runs", s.runs},
              {"x", ci(s.x)},
              {"y", ci(s.y)},
              {"x_crucial", ci(s.x_crucial)},
              {"z", ci(s.z)},
              {"mu_q", ci(s.mu_q)},
              {"rounding_ok", s.rounding_ok},
              {"rounding_strict_ok", s.rounding_strict_ok},
              {"y_valid", s.y_valid},
              {"blossom_ok", s.blossom_ok}};
}

json to_json(const ExperimentReport& r, bool include_timings) {
  json j;
  j["graph"] = {{"n", r.n}, {"m", r.m}};
  j["epsilon"] = r.epsilon;
  j["seed"] = r.seed;
  j["mode"] = r.paper_faithful ? "paper-faithful" : "desk";
  j["opt_hat"] = {{"mean", r.opt_hat}, {"se", r.opt_se}};
  if (r.opt_exact) j["opt_exact"] = *r.opt_exact;
  j["thresholds"] = to_json(r.thresholds);
  j["classification"] = {{"crucial", r.crucial}, {"noncrucial", r.noncrucial},
                         {"ignored", r.ignored}, {"delta_C", r.delta_C}, {"lambda", r.lambda}};
  j["sparsifier"] = {{"R", r.R}, {"size", r.q_size}, {"max_degree", r.q_max_degree}};
  j["vim"] = to_json(r.vim);
  j["vim"]["matched_prob"] = r.matched_prob;
  j["certificate"] = to_json(r.certificate);
  j["ratio"] = {{"value", r.ratio}, {"se", r.ratio_se}};
  if (r.contraction_mu_mean)
    j["contraction"] = {{"k", r.contraction_k}, {"mu_mean", *r.contraction_mu_mean},
                        {"mu_se", *r.contraction_mu_se}};
  json checks = json::array();
  for (const Check& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"informational", c.informational},
                      {"detail", c.detail}});
  j["checks"] = checks;
  j["ok"] = r.ok();
  if (!r.raw_runs.empty()) {
    json raw = json::array();
    for (std::size_t i = 0; i < r.raw_runs.size(); ++i) {
      const CertificateRun& c = r.raw_runs[i];
      raw.push_back({{"x", c.x_size}, {"y", c.y_size}, {"x_crucial", c.x_crucial}, {"z", c.z_size},
                     {"mu_q", c.mu_q}, {"mu_g", r.mu_g.at(i)}, {"max_y_vertex", c.max_y_vertex},
                     {"blossom_ok", c.blossom_ok}});
    }
    j["raw_runs"] = raw;
  }
  if (include_timings) {
    json t = json::object();
    for (const auto& [name, secs] : r.timings) t[name] = t.value(name, 0.0) + secs;
    j["timings"] = t;
  }
  return j;
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const char* where) {
  if (!obj.is_object()) throw InvalidArgument(std::string(where) + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw InvalidArgument("unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
void read_opt(const json& obj, const char* key, std::optional<T>& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  reject_unknown(doc,
                 {"graph_file", "generator", "epsilon", "seed", "q_samples", "runs", "gamma_samples",
                  "mode", "force", "contract", "raw_dump", "overrides"},
                 "config");
  ExperimentConfig c;
  try {
    read_opt(doc, "graph_file", c.graph_file);
    if (doc.contains("generator")) {
      const json& g = doc.at("generator");
      reject_unknown(g, {"family", "n", "n2", "density", "p", "p_max"}, "generator");
      GeneratorSpec spec;
      spec.family = GeneratorSpec::parse_family(g.at("family").get<std::string>());
      spec.n = g.value("n", spec.n);
      spec.n2 = g.value("n2", spec.n2);
      spec.density = g.value("density", spec.density);
      spec.p = g.value("p", spec.p);
      read_opt(g, "p_max", spec.p_max);
      c.generator = spec;
    }
    c.epsilon = doc.value("epsilon", c.epsilon);
    c.seed = doc.value("seed", c.seed);
    c.q_samples = doc.value("q_samples", c.q_samples);
    c.runs = doc.value("runs", c.runs);
    c.gamma_samples = doc.value("gamma_samples", c.gamma_samples);
    const std::string mode = doc.value("mode", std::string("desk"));
    if (mode != "desk" && mode != "paper-faithful")
      throw InvalidArgument("mode must be 'desk' or 'paper-faithful'");
    c.paper_faithful = mode == "paper-faithful";
    c.force = doc.value("force", false);
    c.contract = doc.value("contract", false);
    c.raw_dump = doc.value("raw_dump", false);
    if (doc.contains("overrides")) {
      const json& o = doc.at("overrides");
      reject_unknown(o, {"R", "alpha", "depth", "walk_cap", "c_lambda", "t0", "gamma"}, "overrides");
      read_opt(o, "R", c.R);
      read_opt(o, "alpha", c.alpha);
      read_opt(o, "depth", c.depth);
      read_opt(o, "walk_cap", c.walk_cap);
      read_opt(o, "c_lambda", c.c_lambda);
      read_opt(o, "t0", c.t0);
      read_opt(o, "gamma", c.gamma);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j;
  if (c.graph_file) j["graph_file"] = *c.graph_file;
  if (c.generator) {
    const GeneratorSpec& g = *c.generator;
    j["generator"] = {{"family", GeneratorSpec::family_name(g.family)}, {"n", g.n}, {"n2", g.n2},
                      {"density", g.density}, {"p", g.p}};
    if (g.p_max) j["generator"]["p_max"] = *g.p_max;
  }
  j["epsilon"] = c.epsilon;
  j["seed"] = c.seed;
  j["q_samples"] = c.q_samples;
  j["runs"] = c.runs;
  j["gamma_samples"] = c.gamma_samples;
  j["mode"] = c.paper_faithful ? "paper-faithful" : "desk";
  j["force"] = c.force;
  j["contract"] = c.contract;
  j["raw_dump"] = c.raw_dump;
  json o = json::object();
  if (c.R) o["R"] = *c.R;
  if (c.alpha) o["alpha"] = *c.alpha;
  if (c.depth) o["depth"] = *c.depth;
  if (c.walk_cap) o["walk_cap"] = *c.walk_cap;
  if (c.c_lambda) o["c_lambda"] = *c.c_lambda;
  if (c.t0) o["t0"] = *c.t0;
  if (c.gamma) o["gamma"] = *c.gamma;
  j["overrides"] = o;
  return j;
}

namespace {

void flatten(const json& node, const std::string& prefix, std::ostream& out) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i)
      flatten(node[i], prefix + "." + std::to_string(i), out);
  } else {
    std::string v = node.is_string() ? node.get<std::string>() : node.dump();
    if (v.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      v = q + "\"";
    }
    out << prefix << ',' << v << '\n';
  }
}

}  // namespace

std::string json_to_csv(const json& doc) {
  std::ostringstream out;
  out << "key,value\n";
  flatten(doc, "", out);
  return out.str();
}

}  // namespace stochmatch
