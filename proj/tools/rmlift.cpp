#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "rmlift/cltc.hpp"
#include "rmlift/error.hpp"
#include "rmlift/transversal.hpp"

using namespace rmlift;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInput = 4;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += {hex[md[i] >> 4], hex[md[i] & 15]};
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::invalid_argument, "MissingFile", "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// one run: parameters, inputs, checks and timings collected into the manifest
class Run {
 public:
  Run(std::string command, std::uint64_t seed) : command_(std::move(command)), seed_(seed) {}

  json& params() { return params_; }

  json load(const std::string& path) {
    std::string bytes = read_file(path);
    inputs_.push_back({{"path", path}, {"sha256", sha256_hex(bytes)}});
    try {
      return json::parse(bytes);
    } catch (const json::exception& e) {
      fail(ErrorKind::invalid_argument, "BadJson", path + ": " + e.what());
    }
  }

  void check(const std::string& name, bool ok, const std::string& witness = "") {
    json c{{"name", name}, {"ok", ok}};
    if (!ok) c["witness"] = witness;
    checks_.push_back(c);
    if (!ok && first_failure_.empty()) first_failure_ = name + ": " + witness;
  }

  template <class F>
  auto timed(const std::string& stage, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record(stage, t0);
    } else {
      auto r = f();
      record(stage, t0);
      return r;
    }
  }

  bool ok() const { return first_failure_.empty(); }
  const std::string& first_failure() const { return first_failure_; }

  json manifest(bool with_timings) const {
    json m{{"command", command_},
           {"tool_version", "0.1.0"},
           {"parameters", params_},
           {"seed", seed_},
           {"inputs", inputs_},
           {"checks", checks_},
           {"status", ok() ? "ok" : "check_failed"}};
    if (with_timings) m["timings_ms"] = timings_;
    return m;
  }

 private:
  void record(const std::string& stage, std::chrono::steady_clock::time_point t0) {
    auto dt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    timings_[stage] = dt;
  }

  std::string command_;
  std::uint64_t seed_;
  json params_ = json::object();
  json inputs_ = json::array();
  json checks_ = json::array();
  json timings_ = json::object();
  std::string first_failure_;
};

void emit(const json& doc, const std::string& out) {
  std::string text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) fail(ErrorKind::invalid_argument, "BadOutput", "cannot write " + out);
  f << text;
  std::ofstream d(out + ".sha256", std::ios::binary);
  d << sha256_hex(text) << "  " << out << "\n";
}

std::pair<std::uint32_t, std::uint32_t> prime_power(std::uint64_t q) {
  require(q >= 2, "BadField", "q must be a prime power >= 2");
  for (std::uint32_t p = 2; static_cast<std::uint64_t>(p) * p <= q; ++p)
    if (q % p == 0) {
      std::uint32_t m = 0;
      while (q % p == 0) q /= p, ++m;
      require(q == 1, "BadField", "q must be a prime power");
      return {p, m};
    }
  return {static_cast<std::uint32_t>(q), 1};
}

json lift_to_json(const LiftedGraph& lift) {
  return {{"schema", "rmlift.lift/1"},
          {"field", field_to_json(lift.field())},
          {"base", graph_to_json(lift.base())},
          {"labeling", labeling_to_json(lift.field(), lift.labeling())}};
}

LiftedGraph lift_from_json(const json& j) {
  require(j.at("schema") == "rmlift.lift/1", "BadSchema", "expected rmlift.lift/1");
  MultiGraph base = graph_from_json(j.at("base"));
  require(base.value_field().valid(), "MissingEdgeValues", "lift file has no edge values");
  Field f = field_from_json(j.at("field"));
  require(f == base.value_field(), "BadField", "field does not match the base graph");
  return LiftedGraph(base, labeling_from_json(f, j.at("labeling")));
}

json coords(const Field& f, const Vec& v) {
  json a = json::array();
  for (auto x : v) a.push_back(f.coords(x));
  return a;
}


struct ExpanderArgs {
  std::uint64_t q = 0;
  std::size_t n0 = 1, delta = 1, t = 1, candidates = 64;
  double eta = 1.0, bias = 0.5;
};

json build_expander(Run& run, const ExpanderArgs& a, std::uint64_t seed, std::uint64_t budget) {
  auto [p, m] = prime_power(a.q);
  Field f = make_field(p, m);
  run.params() = {{"q", a.q}, {"n0", a.n0}, {"delta", a.delta}, {"t", a.t}, {"eta", a.eta},
                  {"bias", a.bias}, {"candidates", a.candidates}, {"budget", budget}};
  MultiGraph base = build_base_graph(f, a.n0, a.delta);
  std::mt19937_64 rng(seed);
  const std::size_t dim = m * a.t * base.num_vertices();
  std::uint64_t gsize = 1;
  bool certifiable = true;
  for (std::size_t i = 0; i < dim && certifiable; ++i) {
    gsize *= p;
    certifiable = gsize <= (std::uint64_t{1} << 20);
  }
  std::vector<VertexLabeling> cands;
  json search{{"group_dim", dim}};
  if (certifiable) {
    LowBiasSet set = run.timed("low_bias_set", [&] { return low_bias_set(p, dim, a.bias, budget, rng); });
    cands = labelings_from_set(f, a.t, base.num_vertices(), set);
    search["source"] = set.full_group ? "full_group" : "certified_low_bias_set";
    search["certified_bias"] = set.certified_bias;
  } else {
    std::uniform_int_distribution<std::uint32_t> coord(0, p - 1);
    for (std::size_t c = 0; c < a.candidates; ++c) {
      VertexLabeling l;
      l.t = a.t;
      for (std::size_t v = 0; v < base.num_vertices(); ++v) {
        Vec lab(a.t);
        for (auto& x : lab) {
          std::vector<std::uint32_t> cs(m);
          for (auto& y : cs) y = coord(rng);
          x = f.from_coords(cs);
        }
        l.labels.push_back(lab);
      }
      cands.push_back(l);
    }
    search["source"] = "uniform_samples";
  }
  // a truncated set keeps its candidates but loses the bias certificate
  search["set_size"] = cands.size();
  if (cands.size() > a.candidates) cands.resize(a.candidates);
  search["candidates"] = cands.size();
  SearchResult best = run.timed("search_labels", [&] { return search_labels(base, cands, a.eta); });
  search["best_index"] = best.best;
  LiftedGraph lift(base, best.labeling);
  run.check("lift_isomorphism", lift.verify_isomorphism(), "lifted graph differs from the abelian lift");
  run.check("free_action", lift.verify_free_action(), "group action has a fixed point");
  const double threshold = a.eta * static_cast<double>(a.delta);
  run.check("lambda2_below_eta_delta", best.lambda2 < threshold,
            "lambda2 = " + std::to_string(best.lambda2) + " >= " + std::to_string(threshold));
  json doc = lift_to_json(lift);
  doc["n0"] = a.n0;
  doc["delta"] = a.delta;
  doc["lifted"] = {{"vertices", lift.lifted().num_vertices()}, {"edges", lift.lifted().num_edges()}};
  doc["lambda2"] = best.lambda2;
  doc["eta_delta"] = threshold;
  doc["search"] = search;
  return doc;
}


struct QcodeArgs {
  std::string lift;
  std::size_t r = 2;
  std::uint32_t ell = 0;
  std::optional<std::uint32_t> ell_prime, a;
  std::string check = "all";
  std::uint64_t samples = 1000;
};

json build_qcode(Run& run, const QcodeArgs& q, std::uint64_t seed, std::uint64_t budget) {
  LiftedGraph lift = lift_from_json(run.load(q.lift));
  std::uint32_t ell_prime = q.ell_prime.value_or(std::max<std::uint32_t>(1, q.ell / static_cast<std::uint32_t>(10 * q.r)));
  run.params() = {{"r", q.r}, {"ell", q.ell}, {"ell_prime", ell_prime}, {"check", q.check},
                  {"samples", q.samples}, {"budget", budget}};
  if (q.a) run.params()["a"] = *q.a;
  ProductCodeFamily fam = run.timed("build_family", [&] { return build_family(lift, q.r, q.ell, ell_prime, q.a); });
  Vec alpha = run.timed("alpha", [&] { return alpha_slot(fam); });
  const bool all = q.check == "all";
  json checks = json::object();
  if (all || q.check == "css") {
    run.timed("css", [&] {
      bool valid = true;
      for (const auto& c : fam.complexes) valid = valid && c.is_valid();
      run.check("boundary_squared_zero", valid, "some C^(h) has a nonzero composite boundary");
      bool iso = true;
      for (std::size_t h = 1; h < fam.complexes.size() && iso; ++h)
        iso = verify_isomorphism(fam.complexes[0], fam.complexes[h], family_isomorphism(fam, 0, h));
      run.check("slot_isomorphisms", iso, "C^(1) and some C^(h) are not isomorphic under the signed relabeling");
      std::uint64_t n = family_qudits(fam);
      run.check("qudit_count", !fam.materialized() || fam.complexes[0].dim(1) == n,
                "materialized level-1 dimension differs from the closed form");
      checks["css"] = {{"materialized", fam.materialized()}, {"qudits", n}};
    });
  }
  if (all || q.check == "cobinv") {
    auto rep = run.timed("cobinv", [&] { return coboundary_invariance_check(fam, alpha, budget); });
    run.check("coboundary_invariance", rep.ok, rep.witness);
    run.check("coboundary_invariance_complete", rep.complete, "budget did not cover every slot subset");
    checks["cobinv"] = {{"tuples", rep.tuples}, {"subsets", rep.subsets}, {"complete", rep.complete}};
  }
  if (all || q.check == "subrank") {
    auto rep = run.timed("subrank", [&] { return subrank_certificate(fam, alpha, q.samples, seed); });
    run.check("subrank", rep.ok, rep.witness);
    checks["subrank"] = {{"s", rep.s}, {"checked", rep.checked}, {"mode", rep.exhaustive ? "exhaustive" : "sampled"},
                         {"seed", rep.seed}};
  }
  const Field& f = lift.field();
  json doc{{"schema", "rmlift.qcode/1"},
           {"field", field_to_json(f)},
           {"r", fam.r},
           {"ell", fam.ell},
           {"ell_prime", fam.ell_prime},
           {"a", fam.a},
           {"threshold", fam.threshold},
           {"qudits", family_qudits(fam)},
           {"logical_dimension_bound", family_dimension_bound(fam)},
           {"zeta_locality_bound", zeta_locality_bound(fam)},
           {"a_sets", json::array()},
           {"form", factored_form_to_json(fam, alpha)},
           {"results", checks}};
  for (const auto& s : fam.a_sets) doc["a_sets"].push_back(coords(f, s));
  return doc;
}


struct CltcArgs {
  std::string lift, check = "none", emit_complex;
  std::uint32_t ell = 0, ell_prime = 0;
  std::size_t r = 2;
  bool relax = false;
};

json build_cltc_cmd(Run& run, const CltcArgs& c, std::uint64_t budget) {
  LiftedGraph lift = lift_from_json(run.load(c.lift));
  run.params() = {{"ell", c.ell}, {"relax", c.relax}, {"check", c.check}, {"budget", budget}};
  LTCInstance inst = run.timed("build", [&] { return build_cltc(lift, c.ell, c.relax); });
  run.check("boundary_squared_zero", inst.complex.is_valid(), "nonzero composite boundary");
  LTCReport rep = run.timed("report", [&] { return cltc_report(inst, budget); });
  json doc = cltc_report_to_json(inst, rep);
  const std::uint64_t e = lift.base().num_edges();
  run.check("level2_size", rep.n == e * e * lift.group().size(), "N differs from |E|^2 q^t");
  run.check("planted_containment", rep.containment.ok, rep.containment.witness);
  run.check("dimension_bound", rep.k >= rep.k_bound, "dim Z_2 below the binomial bound");
  const std::size_t delta = *lift.base().regular_degree();
  run.check("locality_bound", rep.locality <= 4 * delta, "w exceeds 4 Delta");
  if (rep.rho_computed)
    run.check("rho2_within_locality", rep.rho2.value() <= static_cast<double>(rep.locality),
              "rho2 exceeds the maximal column weight");
  if (c.check == "mult") {
    run.params()["ell_prime"] = c.ell_prime;
    run.params()["r"] = c.r;
    LTCInstance other = run.timed("build_ell_prime", [&] { return build_cltc(lift, c.ell_prime, c.relax); });
    auto m = run.timed("multiplication", [&] { return multiplication_check(inst, other, c.r, budget); });
    run.check("multiplication", m.ok, m.witness);
    doc["multiplication"] = {{"ell_prime", c.ell_prime}, {"r", c.r}, {"basis", m.basis}, {"products", m.products}};
  }
  if (!c.emit_complex.empty()) emit(complex_to_json(inst.complex), c.emit_complex);
  return doc;
}


json verify_complex(Run& run, const ChainComplex& c) {
  run.check("boundary_squared_zero", c.is_valid(), "nonzero composite boundary");
  json hom = json::array();
  for (std::size_t i = 0; i <= c.top(); ++i) hom.push_back(homology_dim(c, i));
  return {{"levels", c.dims()}, {"homology", hom}, {"locality", locality(c)}};
}

json verify(Run& run, const std::string& path, std::uint64_t budget) {
  json j = run.load(path);
  run.params() = {{"budget", budget}};
  const std::string schema = j.value("schema", "");
  json doc{{"schema", "rmlift.verify/1"}, {"input_schema", schema}};
  if (schema == "rmlift.complex/1") {
    doc["complex"] = verify_complex(run, complex_from_json(j));
  } else if (schema == "rmlift.planted/1") {
    RMPlantedComplex cx = planted_from_json(j);
    doc["complex"] = verify_complex(run, cx.complex);
    auto rep = planting_check(cx);
    run.check("planting", rep.ok, rep.detail);
    doc["planting"] = {{"kind", rep.kind}, {"checked", rep.checked}};
  } else if (schema == "rmlift.css/1") {
    CSSCode code = css_from_json(j);
    doc["complex"] = verify_complex(run, css_complex(code));
    auto p = css_params(code, budget);
    doc["css"] = {{"n", p.n}, {"k", p.k}, {"d", p.d}, {"exact", p.exact}};
  } else if (schema == "rmlift.lift/1") {
    LiftedGraph lift = lift_from_json(j);
    run.check("lift_isomorphism", lift.verify_isomorphism(), "lifted graph differs from the abelian lift");
    run.check("free_action", lift.verify_free_action(), "group action has a fixed point");
    double l2 = lifted_lambda2(lift.base(), lift.group(), lift.lift_labels());
    if (j.contains("lambda2"))
      run.check("lambda2_matches", std::abs(l2 - j.at("lambda2").get<double>()) <= 1e-9, "recomputed lambda2 differs");
    doc["lambda2"] = l2;
  } else {
    fail(ErrorKind::invalid_argument, "BadSchema", "unsupported schema '" + schema + "'");
  }
  return doc;
}


json report(Run& run, const std::vector<std::string>& paths) {
  json files = json::array();
  for (const auto& path : paths) {
    json j = run.load(path);
    json entry{{"path", path}, {"schema", j.value("schema", "")}};
    if (j.contains("manifest")) {
      const json& m = j.at("manifest");
      entry["command"] = m.value("command", "");
      entry["status"] = m.value("status", "");
      std::size_t passed = 0, total = 0;
      for (const auto& c : m.value("checks", json::array())) {
        ++total;
        if (c.at("ok").get<bool>())
          ++passed;
        else
          run.check(path + ":" + c.at("name").get<std::string>(), false, c.value("witness", ""));
      }
      entry["checks_passed"] = passed;
      entry["checks_total"] = total;
    }
    for (const char* key : {"N", "K", "K_bound", "w", "D", "rho2", "lambda2", "qudits", "r", "ell"})
      if (j.contains(key)) entry[key] = j.at(key);
    files.push_back(entry);
  }
  run.check("all_artifacts_pass", run.ok(), "see failed checks");
  return {{"schema", "rmlift.report/1"}, {"artifacts", files}};
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::infeasible:
      return kExitInfeasible;
    case ErrorKind::budget_exceeded:
      return kExitBudget;
    case ErrorKind::check_failed:
      return kExitCheck;
    default:
      return kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rmlift: lifted expanders, planted Reed-Muller complexes, product codes and LTCs"};
  app.require_subcommand(1);
  std::uint64_t seed = 1, budget = 10000000;
  std::string out;
  bool timings = false;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "seed of the single random generator")->capture_default_str();
    sub->add_option("--budget", budget, "cap on enumeration sizes")->capture_default_str();
    sub->add_option("--out", out, "write the JSON artifact here instead of stdout");
    sub->add_flag("--timings", timings, "record wall-clock timings in the manifest (breaks byte identity)");
  };

  ExpanderArgs ex;
  auto* s_exp = app.add_subcommand("build-expander", "search vertex labels for a lifted expander");
  s_exp->add_option("--q", ex.q, "field size")->required();
  s_exp->add_option("--n0", ex.n0, "vertices per side of the base graph")->capture_default_str();
  s_exp->add_option("--delta", ex.delta, "degree")->required();
  s_exp->add_option("--t", ex.t, "lift dimension")->capture_default_str();
  s_exp->add_option("--eta", ex.eta, "success threshold lambda2 < eta Delta")->capture_default_str();
  s_exp->add_option("--bias", ex.bias, "target bias of the candidate set")->capture_default_str();
  s_exp->add_option("--candidates", ex.candidates, "maximal number of candidate labelings")->capture_default_str();
  common(s_exp);

  QcodeArgs qa;
  std::uint32_t ell_prime_in = 0, a_in = 0;
  auto* s_q = app.add_subcommand("build-qcode", "build a product code family with its multilinear form");
  s_q->add_option("--lift", qa.lift, "lift file from build-expander")->required();
  s_q->add_option("--r", qa.r, "number of factors")->capture_default_str();
  s_q->add_option("--ell", qa.ell, "degree bound ell")->required();
  auto* o_lp = s_q->add_option("--ell-prime", ell_prime_in, "degree bound ell' (default max(1, floor(ell / 10r)))");
  auto* o_a = s_q->add_option("--a", a_in, "size of the sets A_1..A_t (default floor(ell / 10rt))");
  s_q->add_option("--check", qa.check, "checks to run")
      ->check(CLI::IsMember({"cobinv", "subrank", "css", "all"}))
      ->capture_default_str();
  s_q->add_option("--samples", qa.samples, "subrank samples when not exhaustive")->capture_default_str();
  common(s_q);

  CltcArgs ca;
  auto* s_c = app.add_subcommand("build-cltc", "build the balanced-product LTC and report its parameters");
  s_c->add_option("--lift", ca.lift, "lift file from build-expander")->required();
  s_c->add_option("--ell", ca.ell, "degree bound ell")->required();
  s_c->add_flag("--relax", ca.relax, "allow ell > Delta/4");
  s_c->add_option("--check", ca.check, "extra check")->check(CLI::IsMember({"none", "mult"}))->capture_default_str();
  s_c->add_option("--ell-prime", ca.ell_prime, "target degree bound for --check mult");
  s_c->add_option("--r", ca.r, "product arity for --check mult")->capture_default_str();
  s_c->add_option("--emit-complex", ca.emit_complex, "also write the complex JSON here");
  common(s_c);

  std::string verify_in;
  auto* s_v = app.add_subcommand("verify", "verify a complex, planted complex, CSS code or lift file");
  s_v->add_option("--complex,--in", verify_in, "input JSON")->required();
  common(s_v);

  std::vector<std::string> report_in;
  auto* s_r = app.add_subcommand("report", "summarize artifacts and their recorded checks");
  s_r->add_option("--in", report_in, "artifact files")->required();
  common(s_r);

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  Run run(sub->get_name(), seed);
  try {
    json doc;
    if (sub == s_exp) {
      doc = build_expander(run, ex, seed, budget);
    } else if (sub == s_q) {
      if (o_lp->count()) qa.ell_prime = ell_prime_in;
      if (o_a->count()) qa.a = a_in;
      doc = build_qcode(run, qa, seed, budget);
    } else if (sub == s_c) {
      if (ca.check == "mult") require(ca.ell_prime > 0, "MissingOption", "--check mult needs --ell-prime");
      doc = build_cltc_cmd(run, ca, budget);
    } else if (sub == s_v) {
      doc = verify(run, verify_in, budget);
    } else {
      doc = report(run, report_in);
    }
    doc["manifest"] = run.manifest(timings);
    emit(doc, out);
    if (!run.ok()) {
      std::cerr << "rmlift: check failed: " << run.first_failure() << "\n";
      return kExitCheck;
    }
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "rmlift: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "rmlift: malformed input: " << e.what() << "\n";
    return kExitInput;
  }
}
