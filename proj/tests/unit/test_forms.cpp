#include <fstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "rmlift/error.hpp"
#include "rmlift/transversal.hpp"

using namespace rmlift;

namespace {

CSSCode load_code(const std::string& name) {
  std::ifstream in(std::string(RMLIFT_DATA_DIR) + "/css/" + name);
  REQUIRE(in.good());
  return css_from_json(nlohmann::json::parse(in));
}

FormInstance css_instance(const std::vector<CSSCode>& codes, std::size_t s) {
  std::vector<ChainComplex> cx;
  for (const auto& c : codes) cx.push_back(css_complex(c));
  return diagonal_form(cx, 1, s);
}

std::vector<CSSCode> repeat(const CSSCode& c, std::size_t r) { return std::vector<CSSCode>(r, c); }

// [[4,2,2]] with the single product <1100, c_1> <1010, c_2>
FormInstance locality_toy() {
  CSSCode code = load_code("code_422.json");
  FormInstance inst;
  inst.complexes = {css_complex(code), css_complex(code)};
  inst.level = 1;
  inst.form = sum_of_products(code.field, {4, 4}, {{{1, 1, 0, 0}, {1, 0, 1, 0}}});
  inst.certificate = {{{1, 0, 1, 0}}, {{1, 1, 0, 0}}};
  for (const auto& c : inst.complexes) {
    std::vector<Vec> hp;
    for (const auto& u : cohomology_basis(c, 1)) hp.push_back(to_dense(u, 4));
    inst.hprime.push_back(hp);
  }
  return inst;
}

}  // namespace

TEST_CASE("toy CSS codes load with their parameters") {
  auto c422 = css_params(load_code("code_422.json"), 1000000);
  CHECK(c422.n == 4);
  CHECK(c422.k == 2);
  CHECK(c422.d == 2);
  CHECK(c422.exact);
  auto steane = css_params(load_code("steane_7.json"), 1000000);
  CHECK(steane.n == 7);
  CHECK(steane.k == 1);
  CHECK(steane.d == 3);
  auto qutrit = css_params(load_code("qutrit_3.json"), 1000000);
  CHECK(qutrit.k == 1);
  auto gf4 = css_params(load_code("gf4_3.json"), 1000000);
  CHECK(gf4.k == 1);
  CHECK(gf4.d == 2);
  // JSON round trip and validation
  CSSCode code = load_code("gf4_3.json");
  CHECK(css_to_json(css_from_json(css_to_json(code))) == css_to_json(code));
  auto bad = css_to_json(code);
  bad["schema"] = "rmlift.css/0";
  CHECK_THROWS_AS(css_from_json(bad), Error);
  auto not_css = css_to_json(load_code("code_422.json"));
  not_css["hz"]["entries"].erase(0);
  CHECK_THROWS_AS(css_from_json(not_css), Error);
}

TEST_CASE("CSS extraction inverts the CSS complex") {
  CSSCode code = load_code("steane_7.json");
  ChainComplex c = css_complex(code);
  CSSCode back = css_extract(c, 1);
  CHECK(back.hx.to_dense() == code.hx.to_dense());
  CHECK(back.hz.to_dense() == code.hz.to_dense());
  CHECK_THROWS_AS(css_extract(c, 0), Error);
}

TEST_CASE("diagonal forms on toy codes") {
  for (auto [name, r, s] : std::vector<std::tuple<std::string, std::size_t, std::size_t>>{
           {"code_422.json", 2, 2}, {"code_422.json", 3, 2}, {"qutrit_3.json", 2, 1}, {"steane_7.json", 2, 1}}) {
    CAPTURE(name);
    auto inst = css_instance(repeat(load_code(name), r), s);
    auto sr = subrank_check_entries(inst);
    CHECK_MESSAGE(sr.ok, sr.witness);
    CHECK(sr.s == s);
    CHECK(sr.exhaustive);
    auto inv = coboundary_invariance_entries(inst, 100000000);
    CHECK_MESSAGE(inv.ok, inv.witness);
    CHECK(inv.complete);
  }
  CHECK_THROWS_AS(css_instance(repeat(load_code("steane_7.json"), 2), 2), Error);
}

TEST_CASE("form utilities") {
  Field f = make_field(5, 1);
  auto form = sum_of_products(f, {2, 3}, {{{1, 2}, {0, 1, 4}}, {{1, 0}, {0, 4, 1}}});
  // (c0 + 2 c1)(d1 + 4 d2) + c0 (4 d1 + d2) = 2 c1 d1 + 3 c1 d2, every c0 term cancels
  CHECK(form.entries.size() == 2);
  CHECK(form.eval({{1, 0}, {0, 1, 0}}) == 0);
  CHECK(form.eval({{0, 1}, {0, 0, 1}}) == 3);
  CHECK(zeta_locality(form) == 2);
  auto back = form_from_json(form_to_json(form));
  CHECK(back.entries == form.entries);
  CHECK(back.dims == form.dims);
  auto j = form_to_json(form);
  j["entries"].push_back({{2, 0}, {1}});
  CHECK_THROWS_AS(form_from_json(j), Error);
  CHECK_THROWS_AS(form.eval({{1, 0}}), Error);
}

TEST_CASE("state-vector oracle on toy codes") {
  for (auto [name, r, s] : std::vector<std::tuple<std::string, std::size_t, std::size_t>>{
           {"code_422.json", 2, 2}, {"code_422.json", 3, 2}, {"qutrit_3.json", 2, 1}, {"steane_7.json", 2, 1}}) {
    CAPTURE(name);
    auto codes = repeat(load_code(name), r);
    auto inst = css_instance(codes, s);
    auto rep = statevector_oracle(codes, inst.form, inst.certificate, 3, 11);
    CHECK(rep.ok);
    CHECK(rep.max_error <= 1e-8);
    CHECK(rep.trials == 3);
    // negative control: dropping one gate changes the action
    auto broken = inst.form;
    broken.entries.erase(broken.entries.begin());
    CHECK_FALSE(statevector_oracle(codes, broken, inst.certificate, 3, 11).ok);
  }
  auto codes = repeat(load_code("steane_7.json"), 4);
  auto inst = css_instance(repeat(load_code("code_422.json"), 2), 1);
  CHECK_THROWS_AS(statevector_oracle(codes, inst.form, inst.certificate, 1, 1), Error);
}

TEST_CASE("alphabet reduction over GF(4)") {
  auto inst = css_instance(repeat(load_code("gf4_3.json"), 2), 1);
  REQUIRE(subrank_check_entries(inst).ok);
  auto red = alphabet_reduce(inst, 1);
  CHECK(red.form.field.q() == 2);
  for (const auto& c : red.complexes) CHECK(c.is_valid());
  auto rel = alphabet_relations(inst, red, 10000000);
  CHECK_MESSAGE(rel.ok, rel.detail);
  CHECK(rel.relations.size() == 2 * 5 + 3);
  // the reduced code is a binary CSS code on 6 qubits
  auto p = css_params(css_extract(red.complexes[0], 1), 1000000);
  CHECK(p.n == 6);
  CHECK(p.k == 2);
}

TEST_CASE("locality reduction") {
  auto inst = locality_toy();
  REQUIRE(subrank_check_entries(inst).ok);
  REQUIRE(coboundary_invariance_entries(inst, 1000000).ok);
  CHECK(zeta_locality(inst.form) == 2);
  auto red = locality_reduce(inst);
  for (const auto& c : red.complexes) CHECK(c.is_valid());
  CHECK(zeta_locality(red.form) == 1);
  auto rel = locality_relations(inst, red, 10000000);
  CHECK_MESSAGE(rel.ok, rel.detail);
  // the reduced codes still carry the gate through the state-vector oracle
  std::vector<CSSCode> codes;
  for (const auto& c : red.complexes) codes.push_back(css_extract(c, 1));
  CHECK(statevector_oracle(codes, red.form, red.certificate, 2, 5).ok);
  // the diagonal form of [[4,2,2]] has higher locality and reduces as well
  auto diag = css_instance(repeat(load_code("code_422.json"), 2), 2);
  auto red2 = locality_reduce(diag);
  auto rel2 = locality_relations(diag, red2, 10000000);
  CHECK_MESSAGE(rel2.ok, rel2.detail);
  FormInstance wrong_level = inst;
  wrong_level.level = 2;
  CHECK_THROWS_AS(locality_reduce(wrong_level), Error);
}
