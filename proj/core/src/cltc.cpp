#include "rmlift/cltc.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "rmlift/error.hpp"

namespace rmlift {

namespace {

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// q^e, or 0 when above the budget
std::uint64_t bounded_power(std::uint64_t q, std::uint64_t e, std::uint64_t budget) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (r > budget / q) return 0;
    r *= q;
  }
  return r;
}

bool in_cycles(const Field& f, const SparseMatrix& d, const SparseVec& v) { return d.apply(f, v).empty(); }

}  // namespace

LTCInstance build_cltc(const LiftedGraph& lift, std::uint32_t ell, bool relax) {
  auto delta = lift.base().regular_degree();
  require(delta.has_value(), "NotRegular", "base graph must be regular");
  require(ell >= 1 && ell <= *delta, "BadEll", "need 1 <= ell <= Delta");
  if (!relax && 4 * static_cast<std::uint64_t>(ell) > *delta)
    fail(ErrorKind::infeasible, "Infeasible",
         "violated: ℓ ≤ Δ/4 (ell = " + std::to_string(ell) + ", Delta = " + std::to_string(*delta) + ")");
  LTCInstance inst;
  inst.ell = ell;
  inst.relaxed = 4 * static_cast<std::uint64_t>(ell) > *delta;
  inst.lift = lift;
  inst.factor = rm_planted_complex(lift, ell, 1);
  GroupAction act = planted_action(inst.factor);
  inst.complex = balanced_product(inst.factor.complex, act, inst.factor.complex, act);
  const std::uint64_t order = lift.group().size();
  const std::uint64_t ne = lift.lifted().num_edges();
  inst.n = inst.complex.dim(2);
  // orbit representatives (e, 0) x (e', s) sit at e * |Ebar| + e' q^t + s
  inst.points.reserve(inst.n);
  const MultiGraph& base = lift.base();
  for (std::uint64_t i = 0; i < inst.n; ++i) {
    std::uint64_t e = i / ne, rest = i % ne;
    Point p{base.edge_value(static_cast<std::uint32_t>(e)), base.edge_value(static_cast<std::uint32_t>(rest / order))};
    Vec x = lift.group().decode(rest % order);
    p.insert(p.end(), x.begin(), x.end());
    inst.points.push_back(std::move(p));
  }
  inst.k_bound = binom(ell - 1 + lift.t() + 2, lift.t() + 2);
  inst.k = inst.n - rank(lift.field(), inst.complex.boundary(2));
  inst.locality = locality(inst.complex);
  return inst;
}

ContainmentReport planted_containment(const LTCInstance& inst) {
  const Field& f = inst.lift.field();
  const std::size_t vars = inst.lift.t() + 2;
  SparseMatrix d = inst.complex.boundary(2);
  ContainmentReport rep;
  EchelonBasis span(f, inst.n);
  for (const auto& e : monomials_below(vars, inst.ell)) {
    Vec v = evaluate(Polynomial::monomial(f, e), inst.points);
    ++rep.monomials;
    SparseVec s = to_sparse(v);
    span.insert(s);
    if (!in_cycles(f, d, s) && rep.ok) {
      rep.ok = false;
      std::string w = "monomial exponents (";
      for (std::size_t i = 0; i < e.size(); ++i) w += (i ? "," : "") + std::to_string(e[i]);
      rep.witness = w + ") not in Z_2";
    }
  }
  rep.rank = span.rank();
  if (rep.ok && rep.rank != rep.monomials) {
    rep.ok = false;
    rep.witness = "evaluations are dependent";
  }
  return rep;
}

MultiplicationReport multiplication_check(const LTCInstance& a, const LTCInstance& b, std::size_t r,
                                          std::uint64_t budget) {
  require(r >= 1, "BadArity", "need r >= 1");
  if (r * (a.ell - 1) > b.ell - 1)
    fail(ErrorKind::invalid_argument, "ConditionViolated",
         "r(ℓ-1) ≤ ℓ'-1 fails: " + std::to_string(r * (a.ell - 1)) + " > " + std::to_string(b.ell - 1));
  require(a.n == b.n && a.points == b.points, "DimensionMismatch", "both instances must share the lift");
  const Field& f = a.lift.field();
  auto basis = kernel(f, a.complex.boundary(2));
  SparseMatrix d = b.complex.boundary(2);
  MultiplicationReport rep;
  rep.basis = basis.size();
  // r-multisets i_1 <= ... <= i_r
  std::uint64_t count = binom(basis.size() + r - 1, r);
  if (count > budget) fail(ErrorKind::budget_exceeded, "BudgetExceeded", "too many basis products");
  std::vector<std::size_t> idx(r, 0);
  std::function<void(std::size_t, std::size_t, const SparseVec&)> rec = [&](std::size_t depth, std::size_t from,
                                                                           const SparseVec& acc) {
    if (depth == r) {
      ++rep.products;
      if (!in_cycles(f, d, acc) && rep.ok) {
        rep.ok = false;
        rep.witness = "product of basis vectors";
        for (auto i : idx) rep.witness += " " + std::to_string(i);
      }
      return;
    }
    for (std::size_t i = from; i < basis.size(); ++i) {
      idx[depth] = i;
      rec(depth + 1, i, depth == 0 ? basis[i] : star_product(f, acc, basis[i]));
    }
  };
  rec(0, 0, {});
  return rep;
}

Ratio product_expansion(const LinearCode& c1, const LinearCode& c2, std::uint64_t budget) {
  const Field& f = c1.field();
  const std::size_t n = c1.length();
  require(c2.length() == n, "DimensionMismatch", "codes of equal length required");
  if (n > 8) fail(ErrorKind::budget_exceeded, "BudgetExceeded", "product expansion oracle needs n <= 8");
  const std::size_t k1 = c1.dimension(), k2 = c2.dimension();
  std::uint64_t n1 = bounded_power(f.q(), n * k1, budget), n2 = bounded_power(f.q(), n * k2, budget);
  if (n1 == 0 || n2 == 0 || n1 > budget / n2)
    fail(ErrorKind::budget_exceeded, "BudgetExceeded", "product expansion enumeration exceeds budget");
  Mat g1 = c1.generator().to_dense(), g2 = c2.generator().to_dense();
  // all matrices with columns in C1 (resp. rows in C2), with their column (row) counts
  auto enumerate = [&](const Mat& g, std::size_t k, bool columns) {
    std::uint64_t total = bounded_power(f.q(), n * k, budget);
    std::vector<std::pair<Vec, std::size_t>> out;
    out.reserve(total);
    Vec coef(n * k, 0);
    for (std::uint64_t c = 0; c < total; ++c) {
      std::uint64_t v = c;
      for (auto& x : coef) x = static_cast<elem>(v % f.q()), v /= f.q();
      Vec m(n * n, 0);
      std::size_t lines = 0;
      for (std::size_t l = 0; l < n; ++l) {
        bool nz = false;
        for (std::size_t i = 0; i < k; ++i) {
          elem a = coef[l * k + i];
          if (!a) continue;
          for (std::size_t p = 0; p < n; ++p) {
            elem add = f.mul(a, g[i][p]);
            if (!add) continue;
            // column l of a C1 matrix is the codeword; row l of a C2 matrix
            std::size_t at = columns ? p * n + l : l * n + p;
            m[at] = f.add(m[at], add);
          }
        }
        for (std::size_t p = 0; p < n && !nz; ++p) nz = m[columns ? p * n + l : l * n + p] != 0;
        lines += nz;
      }
      out.emplace_back(std::move(m), lines);
    }
    return out;
  };
  auto left = enumerate(g1, k1, true), right = enumerate(g2, k2, false);
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> best;  // c -> (|c|, min lines)
  for (const auto& [a, la] : left)
    for (const auto& [b, lb] : right) {
      Vec c(n * n);
      std::size_t w = 0;
      for (std::size_t i = 0; i < n * n; ++i) w += (c[i] = f.add(a[i], b[i])) != 0;
      std::string key(reinterpret_cast<const char*>(c.data()), c.size() * sizeof(elem));
      if (w == 0) continue;
      auto [it, fresh] = best.emplace(key, std::make_pair(w, la + lb));
      if (!fresh) it->second.second = std::min(it->second.second, la + lb);
    }
  Ratio out;
  for (const auto& [key, v] : best) {
    Ratio r{v.first, static_cast<std::uint64_t>(n) * v.second};
    if (r < out) out = r;
  }
  return out;
}

Ratio soundness_oracle(const LTCInstance& inst, std::uint64_t budget) { return cycle_expansion(inst.complex, 2, budget); }

LTCReport cltc_report(const LTCInstance& inst, std::uint64_t budget) {
  LTCReport rep;
  rep.n = inst.n;
  rep.k = inst.k;
  rep.k_bound = inst.k_bound;
  rep.locality = inst.locality;
  rep.distance = systolic_distance(inst.complex, 2, DistanceMode::lower_bound, budget);
  try {
    rep.rho2 = soundness_oracle(inst, budget);
    rep.rho_computed = true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::budget_exceeded) throw;
  }
  rep.containment = planted_containment(inst);
  return rep;
}

nlohmann::json cltc_report_to_json(const LTCInstance& inst, const LTCReport& rep) {
  nlohmann::json j{{"schema", "rmlift.cltc-report/1"},
                   {"ell", inst.ell},
                   {"relaxed", inst.relaxed},
                   {"q", inst.lift.field().q()},
                   {"t", inst.lift.t()},
                   {"num_base_edges", inst.lift.base().num_edges()},
                   {"N", rep.n},
                   {"K", rep.k},
                   {"K_bound", rep.k_bound},
                   {"w", rep.locality},
                   {"planted_containment", {{"ok", rep.containment.ok}, {"monomials", rep.containment.monomials},
                                            {"rank", rep.containment.rank}}}};
  nlohmann::json d{{"exact", rep.distance.exact}, {"method", rep.distance.method}};
  if (rep.distance.value == kInfinity)
    d["value"] = nullptr;
  else
    d["value"] = rep.distance.value;
  j["D"] = d;
  if (!rep.rho_computed)
    j["rho2"] = {{"computed", false}};
  else if (rep.rho2.infinite())
    j["rho2"] = {{"computed", true}, {"infinite", true}};
  else
    j["rho2"] = {{"computed", true}, {"num", rep.rho2.num}, {"den", rep.rho2.den}, {"value", rep.rho2.value()}};
  return j;
}

}  // namespace rmlift
