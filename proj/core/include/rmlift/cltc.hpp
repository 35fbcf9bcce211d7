#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rmlift/complex.hpp"
#include "rmlift/planted.hpp"

namespace rmlift {

// Balanced product F (x)_G F of a kind-1 planted complex with itself over the translation
// action of G = F_q^t. Level 2 is indexed by E x E x F_q^t through (e, x) x_G (e', x') -> (e, e', x + x').
struct LTCInstance {
  std::uint32_t ell = 0;
  bool relaxed = false;  // built outside ell <= Delta/4
  LiftedGraph lift;
  RMPlantedComplex factor;
  ChainComplex complex;
  std::vector<Point> points;  // level-2 basis element -> (e, e', x + x') in F_q^{t+2}
  std::uint64_t n = 0;        // dim level 2 = |E|^2 q^t
  std::uint64_t k_bound = 0;  // C(ell - 1 + t + 2, t + 2)
  std::size_t k = 0;          // dim Z_2, exact
  std::size_t locality = 0;
};

// throws infeasible naming "ℓ ≤ Δ/4" unless relax is set
LTCInstance build_cltc(const LiftedGraph& lift, std::uint32_t ell, bool relax = false);

struct ContainmentReport {
  bool ok = true;
  std::size_t monomials = 0;  // monomials of total degree < ell in t + 2 variables
  std::size_t rank = 0;       // rank of their evaluations
  std::string witness;
};
// every evaluation of a monomial of total degree < ell over the level-2 points lies in Z_2
ContainmentReport planted_containment(const LTCInstance& inst);

struct MultiplicationReport {
  bool ok = true;
  std::uint64_t products = 0;
  std::size_t basis = 0;
  std::string witness;
};
// componentwise products of every r-multiset of a Z_2(ell) basis lie in Z_2(ell');
// requires r (ell - 1) <= ell' - 1
MultiplicationReport multiplication_check(const LTCInstance& a, const LTCInstance& b, std::size_t r,
                                          std::uint64_t budget);

// exact min over nonzero c in C1 (x) F^n + F^n (x) C2 of |c| / (n min(|c1|_cols + |c2|_rows));
// infinite for the zero sum space
Ratio product_expansion(const LinearCode& c1, const LinearCode& c2, std::uint64_t budget);

// cycle expansion of level 2 by exhaustive enumeration
Ratio soundness_oracle(const LTCInstance& inst, std::uint64_t budget);

struct LTCReport {
  std::uint64_t n = 0, k_bound = 0;
  std::size_t k = 0, locality = 0;
  DistanceResult distance;
  bool rho_computed = false;
  Ratio rho2;
  ContainmentReport containment;
};
LTCReport cltc_report(const LTCInstance& inst, std::uint64_t budget);

nlohmann::json cltc_report_to_json(const LTCInstance& inst, const LTCReport& rep);

}  // namespace rmlift
