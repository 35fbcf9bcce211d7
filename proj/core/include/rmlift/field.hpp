#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace rmlift {

// Field elements are integers in [0, q): the polynomial-basis coordinates
// c_0 + c_1 p + ... + c_{m-1} p^{m-1}. Index order is the enumeration order of GF(q).
using elem = std::uint32_t;

bool is_prime(std::uint64_t n);

class Field {
 public:
  Field() = default;
  Field(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> modulus);

  std::uint32_t p() const { return d_->p; }
  std::uint32_t m() const { return d_->m; }
  std::uint32_t q() const { return d_->q; }
  const std::vector<std::uint32_t>& modulus() const { return d_->modulus; }
  bool valid() const { return d_ != nullptr; }

  elem add(elem a, elem b) const {
    if (d_->p == 2) return a ^ b;
    if (d_->m == 1) {
      elem s = a + b;
      return s >= d_->p ? s - d_->p : s;
    }
    if (!d_->add_table.empty()) return d_->add_table[a * d_->q + b];
    return add_slow(a, b);
  }
  elem neg(elem a) const { return d_->neg[a]; }
  elem sub(elem a, elem b) const { return add(a, d_->neg[b]); }
  elem mul(elem a, elem b) const {
    if (a == 0 || b == 0) return 0;
    std::uint32_t s = d_->log[a] + d_->log[b];
    if (s >= d_->q - 1) s -= d_->q - 1;
    return d_->exp[s];
  }
  elem inv(elem a) const;
  elem div(elem a, elem b) const { return mul(a, inv(b)); }
  elem pow(elem a, std::uint64_t e) const;
  // a*b + c
  elem fma(elem a, elem b, elem c) const { return add(mul(a, b), c); }

  elem from_int(std::int64_t v) const;
  std::vector<std::uint32_t> coords(elem a) const;
  elem from_coords(const std::vector<std::uint32_t>& c) const;
  elem generator() const;
  // X in the polynomial basis (p when m >= 2, the primitive root for prime fields).
  elem basis_x() const;

  bool operator==(const Field& o) const;
  bool operator!=(const Field& o) const { return !(*this == o); }

 private:
  struct Tables {
    std::uint32_t p = 0, m = 0, q = 0;
    std::vector<std::uint32_t> modulus;
    std::vector<elem> exp, log, neg, inv;
    std::vector<std::uint16_t> add_table;
  };
  elem add_slow(elem a, elem b) const;
  elem mul_poly(elem a, elem b) const;
  std::shared_ptr<const Tables> d_;
};

// Lexicographically least monic irreducible modulus of degree m.
Field make_field(std::uint32_t p, std::uint32_t m);

bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& poly);

// Sum of the Galois orbit x^{(p^d)^i}; the result lies in GF(p^d).
elem field_trace(const Field& f, elem x, std::uint32_t sub_degree);

// GF(p^d) inside GF(p^m): embedding of the standalone field and coordinates over the subfield.
class SubfieldView {
 public:
  SubfieldView(const Field& big, std::uint32_t sub_degree);

  const Field& big() const { return big_; }
  const Field& small() const { return small_; }
  std::uint32_t degree() const { return k_; }  // [GF(p^m) : GF(p^d)]

  elem embed(elem small_elem) const { return embed_[small_elem]; }
  bool in_subfield(elem big_elem) const { return restrict_[big_elem] != kNone; }
  elem restrict(elem big_elem) const;
  // coordinates of x in the basis 1, theta, ..., theta^{k-1} with coefficients in the subfield
  std::vector<elem> coords(elem x) const;
  elem from_coords(const std::vector<elem>& c) const;
  // subfield-linear functional: coefficient of 1 in the basis above, so phi(1) = 1
  elem phi(elem x) const { return coords(x)[0]; }
  // matrix (k x k over the subfield) of multiplication by a, acting on coordinate columns
  std::vector<std::vector<elem>> mul_matrix(elem a) const;

 private:
  static constexpr elem kNone = 0xffffffffu;
  Field big_, small_;
  std::uint32_t k_ = 1;
  elem theta_ = 0;
  std::vector<elem> embed_, restrict_;
  std::vector<std::vector<elem>> coord_table_;
};

elem subfield_functional(const SubfieldView& v, elem x);

struct Character {
  std::uint32_t p = 2;
  std::vector<std::uint32_t> a;
  bool trivial() const;
};

std::complex<double> character_eval(const Character& chi, const std::vector<std::uint32_t>& x);

nlohmann::json field_to_json(const Field& f);
Field field_from_json(const nlohmann::json& j);

}  // namespace rmlift
