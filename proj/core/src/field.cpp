#include "rmlift/field.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "rmlift/error.hpp"

namespace rmlift {

namespace {

using Poly = std::vector<std::uint32_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// remainder of a modulo monic-or-not b over GF(p)
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  Poly bb = b;
  trim(bb);
  if (bb.empty()) fail(ErrorKind::internal, "DivisionByZero", "zero polynomial divisor");
  std::uint32_t lead = bb.back();
  std::uint32_t lead_inv = 1;
  for (std::uint32_t x = 1; x < p; ++x)
    if ((static_cast<std::uint64_t>(lead) * x) % p == 1) lead_inv = x;
  while (a.size() >= bb.size()) {
    std::uint32_t c = static_cast<std::uint32_t>((static_cast<std::uint64_t>(a.back()) * lead_inv) % p);
    std::size_t shift = a.size() - bb.size();
    for (std::size_t i = 0; i < bb.size(); ++i) {
      std::uint64_t sub = (static_cast<std::uint64_t>(c) * bb[i]) % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& poly) {
  Poly f = poly;
  trim(f);
  if (f.size() < 2) return false;
  std::size_t deg = f.size() - 1;
  if (deg == 1) return true;
  // trial division by every monic polynomial of degree 1..deg/2
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = ipow(p, static_cast<std::uint32_t>(d));
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly g(d + 1);
      std::uint64_t v = idx;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

Field::Field(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> modulus) {
  if (!is_prime(p)) fail(ErrorKind::invalid_argument, "NonPrime", "p = " + std::to_string(p) + " is not prime");
  require(m >= 1, "BadDegree", "extension degree must be >= 1");
  std::uint64_t q64 = ipow(p, m);
  require(q64 <= (1u << 16), "FieldTooLarge", "q = p^m must be at most 2^16");
  require(modulus.size() == m + 1 && modulus.back() == 1, "BadModulus", "modulus must be monic of degree m");
  for (auto c : modulus) require(c < p, "BadModulus", "modulus coefficient out of range");
  if (!is_irreducible(p, modulus)) fail(ErrorKind::invalid_argument, "BadModulus", "modulus is reducible");

  auto t = std::make_shared<Tables>();
  t->p = p;
  t->m = m;
  t->q = static_cast<std::uint32_t>(q64);
  t->modulus = std::move(modulus);
  d_ = t;
  const std::uint32_t q = t->q;

  t->neg.resize(q);
  for (elem a = 0; a < q; ++a) {
    auto c = coords(a);
    for (auto& x : c) x = (p - x) % p;
    t->neg[a] = from_coords(c);
  }
  if (p != 2 && m > 1 && q <= 1024) {
    t->add_table.resize(static_cast<std::size_t>(q) * q);
    for (elem a = 0; a < q; ++a)
      for (elem b = 0; b < q; ++b) t->add_table[a * q + b] = static_cast<std::uint16_t>(add_slow(a, b));
  }

  // primitive element and exp/log tables
  t->exp.assign(q > 1 ? q - 1 : 1, 1);
  t->log.assign(q, 0);
  if (q > 2) {
    for (elem g = 2; g < q; ++g) {
      elem x = 1;
      std::uint32_t order = 0;
      do {
        x = mul_poly(x, g);
        ++order;
      } while (x != 1 && order < q);
      if (order == q - 1) {
        x = 1;
        for (std::uint32_t i = 0; i < q - 1; ++i) {
          t->exp[i] = x;
          t->log[x] = i;
          x = mul_poly(x, g);
        }
        break;
      }
    }
  }
  t->inv.assign(q, 0);
  for (elem a = 1; a < q; ++a) t->inv[a] = t->exp[(q - 1 - t->log[a]) % (q - 1)];
}

elem Field::add_slow(elem a, elem b) const {
  const std::uint32_t p = d_->p;
  elem r = 0, scale = 1;
  for (std::uint32_t i = 0; i < d_->m; ++i) {
    r += ((a % p + b % p) % p) * scale;
    a /= p;
    b /= p;
    scale *= p;
  }
  return r;
}

elem Field::mul_poly(elem a, elem b) const {
  const std::uint32_t p = d_->p, m = d_->m;
  auto ca = coords(a), cb = coords(b);
  Poly prod(2 * m, 0);
  for (std::uint32_t i = 0; i < m; ++i)
    for (std::uint32_t j = 0; j < m; ++j)
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(ca[i]) * cb[j]) % p);
  Poly r = poly_mod(prod, d_->modulus, p);
  r.resize(m, 0);
  return from_coords(r);
}

elem Field::inv(elem a) const {
  if (a == 0) fail(ErrorKind::invalid_argument, "DivisionByZero", "inverse of zero");
  return d_->inv[a];
}

elem Field::pow(elem a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  std::uint64_t s = (static_cast<std::uint64_t>(d_->log[a]) * (e % (d_->q - 1))) % (d_->q - 1);
  return d_->exp[s];
}

elem Field::from_int(std::int64_t v) const {
  std::int64_t p = d_->p;
  std::int64_t r = ((v % p) + p) % p;
  return static_cast<elem>(r);
}

std::vector<std::uint32_t> Field::coords(elem a) const {
  std::vector<std::uint32_t> c(d_->m);
  for (std::uint32_t i = 0; i < d_->m; ++i) {
    c[i] = a % d_->p;
    a /= d_->p;
  }
  return c;
}

elem Field::from_coords(const std::vector<std::uint32_t>& c) const {
  require(c.size() == d_->m, "DimensionMismatch", "coordinate vector has wrong length");
  elem r = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    require(c[i] < d_->p, "BadCoordinate", "coordinate out of range");
    r = r * d_->p + c[i];
  }
  return r;
}

elem Field::generator() const { return d_->q > 2 ? d_->exp[1] : 1; }

elem Field::basis_x() const { return d_->m >= 2 ? d_->p : generator(); }

bool Field::operator==(const Field& o) const {
  if (d_ == o.d_) return true;
  if (!d_ || !o.d_) return false;
  return d_->p == o.d_->p && d_->m == o.d_->m && d_->modulus == o.d_->modulus;
}

Field make_field(std::uint32_t p, std::uint32_t m) {
  if (!is_prime(p)) fail(ErrorKind::invalid_argument, "NonPrime", "p = " + std::to_string(p) + " is not prime");
  require(m >= 1, "BadDegree", "extension degree must be >= 1");
  std::uint64_t count = ipow(p, m);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Poly f(m + 1);
    std::uint64_t v = idx;
    for (std::uint32_t i = 0; i < m; ++i) {
      f[i] = static_cast<std::uint32_t>(v % p);
      v /= p;
    }
    f[m] = 1;
    if (is_irreducible(p, f)) return Field(p, m, f);
  }
  fail(ErrorKind::internal, "NoIrreducibleFound", "no irreducible polynomial of the requested degree");
}

elem field_trace(const Field& f, elem x, std::uint32_t sub_degree) {
  if (sub_degree == 0 || f.m() % sub_degree != 0)
    fail(ErrorKind::invalid_argument, "NotADivisor", "sub_degree must divide m");
  std::uint64_t frob = ipow(f.p(), sub_degree);
  elem acc = 0, y = x;
  for (std::uint32_t i = 0; i < f.m() / sub_degree; ++i) {
    acc = f.add(acc, y);
    y = f.pow(y, frob);
  }
  return acc;
}

SubfieldView::SubfieldView(const Field& big, std::uint32_t sub_degree) : big_(big) {
  if (sub_degree == 0 || big.m() % sub_degree != 0)
    fail(ErrorKind::invalid_argument, "NotADivisor", "sub_degree must divide m");
  small_ = make_field(big.p(), sub_degree);
  k_ = big.m() / sub_degree;
  const std::uint32_t qs = small_.q(), qb = big.q();

  // a root of the small modulus inside the big field
  elem beta = 0;
  bool found = false;
  for (elem b = 0; b < qb && !found; ++b) {
    elem acc = 0, pw = 1;
    for (auto c : small_.modulus()) {
      acc = big.add(acc, big.mul(big.from_int(c), pw));
      pw = big.mul(pw, b);
    }
    if (acc == 0) {
      beta = b;
      found = true;
    }
  }
  if (!found) fail(ErrorKind::internal, "NoEmbedding", "subfield modulus has no root");
  embed_.resize(qs);
  restrict_.assign(qb, kNone);
  for (elem s = 0; s < qs; ++s) {
    auto c = small_.coords(s);
    elem acc = 0, pw = 1;
    for (auto ci : c) {
      acc = big.add(acc, big.mul(big.from_int(ci), pw));
      pw = big.mul(pw, beta);
    }
    embed_[s] = acc;
    restrict_[acc] = s;
  }

  theta_ = big.basis_x();
  std::vector<elem> theta_pow(k_);
  theta_pow[0] = 1;
  for (std::uint32_t j = 1; j < k_; ++j) theta_pow[j] = big.mul(theta_pow[j - 1], theta_);
  coord_table_.assign(qb, {});
  std::uint64_t total = ipow(qs, k_);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<elem> c(k_);
    std::uint64_t v = idx;
    elem x = 0;
    for (std::uint32_t j = 0; j < k_; ++j) {
      c[j] = static_cast<elem>(v % qs);
      v /= qs;
      x = big.add(x, big.mul(embed_[c[j]], theta_pow[j]));
    }
    if (!coord_table_[x].empty()) fail(ErrorKind::internal, "NotABasis", "powers of X are dependent over the subfield");
    coord_table_[x] = std::move(c);
  }
}

elem SubfieldView::restrict(elem big_elem) const {
  if (restrict_[big_elem] == kNone) fail(ErrorKind::invalid_argument, "NotInSubfield", "element is outside the subfield");
  return restrict_[big_elem];
}

std::vector<elem> SubfieldView::coords(elem x) const { return coord_table_[x]; }

elem SubfieldView::from_coords(const std::vector<elem>& c) const {
  require(c.size() == k_, "DimensionMismatch", "coordinate vector has wrong length");
  elem x = 0, pw = 1;
  for (std::uint32_t j = 0; j < k_; ++j) {
    x = big_.add(x, big_.mul(embed_[c[j]], pw));
    pw = big_.mul(pw, theta_);
  }
  return x;
}

std::vector<std::vector<elem>> SubfieldView::mul_matrix(elem a) const {
  std::vector<std::vector<elem>> mat(k_, std::vector<elem>(k_));
  elem pw = 1;
  for (std::uint32_t j = 0; j < k_; ++j) {
    auto c = coords(big_.mul(a, pw));
    for (std::uint32_t i = 0; i < k_; ++i) mat[i][j] = c[i];
    pw = big_.mul(pw, theta_);
  }
  return mat;
}

elem subfield_functional(const SubfieldView& v, elem x) { return v.phi(x); }

bool Character::trivial() const {
  for (auto x : a)
    if (x % p != 0) return false;
  return true;
}

std::complex<double> character_eval(const Character& chi, const std::vector<std::uint32_t>& x) {
  if (x.size() != chi.a.size()) fail(ErrorKind::invalid_argument, "DimensionMismatch", "character and point dimensions differ");
  std::uint64_t dot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) dot = (dot + static_cast<std::uint64_t>(chi.a[i]) * x[i]) % chi.p;
  double angle = 2.0 * std::numbers::pi * static_cast<double>(dot) / static_cast<double>(chi.p);
  return {std::cos(angle), std::sin(angle)};
}

nlohmann::json field_to_json(const Field& f) {
  return nlohmann::json{{"p", f.p()}, {"m", f.m()}, {"modulus", f.modulus()}};
}

Field field_from_json(const nlohmann::json& j) {
  return Field(j.at("p").get<std::uint32_t>(), j.at("m").get<std::uint32_t>(),
               j.at("modulus").get<std::vector<std::uint32_t>>());
}

}  // namespace rmlift
