#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rmlift/error.hpp"
#include "rmlift/transversal.hpp"

namespace rmlift {

namespace {

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

Vec column_of_coboundary(const ChainComplex& c, std::size_t level, std::size_t x) {
  // delta_{level-1} e_x is row x of boundary(level)
  return to_dense(c.boundary(level).row(x), c.dim(level));
}

bool is_cocycle_dense(const ChainComplex& c, std::size_t level, const Vec& v) {
  return is_cocycle(c, level, to_sparse(v));
}

void record(RelationReport& rep, const std::string& name, bool ok, const std::string& numbers) {
  rep.relations.emplace_back(name, ok);
  rep.detail += name + " [" + numbers + "] " + (ok ? "holds" : "fails") + "; ";
  rep.ok &= ok;
}

std::string show(std::uint64_t v) { return v == kInfinity ? "inf" : std::to_string(v); }

}  // namespace

elem MultilinearForm::eval(const std::vector<Vec>& c) const {
  require(c.size() == dims.size(), "DimensionMismatch", "one vector per slot");
  for (std::size_t h = 0; h < c.size(); ++h)
    require(c[h].size() == dims[h], "DimensionMismatch", "vector length must match the slot");
  elem acc = 0;
  for (const auto& [idx, v] : entries) {
    elem p = v;
    for (std::size_t h = 0; h < idx.size() && p; ++h) p = field.mul(p, c[h][idx[h]]);
    acc = field.add(acc, p);
  }
  return acc;
}

void MultilinearForm::add(const std::vector<std::uint32_t>& idx, elem v) {
  if (!v) return;
  auto [it, inserted] = entries.emplace(idx, v);
  if (inserted) return;
  it->second = field.add(it->second, v);
  if (!it->second) entries.erase(it);
}

std::size_t zeta_locality(const MultilinearForm& form) {
  std::size_t best = 0;
  for (std::size_t h = 0; h < form.r(); ++h) {
    std::vector<std::size_t> count(form.dims[h], 0);
    for (const auto& [idx, v] : form.entries) best = std::max(best, ++count[idx[h]]);
  }
  return best;
}

MultilinearForm sum_of_products(const Field& f, const std::vector<std::size_t>& dims,
                                const std::vector<std::vector<Vec>>& lambda) {
  MultilinearForm form;
  form.field = f;
  form.dims = dims;
  const std::size_t r = dims.size();
  for (const auto& term : lambda) {
    require(term.size() == r, "DimensionMismatch", "one functional per slot");
    std::vector<SparseVec> nz;
    for (std::size_t h = 0; h < r; ++h) {
      require(term[h].size() == dims[h], "DimensionMismatch", "functional length must match the slot");
      nz.push_back(to_sparse(term[h]));
    }
    std::vector<std::uint32_t> key(r);
    std::function<void(std::size_t, elem)> rec = [&](std::size_t h, elem acc) {
      if (h == r) {
        form.add(key, acc);
        return;
      }
      for (auto [i, v] : nz[h]) {
        key[h] = i;
        rec(h + 1, f.mul(acc, v));
      }
    };
    rec(0, 1);
  }
  return form;
}

InvarianceReport coboundary_invariance_entries(const FormInstance& inst, std::uint64_t budget) {
  const std::size_t r = inst.complexes.size(), level = inst.level;
  require(inst.hprime.size() == r && inst.form.r() == r, "DimensionMismatch", "one complex, H' and slot per factor");
  require(level >= 1, "BadLevel", "forms on level 0 have no coboundaries to test");
  InvarianceReport rep;
  std::vector<std::vector<Vec>> cob(r);
  for (std::size_t h = 0; h < r; ++h)
    for (std::size_t x = 0; x < inst.complexes[h].dim(level - 1); ++x)
      cob[h].push_back(column_of_coboundary(inst.complexes[h], level, x));
  for (std::uint32_t S = 1; S < (1u << r); ++S) {
    std::uint64_t count = 1;
    for (std::size_t h = 0; h < r; ++h) count *= ((S >> h) & 1) ? cob[h].size() : inst.hprime[h].size();
    if (count * std::max<std::size_t>(inst.form.entries.size(), 1) > budget) {
      rep.complete = false;
      continue;
    }
    ++rep.subsets;
    std::vector<Vec> tuple(r);
    for (std::uint64_t c = 0; c < count; ++c) {
      std::uint64_t v = c;
      for (std::size_t h = r; h-- > 0;) {
        const auto& pool = ((S >> h) & 1) ? cob[h] : inst.hprime[h];
        tuple[h] = pool[v % pool.size()];
        v /= pool.size();
      }
      ++rep.tuples;
      if (inst.form.eval(tuple) != 0) {
        rep.ok = false;
        if (rep.witness.empty()) rep.witness = "S mask " + std::to_string(S) + ", tuple " + std::to_string(c);
      }
    }
  }
  return rep;
}

SubrankReport subrank_check_entries(const FormInstance& inst) {
  const std::size_t r = inst.complexes.size();
  require(inst.certificate.size() == r, "DimensionMismatch", "one certificate family per slot");
  SubrankReport rep;
  rep.s = inst.certificate[0].size();
  for (const auto& c : inst.certificate) require(c.size() == rep.s, "DimensionMismatch", "equal certificate sizes");
  for (std::size_t h = 0; h < r; ++h)
    for (const auto& v : inst.certificate[h])
      if (!is_cocycle_dense(inst.complexes[h], inst.level, v)) {
        rep.ok = false;
        rep.witness = "certificate vector of slot " + std::to_string(h + 1) + " is not a cocycle";
        return rep;
      }
  std::uint64_t total = ipow(rep.s, r);
  std::mt19937_64 rng(rep.seed);
  rep.exhaustive = total <= 100000;
  std::uint64_t n = rep.exhaustive ? total : 1000;
  std::vector<std::size_t> js(r);
  std::vector<Vec> tuple(r);
  for (std::uint64_t c = 0; c < n; ++c) {
    if (rep.exhaustive) {
      std::uint64_t v = c;
      for (std::size_t h = r; h-- > 0;) js[h] = v % rep.s, v /= rep.s;
    } else {
      for (auto& j : js) j = rng() % rep.s;
      if (c % 2 == 0) std::fill(js.begin(), js.end(), js[0]);
    }
    for (std::size_t h = 0; h < r; ++h) tuple[h] = inst.certificate[h][js[h]];
    bool diag = std::all_of(js.begin(), js.end(), [&](std::size_t j) { return j == js[0]; });
    elem got = inst.form.eval(tuple);
    ++rep.checked;
    if (got != (diag ? 1u : 0u)) {
      rep.ok = false;
      if (rep.witness.empty()) rep.witness = "tuple " + std::to_string(c) + " gives " + std::to_string(got);
    }
  }
  return rep;
}

FormInstance diagonal_form(const std::vector<ChainComplex>& complexes, std::size_t level, std::size_t s) {
  require(!complexes.empty(), "DimensionMismatch", "need at least one complex");
  const Field& f = complexes[0].field();
  const std::size_t r = complexes.size();
  FormInstance inst;
  inst.complexes = complexes;
  inst.level = level;
  std::vector<std::size_t> dims;
  std::vector<std::vector<Vec>> lambda(s, std::vector<Vec>(r));
  for (std::size_t h = 0; h < r; ++h) {
    const ChainComplex& c = complexes[h];
    const std::size_t n = c.dim(level);
    dims.push_back(n);
    auto co = cohomology_basis(c, level);
    auto ho = homology_basis(c, level);
    require(co.size() >= s, "Infeasible", "fewer cohomology classes than the requested s");
    // cycles dual to the cocycle representatives: lambda_j = sum_i Pinv[j][i] z_i
    Mat pairing(co.size(), Vec(co.size(), 0));
    for (std::size_t i = 0; i < ho.size(); ++i)
      for (std::size_t j = 0; j < co.size(); ++j) pairing[j][i] = dot(f, co[j], ho[i]);
    auto inv = dense_inverse(f, pairing);
    require(inv.has_value(), "Internal", "homology and cohomology pairing is degenerate");
    std::vector<Vec> hp, cert;
    for (const auto& u : co) hp.push_back(to_dense(u, n));
    for (std::size_t j = 0; j < s; ++j) {
      cert.push_back(hp[j]);
      Vec l(n, 0);
      for (std::size_t i = 0; i < ho.size(); ++i) {
        elem cf = (*inv)[i][j];
        if (!cf) continue;
        for (auto [x, v] : ho[i]) l[x] = f.add(l[x], f.mul(cf, v));
      }
      lambda[j][h] = std::move(l);
    }
    inst.hprime.push_back(std::move(hp));
    inst.certificate.push_back(std::move(cert));
  }
  inst.form = sum_of_products(f, dims, lambda);
  return inst;
}

FormInstance alphabet_reduce(const FormInstance& inst, std::uint32_t sub_degree) {
  const Field& big = inst.form.field;
  SubfieldView view(big, sub_degree);
  const Field& small = view.small();
  const std::size_t k = view.degree();
  FormInstance out;
  out.level = inst.level;
  // complexes: every entry a becomes the block of multiplication by a on coordinate columns
  std::vector<std::vector<std::vector<elem>>> mul(big.q());
  for (elem a = 0; a < big.q(); ++a) mul[a] = view.mul_matrix(a);
  for (const auto& c : inst.complexes) {
    std::vector<std::size_t> dims;
    for (auto d : c.dims()) dims.push_back(d * k);
    std::vector<SparseMatrix> bds;
    for (std::size_t i = 1; i < c.num_levels(); ++i) {
      std::vector<Triplet> trip;
      const SparseMatrix& b = c.boundary(i);
      for (std::size_t y = 0; y < b.rows(); ++y)
        for (auto [x, a] : b.row(y))
          for (std::size_t ii = 0; ii < k; ++ii)
            for (std::size_t jj = 0; jj < k; ++jj) {
              elem v = mul[a][ii][jj];
              // delta~[(x,ii)][(y,jj)] = M_a[ii][jj]
              if (v)
                trip.emplace_back(static_cast<std::uint32_t>(y * k + jj), static_cast<std::uint32_t>(x * k + ii), v);
            }
      bds.push_back(SparseMatrix::from_triplets(small, dims[i - 1], dims[i], trip));
    }
    out.complexes.emplace_back(small, dims, bds);
  }
  const std::size_t r = inst.form.r();
  out.form.field = small;
  for (auto d : inst.form.dims) out.form.dims.push_back(d * k);
  std::vector<elem> theta_pow(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<elem> e(k, 0);
    e[i] = 1;
    theta_pow[i] = view.from_coords(e);
  }
  std::uint64_t combos = ipow(k, r);
  for (const auto& [idx, v] : inst.form.entries)
    for (std::uint64_t c = 0; c < combos; ++c) {
      std::uint64_t w = c;
      elem prod = v;
      std::vector<std::uint32_t> key(r);
      for (std::size_t h = r; h-- > 0;) {
        std::size_t i = w % k;
        w /= k;
        prod = big.mul(prod, theta_pow[i]);
        key[h] = static_cast<std::uint32_t>(idx[h] * k + i);
      }
      out.form.add(key, view.phi(prod));
    }
  auto spread = [&](const Vec& v, elem scale) {
    Vec o(v.size() * k);
    for (std::size_t x = 0; x < v.size(); ++x) {
      auto cs = view.coords(big.mul(scale, v[x]));
      for (std::size_t i = 0; i < k; ++i) o[x * k + i] = cs[i];
    }
    return o;
  };
  for (const auto& gens : inst.hprime) {
    std::vector<Vec> g;
    for (const auto& v : gens)
      for (std::size_t i = 0; i < k; ++i) g.push_back(spread(v, theta_pow[i]));
    out.hprime.push_back(std::move(g));
  }
  for (const auto& cert : inst.certificate) {
    std::vector<Vec> g;
    for (const auto& v : cert) g.push_back(spread(v, 1));
    out.certificate.push_back(std::move(g));
  }
  return out;
}

RelationReport alphabet_relations(const FormInstance& before, const FormInstance& after, std::uint64_t budget) {
  RelationReport rep;
  const std::size_t k = after.complexes[0].dim(0) / std::max<std::size_t>(before.complexes[0].dim(0), 1);
  const std::size_t lv = before.level;
  for (std::size_t h = 0; h < before.complexes.size(); ++h) {
    const ChainComplex& a = before.complexes[h];
    const ChainComplex& b = after.complexes[h];
    std::string tag = " (slot " + std::to_string(h + 1) + ")";
    bool dims_ok = a.num_levels() == b.num_levels();
    for (std::size_t i = 0; i < a.num_levels() && dims_ok; ++i) dims_ok = b.dim(i) == k * a.dim(i);
    record(rep, "dim C~ = k dim C" + tag, dims_ok, "k = " + std::to_string(k));
    auto ha = cohomology_dim(a, lv), hb = cohomology_dim(b, lv);
    record(rep, "dim H~ = k dim H" + tag, hb == k * ha, std::to_string(hb) + " = " + std::to_string(k) + " * " +
                                                            std::to_string(ha));
    auto ca = cosystolic_distance(a, lv, DistanceMode::exact, budget);
    auto cb = cosystolic_distance(b, lv, DistanceMode::exact, budget);
    record(rep, "d^i(C~) >= d^i(C)" + tag, ca.exact && cb.exact && cb.value >= ca.value,
           show(cb.value) + " >= " + show(ca.value));
    auto sa = systolic_distance(a, lv, DistanceMode::exact, budget);
    auto sb = systolic_distance(b, lv, DistanceMode::exact, budget);
    record(rep, "d_i(C~) >= d_i(C)" + tag, sa.exact && sb.exact && sb.value >= sa.value,
           show(sb.value) + " >= " + show(sa.value));
    auto la = locality(a), lb = locality(b);
    record(rep, "w(C~) <= k w(C)" + tag, lb <= k * la, std::to_string(lb) + " <= " + std::to_string(k * la));
  }
  auto za = zeta_locality(before.form), zb = zeta_locality(after.form);
  std::uint64_t bound = ipow(k, before.form.r() - 1) * za;
  record(rep, "w(zeta~) <= k^{r-1} w(zeta)", zb <= bound, std::to_string(zb) + " <= " + std::to_string(bound));
  auto sr = subrank_check_entries(after);
  record(rep, "subrank certificate", sr.ok && sr.s == subrank_check_entries(before).s, "s = " + std::to_string(sr.s));
  auto inv = coboundary_invariance_entries(after, budget);
  record(rep, "coboundary invariance", inv.ok && inv.complete, std::to_string(inv.tuples) + " tuples");
  return rep;
}

FormInstance locality_reduce(const FormInstance& inst) {
  require(inst.level == 1, "BadLevel", "the locality reduction acts on level 1");
  const Field& f = inst.form.field;
  const std::size_t r = inst.form.r();
  std::size_t w = std::max<std::size_t>(zeta_locality(inst.form), 1);
  FormInstance out;
  out.level = 1;
  // label of an entry at slot h: its rank among the entries that contain the same index
  std::vector<std::vector<std::size_t>> seen(r);
  for (std::size_t h = 0; h < r; ++h) seen[h].assign(inst.form.dims[h], 0);
  out.form.field = f;
  for (auto d : inst.form.dims) out.form.dims.push_back(d * w);
  for (const auto& [idx, v] : inst.form.entries) {
    std::vector<std::uint32_t> key(r);
    for (std::size_t h = 0; h < r; ++h) key[h] = static_cast<std::uint32_t>(idx[h] * w + seen[h][idx[h]]++);
    out.form.add(key, v);
  }
  for (const auto& c : inst.complexes) {
    require(c.num_levels() == 3, "BadComplex", "the locality reduction needs 2-dimensional complexes");
    const std::size_t n0 = c.dim(0), n1 = c.dim(1), n2 = c.dim(2);
    std::vector<std::size_t> dims{n0, n1 * w, n2 + n1 * (w - 1)};
    // boundary(1) = delta~0^T with delta~0 = delta0 (x) all-ones
    std::vector<Triplet> t1, t2;
    const SparseMatrix& b1 = c.boundary(1);
    for (std::size_t y = 0; y < n0; ++y)
      for (auto [x, v] : b1.row(y))
        for (std::size_t cc = 0; cc < w; ++cc) t1.emplace_back(y, static_cast<std::uint32_t>(x * w + cc), v);
    // boundary(2) = delta~1^T: the old checks read copy 0, the new ones tie copies c and c+1
    const SparseMatrix& b2 = c.boundary(2);
    for (std::size_t x = 0; x < n1; ++x) {
      for (auto [z, v] : b2.row(x)) t2.emplace_back(static_cast<std::uint32_t>(x * w), z, v);
      for (std::size_t cc = 0; cc + 1 < w; ++cc) {
        auto row = static_cast<std::uint32_t>(n2 + x * (w - 1) + cc);
        t2.emplace_back(static_cast<std::uint32_t>(x * w + cc), row, 1);
        t2.emplace_back(static_cast<std::uint32_t>(x * w + cc + 1), row, f.neg(1));
      }
    }
    out.complexes.emplace_back(f, dims,
                               std::vector<SparseMatrix>{SparseMatrix::from_triplets(f, dims[0], dims[1], t1),
                                                         SparseMatrix::from_triplets(f, dims[1], dims[2], t2)});
  }
  auto lift_vec = [&](const Vec& v) {
    Vec o(v.size() * w);
    for (std::size_t x = 0; x < v.size(); ++x)
      for (std::size_t cc = 0; cc < w; ++cc) o[x * w + cc] = v[x];
    return o;
  };
  for (const auto& gens : inst.hprime) {
    std::vector<Vec> g;
    for (const auto& v : gens) g.push_back(lift_vec(v));
    out.hprime.push_back(std::move(g));
  }
  for (const auto& cert : inst.certificate) {
    std::vector<Vec> g;
    for (const auto& v : cert) g.push_back(lift_vec(v));
    out.certificate.push_back(std::move(g));
  }
  return out;
}

RelationReport locality_relations(const FormInstance& before, const FormInstance& after, std::uint64_t budget) {
  RelationReport rep;
  const std::size_t w = std::max<std::size_t>(zeta_locality(before.form), 1);
  for (std::size_t h = 0; h < before.complexes.size(); ++h) {
    const ChainComplex& a = before.complexes[h];
    const ChainComplex& b = after.complexes[h];
    std::string tag = " (slot " + std::to_string(h + 1) + ")";
    record(rep, "dim C~^1 = w dim C^1" + tag, b.dim(1) == w * a.dim(1),
           std::to_string(b.dim(1)) + " = " + std::to_string(w) + " * " + std::to_string(a.dim(1)));
    auto ha = cohomology_dim(a, 1), hb = cohomology_dim(b, 1);
    record(rep, "dim H~^1 = dim H^1" + tag, ha == hb, std::to_string(hb) + " = " + std::to_string(ha));
    auto ca = cosystolic_distance(a, 1, DistanceMode::exact, budget);
    auto cb = cosystolic_distance(b, 1, DistanceMode::exact, budget);
    bool cos_ok = ca.exact && cb.exact && (ca.value == kInfinity ? cb.value == kInfinity : cb.value == w * ca.value);
    record(rep, "d^1(C~) = w d^1(C)" + tag, cos_ok, show(cb.value) + " = " + std::to_string(w) + " * " + show(ca.value));
    auto sa = systolic_distance(a, 1, DistanceMode::exact, budget);
    auto sb = systolic_distance(b, 1, DistanceMode::exact, budget);
    record(rep, "d_1(C~) >= d_1(C)" + tag, sa.exact && sb.exact && sb.value >= sa.value,
           show(sb.value) + " >= " + show(sa.value));
    auto la = locality(a), lb = locality(b);
    std::size_t bound = std::max(w * la, la + 2);
    record(rep, "w(C~) <= max(w w(C), w(C) + 2)" + tag, lb <= bound,
           std::to_string(lb) + " <= " + std::to_string(bound));
  }
  auto zb = zeta_locality(after.form);
  record(rep, "w(zeta~) = 1", zb <= 1, std::to_string(zb));
  auto sa = subrank_check_entries(before), sb = subrank_check_entries(after);
  record(rep, "subrank preserved", sa.ok && sb.ok && sa.s == sb.s, "s = " + std::to_string(sb.s));
  auto inv = coboundary_invariance_entries(after, budget);
  record(rep, "coboundary invariance", inv.ok && inv.complete, std::to_string(inv.tuples) + " tuples");
  return rep;
}

CSSCode css_extract(const ChainComplex& c, std::size_t level) {
  require(level >= 1 && level + 1 < c.num_levels(), "BadLevel", "the code level needs both neighbours");
  return {c.field(), c.boundary(level), c.boundary(level + 1).transpose()};
}

ChainComplex css_complex(const CSSCode& code) { return complex_from_css(code.field, code.hx, code.hz); }

CSSParams css_params(const CSSCode& code, std::uint64_t budget) {
  ChainComplex c = css_complex(code);
  CSSParams p;
  p.n = code.n();
  p.k = cohomology_dim(c, 1);
  auto dz = systolic_distance(c, 1, DistanceMode::exact, budget);
  auto dx = cosystolic_distance(c, 1, DistanceMode::exact, budget);
  p.dz = dz.value;
  p.dx = dx.value;
  p.d = std::min(p.dx, p.dz);
  p.exact = dz.exact && dx.exact;
  return p;
}

nlohmann::json css_to_json(const CSSCode& code) {
  return {{"schema", "rmlift.css/1"},
          {"field", field_to_json(code.field)},
          {"hx", sparse_to_json(code.field, code.hx)},
          {"hz", sparse_to_json(code.field, code.hz)}};
}

CSSCode css_from_json(const nlohmann::json& j) {
  try {
    require(j.at("schema") == "rmlift.css/1", "BadSchema", "expected rmlift.css/1");
    CSSCode code;
    code.field = field_from_json(j.at("field"));
    code.hx = sparse_from_json(code.field, j.at("hx"));
    code.hz = sparse_from_json(code.field, j.at("hz"));
    require(code.hx.cols() == code.hz.cols(), "DimensionMismatch", "H_X and H_Z need the same length");
    require(code.hx.multiply(code.field, code.hz.transpose()).nnz() == 0, "NotCSS", "H_X H_Z^T must vanish");
    return code;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::invalid_argument, "BadJson", e.what());
  }
}

StatevectorReport statevector_oracle(const std::vector<CSSCode>& codes, const MultilinearForm& form,
                                     const std::vector<std::vector<Vec>>& certificate, std::size_t trials,
                                     std::uint64_t seed, double tol) {
  const std::size_t r = codes.size();
  require(r >= 1 && form.r() == r && certificate.size() == r, "DimensionMismatch", "one code per slot");
  const Field& f = form.field;
  require(f.m() == 1, "NotPrime", "the state-vector oracle needs a prime field");
  const std::size_t q = f.q();
  std::size_t total_n = 0;
  for (const auto& c : codes) total_n += c.n();
  double log2dim = static_cast<double>(total_n) * std::log2(static_cast<double>(q));
  require(log2dim <= 22.0 + 1e-9, "BudgetExceeded", "state vector larger than 2^22 amplitudes");
  const std::size_t s = certificate[0].size();
  std::uint64_t dim = ipow(q, total_n);
  // digit offsets: code 0 occupies the most significant digits
  std::vector<std::uint64_t> code_stride(r);
  {
    std::uint64_t stride = 1;
    for (std::size_t h = r; h-- > 0;) {
      code_stride[h] = stride;
      stride *= ipow(q, codes[h].n());
    }
  }
  auto to_index = [&](const Vec& v) {
    std::uint64_t x = 0;
    for (auto d : v) x = x * q + d;
    return x;
  };
  // encoded basis states: coset y.v + rowspace(H_X), uniform amplitudes
  std::vector<std::vector<std::vector<std::uint64_t>>> enc(r);
  for (std::size_t h = 0; h < r; ++h) {
    const std::size_t n = codes[h].n();
    auto rows = row_space(f, codes[h].hx);
    std::vector<Vec> stab{Vec(n, 0)};
    for (const auto& g : rows) {
      std::vector<Vec> next;
      for (const auto& st : stab)
        for (elem c = 0; c < q; ++c) {
          Vec v = st;
          for (auto [i, a] : g) v[i] = f.add(v[i], f.mul(c, a));
          next.push_back(std::move(v));
        }
      stab = std::move(next);
    }
    enc[h].resize(ipow(q, s));
    for (std::uint64_t y = 0; y < enc[h].size(); ++y) {
      Vec base(n, 0);
      std::uint64_t yv = y;
      for (std::size_t j = s; j-- > 0;) {
        elem c = static_cast<elem>(yv % q);
        yv /= q;
        for (std::size_t i = 0; i < n; ++i) base[i] = f.add(base[i], f.mul(c, certificate[h][j][i]));
      }
      for (const auto& st : stab) {
        Vec v = base;
        for (std::size_t i = 0; i < n; ++i) v[i] = f.add(v[i], st[i]);
        enc[h][y].push_back(to_index(v));
      }
    }
  }
  const double pi = std::acos(-1.0);
  std::vector<std::complex<double>> omega(q);
  for (std::size_t a = 0; a < q; ++a) omega[a] = std::polar(1.0, 2 * pi * static_cast<double>(a) / q);
  std::uint64_t logical = ipow(q, s * r);
  StatevectorReport rep;
  rep.amplitudes = dim;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::vector<std::complex<double>> psi(logical);
    double norm = 0;
    for (auto& z : psi) {
      z = {gauss(rng), gauss(rng)};
      norm += std::norm(z);
    }
    for (auto& z : psi) z /= std::sqrt(norm);
    // phase of the logical C^{r-1}Z on certificate pairs: omega^{sum_j prod_h y_{h,j}}
    auto encode = [&](bool logical_gate) {
      std::vector<std::complex<double>> state(dim, 0.0);
      for (std::uint64_t Y = 0; Y < logical; ++Y) {
        std::vector<std::uint64_t> ys(r);
        std::uint64_t v = Y;
        for (std::size_t h = r; h-- > 0;) ys[h] = v % ipow(q, s), v /= ipow(q, s);
        std::complex<double> amp = psi[Y];
        if (logical_gate) {
          elem phase = 0;
          for (std::size_t j = 0; j < s; ++j) {
            elem p = 1;
            for (std::size_t h = 0; h < r; ++h) p = f.mul(p, static_cast<elem>((ys[h] / ipow(q, s - 1 - j)) % q));
            phase = f.add(phase, p);
          }
          amp *= omega[phase];
        }
        double scale = 1;
        for (std::size_t h = 0; h < r; ++h) scale /= std::sqrt(static_cast<double>(enc[h][ys[h]].size()));
        std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t h, std::uint64_t idx) {
          if (h == r) {
            state[idx] += amp * scale;
            return;
          }
          for (auto x : enc[h][ys[h]]) rec(h + 1, idx + x * code_stride[h]);
        };
        rec(0, 0);
      }
      return state;
    };
    auto state = encode(false);
    auto expected = encode(true);
    // one physical gate per form entry: phase omega^{a prod_h x_h} on the addressed qudits
    std::vector<std::vector<std::uint64_t>> digit_stride(r);
    for (std::size_t h = 0; h < r; ++h) {
      std::size_t n = codes[h].n();
      digit_stride[h].resize(n);
      for (std::size_t i = 0; i < n; ++i) digit_stride[h][i] = code_stride[h] * ipow(q, n - 1 - i);
    }
    for (const auto& [idx, a] : form.entries)
      for (std::uint64_t x = 0; x < dim; ++x) {
        if (state[x] == 0.0) continue;
        elem p = a;
        for (std::size_t h = 0; h < r && p; ++h) p = f.mul(p, static_cast<elem>((x / digit_stride[h][idx[h]]) % q));
        if (p) state[x] *= omega[p];
      }
    for (std::uint64_t x = 0; x < dim; ++x) rep.max_error = std::max(rep.max_error, std::abs(state[x] - expected[x]));
    ++rep.trials;
  }
  rep.ok = rep.max_error <= tol;
  return rep;
}

nlohmann::json form_to_json(const MultilinearForm& form) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [idx, v] : form.entries) entries.push_back({idx, form.field.coords(v)});
  return {{"schema", "rmlift.form/1"}, {"field", field_to_json(form.field)}, {"dims", form.dims}, {"entries", entries}};
}

MultilinearForm form_from_json(const nlohmann::json& j) {
  try {
    require(j.at("schema") == "rmlift.form/1", "BadSchema", "expected rmlift.form/1");
    MultilinearForm form;
    form.field = field_from_json(j.at("field"));
    form.dims = j.at("dims").get<std::vector<std::size_t>>();
    for (const auto& e : j.at("entries")) {
      auto idx = e.at(0).get<std::vector<std::uint32_t>>();
      require(idx.size() == form.dims.size(), "DimensionMismatch", "entry arity must match the form");
      for (std::size_t h = 0; h < idx.size(); ++h)
        require(idx[h] < form.dims[h], "DimensionMismatch", "entry index out of range");
      form.add(idx, form.field.from_coords(e.at(1).get<std::vector<std::uint32_t>>()));
    }
    return form;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::invalid_argument, "BadJson", e.what());
  }
}

nlohmann::json factored_form_to_json(const ProductCodeFamily& fam, const Vec& alpha) {
  const Field& f = fam.lift.field();
  nlohmann::json a = nlohmann::json::array();
  for (auto v : alpha) a.push_back(f.coords(v));
  std::size_t nonzero = static_cast<std::size_t>(std::count_if(alpha.begin(), alpha.end(), [](elem v) { return v; }));
  return {{"schema", "rmlift.factored-form/1"},
          {"field", field_to_json(f)},
          {"r", fam.r},
          {"threshold", fam.threshold},
          {"cube_form", "sum over permutations of signed path products"},
          {"alpha_per_coordinate", a},
          {"alpha_support", nonzero}};
}

}  // namespace rmlift
