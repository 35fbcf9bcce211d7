#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rmlift/field.hpp"

namespace rmlift {

using Vec = std::vector<elem>;
using Mat = std::vector<Vec>;  // dense, row-major
// sorted by index, no explicit zeros
using SparseVec = std::vector<std::pair<std::uint32_t, elem>>;
using Triplet = std::tuple<std::uint32_t, std::uint32_t, elem>;

std::size_t weight(const Vec& v);
SparseVec to_sparse(const Vec& v);
Vec to_dense(const SparseVec& v, std::size_t n);
// a + c*b
SparseVec axpy(const Field& f, const SparseVec& a, elem c, const SparseVec& b);
elem dot(const Field& f, const SparseVec& a, const SparseVec& b);
elem dot(const Field& f, const Vec& a, const Vec& b);

class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

  static SparseMatrix from_triplets(const Field& f, std::size_t rows, std::size_t cols,
                                    const std::vector<Triplet>& entries);
  static SparseMatrix from_dense(const Mat& m, std::size_t cols);
  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const SparseVec& row(std::size_t i) const { return data_[i]; }
  void set_row(std::size_t i, SparseVec r) { data_[i] = std::move(r); }
  elem at(std::size_t i, std::size_t j) const;

  SparseMatrix transpose() const;
  Vec apply(const Field& f, const Vec& x) const;
  SparseVec apply(const Field& f, const SparseVec& x) const;
  SparseMatrix multiply(const Field& f, const SparseMatrix& b) const;
  SparseMatrix kron(const Field& f, const SparseMatrix& b) const;
  SparseMatrix scaled(const Field& f, elem c) const;

  bool is_zero() const;
  std::size_t nnz() const;
  std::size_t max_row_weight() const;
  std::size_t max_col_weight() const;
  Mat to_dense() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<SparseVec> data_;
};

// Incremental row-echelon basis of a subspace of GF(q)^n. Pivots follow a fixed column
// order (defaults to the identity order).
class EchelonBasis {
 public:
  EchelonBasis(const Field& f, std::size_t n, std::vector<std::uint32_t> column_order = {});

  // returns true when v is independent of the current span
  bool insert(const SparseVec& v);
  bool contains(const SparseVec& v) const;
  // canonical remainder of v modulo the span, in original column indices
  SparseVec reduce(const SparseVec& v) const;
  std::size_t rank() const { return rows_.size(); }
  std::size_t dim() const { return n_; }
  // reduced rows in original column indices, sorted by pivot order
  std::vector<SparseVec> basis() const;
  // basis of the orthogonal complement {x : <x, v> = 0 for all v in span}
  std::vector<SparseVec> complement_kernel() const;
  std::vector<std::uint32_t> pivot_columns() const;

 private:
  SparseVec to_pos(const SparseVec& v) const;
  SparseVec from_pos(const SparseVec& v) const;
  SparseVec reduce_pos(SparseVec v) const;
  void make_reduced();

  Field f_;
  std::size_t n_;
  std::vector<std::uint32_t> pos_of_, col_of_;
  std::unordered_map<std::uint32_t, std::size_t> pivot_row_;  // pivot position -> row
  std::vector<SparseVec> rows_;                              // in position space
  bool reduced_ = true;
};

// column order by ascending column weight
std::vector<std::uint32_t> weight_order(const SparseMatrix& a);

std::size_t rank(const Field& f, const SparseMatrix& a);
// basis of {x : A x = 0}
std::vector<SparseVec> kernel(const Field& f, const SparseMatrix& a);
// basis of the row space
std::vector<SparseVec> row_space(const Field& f, const SparseMatrix& a);
bool in_row_space(const Field& f, const SparseMatrix& a, const SparseVec& v);

// dense helpers for small local matrices
std::size_t dense_rank(const Field& f, Mat a);
std::optional<Mat> dense_inverse(const Field& f, Mat a);
// some solution x of A x = b, or nothing
std::optional<Vec> dense_solve(const Field& f, const Mat& a, const Vec& b);
Mat dense_transpose(const Mat& a);
Mat dense_multiply(const Field& f, const Mat& a, const Mat& b);

nlohmann::json sparse_to_json(const Field& f, const SparseMatrix& m);
SparseMatrix sparse_from_json(const Field& f, const nlohmann::json& j);

}  // namespace rmlift
