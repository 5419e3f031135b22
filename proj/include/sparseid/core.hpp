#pragma once

// Dense complex matrices, binary support masks, permutations and the
// tolerance policy shared by every other module.
//
// Index convention: element accessors (operator()) are 0-based storage
// accessors. Every index that is *data* (cells, row/column sets,
// permutation images, serialized masks) is 1-based.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace sparseid {

using Complex = std::complex<double>;

struct TolerancePolicy {
  double zero_threshold = 1e-12;
  double relative_tolerance = 1e-9;

  // Throws std::invalid_argument unless 0 <= zero_threshold <= relative_tolerance.
  void validate() const;
};

// A 1-based (row, column) index pair.
struct Cell {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  // Row-by-row literal, e.g. from_rows({{1, 2}, {3, 4}}).
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const Complex> entries() const { return entries_; }
  std::span<Complex> entries() { return entries_; }

  ComplexMatrix transpose() const;
  bool is_real() const;  // every imaginary part is exactly zero
  bool all_finite() const;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

// Binary m x n pattern; also the adjacency matrix of a bipartite graph.
class SupportMask {
 public:
  SupportMask() = default;
  SupportMask(std::size_t rows, std::size_t cols);

  static SupportMask full(std::size_t rows, std::size_t cols);
  static SupportMask identity(std::size_t n);
  static SupportMask from_cells(std::size_t rows, std::size_t cols, std::span<const Cell> cells);
  // Binary-matrix view; any nonzero byte is a one.
  static SupportMask from_binary(std::size_t rows, std::size_t cols, std::span<const int> bits);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool operator()(std::size_t i, std::size_t j) const { return bits_[i * cols_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool value = true) { bits_[i * cols_ + j] = value ? 1 : 0; }

  // 1-based membership test; false for out-of-range cells.
  bool contains(Cell c) const;

  std::vector<Cell> cells() const;  // row-major, 1-based
  std::vector<int> binary() const;  // row-major 0/1
  std::size_t count() const;
  std::size_t col_count(std::size_t j) const;
  std::vector<int> col_support(std::size_t j) const;  // 1-based rows of column j
  std::vector<int> row_support(std::size_t i) const;  // 1-based cols of row i

  SupportMask transpose() const;
  bool subset_of(const SupportMask& other) const;

  friend bool operator==(const SupportMask&, const SupportMask&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<unsigned char> bits_;
};

// image[j-1] is the 1-based destination of index j. The induced matrix P has
// P(image[j]-1, j-1) = 1, so (P x)[image[j]] = x[j].
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> image);

  static Permutation identity(std::size_t n);

  std::size_t size() const { return image_.size(); }
  const std::vector<int>& image() const { return image_; }

  // Same effect as multiplying the column vector `values` by the matrix.
  template <typename T>
  std::vector<T> apply(std::span<const T> values) const {
    if (values.size() != image_.size()) throw std::invalid_argument("permutation size mismatch");
    std::vector<T> out(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) out[image_[j] - 1] = values[j];
    return out;
  }
  template <typename T>
  std::vector<T> apply(const std::vector<T>& values) const {
    return apply(std::span<const T>(values));
  }

  Permutation inverse() const;
  SupportMask mask() const;
  ComplexMatrix matrix() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> image_;
};

// Matrix-product composition: compose(a, b).matrix() == a.matrix() * b.matrix().
Permutation compose(const Permutation& a, const Permutation& b);

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b);
SupportMask kronecker(const SupportMask& a, const SupportMask& b);

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

// Row permutation P * A and column permutation A * P.
ComplexMatrix permute_rows(const Permutation& p, const ComplexMatrix& a);
ComplexMatrix permute_cols(const ComplexMatrix& a, const Permutation& p);
SupportMask permute_cols(const SupportMask& a, const Permutation& p);

// Boolean product of supports: (A B)(i,j) = OR_k A(i,k) AND B(k,j).
SupportMask operator*(const SupportMask& a, const SupportMask& b);

ComplexMatrix block_diagonal(std::span<const ComplexMatrix> blocks);

double frobenius_norm(const ComplexMatrix& a);

// ||a - b||_F / max(||b||_F, zero_threshold).
double rel_frobenius_error(const ComplexMatrix& a, const ComplexMatrix& b,
                           const TolerancePolicy& tol = {});

// Cells whose magnitude exceeds zero_threshold.
SupportMask support(const ComplexMatrix& a, double zero_threshold = TolerancePolicy{}.zero_threshold);

// Zeroes every entry outside the mask.
ComplexMatrix restrict_to(const ComplexMatrix& a, const SupportMask& mask);

// Singular values of a dense matrix, descending.
std::vector<double> singular_values(const ComplexMatrix& a);

// True iff the submatrix of `m` on the rows and columns touched by `mask`
// (entries outside the mask read as zero) satisfies sigma2 <= rel_tol * sigma1.
bool rank_le_one(const ComplexMatrix& m, const SupportMask& mask, const TolerancePolicy& tol = {});

// Best rank-one approximation in Frobenius norm.
ComplexMatrix best_rank_one(const ComplexMatrix& a);

}  // namespace sparseid
