#include "sparseid/core.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sparseid {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
  }
}

Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
  Eigen::MatrixXcd out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  return out;
}

}  // namespace

void TolerancePolicy::validate() const {
  if (!(zero_threshold >= 0.0) || !(relative_tolerance >= 0.0))
    throw std::invalid_argument("tolerances must be nonnegative");
  if (zero_threshold > relative_tolerance)
    throw std::invalid_argument("zero_threshold must not exceed relative_tolerance");
}

// ---------------------------------------------------------------- ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex{}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_)
    throw std::invalid_argument("matrix entry count does not match rows*cols");
  if (!all_finite()) throw std::invalid_argument("matrix entries must be finite");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows.begin()->size();
  std::vector<Complex> entries;
  entries.reserve(m * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw std::invalid_argument("ragged matrix literal");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ComplexMatrix(m, n, std::move(entries));
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

bool ComplexMatrix::is_real() const {
  return std::all_of(entries_.begin(), entries_.end(), [](Complex z) { return z.imag() == 0.0; });
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

// ---------------------------------------------------------------- SupportMask

SupportMask::SupportMask(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

SupportMask SupportMask::full(std::size_t rows, std::size_t cols) {
  SupportMask out(rows, cols);
  std::fill(out.bits_.begin(), out.bits_.end(), 1);
  return out;
}

SupportMask SupportMask::identity(std::size_t n) {
  SupportMask out(n, n);
  for (std::size_t i = 0; i < n; ++i) out.set(i, i);
  return out;
}

SupportMask SupportMask::from_cells(std::size_t rows, std::size_t cols, std::span<const Cell> cells) {
  SupportMask out(rows, cols);
  for (const Cell& c : cells) {
    if (c.row < 1 || c.col < 1 || static_cast<std::size_t>(c.row) > rows ||
        static_cast<std::size_t>(c.col) > cols) {
      throw std::invalid_argument("mask cell (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                                  ") out of range");
    }
    out.set(c.row - 1, c.col - 1);
  }
  return out;
}

SupportMask SupportMask::from_binary(std::size_t rows, std::size_t cols, std::span<const int> bits) {
  if (bits.size() != rows * cols) throw std::invalid_argument("binary mask size mismatch");
  SupportMask out(rows, cols);
  for (std::size_t k = 0; k < bits.size(); ++k) out.bits_[k] = bits[k] != 0 ? 1 : 0;
  return out;
}

bool SupportMask::contains(Cell c) const {
  if (c.row < 1 || c.col < 1) return false;
  const auto i = static_cast<std::size_t>(c.row - 1);
  const auto j = static_cast<std::size_t>(c.col - 1);
  return i < rows_ && j < cols_ && (*this)(i, j);
}

std::vector<Cell> SupportMask::cells() const {
  std::vector<Cell> out;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j)) out.push_back({static_cast<int>(i + 1), static_cast<int>(j + 1)});
  return out;
}

std::vector<int> SupportMask::binary() const { return {bits_.begin(), bits_.end()}; }

std::size_t SupportMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::size_t SupportMask::col_count(std::size_t j) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < rows_; ++i) n += (*this)(i, j) ? 1 : 0;
  return n;
}

std::vector<int> SupportMask::col_support(std::size_t j) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < rows_; ++i)
    if ((*this)(i, j)) out.push_back(static_cast<int>(i + 1));
  return out;
}

std::vector<int> SupportMask::row_support(std::size_t i) const {
  std::vector<int> out;
  for (std::size_t j = 0; j < cols_; ++j)
    if ((*this)(i, j)) out.push_back(static_cast<int>(j + 1));
  return out;
}

SupportMask SupportMask::transpose() const {
  SupportMask out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.set(j, i, (*this)(i, j));
  return out;
}

bool SupportMask::subset_of(const SupportMask& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) return false;
  for (std::size_t k = 0; k < bits_.size(); ++k)
    if (bits_[k] && !other.bits_[k]) return false;
  return true;
}

// ---------------------------------------------------------------- Permutation

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<char> seen(image_.size(), 0);
  for (int v : image_) {
    if (v < 1 || static_cast<std::size_t>(v) > image_.size() || seen[v - 1])
      throw std::invalid_argument("permutation image is not a bijection of {1..n}");
    seen[v - 1] = 1;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<int> image(n);
  std::iota(image.begin(), image.end(), 1);
  return Permutation(std::move(image));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(image_.size());
  for (std::size_t j = 0; j < image_.size(); ++j) inv[image_[j] - 1] = static_cast<int>(j + 1);
  return Permutation(std::move(inv));
}

SupportMask Permutation::mask() const {
  SupportMask out(size(), size());
  for (std::size_t j = 0; j < size(); ++j) out.set(image_[j] - 1, j);
  return out;
}

ComplexMatrix Permutation::matrix() const {
  ComplexMatrix out(size(), size());
  for (std::size_t j = 0; j < size(); ++j) out(image_[j] - 1, j) = 1.0;
  return out;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("compose: permutation size mismatch");
  std::vector<int> image(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) image[j] = a.image()[b.image()[j] - 1];
  return Permutation(std::move(image));
}

// ---------------------------------------------------------------- products

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex s = a(i, j);
      if (s == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = s * b(k, l);
    }
  return out;
}

SupportMask kronecker(const SupportMask& a, const SupportMask& b) {
  SupportMask out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!a(i, j)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          if (b(k, l)) out.set(i * b.rows() + k, j * b.cols() + l);
    }
  return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: inner dimension mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  // i-k-j order skipping zeros of `a`; butterfly factors have two nonzeros per row.
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex s = a(i, k);
      if (s == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += s * b(k, j);
    }
  return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "matrix sum");
  ComplexMatrix out = a;
  for (std::size_t k = 0; k < out.entries().size(); ++k) out.entries()[k] += b.entries()[k];
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "matrix difference");
  ComplexMatrix out = a;
  for (std::size_t k = 0; k < out.entries().size(); ++k) out.entries()[k] -= b.entries()[k];
  return out;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (auto& z : out.entries()) z *= s;
  return out;
}

ComplexMatrix permute_rows(const Permutation& p, const ComplexMatrix& a) {
  if (p.size() != a.rows()) throw std::invalid_argument("permute_rows: size mismatch");
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(p.image()[i] - 1, j) = a(i, j);
  return out;
}

ComplexMatrix permute_cols(const ComplexMatrix& a, const Permutation& p) {
  if (p.size() != a.cols()) throw std::invalid_argument("permute_cols: size mismatch");
  // (A P)(i, j) = A(i, image[j]).
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, p.image()[j] - 1);
  return out;
}

SupportMask permute_cols(const SupportMask& a, const Permutation& p) {
  if (p.size() != a.cols()) throw std::invalid_argument("permute_cols: size mismatch");
  SupportMask out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.set(i, j, a(i, p.image()[j] - 1));
  return out;
}

SupportMask operator*(const SupportMask& a, const SupportMask& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mask product: inner dimension mismatch");
  SupportMask out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (!a(i, k)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (b(k, j)) out.set(i, j);
    }
  return out;
}

ComplexMatrix block_diagonal(std::span<const ComplexMatrix> blocks) {
  std::size_t m = 0, n = 0;
  for (const auto& b : blocks) {
    m += b.rows();
    n += b.cols();
  }
  ComplexMatrix out(m, n);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(r0 + i, c0 + j) = b(i, j);
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

// ---------------------------------------------------------------- norms and rank

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (Complex z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

double rel_frobenius_error(const ComplexMatrix& a, const ComplexMatrix& b, const TolerancePolicy& tol) {
  require_same_shape(a, b, "rel_frobenius_error");
  double diff = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) diff += std::norm(a.entries()[k] - b.entries()[k]);
  return std::sqrt(diff) / std::max(frobenius_norm(b), tol.zero_threshold);
}

SupportMask support(const ComplexMatrix& a, double zero_threshold) {
  SupportMask out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j)) > zero_threshold) out.set(i, j);
  return out;
}

ComplexMatrix restrict_to(const ComplexMatrix& a, const SupportMask& mask) {
  if (a.rows() != mask.rows() || a.cols() != mask.cols())
    throw std::invalid_argument("restrict_to: mask does not fit matrix");
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (mask(i, j)) out(i, j) = a(i, j);
  return out;
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

bool rank_le_one(const ComplexMatrix& m, const SupportMask& mask, const TolerancePolicy& tol) {
  if (m.rows() != mask.rows() || m.cols() != mask.cols())
    throw std::invalid_argument("rank_le_one: mask does not fit matrix");
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < mask.rows(); ++i)
    for (std::size_t j = 0; j < mask.cols(); ++j)
      if (mask(i, j)) {
        rows.push_back(i);
        cols.push_back(j);
      }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  if (rows.size() < 2 || cols.size() < 2) return true;

  ComplexMatrix sub(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      if (mask(rows[a], cols[b])) sub(a, b) = m(rows[a], cols[b]);
  const auto sv = singular_values(sub);
  if (sv.empty() || sv[0] == 0.0) return true;
  return sv[1] <= tol.relative_tolerance * sv[0];
}

ComplexMatrix best_rank_one(const ComplexMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  if (a.rows() == 0 || a.cols() == 0) return out;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double s = svd.singularValues()(0);
  const auto u = svd.matrixU().col(0);
  const auto v = svd.matrixV().col(0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = s * u(i) * std::conj(v(j));
  return out;
}

}  // namespace sparseid
