#include "sparseid/transforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sparseid {

std::optional<TransformKind> parse_transform_kind(std::string_view name) {
  if (name == "dft") return TransformKind::DFT;
  if (name == "dct2") return TransformKind::DCT2;
  if (name == "dst2") return TransformKind::DST2;
  if (name == "hadamard") return TransformKind::Hadamard;
  return std::nullopt;
}

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::DFT: return "dft";
    case TransformKind::DCT2: return "dct2";
    case TransformKind::DST2: return "dst2";
    case TransformKind::Hadamard: return "hadamard";
  }
  return "unknown";
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

int log2_exact(std::size_t n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("size " + std::to_string(n) + " is not a power of two");
  int L = 0;
  while ((std::size_t{1} << L) < n) ++L;
  return L;
}

Complex unit_root(long long k, long long n) {
  const long long r = ((k % n) + n) % n;
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
  return std::polar(1.0, angle);
}

namespace {

ComplexMatrix hadamard(std::size_t n) {
  if (n == 1) return ComplexMatrix::from_rows({{1.0}});
  const ComplexMatrix h = hadamard(n / 2);
  ComplexMatrix out(n, n);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i)
    for (std::size_t j = 0; j < half; ++j) {
      out(i, j) = h(i, j);
      out(i, j + half) = h(i, j);
      out(i + half, j) = h(i, j);
      out(i + half, j + half) = -h(i, j);
    }
  return out;
}

}  // namespace

ComplexMatrix gen_transform(TransformKind kind, std::size_t n) {
  if (n == 0) throw std::invalid_argument("transform size must be positive");
  const double pi = std::numbers::pi;
  const double N = static_cast<double>(n);
  ComplexMatrix out(n, n);
  switch (kind) {
    case TransformKind::DFT:
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          out(k, l) = unit_root(static_cast<long long>(k * l), static_cast<long long>(n));
      break;
    case TransformKind::DCT2:
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          out(k, l) = std::cos(pi / N * (static_cast<double>(l) + 0.5) * static_cast<double>(k));
      break;
    case TransformKind::DST2:
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          out(k, l) = std::sin(pi / N * (static_cast<double>(l) + 0.5) * static_cast<double>(k + 1));
      break;
    case TransformKind::Hadamard:
      if (!is_power_of_two(n)) throw std::invalid_argument("Hadamard size must be a power of two");
      out = hadamard(n);
      break;
  }
  return out;
}

ComplexMatrix butterfly_block(std::size_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("butterfly block size must be even");
  const std::size_t half = n / 2;
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < half; ++i) {
    const Complex w = unit_root(static_cast<long long>(i), static_cast<long long>(n));
    out(i, i) = 1.0;
    out(i + half, i) = 1.0;
    out(i, i + half) = w;
    out(i + half, i + half) = -w;
  }
  return out;
}

ComplexMatrix butterfly_factor(int ell, int L) {
  if (L < 1 || ell < 1 || ell > L)
    throw std::invalid_argument("butterfly_factor: need 1 <= ell <= L (ell=" + std::to_string(ell) +
                                ", L=" + std::to_string(L) + ")");
  const std::size_t n = std::size_t{1} << L;
  const std::size_t block = std::size_t{1} << ell;
  return kronecker(ComplexMatrix::identity(n / block), butterfly_block(block));
}

Permutation odd_even_perm(std::size_t n) {
  if (n == 0 || n % 2 != 0) throw std::invalid_argument("odd_even_perm: size must be even");
  std::vector<int> image(n);
  const int half = static_cast<int>(n / 2);
  for (int j = 1; j <= static_cast<int>(n); ++j) image[j - 1] = (j % 2 == 1) ? (j + 1) / 2 : half + j / 2;
  return Permutation(std::move(image));
}

namespace {

// I_copies (x) p
Permutation block_repeat(const Permutation& p, std::size_t copies) {
  const std::size_t b = p.size();
  std::vector<int> image(b * copies);
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t j = 0; j < b; ++j) image[c * b + j] = static_cast<int>(c * b) + p.image()[j];
  return Permutation(std::move(image));
}

}  // namespace

Permutation bit_reversal_perm(std::size_t n) {
  const int L = log2_exact(n);
  Permutation r = Permutation::identity(n);
  for (int ell = 1; ell <= L; ++ell) {
    const std::size_t block = std::size_t{1} << ell;
    r = compose(r, block_repeat(odd_even_perm(block), n / block));
  }
  return r;
}

std::vector<ComplexMatrix> dft_butterfly_chain(int L) {
  if (L < 1) throw std::invalid_argument("dft_butterfly_chain: L must be positive");
  std::vector<ComplexMatrix> chain;
  for (int ell = L; ell >= 1; --ell) chain.push_back(butterfly_factor(ell, L));
  chain.back() = chain.back() * bit_reversal_perm(std::size_t{1} << L).matrix();
  return chain;
}

}  // namespace sparseid
