#pragma once

// Named fast-transform matrices and the butterfly factorization of the DFT.

#include "sparseid/core.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace sparseid {

enum class TransformKind { DFT, DCT2, DST2, Hadamard };

std::optional<TransformKind> parse_transform_kind(std::string_view name);
std::string_view to_string(TransformKind kind);

bool is_power_of_two(std::size_t n);
// log2 of a power of two; throws std::invalid_argument otherwise.
int log2_exact(std::size_t n);

// omega_N^k = exp(-2 pi i k / N), evaluated directly for each k.
Complex unit_root(long long k, long long n);

// DFT_N(k,l)  = omega_N^{(k-1)(l-1)}
// DCT2_N(k,l) = cos(pi/N (l - 1/2)(k - 1))
// DST2_N(k,l) = sin(pi/N (l - 1/2) k)
// Hadamard    = [[H, H], [H, -H]] starting from H_1 = (1); needs N = 2^L.
ComplexMatrix gen_transform(TransformKind kind, std::size_t n);

// B_N = [[I, A], [I, -A]] with A = diag(1, omega_N, ..., omega_N^{N/2-1}).
ComplexMatrix butterfly_block(std::size_t n);

// F_ell for N = 2^L: N / 2^ell diagonal copies of B_{2^ell}.
ComplexMatrix butterfly_factor(int ell, int L);

// P_N: sends the odd indices first, then the even ones.
Permutation odd_even_perm(std::size_t n);

// R_N = Q_1 Q_2 ... Q_L with Q_ell = I_{N/2^ell} (x) P_{2^ell}.
Permutation bit_reversal_perm(std::size_t n);

// (F_L, ..., F_2, F_1 R_N), listed leftmost factor first. Their product is DFT_N.
std::vector<ComplexMatrix> dft_butterfly_chain(int L);

}  // namespace sparseid
