#include "sparseid/emd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sparseid {

PartialMatrix::PartialMatrix(std::size_t m, std::size_t n, const RankOneSupport& support)
    : values_(m, n), state_(m * n, CellState::StructuralZero) {
  for (int k : support.rows)
    for (int l : support.cols) state_[(k - 1) * n + (l - 1)] = CellState::Missing;
}

void PartialMatrix::fill(std::size_t i, std::size_t j, Complex v) {
  values_(i, j) = v;
  state_[i * cols() + j] = CellState::Known;
}

std::size_t PartialMatrix::missing_count() const {
  return static_cast<std::size_t>(std::count(state_.begin(), state_.end(), CellState::Missing));
}

const ComplexMatrix& PartialMatrix::values() const {
  if (missing_count() != 0) throw std::logic_error("contribution still has missing cells");
  return values_;
}

std::string_view to_string(EmdOutcome::Kind kind) {
  switch (kind) {
    case EmdOutcome::Kind::Complete: return "complete";
    case EmdOutcome::Kind::Incompatible: return "incompatible";
    case EmdOutcome::Kind::Stalled: return "stalled";
  }
  return "unknown";
}

namespace {

// One sweep of the 2x2 cross-ratio rule over contribution `c` with support `s`.
// Cells filled earlier in the sweep are used immediately.
std::size_t complete_inside(PartialMatrix& c, const RankOneSupport& s, double zero_threshold) {
  std::size_t filled = 0;
  const auto& R = s.rows;
  const auto& C = s.cols;
  for (std::size_t a = 0; a < R.size(); ++a)
    for (std::size_t b = a + 1; b < R.size(); ++b)
      for (std::size_t x = 0; x < C.size(); ++x)
        for (std::size_t y = x + 1; y < C.size(); ++y) {
          // Layout [[a1, a2], [a4, a3]]; a1/a3 and a2/a4 are diagonally opposite.
          const std::size_t ri[4] = {static_cast<std::size_t>(R[a] - 1), static_cast<std::size_t>(R[a] - 1),
                                     static_cast<std::size_t>(R[b] - 1), static_cast<std::size_t>(R[b] - 1)};
          const std::size_t ci[4] = {static_cast<std::size_t>(C[x] - 1), static_cast<std::size_t>(C[y] - 1),
                                     static_cast<std::size_t>(C[y] - 1), static_cast<std::size_t>(C[x] - 1)};
          int missing = -1;
          int n_missing = 0;
          for (int t = 0; t < 4; ++t)
            if (!c.known(ri[t], ci[t])) {
              missing = t;
              ++n_missing;
            }
          if (n_missing != 1) continue;
          const int opposite = (missing + 2) % 4;
          const Complex pivot = c.value(ri[opposite], ci[opposite]);
          if (std::abs(pivot) <= zero_threshold) continue;
          const int j1 = (missing + 1) % 4;
          const int j2 = (missing + 3) % 4;
          c.fill(ri[missing], ci[missing], c.value(ri[j1], ci[j1]) * c.value(ri[j2], ci[j2]) / pivot);
          ++filled;
        }
  return filled;
}

}  // namespace

EmdOutcome emd_complete(const ComplexMatrix& z, const RankOneSupportTuple& s, const TolerancePolicy& tol) {
  if (z.rows() != s.m() || z.cols() != s.n())
    throw std::invalid_argument("emd_complete: matrix is " + std::to_string(z.rows()) + "x" +
                                std::to_string(z.cols()) + " but supports are " + std::to_string(s.m()) + "x" +
                                std::to_string(s.n()));
  const std::size_t m = s.m();
  const std::size_t n = s.n();
  const auto cover = s.coverage();

  EmdOutcome out;
  out.contributions.reserve(s.r());
  for (const auto& si : s.supports()) {
    PartialMatrix c(m, n, si);
    for (int k : si.rows)
      for (int l : si.cols)
        if (cover[(k - 1) * n + (l - 1)] == 1) c.fill(k - 1, l - 1, z(k - 1, l - 1));
    out.contributions.push_back(std::move(c));
  }
  auto& contrib = out.contributions;

  for (;;) {
    std::size_t filled = 0;
    for (std::size_t i = 0; i < contrib.size(); ++i) filled += complete_inside(contrib[i], s[i], tol.zero_threshold);

    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        Complex sum{};
        bool all_known = true;
        for (const auto& c : contrib) {
          if (!c.known(k, l)) {
            all_known = false;
            break;
          }
          sum += c.value(k, l);
        }
        if (all_known && std::abs(z(k, l) - sum) > tol.relative_tolerance * (1.0 + std::abs(z(k, l)))) {
          out.kind = EmdOutcome::Kind::Incompatible;
          out.cell = Cell{static_cast<int>(k + 1), static_cast<int>(l + 1)};
          return out;
        }
      }

    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        std::size_t missing_at = contrib.size();
        int n_missing = 0;
        Complex sum{};
        for (std::size_t i = 0; i < contrib.size(); ++i) {
          if (contrib[i].known(k, l)) {
            sum += contrib[i].value(k, l);
          } else {
            missing_at = i;
            ++n_missing;
          }
        }
        if (n_missing == 1) {
          contrib[missing_at].fill(k, l, z(k, l) - sum);
          ++filled;
        }
      }

    if (filled == 0) break;
  }

  const bool done = std::all_of(contrib.begin(), contrib.end(), [](const PartialMatrix& c) { return c.missing_count() == 0; });
  out.kind = done ? EmdOutcome::Kind::Complete : EmdOutcome::Kind::Stalled;
  return out;
}

ComplexMatrix sum_contributions(std::span<const ComplexMatrix> c) {
  if (c.empty()) throw std::invalid_argument("sum_contributions: empty tuple");
  ComplexMatrix out(c.front().rows(), c.front().cols());
  for (const auto& ci : c) out = out + ci;
  return out;
}

ComplexMatrix sum_contributions(const ContributionTuple& c) {
  std::vector<ComplexMatrix> values;
  values.reserve(c.size());
  for (const auto& ci : c) {
    if (ci.missing_count() != 0) throw std::invalid_argument("sum_contributions: contribution has missing cells");
    values.push_back(ci.values());
  }
  return sum_contributions(std::span<const ComplexMatrix>(values));
}

FactorPair contributions_to_factors(std::span<const ComplexMatrix> c, const TolerancePolicy& tol) {
  if (c.empty()) throw std::invalid_argument("contributions_to_factors: empty tuple");
  const std::size_t m = c.front().rows();
  const std::size_t n = c.front().cols();
  const std::size_t r = c.size();
  FactorPair out{ComplexMatrix(m, r), ComplexMatrix(n, r)};
  for (std::size_t i = 0; i < r; ++i) {
    const ComplexMatrix& ci = c[i];
    if (ci.rows() != m || ci.cols() != n) throw std::invalid_argument("contributions_to_factors: shape mismatch");
    const SupportMask nz = support(ci, tol.zero_threshold);
    if (nz.count() == 0) continue;
    if (!rank_le_one(ci, nz, tol))
      throw std::domain_error("contribution " + std::to_string(i + 1) + " is not rank one");

    std::size_t l0 = 0;
    while (nz.col_count(l0) == 0) ++l0;
    std::size_t k0 = 0;
    while (std::abs(ci(k0, l0)) <= tol.zero_threshold) ++k0;
    const Complex pivot = ci(k0, l0);
    for (std::size_t k = 0; k < m; ++k) out.left(k, i) = ci(k, l0);
    for (std::size_t l = 0; l < n; ++l) out.right(l, i) = ci(k0, l) / pivot;
  }
  return out;
}

FactorPair contributions_to_factors(const ContributionTuple& c, const TolerancePolicy& tol) {
  std::vector<ComplexMatrix> values;
  values.reserve(c.size());
  for (const auto& ci : c) values.push_back(ci.values());
  return contributions_to_factors(std::span<const ComplexMatrix>(values), tol);
}

namespace {

std::vector<Complex> column(const ComplexMatrix& a, std::size_t j) {
  std::vector<Complex> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = a(i, j);
  return out;
}

double norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (Complex z : v) s += std::norm(z);
  return std::sqrt(s);
}

std::size_t argmax_abs(const std::vector<Complex>& v) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k)
    if (std::abs(v[k]) > std::abs(v[best])) best = k;
  return best;
}

// a ~= s * b
bool close_scaled(const std::vector<Complex>& a, const std::vector<Complex>& b, Complex s, const TolerancePolicy& tol) {
  double diff = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    diff += std::norm(a[k] - s * b[k]);
    nb += std::norm(s * b[k]);
  }
  return std::sqrt(diff) <= tol.relative_tolerance * std::max(norm(a), std::sqrt(nb)) + tol.zero_threshold;
}

bool columns_equivalent(const FactorPair& a, std::size_t i, const FactorPair& b, std::size_t j,
                        const TolerancePolicy& tol) {
  const auto x = column(a.left, i), y = column(a.right, i);
  const auto x2 = column(b.left, j), y2 = column(b.right, j);
  const double zt = tol.zero_threshold;
  const bool x_zero = norm(x) <= zt, x2_zero = norm(x2) <= zt;
  if (x_zero != x2_zero) return false;
  if (!x_zero) {
    const std::size_t k = argmax_abs(x);
    const Complex d = x2[k] / x[k];
    if (std::abs(d) <= zt) return false;
    return close_scaled(x2, x, d, tol) && close_scaled(y2, y, 1.0 / d, tol);
  }
  const bool y_zero = norm(y) <= zt, y2_zero = norm(y2) <= zt;
  if (y_zero || y2_zero) return y_zero == y2_zero;
  const std::size_t k = argmax_abs(y);
  return close_scaled(y2, y, y2[k] / y[k], tol);
}

bool same_shape(const FactorPair& a, const FactorPair& b) {
  return a.left.rows() == b.left.rows() && a.left.cols() == b.left.cols() && a.right.rows() == b.right.rows() &&
         a.right.cols() == b.right.cols() && a.left.cols() == a.right.cols();
}

}  // namespace

bool pair_scale_equivalent(const FactorPair& a, const FactorPair& b, const TolerancePolicy& tol) {
  if (!same_shape(a, b)) return false;
  for (std::size_t i = 0; i < a.left.cols(); ++i)
    if (!columns_equivalent(a, i, b, i, tol)) return false;
  return true;
}

bool pair_perm_scale_equivalent(const FactorPair& a, const FactorPair& b, const TolerancePolicy& tol) {
  if (!same_shape(a, b)) return false;
  // Column equivalence is an equivalence relation, so greedy matching is exact.
  const std::size_t r = a.left.cols();
  std::vector<char> used(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    bool matched = false;
    for (std::size_t j = 0; j < r && !matched; ++j) {
      if (used[j] || !columns_equivalent(a, i, b, j, tol)) continue;
      used[j] = 1;
      matched = true;
    }
    if (!matched) return false;
  }
  return true;
}

std::optional<ScalingChain> chain_scale_equivalent(std::span<const ComplexMatrix> chain,
                                                   std::span<const ComplexMatrix> chain2,
                                                   const TolerancePolicy& tol) {
  const std::size_t L = chain.size();
  if (L == 0 || chain2.size() != L) return std::nullopt;
  for (std::size_t t = 0; t < L; ++t) {
    if (chain[t].rows() != chain2[t].rows() || chain[t].cols() != chain2[t].cols()) return std::nullopt;
    if (t + 1 < L && chain[t].cols() != chain[t + 1].rows()) return std::nullopt;
  }

  ScalingChain witness;
  witness.diagonals.resize(L - 1);
  std::vector<Complex> d_left(chain[0].rows(), 1.0);  // D_L = I
  for (std::size_t t = 0; t < L; ++t) {
    const ComplexMatrix& x = chain[t];
    const ComplexMatrix& x2 = chain2[t];
    std::vector<Complex> d_right(x.cols(), 1.0);  // D_0 = I on the last factor
    if (t + 1 < L) {
      for (std::size_t j = 0; j < x.cols(); ++j) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < x.rows(); ++k)
          if (std::abs(x(k, j)) > std::abs(x(best, j))) best = k;
        if (std::abs(x(best, j)) <= tol.zero_threshold) continue;  // unconstrained here
        d_right[j] = x2(best, j) * d_left[best] / x(best, j);
        if (std::abs(d_right[j]) <= tol.zero_threshold) return std::nullopt;
      }
    }
    for (std::size_t k = 0; k < x.rows(); ++k)
      for (std::size_t j = 0; j < x.cols(); ++j) {
        const Complex predicted = x(k, j) * d_right[j] / d_left[k];
        const double err = std::abs(x2(k, j) - predicted);
        if (err > tol.relative_tolerance * std::max(std::abs(x2(k, j)), std::abs(predicted)) + tol.zero_threshold)
          return std::nullopt;
      }
    if (t + 1 < L) witness.diagonals[L - 2 - t] = d_right;  // D_{ell-1} with ell = L - t
    d_left = std::move(d_right);
  }
  return witness;
}

}  // namespace sparseid
