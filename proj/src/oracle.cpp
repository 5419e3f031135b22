#include "sparseid/oracle.hpp"

#include "sparseid/emd.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace sparseid {

BudgetExceeded::BudgetExceeded(std::uint64_t budget)
    : std::runtime_error("search exceeded the node budget of " + std::to_string(budget)), budget_(budget) {}

std::string_view to_string(PartitionCertificate::Status status) {
  switch (status) {
    case PartitionCertificate::Status::Unique: return "unique";
    case PartitionCertificate::Status::Multiple: return "multiple";
    case PartitionCertificate::Status::None: return "none";
  }
  return "unknown";
}

RankOneSupportTuple canonicalize(const RankOneSupportTuple& s) {
  std::vector<RankOneSupport> kept;
  for (const auto& si : s.supports())
    if (!si.empty()) kept.push_back(si);
  std::sort(kept.begin(), kept.end());
  return RankOneSupportTuple(s.m(), s.n(), std::move(kept));
}

namespace {

// Calls f(subset) for every subset of `pool` with at most `max_size` elements.
template <typename F>
void for_each_subset(const std::vector<int>& pool, std::size_t max_size, std::vector<int>& current,
                     std::size_t start, F&& f) {
  f(current);
  if (current.size() == max_size) return;
  for (std::size_t t = start; t < pool.size(); ++t) {
    current.push_back(pool[t]);
    for_each_subset(pool, max_size, current, t + 1, f);
    current.pop_back();
  }
}

class PartitionSearch {
 public:
  PartitionSearch(const ComplexMatrix& z, const SupportFamilySpec& fam, const TolerancePolicy& tol,
                  std::uint64_t budget)
      : z_(z),
        m_(z.rows()),
        n_(z.cols()),
        a_(std::min(fam.left_col_sparsity, m_)),
        b_(std::min(fam.right_col_sparsity, n_)),
        r_(fam.r),
        tol_(tol),
        budget_(budget),
        open_(m_ * n_, 0) {
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (std::abs(z(i, j)) > tol.zero_threshold) {
          open_[i * n_ + j] = 1;
          ++remaining_;
        }
  }

  PartitionCertificate run() {
    search(0);
    PartitionCertificate cert;
    for (const auto& p : found_) cert.partitions.emplace_back(m_, n_, p);
    cert.nodes = nodes_;
    cert.status = found_.empty()       ? PartitionCertificate::Status::None
                  : found_.size() == 1 ? PartitionCertificate::Status::Unique
                                       : PartitionCertificate::Status::Multiple;
    return cert;
  }

 private:
  bool open(std::size_t i, std::size_t j) const { return open_[i * n_ + j] != 0; }

  bool proportional(std::size_t pivot_row, std::size_t row, const std::vector<int>& cols) const {
    const std::size_t l0 = static_cast<std::size_t>(cols.front() - 1);
    const Complex ratio = z_(row, l0) / z_(pivot_row, l0);
    for (std::size_t t = 1; t < cols.size(); ++t) {
      const std::size_t l = static_cast<std::size_t>(cols[t] - 1);
      const Complex expected = ratio * z_(pivot_row, l);
      const Complex actual = z_(row, l);
      if (std::abs(actual - expected) > tol_.relative_tolerance * std::max(std::abs(actual), std::abs(expected)))
        return false;
    }
    return true;
  }

  void toggle(const std::vector<int>& rows, const std::vector<int>& cols, bool cover) {
    for (int k : rows)
      for (int l : cols) open_[(k - 1) * n_ + (l - 1)] = cover ? 0 : 1;
    const std::size_t cells = rows.size() * cols.size();
    remaining_ = cover ? remaining_ - cells : remaining_ + cells;
  }

  void search(std::size_t used) {
    if (++nodes_ > budget_) throw BudgetExceeded(budget_);
    if (remaining_ == 0) {
      auto blocks = chosen_;
      std::sort(blocks.begin(), blocks.end());
      found_.insert(std::move(blocks));
      return;
    }
    if (used == r_ || remaining_ > (r_ - used) * a_ * b_) return;

    std::size_t k = 0, l = 0;
    while (!open(k, l)) {
      if (++l == n_) {
        l = 0;
        ++k;
      }
    }

    std::vector<int> other_cols;
    for (std::size_t c = 0; c < n_; ++c)
      if (c != l && open(k, c)) other_cols.push_back(static_cast<int>(c + 1));

    std::vector<int> col_pick;
    for_each_subset(other_cols, b_ - 1, col_pick, 0, [&](const std::vector<int>& extra) {
      std::vector<int> cols{static_cast<int>(l + 1)};
      cols.insert(cols.end(), extra.begin(), extra.end());
      std::sort(cols.begin(), cols.end());

      std::vector<int> other_rows;
      for (std::size_t row = k + 1; row < m_; ++row) {
        const bool all_open = std::all_of(cols.begin(), cols.end(), [&](int c) { return open(row, c - 1); });
        if (all_open && proportional(k, row, cols)) other_rows.push_back(static_cast<int>(row + 1));
      }

      std::vector<int> row_pick;
      for_each_subset(other_rows, a_ - 1, row_pick, 0, [&](const std::vector<int>& extra_rows) {
        std::vector<int> rows{static_cast<int>(k + 1)};
        rows.insert(rows.end(), extra_rows.begin(), extra_rows.end());
        toggle(rows, cols, true);
        chosen_.push_back({rows, cols});
        search(used + 1);
        chosen_.pop_back();
        toggle(rows, cols, false);
      });
    });
  }

  const ComplexMatrix& z_;
  std::size_t m_, n_, a_, b_, r_;
  TolerancePolicy tol_;
  std::uint64_t budget_;
  std::vector<unsigned char> open_;
  std::size_t remaining_ = 0;
  std::uint64_t nodes_ = 0;
  std::vector<RankOneSupport> chosen_;
  std::set<std::vector<RankOneSupport>> found_;
};

}  // namespace

PartitionCertificate enumerate_partitions(const ComplexMatrix& z, const SupportFamilySpec& fam,
                                          const TolerancePolicy& tol, std::uint64_t node_budget) {
  if (fam.m != z.rows() || fam.n != z.cols())
    throw std::invalid_argument("enumerate_partitions: family dimensions do not match the matrix");
  fam.validate();
  return PartitionSearch(z, fam, tol, node_budget).run();
}

bool verify_parity_column_structure(const PartitionCertificate& cert, std::size_t n) {
  for (const auto& partition : cert.partitions) {
    if (partition.m() != n || partition.n() != n)
      throw std::invalid_argument("certificate partition is not " + std::to_string(n) + "x" + std::to_string(n));
    for (const auto& s : partition.supports()) {
      if (s.empty()) throw std::invalid_argument("certificate contains an empty support");
      const int parity = s.rows.front() % 2;
      if (std::any_of(s.rows.begin(), s.rows.end(), [&](int k) { return k % 2 != parity; })) return false;
      if (s.cols.size() != 2) return false;
      if (static_cast<std::size_t>(s.cols[0] + s.cols[1] - 1) != n) return false;
    }
  }
  return true;
}

bool supports_pairwise_disjoint(const RankOneSupportTuple& s) {
  const auto cover = s.coverage();
  return std::all_of(cover.begin(), cover.end(), [](int c) { return c <= 1; });
}

UniquenessReport check_uniqueness(const ComplexMatrix& z, const SupportFamilySpec& fam, const TolerancePolicy& tol,
                                  std::uint64_t node_budget) {
  UniquenessReport report;
  report.certificate = enumerate_partitions(z, fam, tol, node_budget);
  report.unique_partition = report.certificate.status == PartitionCertificate::Status::Unique;

  const std::size_t block = std::min(fam.left_col_sparsity, z.rows()) * std::min(fam.right_col_sparsity, z.cols());
  report.counting_forces_disjoint = support(z, tol.zero_threshold).count() == fam.r * block;

  if (report.unique_partition) {
    const auto& partition = report.certificate.partitions.front();
    report.fixed_support_complete = supports_pairwise_disjoint(partition) &&
                                    emd_complete(z, partition, tol).kind == EmdOutcome::Kind::Complete;
  }
  return report;
}

bool cross_check_uniqueness(const ComplexMatrix& z, const SupportFamilySpec& fam, const TolerancePolicy& tol,
                            std::uint64_t node_budget) {
  return check_uniqueness(z, fam, tol, node_budget).ok();
}

}  // namespace sparseid
