#pragma once

// JSON encodings for matrices, masks, support tuples, trees, certificates,
// completion outcomes and factor-chain directories. FORMATS.md documents
// every schema.

#include "sparseid/core.hpp"
#include "sparseid/emd.hpp"
#include "sparseid/hier.hpp"
#include "sparseid/oracle.hpp"
#include "sparseid/supports.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace sparseid {

using Json = nlohmann::json;

// Malformed documents. Messages carry the offending path when there is one.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or unwritable files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json to_json(const ComplexMatrix& a);
ComplexMatrix matrix_from_json(const Json& j);

Json to_json(const SupportMask& s);
SupportMask mask_from_json(const Json& j);

Json to_json(const RankOneSupport& s);
Json to_json(const RankOneSupportTuple& s);
RankOneSupportTuple tuple_from_json(const Json& j);

// A leaf is an integer, an internal node is [left, right].
Json to_json(const TreeDescription& d);
TreeDescription tree_from_json(const Json& j);

Json to_json(const PartitionCertificate& cert);
PartitionCertificate certificate_from_json(const Json& j);

// Missing cells are written as null.
Json to_json(const EmdOutcome& outcome);
EmdOutcome outcome_from_json(const Json& j);

Json to_json(const ScalingChain& d);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

// Directory holding manifest.json and one X_<ell>.json per factor.
struct ChainDirectory {
  int layers = 0;
  FactorChain chain;  // chain[0] = X_L
  std::optional<double> residual;
  std::vector<LevelReport> levels;
};

void write_chain_directory(const std::filesystem::path& dir, const ChainDirectory& c);
ChainDirectory read_chain_directory(const std::filesystem::path& dir);

}  // namespace sparseid
