#include "sparseid/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace sparseid {

namespace fs = std::filesystem;

namespace {

void require(bool condition, const std::string& what) {
  if (!condition) throw FormatError(what);
}

std::size_t size_field(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key), std::string("missing field \"") + key + "\"");
  const Json& v = j.at(key);
  require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0),
          std::string("field \"") + key + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<int> index_list(const Json& j, const char* key) {
  require(j.contains(key) && j.at(key).is_array(), std::string("field \"") + key + "\" must be an array");
  std::vector<int> out;
  for (const auto& v : j.at(key)) {
    require(v.is_number_integer(), std::string("field \"") + key + "\" must hold integers");
    out.push_back(v.get<int>());
  }
  return out;
}

Json entry_json(Complex z, bool complex) {
  if (!complex) return z.real();
  return Json::array({z.real(), z.imag()});
}

Complex entry_from_json(const Json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  require(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(),
          "matrix entries must be numbers or [re, im] pairs");
  return {v[0].get<double>(), v[1].get<double>()};
}

RankOneSupport support_from_json(const Json& j) {
  require(j.is_object(), "support must be an object with \"rows\" and \"cols\"");
  return {index_list(j, "rows"), index_list(j, "cols")};
}

}  // namespace

Json to_json(const ComplexMatrix& a) {
  const bool complex = !a.is_real();
  Json data = Json::array();
  for (const Complex& z : a.entries()) data.push_back(entry_json(z, complex));
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"complex", complex}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  const std::size_t m = size_field(j, "rows");
  const std::size_t n = size_field(j, "cols");
  require(j.contains("data") && j.at("data").is_array(), "matrix needs a \"data\" array");
  const Json& data = j.at("data");
  require(data.size() == m * n, "matrix data has " + std::to_string(data.size()) + " entries, expected " +
                                    std::to_string(m * n));
  std::vector<Complex> entries;
  entries.reserve(data.size());
  for (const auto& v : data) entries.push_back(entry_from_json(v));
  return ComplexMatrix(m, n, std::move(entries));
}

Json to_json(const SupportMask& s) {
  Json ones = Json::array();
  for (const Cell& c : s.cells()) ones.push_back({c.row, c.col});
  return {{"rows", s.rows()}, {"cols", s.cols()}, {"ones", std::move(ones)}};
}

SupportMask mask_from_json(const Json& j) {
  const std::size_t m = size_field(j, "rows");
  const std::size_t n = size_field(j, "cols");
  require(j.contains("ones") && j.at("ones").is_array(), "mask needs a \"ones\" array");
  std::vector<Cell> cells;
  for (const auto& v : j.at("ones")) {
    require(v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer(),
            "mask cells must be [k, l] integer pairs");
    cells.push_back({v[0].get<int>(), v[1].get<int>()});
  }
  try {
    return SupportMask::from_cells(m, n, cells);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

Json to_json(const RankOneSupport& s) { return {{"rows", s.rows}, {"cols", s.cols}}; }

Json to_json(const RankOneSupportTuple& s) {
  Json supports = Json::array();
  for (const auto& si : s.supports()) supports.push_back(to_json(si));
  return {{"m", s.m()}, {"n", s.n()}, {"supports", std::move(supports)}};
}

RankOneSupportTuple tuple_from_json(const Json& j) {
  const std::size_t m = size_field(j, "m");
  const std::size_t n = size_field(j, "n");
  require(j.contains("supports") && j.at("supports").is_array(), "tuple needs a \"supports\" array");
  std::vector<RankOneSupport> supports;
  for (const auto& s : j.at("supports")) supports.push_back(support_from_json(s));
  try {
    return RankOneSupportTuple(m, n, std::move(supports));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

Json to_json(const TreeDescription& d) {
  if (d.children.empty()) return d.leaf;
  Json out = Json::array();
  for (const auto& c : d.children) out.push_back(to_json(c));
  return out;
}

TreeDescription tree_from_json(const Json& j) {
  if (j.is_number_integer()) return {j.get<int>(), {}};
  require(j.is_array() && j.size() == 2, "tree node must be an integer leaf or a [left, right] pair");
  return {0, {tree_from_json(j[0]), tree_from_json(j[1])}};
}

Json to_json(const PartitionCertificate& cert) {
  Json partitions = Json::array();
  std::size_t m = 0, n = 0;
  for (const auto& p : cert.partitions) {
    m = p.m();
    n = p.n();
    partitions.push_back(to_json(p).at("supports"));
  }
  return {{"status", std::string(to_string(cert.status))},
          {"m", m},
          {"n", n},
          {"count", cert.partitions.size()},
          {"nodes", cert.nodes},
          {"partitions", std::move(partitions)}};
}

PartitionCertificate certificate_from_json(const Json& j) {
  require(j.is_object() && j.contains("status") && j.at("status").is_string(), "certificate needs a \"status\"");
  PartitionCertificate cert;
  const std::string status = j.at("status").get<std::string>();
  if (status == "unique")
    cert.status = PartitionCertificate::Status::Unique;
  else if (status == "multiple")
    cert.status = PartitionCertificate::Status::Multiple;
  else if (status == "none")
    cert.status = PartitionCertificate::Status::None;
  else
    throw FormatError("unknown certificate status \"" + status + "\"");
  cert.nodes = j.value("nodes", std::uint64_t{0});
  const std::size_t m = size_field(j, "m");
  const std::size_t n = size_field(j, "n");
  require(j.contains("partitions") && j.at("partitions").is_array(), "certificate needs a \"partitions\" array");
  for (const auto& p : j.at("partitions"))
    cert.partitions.push_back(tuple_from_json({{"m", m}, {"n", n}, {"supports", p}}));
  return cert;
}

Json to_json(const EmdOutcome& outcome) {
  Json contributions = Json::array();
  for (const auto& c : outcome.contributions) {
    std::set<int> rows, cols;
    bool complex = false;
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t k = 0; k < c.cols(); ++k) {
        if (c.state(i, k) == CellState::StructuralZero) continue;
        rows.insert(static_cast<int>(i + 1));
        cols.insert(static_cast<int>(k + 1));
        if (c.known(i, k) && c.value(i, k).imag() != 0.0) complex = true;
      }
    Json data = Json::array();
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t k = 0; k < c.cols(); ++k)
        data.push_back(c.known(i, k) ? entry_json(c.value(i, k), complex) : Json(nullptr));
    contributions.push_back({{"rows", c.rows()},
                             {"cols", c.cols()},
                             {"complex", complex},
                             {"support", {{"rows", rows}, {"cols", cols}}},
                             {"data", std::move(data)}});
  }
  Json out = {{"outcome", std::string(to_string(outcome.kind))}};
  if (outcome.cell) out["cell"] = {outcome.cell->row, outcome.cell->col};
  out["contributions"] = std::move(contributions);
  return out;
}

EmdOutcome outcome_from_json(const Json& j) {
  require(j.is_object() && j.contains("outcome") && j.at("outcome").is_string(), "outcome needs an \"outcome\"");
  EmdOutcome out;
  const std::string kind = j.at("outcome").get<std::string>();
  if (kind == "complete")
    out.kind = EmdOutcome::Kind::Complete;
  else if (kind == "incompatible")
    out.kind = EmdOutcome::Kind::Incompatible;
  else if (kind == "stalled")
    out.kind = EmdOutcome::Kind::Stalled;
  else
    throw FormatError("unknown outcome \"" + kind + "\"");
  if (j.contains("cell")) {
    const Json& c = j.at("cell");
    require(c.is_array() && c.size() == 2, "\"cell\" must be [k, l]");
    out.cell = Cell{c[0].get<int>(), c[1].get<int>()};
  }
  require(j.contains("contributions") && j.at("contributions").is_array(), "outcome needs \"contributions\"");
  for (const auto& c : j.at("contributions")) {
    const std::size_t m = size_field(c, "rows");
    const std::size_t n = size_field(c, "cols");
    require(c.contains("support"), "contribution needs a \"support\"");
    const RankOneSupport s = support_from_json(c.at("support"));
    const Json& data = c.at("data");
    require(data.is_array() && data.size() == m * n, "contribution data has the wrong length");
    PartialMatrix p(m, n, s);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const Json& v = data[i * n + k];
        if (v.is_null()) continue;
        const Complex z = entry_from_json(v);
        if (p.state(i, k) == CellState::Missing) p.fill(i, k, z);
        else require(z == Complex{}, "nonzero entry outside the contribution support");
      }
    out.contributions.push_back(std::move(p));
  }
  return out;
}

Json to_json(const ScalingChain& d) {
  Json out = Json::array();
  for (const auto& diag : d.diagonals) {
    Json entries = Json::array();
    for (const Complex& z : diag) entries.push_back(entry_json(z, true));
    out.push_back(std::move(entries));
  }
  return out;
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw IoError("error while writing " + path.string());
}

namespace {

std::string factor_file(int ell) { return "X_" + std::to_string(ell) + ".json"; }

}  // namespace

void write_chain_directory(const fs::path& dir, const ChainDirectory& c) {
  if (static_cast<std::size_t>(c.layers) != c.chain.size())
    throw std::invalid_argument("chain directory: layer count does not match the chain");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  Json files = Json::array();
  for (int t = 0; t < c.layers; ++t) {
    const int ell = c.layers - t;
    write_json_file(dir / factor_file(ell), to_json(c.chain[static_cast<std::size_t>(t)]));
    files.push_back(factor_file(ell));
  }
  Json levels = Json::array();
  for (const auto& lv : c.levels)
    levels.push_back({{"q", lv.q}, {"p", lv.p}, {"split", lv.split}, {"residual", lv.residual}});
  Json manifest = {{"layers", c.layers}, {"factors", std::move(files)}};
  if (c.residual) manifest["residual"] = *c.residual;
  manifest["levels"] = std::move(levels);
  write_json_file(dir / "manifest.json", manifest);
}

ChainDirectory read_chain_directory(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  const Json manifest = read_json_file(manifest_path);
  ChainDirectory c;
  try {
    c.layers = static_cast<int>(size_field(manifest, "layers"));
    require(manifest.contains("factors") && manifest.at("factors").is_array(), "manifest needs \"factors\"");
    const Json& files = manifest.at("factors");
    require(files.size() == static_cast<std::size_t>(c.layers), "manifest lists the wrong number of factors");
    for (const auto& f : files) {
      require(f.is_string(), "factor entries must be file names");
      c.chain.push_back(matrix_from_json(read_json_file(dir / f.get<std::string>())));
    }
    if (manifest.contains("residual")) c.residual = manifest.at("residual").get<double>();
    if (manifest.contains("levels"))
      for (const auto& lv : manifest.at("levels"))
        c.levels.push_back({lv.at("q").get<int>(), lv.at("p").get<int>(), lv.at("split").get<int>(),
                            lv.at("residual").get<double>()});
  } catch (const FormatError& e) {
    throw FormatError(manifest_path.string() + ": " + e.what());
  } catch (const Json::exception& e) {
    throw FormatError(manifest_path.string() + ": " + e.what());
  }
  return c;
}

}  // namespace sparseid
