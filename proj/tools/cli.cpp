#include "cli.hpp"

#include "sparseid/core.hpp"
#include "sparseid/emd.hpp"
#include "sparseid/hier.hpp"
#include "sparseid/io.hpp"
#include "sparseid/oracle.hpp"
#include "sparseid/supports.hpp"
#include "sparseid/transforms.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <ostream>

namespace sparseid::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  double tolerance = TolerancePolicy{}.relative_tolerance;
  double zero_threshold = TolerancePolicy{}.zero_threshold;
  std::uint64_t seed = 0;

  TolerancePolicy policy() const {
    TolerancePolicy tol{zero_threshold, tolerance};
    try {
      tol.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return tol;
  }
};

struct GenFlags {
  std::string kind;
  std::size_t size = 0;
  std::string out;
  std::string out_dir;
};

struct FactorizeFlags {
  std::string matrix;
  int layers = 0;
  std::string tree;
  bool bit_reversal = false;
  std::string mode = "exact";
  std::string out_dir;
};

struct CompleteFlags {
  std::string matrix;
  std::string tuple;
  std::string out;
};

struct EnumerateFlags {
  std::string matrix;
  std::size_t a = 0;
  std::size_t b = 0;
  std::uint64_t budget = kDefaultNodeBudget;
  std::size_t rank = 0;  // 0 means: number of columns
};

struct VerifyFlags {
  std::string original;
  std::string recovered;
};

void print(std::ostream& out, const Json& j) { out << j.dump(1) << '\n'; }

int do_gen(const GenFlags& f, const GlobalFlags& g, std::ostream& out) {
  if (auto kind = parse_transform_kind(f.kind)) {
    if (f.out.empty()) throw UsageError("gen --kind " + f.kind + " needs --out FILE");
    write_json_file(f.out, to_json(gen_transform(*kind, f.size)));
    return kOk;
  }
  if (f.kind != "dft-butterfly-chain" && f.kind != "random-butterfly-chain")
    throw UsageError("unknown --kind " + f.kind);
  if (f.out_dir.empty()) throw UsageError("gen --kind " + f.kind + " needs --out-dir DIR");
  if (!is_power_of_two(f.size) || f.size < 2) throw UsageError("--size must be a power of two >= 2");

  const TolerancePolicy tol = g.policy();
  const int L = log2_exact(f.size);
  ChainDirectory dir;
  dir.layers = L;
  dir.chain = f.kind == "dft-butterfly-chain" ? dft_butterfly_chain(L) : random_butterfly_chain(L, g.seed);
  const ComplexMatrix product = chain_product(dir.chain);
  if (f.kind == "dft-butterfly-chain")
    dir.residual = rel_frobenius_error(product, gen_transform(TransformKind::DFT, f.size), tol);
  write_chain_directory(f.out_dir, dir);
  if (!f.out.empty()) write_json_file(f.out, to_json(product));
  print(out, {{"layers", L}, {"out_dir", f.out_dir}});
  return kOk;
}

PartitioningTree load_tree(const std::string& spec, int L) {
  if (auto shape = parse_tree_shape(spec)) return make_tree(*shape, 1, L);
  return make_tree(tree_from_json(read_json_file(spec)), 1, L);
}

int do_factorize(const FactorizeFlags& f, const GlobalFlags& g, std::ostream& out, std::ostream& err) {
  const TolerancePolicy tol = g.policy();
  if (f.layers < 1 || f.layers > 30) throw UsageError("--layers must be between 1 and 30");
  FactorizeOptions options;
  options.dft_bit_reversal = f.bit_reversal;
  options.mode = f.mode == "svd" ? FactorizeMode::SvdProject : FactorizeMode::Exact;

  const ComplexMatrix z = matrix_from_json(read_json_file(f.matrix));
  const PartitioningTree tree = load_tree(f.tree, f.layers);

  HierarchicalResult result;
  try {
    result = hierarchical_factorize(z, tree, f.layers, options, tol);
  } catch (const std::domain_error& e) {
    err << "factorize: " << e.what() << '\n';
    return kIncompatible;
  }

  ChainDirectory dir;
  dir.layers = f.layers;
  dir.residual = rel_frobenius_error(chain_product(result.chain), z, tol);
  dir.levels = result.levels;
  dir.chain = std::move(result.chain);
  write_chain_directory(f.out_dir, dir);
  print(out, {{"layers", f.layers}, {"residual", *dir.residual}, {"out_dir", f.out_dir}});
  return kOk;
}

int do_complete(const CompleteFlags& f, const GlobalFlags& g, std::ostream& out) {
  const TolerancePolicy tol = g.policy();
  const ComplexMatrix z = matrix_from_json(read_json_file(f.matrix));
  const RankOneSupportTuple s = tuple_from_json(read_json_file(f.tuple));
  if (s.m() != z.rows() || s.n() != z.cols()) throw UsageError("tuple dimensions do not match the matrix");

  const EmdOutcome outcome = emd_complete(z, s, tol);
  write_json_file(f.out, to_json(outcome));
  Json summary = {{"outcome", std::string(to_string(outcome.kind))}};
  if (outcome.cell) summary["cell"] = {outcome.cell->row, outcome.cell->col};
  print(out, summary);
  switch (outcome.kind) {
    case EmdOutcome::Kind::Complete: return kOk;
    case EmdOutcome::Kind::Incompatible: return kIncompatible;
    case EmdOutcome::Kind::Stalled: return kStalled;
  }
  return kStalled;
}

int do_closability(const std::string& tuple_path, std::ostream& out) {
  const RankOneSupportTuple s = tuple_from_json(read_json_file(tuple_path));
  const ClosureResult c = closure(observable_graphs(s));
  const bool closable = std::all_of(c.graphs.begin(), c.graphs.end(), [](const BipartiteGraph& g) {
    return g.is_complete();
  });
  print(out, {{"closable", closable}, {"steps", c.steps}});
  return kOk;
}

int do_enumerate(const EnumerateFlags& f, const GlobalFlags& g, std::ostream& out) {
  const TolerancePolicy tol = g.policy();
  const ComplexMatrix z = matrix_from_json(read_json_file(f.matrix));
  SupportFamilySpec fam{f.a, f.b, z.rows(), z.cols(), f.rank == 0 ? z.cols() : f.rank};
  try {
    fam.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  print(out, to_json(enumerate_partitions(z, fam, tol, f.budget)));
  return kOk;
}

int do_verify(const VerifyFlags& f, const GlobalFlags& g, std::ostream& out) {
  const TolerancePolicy tol = g.policy();
  const ChainDirectory a = read_chain_directory(f.original);
  const ChainDirectory b = read_chain_directory(f.recovered);
  if (a.chain.size() != b.chain.size())
    throw UsageError("chains have different lengths (" + std::to_string(a.chain.size()) + " vs " +
                     std::to_string(b.chain.size()) + ")");
  for (std::size_t t = 0; t < a.chain.size(); ++t)
    if (a.chain[t].rows() != b.chain[t].rows() || a.chain[t].cols() != b.chain[t].cols())
      throw UsageError("factor " + std::to_string(t + 1) + " has mismatched shape");

  const auto witness = verify_s_unique_recovery(a.chain, b.chain, tol);
  if (!witness) {
    print(out, {{"equivalent", false}});
    return kNotEquivalent;
  }
  print(out, {{"equivalent", true}, {"diagonals", to_json(*witness)}});
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse matrix factorization identifiability tools"};
  app.name("sparseid");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags global;
  app.add_option("--tolerance", global.tolerance, "Relative tolerance for rank and equality tests")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--zero-threshold", global.zero_threshold, "Magnitudes at or below this count as zero")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", global.seed, "Seed for random fixtures");

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a transform matrix or a butterfly factor chain");
  gen_cmd->add_option("--kind", gen.kind, "dft|dct2|dst2|hadamard|dft-butterfly-chain|random-butterfly-chain")
      ->required()
      ->check(CLI::IsMember({"dft", "dct2", "dst2", "hadamard", "dft-butterfly-chain", "random-butterfly-chain"}));
  gen_cmd->add_option("--size", gen.size, "Matrix size N")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", gen.out, "Matrix file (the chain product for chain kinds)");
  gen_cmd->add_option("--out-dir", gen.out_dir, "Chain directory for chain kinds");

  FactorizeFlags fac;
  auto* fac_cmd = app.add_subcommand("factorize", "Hierarchical butterfly factorization");
  fac_cmd->add_option("--matrix", fac.matrix, "Input matrix file")->required();
  fac_cmd->add_option("--layers", fac.layers, "Number of factors L (matrix is 2^L x 2^L)")->required();
  fac_cmd->add_option("--tree", fac.tree, "left-comb|right-comb|balanced or a tree JSON file")->required();
  fac_cmd->add_flag("--dft-bit-reversal", fac.bit_reversal, "Fold the bit-reversal permutation into X_1");
  fac_cmd->add_option("--mode", fac.mode, "exact|svd")->check(CLI::IsMember({"exact", "svd"}));
  fac_cmd->add_option("--out-dir", fac.out_dir, "Output chain directory")->required();

  CompleteFlags comp;
  auto* comp_cmd = app.add_subcommand("complete", "Fixed-support decomposition by rank-one completion");
  comp_cmd->add_option("--matrix", comp.matrix, "Input matrix file")->required();
  comp_cmd->add_option("--tuple", comp.tuple, "Rank-one support tuple file")->required();
  comp_cmd->add_option("--out", comp.out, "Outcome file")->required();

  std::string clos_tuple;
  auto* clos_cmd = app.add_subcommand("closability", "Closure of a rank-one support tuple");
  clos_cmd->add_option("--tuple", clos_tuple, "Rank-one support tuple file")->required();

  EnumerateFlags en;
  auto* en_cmd = app.add_subcommand("enumerate", "Enumerate rank-one partitions of supp(Z)");
  en_cmd->add_option("--matrix", en.matrix, "Input matrix file")->required();
  en_cmd->add_option("--left-sparsity", en.a, "Ones per column of the left support")
      ->required()
      ->check(CLI::PositiveNumber);
  en_cmd->add_option("--right-sparsity", en.b, "Ones per column of the right support")
      ->required()
      ->check(CLI::PositiveNumber);
  en_cmd->add_option("--budget", en.budget, "Maximum number of search nodes")->check(CLI::PositiveNumber);
  en_cmd->add_option("--rank", en.rank, "Number of rank-one terms r (default: number of columns)")
      ->check(CLI::PositiveNumber);

  VerifyFlags ver;
  auto* ver_cmd = app.add_subcommand("verify", "Check two factor chains for scale equivalence");
  ver_cmd->add_option("--original", ver.original, "Reference chain directory")->required();
  ver_cmd->add_option("--recovered", ver.recovered, "Chain directory to compare")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_cmd) return do_gen(gen, global, out);
    if (*fac_cmd) return do_factorize(fac, global, out, err);
    if (*comp_cmd) return do_complete(comp, global, out);
    if (*clos_cmd) return do_closability(clos_tuple, out);
    if (*en_cmd) return do_enumerate(en, global, out);
    if (*ver_cmd) return do_verify(ver, global, out);
  } catch (const BudgetExceeded& e) {
    err << "enumerate: " << e.what() << '\n';
    return kBudgetExceeded;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace sparseid::cli
