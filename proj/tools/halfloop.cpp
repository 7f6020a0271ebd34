#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "halfloop/oracle_sweep.hpp"
#include "halfloop/runner.hpp"

using namespace halfloop;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRefused = 3;

int cmd_verify(const std::string& model, const std::string& json_path, const VerifyOptions& opt, bool timings) {
  const ModelFile mf = parse_model(model);
  const Report r = run_verify(mf, opt);
  std::cout << render_text(r, timings);
  if (!json_path.empty()) {
    std::ofstream f(json_path);
    if (!f) throw std::runtime_error("cannot write " + json_path);
    f << render_json(r, timings);
  }
  return r.passed() ? 0 : kExitFail;
}

int cmd_spectra(const std::string& model, const SpectraOptions& opt) {
  const ModelFile mf = parse_model(model);
  const auto [r, s] = run_spectra(mf, opt);
  std::cout << render_text(r);
  std::printf("coefficients:");
  for (double c : s.coefficients) std::printf(" %.6g", c);
  std::printf("\n");
  for (std::size_t k = 0; k < s.spectra.size(); ++k) {
    std::printf("H%zu:", k + 1);
    for (const auto& e : s.spectra[k]) std::printf(" (%.10f%+.10fi)", e.real() + 0.0, e.imag() + 0.0);
    std::printf("\n");
  }
  return r.passed() ? 0 : kExitFail;
}

int cmd_fixtures(const std::string& model, std::string out_dir, bool force) {
  const ModelFile mf = parse_model(model);
  if (mf.kind != ModelKind::dunkl) throw std::invalid_argument("fixtures apply to dunkl models only");
  if (out_dir.empty()) {
    if (!mf.fixtures_dir) throw std::invalid_argument("no --out given and the model names no fixtures directory");
    out_dir = *mf.fixtures_dir;
  }
  const auto files = render_fixtures(std::get<DunklSpec>(mf.spec));
  std::filesystem::create_directories(out_dir);
  bool refused = false;
  for (const auto& [name, text] : files) {
    const auto path = std::filesystem::path(out_dir) / name;
    if (std::filesystem::exists(path) && !force) {
      std::cerr << "refusing to overwrite " << path.string() << " (pass --force)\n";
      refused = true;
    }
  }
  if (refused) return kExitRefused;
  for (const auto& [name, text] : files) {
    const auto path = std::filesystem::path(out_dir) / name;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

int cmd_oracle_sweep(unsigned seed, std::size_t max_dim) {
  const auto cs = oracle_equivalence_sweep(seed, max_dim);
  for (const auto& c : cs)
    std::cout << status_name(c.status) << "  " << c.name << "  " << (c.witness.empty() ? c.note : c.witness) << "\n";
  return all_passed(cs) ? 0 : kExitFail;
}

oracle::Dense dense_hamiltonian(const ModelFile& mf, int k) {
  if (mf.kind == ModelKind::inner_gaudin) return dense_hamiltonian_inner(std::get<InnerModelSpec>(mf.spec), k);
  if (mf.kind == ModelKind::outer_gaudin) return dense_hamiltonian_outer(std::get<OuterModelSpec>(mf.spec), k);
  throw std::invalid_argument("oracle hamiltonians exist for gaudin models only");
}

int site_count(const ModelFile& mf) {
  if (mf.kind == ModelKind::inner_gaudin) return std::get<InnerModelSpec>(mf.spec).L();
  if (mf.kind == ModelKind::outer_gaudin) return std::get<OuterModelSpec>(mf.spec).L();
  return std::get<DunklSpec>(mf.spec).L;
}

int cmd_oracle_hamiltonian(const std::string& model, int k) {
  const ModelFile mf = parse_model(model);
  if (k < 1 || k > site_count(mf)) throw std::invalid_argument("site index out of range");
  const oracle::Dense H = dense_hamiltonian(mf, k - 1);
  const std::size_t n = H.total();
  std::cout << "# dense H" << k << ", dimension " << n << ", 1-based row col value\n";
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (!H.at(r, c).is_zero()) std::cout << r + 1 << " " << c + 1 << " " << H.at(r, c).str() << "\n";
  return 0;
}

int cmd_oracle_compare(const std::string& model) {
  const ModelFile mf = parse_model(model);
  std::vector<SparseOp> sparse;
  if (mf.kind == ModelKind::inner_gaudin)
    sparse = hamiltonians_inner(std::get<InnerModelSpec>(mf.spec));
  else if (mf.kind == ModelKind::outer_gaudin)
    sparse = hamiltonians_outer(std::get<OuterModelSpec>(mf.spec));
  else
    throw std::invalid_argument("oracle hamiltonians exist for gaudin models only");
  bool ok = true;
  for (std::size_t k = 0; k < sparse.size(); ++k) {
    const bool eq = oracle::equal(sparse[k], dense_hamiltonian(mf, static_cast<int>(k)));
    std::cout << (eq ? "match" : "MISMATCH") << "  H" << k + 1 << "\n";
    ok = ok && eq;
  }
  return ok ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"halfloop: exact checks for twisted Gaudin magnets and star-graph Dunkl operators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("halfloop ") + kToolVersion);

  std::string model, json_path, out_dir;
  VerifyOptions vopt;
  SpectraOptions sopt;
  bool timings = false, force = false;

  auto* verify = app.add_subcommand("verify", "run every exact check for a model file");
  verify->add_option("model", model, "model file")->required()->check(CLI::ExistingFile);
  verify->add_option("--json", json_path, "also write the JSON report here");
  verify->add_option("--truncation", vopt.truncation, "highest series coefficient (dunkl)")->check(CLI::NonNegativeNumber);
  verify->add_flag("--all-pairs", vopt.all_pairs, "test every commutator pair even for many sites");
  verify->add_option("--seed", vopt.seed, "seed for random test states")->capture_default_str();
  verify->add_flag("--timings", timings, "record wall times (reports are then not reproducible)");

  auto* spectra = app.add_subcommand("spectra", "floating simultaneous-diagonalization cross-check (gaudin)");
  spectra->add_option("model", model, "model file")->required()->check(CLI::ExistingFile);
  spectra->add_option("--tol", sopt.tol, "bound on the off-diagonal residual")->capture_default_str();
  spectra->add_option("--seed", sopt.seed, "seed for the random combination")->capture_default_str();

  auto* fixtures = app.add_subcommand("fixtures", "write engine renderings of the dunkl charges");
  fixtures->add_option("model", model, "dunkl model file")->required()->check(CLI::ExistingFile);
  fixtures->add_option("--out", out_dir, "target directory (default: the model's fixtures directory)");
  fixtures->add_flag("--force", force, "overwrite existing files");

  auto* oracle_cmd = app.add_subcommand("oracle", "dense brute-force reference");
  oracle_cmd->group("");
  oracle_cmd->require_subcommand(1);
  unsigned oseed = 1;
  std::size_t max_dim = 81;
  int site = 1;
  auto* sweep = oracle_cmd->add_subcommand("sweep", "sparse against dense on random instances");
  sweep->add_option("--seed", oseed)->capture_default_str();
  sweep->add_option("--max-dim", max_dim)->capture_default_str();
  auto* ham = oracle_cmd->add_subcommand("hamiltonian", "print dense H_k");
  ham->add_option("model", model)->required()->check(CLI::ExistingFile);
  ham->add_option("k", site, "1-based site")->required();
  auto* cmp = oracle_cmd->add_subcommand("compare", "sparse H_k against dense H_k");
  cmp->add_option("model", model)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(model, json_path, vopt, timings);
    if (spectra->parsed()) return cmd_spectra(model, sopt);
    if (fixtures->parsed()) return cmd_fixtures(model, out_dir, force);
    if (sweep->parsed()) return cmd_oracle_sweep(oseed, max_dim);
    if (ham->parsed()) return cmd_oracle_hamiltonian(model, site);
    if (cmp->parsed()) return cmd_oracle_compare(model);
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
