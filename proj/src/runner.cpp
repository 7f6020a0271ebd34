#include "halfloop/runner.hpp"

#include <sstream>
#include <stdexcept>

namespace halfloop {

namespace {

const Check* find(const std::vector<Check>& cs, const std::string& name) {
  for (const auto& c : cs)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

Report run_verify(const ModelFile& mf, const VerifyOptions& opt) {
  Report r;
  r.model = model_echo(mf);
  switch (mf.kind) {
    case ModelKind::inner_gaudin:
      r.checks = run_inner_suite(std::get<InnerModelSpec>(mf.spec), opt.all_pairs);
      break;
    case ModelKind::outer_gaudin:
      r.checks = run_outer_suite(std::get<OuterModelSpec>(mf.spec), opt.all_pairs);
      r.model["conventions"]["boundary_sign"] = "residue-consistent: - tr P_k Q_j / (z_k + z_j)";
      break;
    case ModelKind::dunkl: {
      DunklSpec s = std::get<DunklSpec>(mf.spec);
      if (opt.truncation >= 0) s.truncation = opt.truncation;
      std::optional<FixtureSet> fx;
      if (mf.fixtures_dir) fx = load_fixtures(*mf.fixtures_dir);
      r.checks = run_dunkl_suite(s, fx ? &*fx : nullptr, opt.seed);
      r.model["conventions"]["rotation"] = "tau Q_i q_i = q_i Q_i; (Q_i psi)(q_i) = psi(tau^-1 q_i)";
      r.model["conventions"]["momentum"] = "p_i = -i hbar d/dq_i";
      if (const Check* c = find(r.checks, "hbar_calibration")) r.model["conventions"]["hbar"] = c->note;
      break;
    }
  }
  return r;
}

std::pair<Report, SpectraResult> run_spectra(const ModelFile& mf, const SpectraOptions& opt) {
  std::vector<SparseOp> H;
  if (mf.kind == ModelKind::inner_gaudin)
    H = hamiltonians_inner(std::get<InnerModelSpec>(mf.spec));
  else if (mf.kind == ModelKind::outer_gaudin)
    H = hamiltonians_outer(std::get<OuterModelSpec>(mf.spec));
  else
    throw std::invalid_argument("spectra applies to gaudin models only");
  Report r;
  r.model = model_echo(mf);
  std::ostringstream tol;
  tol << opt.tol;
  r.model["tolerance"] = tol.str();
  r.model["seed"] = opt.seed;
  SpectraResult s;
  append_timed(r.checks, [&] {
    s = simultaneous_spectra(H, opt.tol, opt.seed);
    std::ostringstream w;
    w << "max off-diagonal " << s.residual << " after " << s.attempts << " combination(s)";
    Check c = make_check("spectra_offdiagonal_residual", s.ok, w.str(), w.str());
    return c;
  });
  return {r, s};
}

}  // namespace halfloop
