#include "doctest.h"
#include "halfloop/runner.hpp"

using namespace halfloop;

namespace {

const char* kInner =
    "format_version = 1\n"
    "kind = inner-gaudin\n"
    "n = 2\n"
    "N = 2\n"
    "multiplicities = 1, 1\n"
    "z = 1, 2\n";

std::string error_of(const std::string& text) {
  try {
    parse_model_text(text, "t.model");
  } catch (const ModelError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal inner model") {
  const ModelFile mf = parse_model_text(kInner, "t.model");
  CHECK(mf.kind == ModelKind::inner_gaudin);
  const auto& s = std::get<InnerModelSpec>(mf.spec);
  CHECK(s.L() == 2);
  CHECK(s.n == 2);
  CHECK(mf.entries.size() == 6);
}

TEST_CASE("scalars") {
  CHECK(parse_scalar("3/4 - 1/4") == CycNum(BigRational(1, 2)));
  CHECK(parse_scalar("zeta(4,1)*zeta(4,1)") == CycNum(-1));
  CHECK_THROWS_AS(parse_scalar("zeta(4,1)^2"), ModelError);
  CHECK(parse_scalar("(1 + i)*(1 - i)") == CycNum(2));
}

TEST_CASE("model validation errors") {
  CHECK(error_of(std::string(kInner).replace(std::string(kInner).find("z = 1, 2"), 8, "z = 1, 1"))
            .find("pairwise distinct") != std::string::npos);
  CHECK(error_of("format_version = 1\nkind = outer-gaudin\nN = 3\neta = -1\nz = 1, 2\n").find("N must be even") !=
        std::string::npos);
  const std::string unknown = error_of(std::string(kInner) + "colour = red\n");
  CHECK(unknown.rfind("t.model:7:1:", 0) == 0);
  CHECK(unknown.find("unknown key 'colour'") != std::string::npos);
  CHECK(error_of(std::string(kInner) + "n = 3\n").find("duplicate key") != std::string::npos);
  CHECK(error_of("format_version = 2\nkind = inner-gaudin\n").find("format_version") != std::string::npos);
  CHECK(error_of("format_version = 1\nkind = inner-gaudin\nn = 2\nN = 2\nmultiplicities = 1, 1\nz = 1, 2/\n")
            .rfind("t.model:6:", 0) == 0);
}

TEST_CASE("inline representation") {
  const RepMatrices r = parse_rep("inline 2 : 1,0;0,0 | 0,1;0,0 | 0,0;1,0 | 0,0;0,1", 2);
  const RepMatrices f = RepMatrices::fundamental(2);
  CHECK(r.dim() == f.dim());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(r.rho(a, b) == f.rho(a, b));
  CHECK_THROWS(parse_rep("inline 2 : 1,0;0,0", 2));
  CHECK_THROWS(parse_rep("spin1", 3));
}

TEST_CASE("report JSON round trip") {
  Report r;
  r.model = {{"origin", "x.model"}, {"kind", "inner-gaudin"}};
  r.checks.push_back(make_check("a", true, {}, "note"));
  r.checks.push_back(make_check("b", false, "witness text"));
  Check info{"c", Status::info, "w", "", 0};
  r.checks.push_back(info);
  const auto j = to_json(r);
  CHECK(j["status"] == "fail");
  CHECK(j["format_version"] == kReportFormatVersion);
  const Report back = report_from_json(j);
  REQUIRE(back.checks.size() == 3);
  CHECK(back.checks[1].witness == "witness text");
  CHECK(back.checks[2].status == Status::info);
  CHECK(to_json(back) == j);
  CHECK(render_json(r) == render_json(back));
}

TEST_CASE("report status") {
  Report r;
  CHECK(r.passed());
  CHECK(to_json(r)["status"] == "pass");
  r.checks.push_back(Check{"i", Status::info, "", "", 0});
  CHECK(r.passed());
  r.checks.push_back(make_check("f", false, "w"));
  CHECK(!r.passed());
}

TEST_CASE("verify is deterministic") {
  const ModelFile mf = parse_model_text(kInner, "t.model");
  const Report a = run_verify(mf, {}), b = run_verify(mf, {});
  CHECK(a.passed());
  CHECK(render_json(a) == render_json(b));
}

TEST_CASE("spectra cross-check") {
  const ModelFile mf = parse_model_text(
      "format_version = 1\nkind = inner-gaudin\nn = 1\nN = 2\nmultiplicities = 2\nz = 1, 2, 4\n", "c.model");
  const auto [r, s] = run_spectra(mf, {});
  CHECK(r.passed());
  CHECK(s.ok);
  CHECK(s.residual < 1e-8);
  CHECK(s.spectra.size() == 3);

  const SparseOp one = SparseOp::identity(SpaceLayout::single(3));
  const SpectraResult single = simultaneous_spectra({one * CycNum(2)}, 1e-12, 1);
  CHECK(single.ok);
  CHECK(single.residual == 0);
}
