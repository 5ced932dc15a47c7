#include <gtest/gtest.h>

#include <set>

#include "mutants.hpp"
#include "qhahn/registry.hpp"
#include "qhahn/verify.hpp"

using namespace qhahn;

namespace {

VerifyConfig quick(std::size_t samples = 2) {
  VerifyConfig c;
  c.samples = samples;
  return c;
}

Rational rat(std::int64_t n, std::int64_t d) { return Rational::make(n, d); }

Identity synthetic(std::function<ScalarList(const Point&)> rhs) {
  Identity id;
  id.id = "synthetic";
  id.citation = "test";
  id.params = {{"x", ParamKind::Unit}, {"q", ParamKind::Base}};
  id.domain = [](const Point&) { return true; };
  id.lhs = [](const Point& p) { return ScalarList{p["x"] * p["x"]}; };
  id.rhs = std::move(rhs);
  return id;
}

}  // namespace

TEST(Registry, IdsInReportOrder) {
  std::vector<std::string> expected = {"I-0a",  "I-0b",  "I-0c",   "I-0d",   "I-1.1", "I-1.2a", "I-1.2b", "I-2.1",
                                       "I-2.2a", "I-2.2b", "I-2.3", "I-2.4", "I-2.5", "I-2.6", "I-2.7", "I-2.8",
                                       "I-2.9", "I-2.10", "I-3.1", "I-3.2", "I-3.3", "I-3.4", "I-3.5", "I-3.6",
                                       "I-4.1", "I-4.2", "I-4.3", "I-4.4", "I-5.1", "I-5.2", "I-5.2r"};
  std::vector<std::string> got;
  for (const auto& i : registry()) got.push_back(i.id);
  EXPECT_EQ(got, expected);
}

TEST(Registry, EntriesAreComplete) {
  for (const auto& i : registry()) {
    EXPECT_FALSE(i.citation.empty()) << i.id;
    EXPECT_TRUE(i.lhs && i.rhs && i.domain) << i.id;
    std::set<std::string> names;
    for (const auto& p : i.params) names.insert(p.name);
    EXPECT_EQ(names.size(), i.params.size()) << i.id;
    EXPECT_EQ(names.count("q"), 1u) << i.id;
  }
  EXPECT_EQ(find_identity("I-3.2")->mode, Mode::CoeffT);
  EXPECT_EQ(find_identity("I-2.2a")->mode, Mode::CoeffTS);
  EXPECT_EQ(find_identity("nope"), nullptr);
}

TEST(Sampling, DeterministicAndSeedDependent) {
  const Identity& id = *find_identity("I-0c");
  VerifyConfig c = quick(5);
  auto a = sample_params(id, c), b = sample_params(id, c);
  EXPECT_EQ(a, b);
  c.seed = 43;
  EXPECT_NE(a, sample_params(id, c));
}

TEST(Sampling, RespectsKindsAndDomain) {
  VerifyConfig c = quick(20);
  for (const char* name : {"I-0c", "I-4.2", "I-5.1"}) {
    const Identity& id = *find_identity(name);
    for (const auto& t : sample_params(id, c)) {
      Point p(t, c);
      EXPECT_TRUE(id.domain(p)) << name;
      for (const auto& [n, v] : t) {
        double d = v.to_double();
        if (n == "q") {
          EXPECT_GE(d, 0.125);
          EXPECT_LE(d, 0.875);
        } else {
          EXPECT_GT(std::fabs(d), 0.0);
          EXPECT_LT(std::fabs(d), 1.0);
        }
      }
    }
  }
}

TEST(Sampling, UnsatisfiableDomainIsInconclusive) {
  Identity id = synthetic([](const Point& p) { return ScalarList{p["x"] * p["x"]}; });
  id.domain = [](const Point&) { return false; };
  EXPECT_THROW(sample_params(id, quick()), DomainTooTight);
  auto rep = verify_identity(id, quick());
  EXPECT_EQ(rep.verdict, Verdict::Inconclusive);
  EXPECT_FALSE(rep.note.empty());
}

TEST(Verify, PassAndFail) {
  auto good = verify_identity(synthetic([](const Point& p) { return ScalarList{p["x"] * p["x"]}; }), quick());
  EXPECT_EQ(good.verdict, Verdict::Pass);
  ASSERT_EQ(good.samples.size(), 2u);
  EXPECT_TRUE(good.samples[0].max_rel_err->is_zero());

  auto bad = verify_identity(synthetic([](const Point& p) { return ScalarList{p["x"] * p["x"] * (1 + p["x"] / 1000000)}; }),
                             quick());
  EXPECT_EQ(bad.verdict, Verdict::Fail);
}

TEST(Verify, WorstIndexPointsAtTheDeviation) {
  Identity id = synthetic([](const Point& p) { return ScalarList{p["x"], p["x"] + 1, p["x"]}; });
  id.lhs = [](const Point& p) { return ScalarList{p["x"], p["x"], p["x"]}; };
  auto rep = verify_identity(id, quick(1));
  EXPECT_EQ(rep.verdict, Verdict::Fail);
  EXPECT_EQ(rep.samples[0].worst_index, 1u);
}

TEST(Verify, TailFailureIsInconclusive) {
  auto rep = verify_identity(synthetic([](const Point&) -> ScalarList { throw TailNotReached("slow"); }), quick());
  EXPECT_EQ(rep.verdict, Verdict::Inconclusive);
  EXPECT_FALSE(rep.samples[0].max_rel_err.has_value());
  EXPECT_EQ(rep.samples[0].note, "slow");
}

TEST(Verify, ScaleMeasuresCancellingSums) {
  // lhs is a rounding-size residue of a sum of order-one terms
  Identity id = synthetic([](const Point& p) { return ScalarList{Scalar(0, p.prec())}; });
  id.lhs = [](const Point& p) { return ScalarList{Scalar::exp2(-200, p.prec())}; };
  EXPECT_EQ(verify_identity(id, quick()).verdict, Verdict::Fail);
  id.scale = [](const Point& p) { return ScalarList{Scalar(1, p.prec())}; };
  EXPECT_EQ(verify_identity(id, quick()).verdict, Verdict::Pass);
}

TEST(Config, Validation) {
  VerifyConfig c;
  EXPECT_NO_THROW(c.validate());
  c.samples = 0;
  EXPECT_THROW(c.validate(), OutOfRange);
  c = VerifyConfig{};
  c.prec = 64;
  c.rel_tol = 1e-30;
  EXPECT_THROW(c.validate(), OutOfRange);
  c = VerifyConfig{};
  c.zero_floor = 0;
  EXPECT_THROW(c.validate(), OutOfRange);
}

TEST(Json, ReportShape) {
  auto rep = verify_identity(*find_identity("I-0a"), quick());
  auto j = to_json(rep);
  EXPECT_EQ(j["id"], "I-0a");
  EXPECT_EQ(j["mode"], "numeric");
  EXPECT_EQ(j["pass"], true);
  EXPECT_EQ(j["verdict"], "pass");
  ASSERT_EQ(j["samples"].size(), 2u);
  const auto& s = j["samples"][0];
  EXPECT_TRUE(s["params"].contains("q"));
  EXPECT_TRUE(s["max_rel_err"].is_string());
  EXPECT_EQ(j.dump(), to_json(verify_identity(*find_identity("I-0a"), quick())).dump());
}

TEST(Builders, BaselineValuesAtFixedPoints) {
  VerifyConfig c;
  // 1/(1/2;1/2)_inf = 3.46274661945506361153795734292443116454...
  Point p({{"z", rat(1, 2)}, {"q", rat(1, 2)}}, c);
  const Identity& euler = *find_identity("I-0b");
  EXPECT_NEAR(euler.lhs(p)[0].to_double(), 3.462746619455063611, 1e-15);
  EXPECT_TRUE(relative_deviation(euler.lhs(p)[0], Scalar::parse("3.462746619455063611537957342924431164541", 256),
                                 Scalar::exp2(-200, 256)) < Scalar::parse("1e-35", 256));
  // (6/35;-1/3)_inf/(3/7;-1/3)_inf = 1.37181656301577206408726232433773593374...
  Point p2({{"a", rat(2, 5)}, {"z", rat(3, 7)}, {"q", rat(-1, 3)}}, c);
  EXPECT_TRUE(relative_deviation(find_identity("I-0a")->rhs(p2)[0],
                                 Scalar::parse("1.371816563015772064087262324337735933745", 256),
                                 Scalar::exp2(-200, 256)) < Scalar::parse("1e-35", 256));
}

class CheapIdentity : public ::testing::TestWithParam<const char*> {};

// A passing identity keeps passing with another seed and a tighter tolerance.
TEST_P(CheapIdentity, PassesUnderOtherSeedAndTolerance) {
  const Identity& id = *find_identity(GetParam());
  VerifyConfig c = quick(3);
  c.seed = 7;
  EXPECT_EQ(verify_identity(id, c).verdict, Verdict::Pass);
  c = quick(3);
  c.rel_tol = 1e-30;
  EXPECT_EQ(verify_identity(id, c).verdict, Verdict::Pass);
}

INSTANTIATE_TEST_SUITE_P(Registry, CheapIdentity,
                         ::testing::Values("I-0a", "I-0b", "I-0c", "I-0d", "I-1.1", "I-1.2a", "I-1.2b", "I-2.1", "I-2.3",
                                           "I-2.4", "I-2.5", "I-2.7", "I-2.8", "I-3.1", "I-3.2", "I-3.3", "I-4.1",
                                           "I-4.2", "I-4.3", "I-4.4", "I-5.1"),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (auto& ch : s)
                             if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
                           return s;
                         });

TEST(Registry, ProductFormulasFailAsStated) {
  auto rep = verify_identity(*find_identity("I-3.6"), quick());
  EXPECT_EQ(rep.verdict, Verdict::Fail);
  for (const auto& s : rep.samples) EXPECT_GT(s.max_rel_err->to_double(), 1e-3);
}

TEST(Mutants, MehlerSignFlipFails) {
  EXPECT_EQ(verify_identity(mutants::mehler_mutant(), quick()).verdict, Verdict::Fail);
}

TEST(Mutants, SummationSignFlipFails) {
  EXPECT_EQ(verify_identity(mutants::summation_mutant(), quick(1)).verdict, Verdict::Fail);
}

TEST(PrintedForms, SummationThetaListsFail) {
  EXPECT_EQ(verify_identity(mutants::summation_printed(), quick(1)).verdict, Verdict::Fail);
}

TEST(PrintedForms, OmegaQuadrupleShiftsFail) {
  EXPECT_EQ(verify_identity(mutants::quadruple_omega_printed(), quick(1)).verdict, Verdict::Fail);
}

TEST(PrintedForms, OmegaExpansionExponentFails) {
  EXPECT_EQ(verify_identity(mutants::omega_expansion_printed(), quick()).verdict, Verdict::Fail);
}
