#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "vdclab/config.hpp"
#include "vdclab/zoo.hpp"

using namespace vdclab;

namespace {

const char* kNf = R"({
  "experiment": "nf",
  "irrationals": {"alpha": "sqrt2-1", "beta": "golden-1"},
  "schedule": [1000, 2000, 4000],
  "systems": {
    "T": {"translation": ["alpha", "0"]},
    "S": {"translation": ["0", "beta"]}
  },
  "sequences": {"sq": {"polynomial": [0, 0, 1]}},
  "params": {"T": "T", "S": "S", "k": "sq",
             "f": {"terms": [{"index": [1, 0]}]}, "g": {"terms": [{"index": [0, 1], "coeff": [0, 1]}]}}
})";

std::vector<std::string> violations_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST(Config, MinimalDocuments) {
  const auto doc = parse_config(R"({"experiment": "counterexample"})");
  EXPECT_EQ(doc.experiment, "counterexample");
  EXPECT_TRUE(std::holds_alternative<CounterexampleParams>(doc.params));
  EXPECT_EQ(doc.options.schedule, Schedule::geometric(100000));

  const auto vdc = parse_config(R"({"experiment": "vdc_suite", "params": {"orbit": {"zoo": "rotation"}}})");
  const auto& p = std::get<VdcSuiteParams>(vdc.params);
  EXPECT_EQ(p.orbit, OrbitSpec::from_zoo(zoo_entry("rotation")));
  EXPECT_EQ(p.H, 64);
}

TEST(Config, NfDocumentResolvesReferences) {
  const auto doc = parse_config(kNf);
  const auto& p = std::get<NfParams>(doc.params);
  EXPECT_EQ(p.T, AffineSystem::rotation({Phase::of(doc.symbols.at("alpha")), Phase{}}));
  EXPECT_EQ(doc.symbols.at("alpha").value(), zoo_alpha().value());
  EXPECT_EQ(p.g.terms().size(), 1u);
  EXPECT_EQ(p.g.terms().begin()->second, Complex(0, 1));
  EXPECT_EQ(doc.options.schedule, Schedule({1000, 2000, 4000}));
}

TEST(Config, RejectsNonInvertibleMatrix) {
  const auto v = violations_of(replace(kNf, R"("T": {"translation")", R"("T": {"matrix": [[2, 0], [0, 1]], "translation")"));
  EXPECT_TRUE(mentions(v, "det")) << ::testing::PrintToString(v);
}

TEST(Config, UndeclaredIrrationalIsNamed) {
  const auto v = violations_of(replace(kNf, R"("beta": "golden-1")", R"("delta": "golden-1")"));
  EXPECT_TRUE(mentions(v, "'beta'")) << ::testing::PrintToString(v);
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_TRUE(mentions(violations_of(R"({"experiment": "counterexample", "colour": 1})"), "colour"));
  EXPECT_TRUE(mentions(violations_of(R"({"experiment": "counterexample", "params": {"colour": 1}})"), "colour"));
  EXPECT_TRUE(mentions(violations_of(R"({"experiment": "nonsense"})"), "nonsense"));
}

TEST(Config, CollectsEveryViolation) {
  std::string text = replace(kNf, R"("T": {"translation")", R"("T": {"matrix": [[2, 0], [0, 1]], "translation")");
  text = replace(text, R"("beta": "golden-1")", R"("delta": "golden-1")");
  text = replace(text, R"("k": "sq")", R"("k": "sq", "colour": "blue")");
  const auto v = violations_of(text);
  EXPECT_TRUE(mentions(v, "det"));
  EXPECT_TRUE(mentions(v, "'beta'"));
  EXPECT_TRUE(mentions(v, "colour"));
  EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
  EXPECT_EQ(std::adjacent_find(v.begin(), v.end()), v.end());
}

TEST(Config, ZooReferenceConflictsWithDeclaredValue) {
  const auto v = violations_of(
      R"({"experiment": "vdc_suite", "irrationals": {"alpha": "1/3"}, "params": {"orbit": {"zoo": "rotation"}}})");
  EXPECT_TRUE(mentions(v, "alpha")) << ::testing::PrintToString(v);
}

TEST(Config, SerializeRoundTrip) {
  const auto doc = parse_config(kNf);
  const auto j = serialize(doc);
  const auto again = parse_config(j.dump());
  EXPECT_EQ(std::get<NfParams>(again.params), std::get<NfParams>(doc.params));
  EXPECT_EQ(again.options, doc.options);
  EXPECT_EQ(serialize(again), j);
}

TEST(Config, ShippedExamplesParseAndRoundTrip) {
  for (const std::string name : {"counterexample", "vdc_suite", "weighted_vdc", "orthogonality", "nf", "recurrence",
                                 "recurrence_grid", "rk", "single_T", "T1T2"}) {
    std::ifstream in(std::string(VDCLAB_CONFIG_DIR) + "/" + name + ".json");
    ASSERT_TRUE(in) << name;
    std::stringstream ss;
    ss << in.rdbuf();
    const auto doc = parse_config(ss.str());
    EXPECT_EQ(serialize(parse_config(serialize(doc).dump())), serialize(doc)) << name;
  }
  std::ifstream bad(std::string(VDCLAB_CONFIG_DIR) + "/invalid_example.json");
  std::stringstream ss;
  ss << bad.rdbuf();
  EXPECT_EQ(violations_of(ss.str()).size(), 3u);
}

TEST(Config, RunEchoesCanonicalConfig) {
  const auto doc = parse_config(kNf);
  const ExperimentReport r = run_experiment(doc);
  EXPECT_EQ(r.config, serialize(doc));
  EXPECT_EQ(r.name, "nf");
}
