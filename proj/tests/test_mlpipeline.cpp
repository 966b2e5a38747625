#include <gtest/gtest.h>

#include "critpts/generate.hpp"
#include "critpts/mlpipeline.hpp"
#include "support/generators.hpp"

namespace critpts {
namespace {

using testing::fig_safe;

PipelineConfig config_for(std::size_t m, std::uint64_t seed, Learner learner = Learner::hard_svm()) {
  PipelineConfig c;
  c.sample_size = m;
  c.seed = seed;
  c.learner = learner;
  return c;
}

Learner poly2() { return Learner::kernel_svm(KernelSpec::polynomial(2, 1)); }

TEST(SampleTraining, CoversEdgeCases) {
  Universe U{generate_separable(3, 20, 2, Rational(1, 2))};
  EXPECT_EQ(sample_training(U, 9, 20), U.data.all());
  EXPECT_EQ(sample_training(U, 0, 1), IndexSet{14});
  EXPECT_EQ(sample_training(U, 0, 1), sample_training(U, 0, 1));
  EXPECT_EQ(sample_training(U, 0, 5), (IndexSet{0, 3, 14, 15, 16}));
  EXPECT_EQ(sample_training(U, 1, 5), (IndexSet{2, 4, 8, 12, 18}));
  try {
    sample_training(U, 0, 21);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SampleTooLarge);
  }
  EXPECT_THROW(sample_training(U, 0, 0), Error);
}

TEST(ParseLearner, KnownNames) {
  EXPECT_EQ(parse_learner("svm").kind, Learner::Kind::HardSvm);
  EXPECT_EQ(parse_learner("control").kind, Learner::Kind::Control);
  auto k = parse_learner("kernel:rbf:0.5");
  EXPECT_EQ(k.kind, Learner::Kind::KernelSvm);
  EXPECT_EQ(k.spec, KernelSpec::rbf(0.5));
  EXPECT_THROW(parse_learner("perceptron"), Error);
  EXPECT_THROW(parse_learner("kernel:poly:0"), Error);
}

TEST(ControlLearner, ConsistentWithTrainingData) {
  const auto S = fig_safe();
  const auto h = train_total_score_lp(S);
  EXPECT_EQ(h.direction, make_point({"2/3", "0"}));
  EXPECT_EQ(h.offset, Rational(3));

  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    auto d = testing::random_separable(rng, 5 + rng.below(20), 2 + t % 3);
    const auto g = train_total_score_lp(d);
    for (Index i = 0; i < d.size(); ++i) EXPECT_GE(sign_of(d.label(i)) * g.score(d.point(i)), 1);
  }
  LabeledDataset bad({make_point({"0"}), make_point({"1"}), make_point({"2"})},
                     {Label::Positive, Label::Negative, Label::Positive});
  EXPECT_THROW(train_total_score_lp(bad), Error);
}

TEST(RunSped, TrainingOnEverythingRecoversPositives) {
  Universe U{fig_safe()};
  auto r = run_sped(U, config_for(U.size(), 0));
  EXPECT_EQ(r.positives, U.data.positives());
  EXPECT_EQ(r.errors, 0u);
  EXPECT_EQ(r.disclosed_count, U.size());
}

TEST(RunSped, TwoPointUniverse) {
  Universe U{LabeledDataset({make_point({"0", "0"}), make_point({"1", "1"})}, {Label::Negative, Label::Positive})};
  EXPECT_EQ(run_sped(U, config_for(2, 4)).positives, IndexSet{1});
  EXPECT_EQ(run_mped(U, config_for(2, 4), Truthful{}).positives, IndexSet{1});
}

TEST(RunSped, RandomUniverseErrorCount) {
  Universe U{generate_separable(7, 100, 2, Rational(1, 2))};
  auto r = run_sped(U, config_for(20, 7));
  EXPECT_EQ(r.errors, 0u);
  EXPECT_EQ(r.positives, U.data.positives());
}

TEST(RunSped, InseparableSampleIsSurfaced) {
  Universe X{generate_xor(5, 40, Rational(1, 2))};
  try {
    run_sped(X, config_for(16, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSeparable);
  }
  EXPECT_THROW(run_mped(X, config_for(16, 0), Truthful{}), Error);
}

TEST(RunMped, FigureSafeMatchesSped) {
  Universe U{fig_safe()};
  for (std::size_t m : {6u, 8u, 11u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto c = config_for(m, seed);
      auto sped = run_sped(U, c);
      for (AliceStrategy a : {AliceStrategy{Truthful{}}, AliceStrategy{HidePositives{1}}}) {
        if (std::holds_alternative<HidePositives>(a) && U.data.subset(sped.sample).positives().empty()) continue;
        auto mped = run_mped(U, c, a);
        EXPECT_EQ(mped.sample, sped.sample);
        EXPECT_EQ(mped.positives, sped.positives) << "m=" << m << " seed=" << seed;
      }
    }
  }
}

TEST(RunMped, TruthfulDisclosureIsPositivesAndCriticalPoints) {
  Universe U{generate_separable(11, 60, 2, Rational(1, 2))};
  auto c = config_for(25, 3);
  auto mped = run_mped(U, c, Truthful{});
  const auto S = U.data.subset(mped.sample);
  EXPECT_EQ(mped.transcript.disclosed, S.positives() | critical_points(S, S.positives()));
  EXPECT_EQ(mped.disclosed_count, mped.transcript.disclosed.size());
  EXPECT_LT(mped.disclosed_count, 25u);
}

TEST(RunMped, FixedReportUsesUniverseIndices) {
  Universe U{generate_separable(12, 40, 2, Rational(1, 2))};
  auto c = config_for(15, 2);
  const IndexSet sample = sample_training(U, c.seed, c.sample_size);
  // Universe positives minus the first sampled positive.
  IndexSet report = U.data.positives();
  for (Index i : sample)
    if (U.data.label(i) == Label::Positive) {
      report = report.without(i);
      break;
    }
  auto mped = run_mped(U, c, FixedReport{report});
  EXPECT_EQ(mped.transcript.report.size(), U.data.subset(sample).positives().size() - 1);
  EXPECT_EQ(mped.positives, run_sped(U, c).positives);
}

TEST(RunMped, InvertedCourtIsCaughtByTrent) {
  Universe U{fig_safe()};
  Court inverted = [](Index, Label alice, Label) { return alice; };
  const IndexSet report = U.data.positives().without(U.data.index_of(make_point({"6", "1"})));
  try {
    run_mped(U, config_for(U.size(), 0), FixedReport{report}, inverted);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InconsistentClassifier);
  }
}

TEST(ComparePipelines, SvmAcrossStrategies) {
  for (std::uint64_t u = 0; u < 5; ++u) {
    Universe U{generate_separable(200 + u, 100, 2, Rational(1, 2))};
    auto c = config_for(30, u);
    for (AliceStrategy a : {AliceStrategy{Truthful{}}, AliceStrategy{HidePositives{1}},
                            AliceStrategy{FixedReport{IndexSet{}}}, AliceStrategy{FixedReport{U.data.all()}}}) {
      auto r = compare_pipelines(U, c, a);
      EXPECT_TRUE(r.equal) << "universe " << u;
      EXPECT_LT(r.classifier_distance, 1e-6);
    }
  }
}

TEST(ComparePipelines, XorUnderPolynomialKernel) {
  Universe X{generate_xor(5, 40, Rational(1, 2))};
  auto c = config_for(16, 0, poly2());
  for (AliceStrategy a : {AliceStrategy{Truthful{}}, AliceStrategy{HidePositives{1}}}) {
    auto r = compare_pipelines(X, c, a);
    EXPECT_TRUE(r.equal);
    EXPECT_LT(r.classifier_distance, 1e-6);
  }
}

TEST(ComparePipelines, ControlLearnerBreaksEquivalence) {
  std::size_t unequal = 0;
  for (std::uint64_t u = 0; u < 20 && unequal == 0; ++u) {
    Universe U{generate_separable(1000 + u, 100, 2, Rational(1, 2))};
    auto c = config_for(30, u, Learner::control());
    for (AliceStrategy a : {AliceStrategy{Truthful{}}, AliceStrategy{HidePositives{1}}})
      unequal += !compare_pipelines(U, c, a).equal;
  }
  EXPECT_GT(unequal, 0u);
}

TEST(ComparePipelines, DeterministicJson) {
  Universe U{generate_separable(31, 100, 2, Rational(1, 2))};
  auto c = config_for(40, 31, poly2());
  auto a = dump_json(to_json(compare_pipelines(U, c, HidePositives{2})));
  auto b = dump_json(to_json(compare_pipelines(U, c, HidePositives{2})));
  EXPECT_EQ(a, b);
  auto j = json::parse(a);
  for (const char* key : {"equal", "sped_positives", "mped_positives", "classifier_distance", "disclosed_count"})
    EXPECT_TRUE(j.contains(key));
}

}  // namespace
}  // namespace critpts
