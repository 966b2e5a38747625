#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "critpts/dataset.hpp"
#include "critpts/error.hpp"
#include "critpts/index_set.hpp"
#include "critpts/io.hpp"
#include "critpts/kernel.hpp"
#include "critpts/protocol.hpp"
#include "critpts/random.hpp"
#include "critpts/separability.hpp"
#include "critpts/simplex.hpp"
#include "critpts/svm.hpp"

namespace critpts {

/// The document set U with its ground-truth labels. The pipelines read the
/// labels only where a human would label a document.
struct Universe {
  LabeledDataset data;

  std::size_t size() const { return data.size(); }
};

struct Learner {
  enum class Kind { HardSvm, KernelSvm, Control };

  Kind kind = Kind::HardSvm;
  KernelSpec spec;

  static Learner hard_svm() { return {}; }
  static Learner kernel_svm(KernelSpec spec) { return {Kind::KernelSvm, spec}; }
  /// Negative control: an exact LP vertex whose objective sums the scores of
  /// all training points, so every point can move it. Not IIA.
  static Learner control() { return {Kind::Control, {}}; }

  bool uses_kernel_backend() const { return kind == Kind::KernelSvm; }
};

/// "svm", "control" or "kernel:" followed by a kernel spec.
inline Learner parse_learner(const std::string& text) {
  if (text == "svm") return Learner::hard_svm();
  if (text == "control") return Learner::control();
  if (text.rfind("kernel:", 0) == 0) return Learner::kernel_svm(parse_kernel_spec(text.substr(7)));
  throw Error(ErrorCode::InvalidParams, "unknown learner '" + text + "'");
}

struct PipelineConfig {
  std::size_t sample_size = 1;
  std::uint64_t seed = 0;
  Learner learner;
  SolverConfig solver;
};

/// A trained hypothesis from any of the learners.
class TrainedClassifier {
 public:
  using Model = std::variant<SvmSolution, KernelClassifier, LinearClassifier>;

  explicit TrainedClassifier(Model m) : model_(std::move(m)) {}

  const Model& model() const { return model_; }

  Label classify(const Point& x) const {
    return std::visit(
        [&](const auto& m) -> Label {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, SvmSolution>) return critpts::classify(m, x);
          else return m.classify(x);
        },
        model_);
  }

  /// Parameter distance to a classifier from the same learner.
  double distance(const TrainedClassifier& other) const {
    if (model_.index() != other.model_.index())
      throw Error(ErrorCode::InvalidParams, "classifiers come from different learners");
    if (auto a = std::get_if<SvmSolution>(&model_)) {
      const auto& b = std::get<SvmSolution>(other.model_);
      double d = std::abs(a->b - b.b);
      for (std::size_t k = 0; k < a->w.size(); ++k) d = std::max(d, std::abs(a->w[k] - b.w[k]));
      return d;
    }
    if (auto a = std::get_if<KernelClassifier>(&model_))
      return kernel_classifier_distance(*a, std::get<KernelClassifier>(other.model_));
    const auto& a = std::get<LinearClassifier>(model_);
    const auto& b = std::get<LinearClassifier>(other.model_);
    double d = std::abs(to_double(a.offset - b.offset));
    for (std::size_t k = 0; k < a.direction.size(); ++k)
      d = std::max(d, std::abs(to_double(a.direction[k] - b.direction[k])));
    return d;
  }

 private:
  Model model_;
};

/// Consistent linear separator minimising sum_i y_i (w.x_i - c) subject to
/// y_i (w.x_i - c) >= 1, solved exactly.
inline LinearClassifier train_total_score_lp(const LabeledDataset& data) {
  const std::size_t dim = data.dim();
  lp::Matrix<Rational> A(data.size(), dim + 1);
  std::vector<Rational> cost(dim + 1, Rational(0));
  for (Index i = 0; i < data.size(); ++i) {
    const int y = sign_of(data.label(i));
    for (std::size_t k = 0; k < dim; ++k) A(i, k) = y * data.point(i)[k];
    A(i, dim) = -y;
    for (std::size_t k = 0; k <= dim; ++k) cost[k] += A(i, k);
  }
  auto res = lp::minimize_inequalities(A, std::vector<Rational>(data.size(), Rational(1)), cost);
  if (res.status != lp::Status::Optimal)
    throw Error(ErrorCode::NotSeparable, "training data is not strictly separable");
  LinearClassifier h;
  h.direction.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(dim));
  h.offset = res.x[dim];
  return h;
}

inline TrainedClassifier train_learner(const LabeledDataset& data, const Learner& learner, const SolverConfig& solver) {
  switch (learner.kind) {
    case Learner::Kind::HardSvm:
      return TrainedClassifier(train_hard_svm(data, solver));
    case Learner::Kind::KernelSvm:
      return TrainedClassifier(train_kernel_svm(data, learner.spec, solver));
    case Learner::Kind::Control:
      break;
  }
  return TrainedClassifier(train_total_score_lp(data));
}

/// Uniform sample of m indices of U without replacement, determined by the seed.
inline IndexSet sample_training(const Universe& U, std::uint64_t seed, std::size_t m) {
  if (m == 0) throw Error(ErrorCode::InvalidParams, "sample size must be at least 1");
  Rng rng(seed);
  return sample_without_replacement(rng, U.size(), m);
}

struct PipelineResult {
  IndexSet sample;
  IndexSet positives;  // indices of U classified +1
  TrainedClassifier classifier;
  std::size_t errors = 0;  // disagreements with the ground truth on U
  std::size_t disclosed_count = 0;
  ProtocolTranscript transcript;
};

namespace detail {

inline PipelineResult apply_to_universe(const Universe& U, IndexSet sample, TrainedClassifier h) {
  std::vector<Index> positives;
  std::size_t errors = 0;
  for (Index i = 0; i < U.size(); ++i) {
    const Label l = h.classify(U.data.point(i));
    if (l == Label::Positive) positives.push_back(i);
    errors += l != U.data.label(i);
  }
  return PipelineResult{std::move(sample), IndexSet(std::move(positives)), std::move(h), errors, 0, {}};
}

/// Alice's strategy re-expressed on the sample: fixed reports name universe
/// indices and are restricted to the sample.
inline AliceStrategy strategy_on_sample(const AliceStrategy& alice, const IndexSet& sample) {
  if (auto fixed = std::get_if<FixedReport>(&alice)) {
    std::vector<Index> local;
    for (std::size_t j = 0; j < sample.size(); ++j)
      if (fixed->report.contains(sample[j])) local.push_back(j);
    return FixedReport{IndexSet(std::move(local))};
  }
  return alice;
}

}  // namespace detail

/// Single party: sample, label the sample, train, classify U.
inline PipelineResult run_sped(const Universe& U, const PipelineConfig& config) {
  IndexSet sample = sample_training(U, config.seed, config.sample_size);
  auto h = train_learner(U.data.subset(sample), config.learner, config.solver);
  auto out = detail::apply_to_universe(U, std::move(sample), std::move(h));
  out.disclosed_count = out.sample.size();
  return out;
}

/// Multiple parties: Trent draws the same sample, the critical points protocol
/// decides what Bob sees, Bob trains on the disclosed points with his labels,
/// and Trent checks the classifier against the labels settled in the protocol
/// before applying it to U.
inline PipelineResult run_mped(const Universe& U, const PipelineConfig& config, const AliceStrategy& alice,
                               const Court& court = bob_court) {
  IndexSet sample = sample_training(U, config.seed, config.sample_size);
  const LabeledDataset S = U.data.subset(sample);
  const AliceStrategy local = detail::strategy_on_sample(alice, sample);

  ProtocolTranscript t;
  if (config.learner.uses_kernel_backend()) {
    KernelBackend backend(S, config.learner.spec, config.solver);
    if (!backend.separable(S.positives(), S.negatives()))
      throw Error(ErrorCode::NotSeparableInFeatureSpace, "sample is not separable under the kernel");
    t = run_cpp_with(backend, S, local, court);
  } else {
    if (!ExactBackend(S).separable(S.positives(), S.negatives()))
      throw Error(ErrorCode::NotSeparable, "sample is not strictly separable");
    t = run_cpp_with(ExactBackend(S), S, local, court);
  }

  auto h = train_learner(S.subset(t.disclosed), config.learner, config.solver);
  auto check = [&](const IndexSet& idx, Label expected) {
    for (Index i : idx)
      if (h.classify(S.point(i)) != expected)
        throw Error(ErrorCode::InconsistentClassifier,
                    "Bob's classifier contradicts the settled label of point " + std::to_string(sample[i]));
  };
  check(t.corrected_positives, Label::Positive);
  check(t.corrected_negatives, Label::Negative);

  auto out = detail::apply_to_universe(U, std::move(sample), std::move(h));
  out.disclosed_count = t.disclosed.size();
  out.transcript = std::move(t);
  return out;
}

struct EquivalenceReport {
  bool equal = false;
  IndexSet sped_positives;
  IndexSet mped_positives;
  double classifier_distance = 0;
  std::size_t disclosed_count = 0;
};

inline json to_json(const EquivalenceReport& r) {
  return json{{"equal", r.equal},
              {"sped_positives", to_json(r.sped_positives)},
              {"mped_positives", to_json(r.mped_positives)},
              {"classifier_distance", r.classifier_distance},
              {"disclosed_count", r.disclosed_count}};
}

inline EquivalenceReport compare_pipelines(const Universe& U, const PipelineConfig& config, const AliceStrategy& alice,
                                           const Court& court = bob_court) {
  auto sped = run_sped(U, config);
  auto mped = run_mped(U, config, alice, court);
  EquivalenceReport r;
  r.sped_positives = sped.positives;
  r.mped_positives = mped.positives;
  r.equal = sped.positives == mped.positives;
  r.classifier_distance = sped.classifier.distance(mped.classifier);
  r.disclosed_count = mped.disclosed_count;
  return r;
}

}  // namespace critpts
