#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "critpts/dataset.hpp"
#include "critpts/error.hpp"
#include "critpts/index_set.hpp"
#include "critpts/io.hpp"
#include "critpts/random.hpp"
#include "critpts/separability.hpp"

namespace critpts {

struct Truthful {};
/// Report S+ without its first k positives (index order).
struct HidePositives {
  std::size_t k = 1;
};
/// Report S+ plus the first k negatives (index order).
struct ExtraPositives {
  std::size_t k = 1;
};
struct FixedReport {
  IndexSet report;
};
/// Alice's message as a function of the points and the positives she believes in.
struct Scripted {
  std::function<IndexSet(const LabeledDataset&, const IndexSet&)> sigma;
};

using AliceStrategy = std::variant<Truthful, HidePositives, ExtraPositives, FixedReport, Scripted>;

/// The report A+ that `strategy` produces when Alice's positives are `believed`.
inline IndexSet alice_report(const LabeledDataset& S, const IndexSet& believed, const AliceStrategy& strategy) {
  IndexSet report = std::visit(
      [&](const auto& s) -> IndexSet {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Truthful>) {
          return believed;
        } else if constexpr (std::is_same_v<T, HidePositives>) {
          if (s.k > believed.size())
            throw Error(ErrorCode::InvalidParams, "cannot hide " + std::to_string(s.k) + " of " +
                                                      std::to_string(believed.size()) + " positives");
          return IndexSet(std::vector<Index>(believed.begin() + static_cast<std::ptrdiff_t>(s.k), believed.end()));
        } else if constexpr (std::is_same_v<T, ExtraPositives>) {
          const IndexSet others = S.all() - believed;
          if (s.k > others.size())
            throw Error(ErrorCode::InvalidParams, "cannot add " + std::to_string(s.k) + " of " +
                                                      std::to_string(others.size()) + " negatives");
          return believed | IndexSet(std::vector<Index>(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(s.k)));
        } else if constexpr (std::is_same_v<T, FixedReport>) {
          return s.report;
        } else {
          if (!s.sigma) throw Error(ErrorCode::InvalidParams, "scripted strategy without a script");
          return s.sigma(S, believed);
        }
      },
      strategy);
  report.check_range(S.size());
  return report;
}

inline std::string strategy_name(const AliceStrategy& strategy) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Truthful>) return "truthful";
        else if constexpr (std::is_same_v<T, HidePositives>) return "hide:" + std::to_string(s.k);
        else if constexpr (std::is_same_v<T, ExtraPositives>) return "extra:" + std::to_string(s.k);
        else if constexpr (std::is_same_v<T, FixedReport>) return "report:" + to_string(s.report);
        else return "scripted";
      },
      strategy);
}

/// Rules on a disputed label given (index, Alice's label, Bob's label).
using Court = std::function<Label(Index, Label, Label)>;

inline Label bob_court(Index, Label, Label bob) { return bob; }

struct Message {
  int step = 0;
  std::string from, to, content;
  IndexSet indices;
  std::vector<int> labels;

  friend bool operator==(const Message&, const Message&) = default;
};

struct Dispute {
  Index index = 0;
  Label alice = Label::Negative;
  Label bob = Label::Negative;
  Label ruling = Label::Negative;

  friend bool operator==(const Dispute&, const Dispute&) = default;
};

struct ProtocolTranscript {
  std::vector<Message> messages;
  std::vector<Dispute> disputes;
  IndexSet disclosed;
  bool aborted_to_full_disclosure = false;

  IndexSet report;
  IndexSet critical;
  IndexSet corrected_positives;
  IndexSet corrected_negatives;
  /// True positives that Alice left out and Trent never sent for review.
  IndexSet unsent_mislabeled;
};

inline json to_json(const Message& m) {
  json j{{"step", m.step}, {"from", m.from}, {"to", m.to}, {"content", m.content}, {"indices", to_json(m.indices)}};
  if (!m.labels.empty()) j["labels"] = m.labels;
  return j;
}

inline json to_json(const Dispute& d) {
  return json{{"index", d.index}, {"alice", sign_of(d.alice)}, {"bob", sign_of(d.bob)}, {"ruling", sign_of(d.ruling)}};
}

inline json to_json(const ProtocolTranscript& t) {
  json messages = json::array(), disputes = json::array();
  for (const auto& m : t.messages) messages.push_back(to_json(m));
  for (const auto& d : t.disputes) disputes.push_back(to_json(d));
  return json{{"messages", messages},
              {"disputes", disputes},
              {"disclosed", to_json(t.disclosed)},
              {"full_disclosure", t.aborted_to_full_disclosure}};
}

namespace detail {

inline std::vector<int> label_values(const LabeledDataset& S, const IndexSet& idx) {
  std::vector<int> out;
  for (Index i : idx) out.push_back(sign_of(S.label(i)));
  return out;
}

inline void disclose_everything(ProtocolTranscript& t, const LabeledDataset& S, int step, const std::string& why) {
  t.messages.push_back({step, "Trent", "Bob", why, S.all(), {}});
  t.disclosed = S.all();
  t.aborted_to_full_disclosure = true;
}

}  // namespace detail

/// One run of the critical points protocol. S carries the true labels, which
/// only Bob consults; Trent decides separability through `backend`.
template <SeparabilityOracle B>
ProtocolTranscript run_cpp_with(const B& backend, const LabeledDataset& S, const AliceStrategy& alice,
                                const Court& court = bob_court) {
  if (backend.size() != S.size()) throw Error(ErrorCode::InvalidParams, "backend and dataset differ in size");
  const IndexSet truth = S.positives();
  if (!backend.separable(truth, S.negatives()))
    throw Error(ErrorCode::NotRealizable, "true labels are not strictly separable");

  ProtocolTranscript t;
  t.messages.push_back({0, "Alice", "Trent", "points", S.all(), {}});
  t.report = alice_report(S, truth, alice);
  t.messages.push_back({1, "Alice", "Trent", "report", t.report, {}});

  const IndexSet rest = S.all() - t.report;
  if (!backend.separable(t.report, rest)) {
    detail::disclose_everything(t, S, 2, "report not separable: all points");
    return t;
  }

  t.critical = critical_points_with(backend, t.report);
  const IndexSet reviewed = t.report | t.critical;
  t.messages.push_back({3, "Trent", "Bob", "review", reviewed, {}});
  t.messages.push_back({4, "Bob", "Trent", "labels", reviewed, detail::label_values(S, reviewed)});

  std::vector<Index> plus, minus;
  for (Index i : reviewed) {
    const Label claimed = t.report.contains(i) ? Label::Positive : Label::Negative;
    Label final_label = claimed;
    if (S.label(i) != claimed) {
      final_label = court(i, claimed, S.label(i));
      t.disputes.push_back({i, claimed, S.label(i), final_label});
    }
    (final_label == Label::Positive ? plus : minus).push_back(i);
  }
  t.corrected_positives = IndexSet(std::move(plus));
  t.corrected_negatives = IndexSet(std::move(minus));
  t.unsent_mislabeled = (truth - t.report) - reviewed;
  if (!t.disputes.empty()) {
    IndexSet disputed;
    std::vector<int> rulings;
    for (const auto& d : t.disputes) {
      disputed.insert(d.index);
      rulings.push_back(sign_of(d.ruling));
    }
    t.messages.push_back({5, "Court", "Trent", "rulings", disputed, rulings});
  }

  if (!backend.separable(t.corrected_positives, t.corrected_negatives)) {
    detail::disclose_everything(t, S, 6, "rulings not separable: all points");
    return t;
  }
  t.disclosed = leak_set_with(backend, t.corrected_positives, t.corrected_negatives);
  t.messages.push_back({6, "Trent", "Bob", "leak", t.disclosed, {}});
  return t;
}

inline ProtocolTranscript run_cpp(const LabeledDataset& S, const AliceStrategy& alice, const Court& court = bob_court) {
  return run_cpp_with(ExactBackend(S), S, alice, court);
}

inline std::size_t disclosed_size(const LabeledDataset& S, const IndexSet& report, const Court& court = bob_court) {
  return run_cpp(S, FixedReport{report}, court).disclosed.size();
}

/// Maps a report to a transcript over a fixed dataset.
using DirectRunner = std::function<ProtocolTranscript(const IndexSet& report)>;

inline DirectRunner cpp_runner(const LabeledDataset& S, Court court = bob_court) {
  return [S, court](const IndexSet& report) { return run_cpp(S, FixedReport{report}, court); };
}

struct AuditMode {
  bool exhaustive = true;
  std::uint64_t seed = 0;
  std::size_t trials = 0;

  static AuditMode full() { return {}; }
  static AuditMode sampled(std::uint64_t seed, std::size_t trials) { return {false, seed, trials}; }
};

struct AuditViolation {
  IndexSet report;
  std::string property;  // "correctness", "lower_bound" or "truthfulness"
  std::size_t disclosed_size = 0;
};

struct AuditReport {
  std::string mode;
  std::size_t runs = 0;
  IndexSet lower_bound;
  std::size_t truthful_disclosed_size = 0;
  std::size_t minimum_disclosed_size = 0;
  std::vector<AuditViolation> violations;
  std::size_t unsent_mislabeled_runs = 0;
  std::size_t full_disclosure_runs = 0;

  bool ok() const { return violations.empty(); }
};

inline json to_json(const AuditReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations)
    violations.push_back(
        json{{"report", to_json(v.report)}, {"property", v.property}, {"disclosed_size", v.disclosed_size}});
  return json{{"mode", r.mode},
              {"runs", r.runs},
              {"lower_bound", to_json(r.lower_bound)},
              {"truthful_disclosed_size", r.truthful_disclosed_size},
              {"minimum_disclosed_size", r.minimum_disclosed_size},
              {"violations", violations},
              {"unsent_mislabeled_runs", r.unsent_mislabeled_runs},
              {"full_disclosure_runs", r.full_disclosure_runs},
              {"ok", r.ok()}};
}

/// Runs `protocol` on every report (or a seeded random sample of reports plus
/// the truthful one) and checks each outcome against the truthful run:
/// disclosed contains S+, contains S+ and C*(S+), and is no smaller.
inline AuditReport audit_truthfulness(const LabeledDataset& S, const AuditMode& mode, const DirectRunner& protocol) {
  const IndexSet truth = S.positives();
  if (!check_separability(S.select(truth), S.select(S.negatives())).separable())
    throw Error(ErrorCode::NotRealizable, "true labels are not strictly separable");

  std::vector<IndexSet> reports;
  if (mode.exhaustive) {
    if (S.size() > 12)
      throw Error(ErrorCode::TooLargeForExhaustive,
                  "exhaustive audit needs at most 12 points, got " + std::to_string(S.size()));
    for (std::size_t mask = 0; mask < (std::size_t{1} << S.size()); ++mask) {
      std::vector<Index> r;
      for (Index i = 0; i < S.size(); ++i)
        if (mask >> i & 1) r.push_back(i);
      reports.emplace_back(std::move(r));
    }
  } else {
    Rng rng(mode.seed);
    reports.push_back(truth);
    for (std::size_t t = 0; t < mode.trials; ++t) {
      std::vector<Index> r;
      for (Index i = 0; i < S.size(); ++i)
        if (rng.coin()) r.push_back(i);
      reports.emplace_back(std::move(r));
    }
  }

  AuditReport out;
  out.mode = mode.exhaustive ? "exhaustive"
                             : "sample:" + std::to_string(mode.seed) + ":" + std::to_string(mode.trials);
  out.lower_bound = truth | critical_points(S, truth);
  out.truthful_disclosed_size = protocol(truth).disclosed.size();
  out.minimum_disclosed_size = out.truthful_disclosed_size;
  for (const auto& report : reports) {
    const auto t = protocol(report);
    ++out.runs;
    out.unsent_mislabeled_runs += !t.unsent_mislabeled.empty();
    out.full_disclosure_runs += t.aborted_to_full_disclosure;
    out.minimum_disclosed_size = std::min(out.minimum_disclosed_size, t.disclosed.size());
    if (!truth.is_subset_of(t.disclosed)) out.violations.push_back({report, "correctness", t.disclosed.size()});
    if (!out.lower_bound.is_subset_of(t.disclosed))
      out.violations.push_back({report, "lower_bound", t.disclosed.size()});
    if (t.disclosed.size() < out.truthful_disclosed_size)
      out.violations.push_back({report, "truthfulness", t.disclosed.size()});
  }
  return out;
}

inline AuditReport audit_truthfulness(const LabeledDataset& S, const AuditMode& mode, const Court& court = bob_court) {
  return audit_truthfulness(S, mode, cpp_runner(S, court));
}

/// Runs a protocol given the dataset with the labels to be verified and the
/// strategy Alice follows.
using ProtocolRunner = std::function<ProtocolTranscript(const LabeledDataset&, const AliceStrategy&)>;

inline ProtocolRunner cpp_protocol(Court court = bob_court) {
  return [court](const LabeledDataset& S, const AliceStrategy& a) { return run_cpp(S, a, court); };
}

/// Direct protocol obtained from a base protocol and Alice's script: simulate
/// the script as if the report were the truth, replay the same messages against
/// the real labels, and disclose everything if the two transcripts differ.
class DirectProtocol {
 public:
  DirectProtocol(ProtocolRunner base, Scripted sigma, LabeledDataset S)
      : base_(std::move(base)), sigma_(std::move(sigma)), S_(std::move(S)) {}

  ProtocolTranscript run(const IndexSet& report) const {
    report.check_range(S_.size());
    if (!ExactBackend(S_).separable(report, S_.all() - report)) return everything(report, "report not separable: all points");
    const LabeledDataset imagined = S_.relabeled(report);
    const IndexSet message = alice_report(imagined, report, sigma_);

    ProtocolTranscript simulated = deterministic(imagined, message);
    ProtocolTranscript replayed = deterministic(S_, message);
    if (replayed.messages == simulated.messages && replayed.disputes == simulated.disputes) {
      simulated.unsent_mislabeled = replayed.unsent_mislabeled;
      return simulated;
    }
    return everything(report, "replay diverged: all points");
  }

  IndexSet disclosed(const IndexSet& report) const { return run(report).disclosed; }

  DirectRunner runner() const {
    return [self = *this](const IndexSet& report) { return self.run(report); };
  }

 private:
  ProtocolTranscript everything(const IndexSet& report, const std::string& why) const {
    ProtocolTranscript out;
    out.report = report;
    out.messages.push_back({0, "Alice", "Trent", "report", report, {}});
    detail::disclose_everything(out, S_, 1, why);
    return out;
  }

  ProtocolTranscript deterministic(const LabeledDataset& labels, const IndexSet& message) const {
    auto first = base_(labels, FixedReport{message});
    auto second = base_(labels, FixedReport{message});
    if (!(first.messages == second.messages && first.disputes == second.disputes && first.disclosed == second.disclosed))
      throw Error(ErrorCode::NondeterministicBase, "base protocol gave different transcripts for identical inputs");
    return first;
  }

  ProtocolRunner base_;
  Scripted sigma_;
  LabeledDataset S_;
};

inline DirectProtocol revelation_wrap(ProtocolRunner base, Scripted sigma, LabeledDataset S) {
  return DirectProtocol(std::move(base), std::move(sigma), std::move(S));
}

}  // namespace critpts
