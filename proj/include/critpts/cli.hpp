#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "critpts/dataset.hpp"
#include "critpts/error.hpp"
#include "critpts/generate.hpp"
#include "critpts/io.hpp"
#include "critpts/mlpipeline.hpp"
#include "critpts/protocol.hpp"
#include "critpts/rational.hpp"
#include "critpts/separability.hpp"

// Command implementations behind tools/critpts. Each returns the text to write
// and an exit code: 0 success, 1 a property violation, 2 bad input.

namespace critpts::cli {

enum Exit : int { Ok = 0, Violation = 1, Usage = 2 };

struct Output {
  int exit_code = Ok;
  std::string text;
};

inline json error_json(const std::string& code, const std::string& message) {
  return json{{"error", code}, {"message", message}};
}

inline json error_json(const Error& e) {
  std::string message = e.what();
  const std::string prefix = std::string(to_string(e.code())) + ": ";
  if (message.rfind(prefix, 0) == 0) message = message.substr(prefix.size());
  return error_json(std::string(to_string(e.code())), message);
}

inline std::size_t parse_count(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || text[0] == '-')
    throw Error(ErrorCode::InvalidParams, what + " must be a nonnegative integer, got '" + text + "'");
  return static_cast<std::size_t>(v);
}

/// A report file is a JSON index array or an object with a "report" array.
inline IndexSet load_report(const std::string& path) {
  json j = read_json_file(path);
  if (j.is_object() && j.contains("report")) j = j.at("report");
  return index_set_from_json(j);
}

/// truthful | hide:K | extra:K | report:FILE
inline AliceStrategy parse_strategy(const std::string& text) {
  if (text == "truthful") return Truthful{};
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (colon != std::string::npos && !arg.empty()) {
    if (head == "hide") return HidePositives{parse_count(arg, "hide count")};
    if (head == "extra") return ExtraPositives{parse_count(arg, "extra count")};
    if (head == "report") return FixedReport{load_report(arg)};
  }
  throw Error(ErrorCode::InvalidParams, "unknown strategy '" + text + "'");
}

/// exhaustive | sample:SEED:TRIALS
inline AuditMode parse_audit_mode(const std::string& text) {
  if (text == "exhaustive") return AuditMode::full();
  if (text.rfind("sample:", 0) == 0) {
    const std::string rest = text.substr(7);
    const auto colon = rest.find(':');
    if (colon != std::string::npos)
      return AuditMode::sampled(parse_count(rest.substr(0, colon), "audit seed"),
                                parse_count(rest.substr(colon + 1), "audit trials"));
  }
  throw Error(ErrorCode::InvalidParams, "unknown audit mode '" + text + "'");
}

/// bob (the honest court) or inverted (a fixture court that sides with Alice).
inline Court parse_court(const std::string& text) {
  if (text == "bob") return bob_court;
  if (text == "inverted") return [](Index, Label alice, Label) { return alice; };
  throw Error(ErrorCode::InvalidParams, "unknown court '" + text + "'");
}

struct GenOptions {
  std::uint64_t seed = 0;
  std::size_t points = 10;
  std::size_t dim = 2;
  std::string margin = "0.5";
  std::string shape = "linear";
};

inline Output cmd_gen(const GenOptions& o) {
  const Rational margin = parse_rational(o.margin);
  LabeledDataset d = [&] {
    if (o.shape == "linear") return generate_separable(o.seed, o.points, o.dim, margin);
    if (o.shape == "xor") {
      if (o.dim != 2) throw Error(ErrorCode::InvalidParams, "xor datasets are two-dimensional");
      return generate_xor(o.seed, o.points, margin);
    }
    throw Error(ErrorCode::InvalidParams, "unknown shape '" + o.shape + "'");
  }();
  return {Ok, dump_json(to_json(d))};
}

inline Output cmd_critical(const std::string& data_path) {
  const LabeledDataset S = load_dataset(data_path);
  ExactBackend backend(S);
  if (!backend.separable(S.positives(), S.negatives()))
    throw Error(ErrorCode::NotRealizable, "true labels are not strictly separable");
  const IndexSet critical = critical_points_with(backend, S.positives());
  json j{{"critical", to_json(critical)}, {"disclosed_if_truthful", to_json(S.positives() | critical)}};
  return {Ok, dump_json(j)};
}

inline Output cmd_protocol(const std::string& data_path, const std::string& strategy, const std::string& court) {
  const LabeledDataset S = load_dataset(data_path);
  return {Ok, dump_json(to_json(run_cpp(S, parse_strategy(strategy), parse_court(court))))};
}

inline Output cmd_audit(const std::string& data_path, const std::string& mode, const std::string& court) {
  const LabeledDataset S = load_dataset(data_path);
  const AuditReport report = audit_truthfulness(S, parse_audit_mode(mode), parse_court(court));
  return {report.ok() ? Ok : Violation, dump_json(to_json(report))};
}

struct MlOptions {
  std::string universe;
  std::uint64_t seed = 0;
  std::size_t m = 1;
  std::string learner = "svm";
  std::string strategy = "truthful";
};

/// Exit 1 when the two pipelines disagree on U.
inline Output cmd_ml(const MlOptions& o) {
  const Universe U{load_dataset(o.universe)};
  PipelineConfig config;
  config.sample_size = o.m;
  config.seed = o.seed;
  config.learner = parse_learner(o.learner);
  const EquivalenceReport r = compare_pipelines(U, config, parse_strategy(o.strategy));
  return {r.equal ? Ok : Violation, dump_json(to_json(r))};
}

struct GridOptions {
  std::string data;
  std::string xmin = "0", xmax = "8", ymin = "0", ymax = "4", step = "1";
};

/// CSV with header x,y,safe over Safe(S+, S-) of the dataset's true labels.
inline Output cmd_safe_grid(const GridOptions& o) {
  const LabeledDataset S = load_dataset(o.data);
  if (S.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "safe-grid needs two-dimensional data");
  const Rational x0 = parse_rational(o.xmin), x1 = parse_rational(o.xmax);
  const Rational y0 = parse_rational(o.ymin), y1 = parse_rational(o.ymax);
  const Rational step = parse_rational(o.step);
  if (!(step > 0)) throw Error(ErrorCode::InvalidParams, "step must be positive");
  if (x1 < x0 || y1 < y0) throw Error(ErrorCode::InvalidParams, "empty grid range");

  const auto pos = S.select(S.positives());
  const auto neg = S.select(S.negatives());
  std::string csv = "x,y,safe\n";
  for (Rational y = y0; y <= y1; y += step)
    for (Rational x = x0; x <= x1; x += step) {
      const bool safe = safe_contains(pos, neg, Point{x, y});
      csv += format_rational(x) + "," + format_rational(y) + "," + (safe ? "1" : "0") + "\n";
    }
  return {Ok, csv};
}

}  // namespace critpts::cli
