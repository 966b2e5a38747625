// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "critpts/critpts.hpp"
#include "support/dual_oracle.hpp"
#include "support/generators.hpp"

namespace {

using namespace critpts;
using critpts::testing::fig_critical;
using critpts::testing::fig_safe;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

IndexSet at_points(const LabeledDataset& d, std::initializer_list<std::initializer_list<const char*>> coords) {
  IndexSet s;
  for (auto c : coords) s.insert(d.index_of(make_point(c)));
  return s;
}

IndexSet subset_from_mask(const IndexSet& base, std::uint64_t mask) {
  IndexSet s;
  for (std::size_t k = 0; k < base.size(); ++k)
    if (mask >> k & 1) s.insert(base[k]);
  return s;
}

void figure_safe_golden(Outcome& o) {
  const auto S = fig_safe();
  const IndexSet circled = at_points(S, {{"2", "1"}, {"2", "3"}, {"3", "2"}});
  const IndexSet crit = critical_points(S, S.positives());
  const auto t = run_cpp(S, Truthful{});
  o.expect(crit == circled, "critical points " + to_string(crit));
  o.expect(t.disclosed == (S.positives() | circled), "disclosed " + to_string(t.disclosed));
  o.expect(t.disclosed.size() == 7, "disclosed size");
  o.detail << "C*=" << crit << " disclosed=" << t.disclosed;
}

void figure_critical_golden(Outcome& o) {
  const auto S = fig_critical();
  const IndexSet crit = critical_points(S, S.positives());
  const Index rightmost = S.index_of(make_point({"2.4", "2.2"}));
  const Index inner = S.index_of(make_point({"1.8", "2.5"}));
  o.expect(crit.contains(rightmost), "(2.4,2.2) not critical");
  o.expect(!crit.contains(inner), "(1.8,2.5) critical");
  o.detail << "C*=" << crit;
}

void fixed_point_law(Outcome& o) {
  Rng rng(3001);
  const std::size_t dims[] = {2, 3, 5};
  int checked = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t dim = dims[t % 3];
    auto d = critpts::testing::random_separable(rng, 6 + rng.below(35), dim);
    ExactBackend backend(d);
    const IndexSet crit = critical_points_with(backend, d.positives());
    o.expect(leak_set_with(backend, d.positives(), crit) == (d.positives() | crit), "dataset " + std::to_string(t));
    ++checked;
  }
  o.detail << checked << " datasets";
}

void exhaustive_audits(Outcome& o) {
  std::size_t runs = 0, violations = 0;
  auto audit = [&](const LabeledDataset& S, const std::string& name) {
    const auto report = audit_truthfulness(S, AuditMode::full());
    runs += report.runs;
    violations += report.violations.size();
    o.expect(report.ok(), name);
  };
  audit(fig_safe(), "fig_safe");
  o.expect(runs == 2048, "fig_safe run count");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(4000 + seed);
    audit(critpts::testing::random_separable(rng, 8, 2), "random seed " + std::to_string(seed));
  }
  o.expect(runs == 2048 + 10 * 256, "total run count");
  o.detail << runs << " reports, " << violations << " violations";
}

void oracle_equivalence(Outcome& o) {
  Rng rng(5001);
  int separable = 0;
  for (int t = 0; t < 200; ++t) {
    auto [pos, neg] = critpts::testing::random_point_sets(rng, 7, 2, 3);
    const bool exact = check_separability(pos, neg).separable();
    o.expect(exact == hull_oracle_2d(pos, neg), "hull instance " + std::to_string(t));
    separable += exact;
  }
  std::size_t points = 0;
  for (int t = 0; t < 50; ++t) {
    auto d = critpts::testing::random_separable(rng, 10, 2 + t % 3, 3);
    const IndexSet a_minus = subset_from_mask(d.negatives(), rng.next());
    for (Index z = 0; z < d.size(); ++z, ++points)
      o.expect(leak_contains(d, d.positives(), a_minus, z) == cone_leak_oracle(d, d.positives(), a_minus, z),
               "cone instance " + std::to_string(t));
  }
  o.detail << "200 hull instances (" << separable << " separable), " << points << " leak queries";
}

void svm_correctness_and_iia(Outcome& o) {
  Rng rng(6001);
  double worst_margin = 0, worst_objective = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t dim = 2 + t % 4;
    auto d = critpts::testing::random_separable(rng, 6 + rng.below(25), dim);
    const auto sol = train_hard_svm(d);
    const auto X = detail::to_matrix(d.points(), dim);
    const auto y = detail::label_vector(d.labels());
    Eigen::Map<const Eigen::VectorXd> w(sol.w.data(), dim);
    for (Index i = 0; i < d.size(); ++i)
      worst_margin = std::max(worst_margin, 1 - y(i) * (X.row(i).dot(w) + sol.b));
    const auto dual = critpts::testing::smo_dual(X * X.transpose(), y);
    worst_objective = std::max(worst_objective, std::abs(dual.norm_sq - sol.objective) / std::max(1.0, sol.objective));
  }
  o.expect(worst_margin <= 1e-8, "margin constraint");
  o.expect(worst_objective <= 1e-6, "dual objective");

  int instances = 0, subsets = 0;
  while (instances < 20) {
    auto d = critpts::testing::random_separable(rng, 10, 2 + rng.below(2));
    const IndexSet pos = d.positives(), neg = d.negatives();
    if (neg.size() > 6) continue;
    const IndexSet crit = critical_points(d, pos);
    const IndexSet optional = neg - crit;
    const auto full = train_hard_svm(d);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << optional.size()); ++mask, ++subsets)
      o.expect(solutions_equal(full, train_hard_svm(d.subset(pos | crit | subset_from_mask(optional, mask))), 1e-6),
               "IIA instance " + std::to_string(instances));
    ++instances;
  }
  o.detail << "max margin violation " << worst_margin << ", max dual gap " << worst_objective << ", " << subsets
           << " IIA subsets";
}

void pipelines_equivalent(Outcome& o) {
  const std::vector<Learner> learners{Learner::hard_svm(), Learner::kernel_svm(KernelSpec::polynomial(2, 1))};
  std::size_t comparisons = 0, control_unequal = 0;
  for (std::uint64_t u = 0; u < 20; ++u) {
    const Universe U{generate_separable(7000 + u, 100, 2, Rational(1, 2))};
    PipelineConfig config;
    config.sample_size = 30;
    config.seed = u;
    const IndexSet sample = sample_training(U, config.seed, config.sample_size);
    IndexSet hide_one = U.data.positives();
    for (Index i : sample)
      if (U.data.label(i) == Label::Positive) {
        hide_one = hide_one.without(i);
        break;
      }
    Rng rng(u);
    const std::vector<AliceStrategy> strategies{Truthful{},
                                                HidePositives{1},
                                                FixedReport{IndexSet{}},
                                                FixedReport{U.data.all()},
                                                FixedReport{hide_one},
                                                FixedReport{subset_from_mask(U.data.all(), rng.next())}};
    for (const auto& learner : learners) {
      config.learner = learner;
      for (const auto& alice : strategies) {
        const auto r = compare_pipelines(U, config, alice);
        o.expect(r.equal, "universe " + std::to_string(u) + " strategy " + strategy_name(alice));
        ++comparisons;
      }
    }
    config.learner = Learner::control();
    for (const auto& alice : strategies) control_unequal += !compare_pipelines(U, config, alice).equal;
  }
  o.expect(control_unequal > 0, "control learner never disagreed");
  o.detail << comparisons << " comparisons, control learner unequal in " << control_unequal;
}

void kernel_reduction(Outcome& o) {
  Rng rng(8001);
  std::size_t compared = 0, skipped = 0;
  for (int t = 0; t < 150; ++t) {
    auto [pos, neg] = critpts::testing::random_point_sets(rng, 7, 2 + t % 3, 3);
    if (abs(separation_margin(pos, neg)) < Rational(1, 1000000)) {
      ++skipped;
      continue;
    }
    o.expect(kernel_separability(pos, neg, KernelSpec::linear()) == check_separability(pos, neg).separable(),
             "separability instance " + std::to_string(t));
    ++compared;
  }
  for (int t = 0; t < 20; ++t) {
    auto d = critpts::testing::random_separable(rng, 12, 2 + t % 2);
    ExactBackend exact(d);
    KernelBackend kernel(d, KernelSpec::linear());
    const IndexSet pos = d.positives();
    for (Index x : d.negatives()) {
      const auto plus = d.select(pos.with(x));
      const auto minus = d.select(d.negatives().without(x));
      if (abs(separation_margin(plus, minus)) < Rational(1, 1000000)) {
        ++skipped;
        continue;
      }
      o.expect(kernel.separable(pos.with(x), d.negatives().without(x)) ==
                   exact.separable(pos.with(x), d.negatives().without(x)),
               "critical test instance " + std::to_string(t));
      ++compared;
    }
  }
  const auto xp = std::vector<Point>{make_point({"1", "1"}), make_point({"-1", "-1"})};
  const auto xn = std::vector<Point>{make_point({"1", "-1"}), make_point({"-1", "1"})};
  o.expect(!kernel_separability(xp, xn, KernelSpec::linear()), "XOR separable under linear");
  o.expect(kernel_separability(xp, xn, KernelSpec::polynomial(2, 1)), "XOR inseparable under poly 2");
  o.detail << compared << " guarded comparisons (" << skipped << " near-degenerate skipped), XOR ok";
}

std::string reread(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void determinism(Outcome& o) {
  const auto dir = std::filesystem::temp_directory_path() / "critpts_acceptance";
  std::filesystem::create_directories(dir);
  const std::string safe = critpts::testing::data_path("fig_safe.json");
  const std::string universe = (dir / "universe.json").string();
  write_text_file(universe, cli::cmd_gen({11, 100, 2, "0.5", "linear"}).text);

  cli::MlOptions ml{universe, 4, 30, "kernel:poly:2", "hide:1"};
  cli::GridOptions grid{safe, "0", "8", "0", "4", "0.5"};
  const std::vector<std::pair<std::string, std::function<cli::Output()>>> commands{
      {"gen", [] { return cli::cmd_gen({5, 40, 3, "0.25", "linear"}); }},
      {"protocol", [&] { return cli::cmd_protocol(safe, "hide:1", "bob"); }},
      {"audit", [&] { return cli::cmd_audit(safe, "sample:9:100", "bob"); }},
      {"ml", [&] { return cli::cmd_ml(ml); }},
      {"safe-grid", [&] { return cli::cmd_safe_grid(grid); }},
  };
  for (const auto& [name, run] : commands) {
    const std::string a = (dir / (name + ".a")).string(), b = (dir / (name + ".b")).string();
    write_text_file(a, run().text);
    write_text_file(b, run().text);
    o.expect(reread(a) == reread(b) && !reread(a).empty(), name + " output differs");
  }
  o.detail << commands.size() << " commands rerun byte-identical";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria{
      {"fig_safe golden", figure_safe_golden},
      {"fig_critical golden", figure_critical_golden},
      {"fixed-point law", fixed_point_law},
      {"exhaustive truthfulness audits", exhaustive_audits},
      {"oracle equivalence", oracle_equivalence},
      {"SVM correctness and IIA", svm_correctness_and_iia},
      {"SPeD/MPeD equivalence", pipelines_equivalent},
      {"kernel linear reduction", kernel_reduction},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
