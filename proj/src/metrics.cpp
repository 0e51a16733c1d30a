#include "tpagg/metrics.hpp"

#include <algorithm>

#include "tpagg/io.hpp"

namespace tpagg {

namespace {

void require_subset(const FailureRecord& f, std::size_t n) {
  if (!f.failed.empty() && f.failed.back() >= n) {
    throw Error(ErrorKind::UnknownTest, "failure outside suite", f.failed.back());
  }
}

std::vector<char> verdicts(const StrictRanking& order, const FailureRecord& f) {
  std::vector<char> v(order.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) v[i] = f.contains(order.at(i)) ? 1 : 0;
  return v;
}

}  // namespace

std::optional<double> apfd(const StrictRanking& order, const FailureRecord& failures) {
  require_subset(failures, order.size());
  const std::size_t m = failures.count();
  if (m == 0) return std::nullopt;
  const auto n = static_cast<double>(order.size());
  double position_sum = 0;
  for (TestId f : failures.failed) position_sum += order.rank(f);
  return 1.0 - position_sum / (n * static_cast<double>(m)) + 1.0 / (2.0 * n);
}

std::optional<double> apfd_c(const StrictRanking& order, std::span<const double> cost,
                             const FailureRecord& failures) {
  require_subset(failures, order.size());
  const std::size_t n = order.size();
  if (cost.size() < n) throw Error(ErrorKind::MissingCost, "cost vector too short");
  for (std::size_t t = 0; t < n; ++t) {
    if (!(cost[t] > 0.0)) throw Error(ErrorKind::NonPositiveCost, "", static_cast<TestId>(t));
  }
  const std::size_t m = failures.count();
  if (m == 0) return std::nullopt;
  // suffix[i] = Σ_{j >= i} cost(order[j])
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + cost[order.at(i)];
  double numer = 0;
  for (TestId f : failures.failed) {
    const std::size_t pos = order.rank(f) - 1;
    numer += suffix[pos] - 0.5 * cost[f];
  }
  return numer / (suffix[0] * static_cast<double>(m));
}

double eps(const StrictRanking& order, const FailureRecord& failures) {
  require_subset(failures, order.size());
  const std::size_t n = order.size();
  const std::size_t m = failures.count();
  if (m == 0 || m == n) return 1.0;
  auto v = verdicts(order, failures);
  std::size_t distance = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const char ideal = i < m ? 1 : 0;
    distance += v[i] != ideal ? 1 : 0;
  }
  const auto worst = 2.0 * static_cast<double>(std::min(m, n - m));
  return 1.0 - static_cast<double>(distance) / worst;
}

std::optional<double> apfd_by_batch(const ExecutionPlan& plan,
                                    const FailureRecord& failures) {
  const std::size_t m = failures.count();
  if (m == 0) return std::nullopt;
  require_subset(failures, plan.test_count());
  const auto batches = static_cast<double>(plan.batches.size());
  double position_sum = 0;
  std::size_t seen = 0;
  for (std::size_t b = 0; b < plan.batches.size(); ++b) {
    for (TestId t : plan.batches[b]) {
      if (failures.contains(t)) {
        position_sum += static_cast<double>(b + 1);
        ++seen;
      }
    }
  }
  if (seen != m) throw Error(ErrorKind::MissingTest, "failing test absent from plan");
  return 1.0 - position_sum / (batches * static_cast<double>(m)) + 1.0 / (2.0 * batches);
}

MetricRow evaluate(std::string strategy, const StrictRanking& order,
                   std::span<const double> cost, const FailureRecord& failures) {
  MetricRow row;
  row.strategy = std::move(strategy);
  row.apfd = apfd(order, failures);
  row.apfd_c = apfd_c(order, cost, failures);
  row.eps = eps(order, failures);
  return row;
}

std::string metrics_csv(const std::vector<MetricRow>& rows) {
  auto cell = [](const std::optional<double>& v) {
    return v ? format_fixed6(*v) : std::string("NA");
  };
  std::string out = "strategy,apfd,apfd_c,eps\n";
  for (const auto& r : rows) {
    out += r.strategy + "," + cell(r.apfd) + "," + cell(r.apfd_c) + "," +
           format_fixed6(r.eps) + "\n";
  }
  return out;
}

}  // namespace tpagg
