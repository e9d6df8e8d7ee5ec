#include "sparsechan/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace sparsechan {

double nmsd(const ComplexVector& x_true, const ComplexVector& x_hat) {
  if (x_true.size() != x_hat.size())
    throw std::invalid_argument("nmsd: length mismatch");
  const double ref = norm2(x_true);
  if (ref == 0.0) throw std::invalid_argument("nmsd: zero reference vector");
  double err = 0.0;
  for (std::size_t i = 0; i < x_true.size(); ++i)
    err += std::norm(x_true[i] - x_hat[i]);
  if (err == 0.0) return -300.0;
  return std::max(20.0 * std::log10(std::sqrt(err) / ref), -300.0);
}

std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  std::vector<SummaryRow> rows;
  for (const TrialRecord& r : records) {
    SummaryRow* row = nullptr;
    for (SummaryRow& existing : rows)
      if (existing.solver_name == r.solver_name &&
          existing.noise_condition == r.noise_condition) {
        row = &existing;
        break;
      }
    if (!row) {
      rows.push_back({r.solver_name, r.noise_condition, 0, 0.0, 0.0, 0.0});
      row = &rows.back();
    }
    row->trials += 1;
    row->mean_nmsd_db += r.nmsd_db;
    row->mean_iterations += r.iterations;
    row->mean_runtime_s += r.runtime_s;
  }
  for (SummaryRow& row : rows) {
    row.mean_nmsd_db /= row.trials;
    row.mean_iterations /= row.trials;
    row.mean_runtime_s /= row.trials;
  }
  return rows;
}

}  // namespace sparsechan
