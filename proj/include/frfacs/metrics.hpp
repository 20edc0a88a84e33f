#pragma once

#include <optional>
#include <string>
#include <vector>

namespace frfacs {

struct ConfusionMatrix {
  std::vector<std::vector<long>> counts;  // rows = true class, cols = predicted
  long total = 0;

  int num_classes() const { return static_cast<int>(counts.size()); }
};

ConfusionMatrix confusion(const std::vector<int>& y_true,
                          const std::vector<int>& y_pred, int num_classes);

struct MetricReport {
  double macro_f1 = 0.0;
  double minority_f1 = 0.0;
  double balanced_accuracy = 0.0;
  double g_mean = 0.0;                 // binary only; 0 for K > 2
  std::optional<double> auprc;         // binary only, needs scores
  double mcc = 0.0;
  double type_i_rate = 0.0;            // FP rate w.r.t. minority-positive
  double type_ii_rate = 0.0;           // FN rate w.r.t. minority-positive
  std::vector<double> precision;       // per class
  std::vector<double> recall;          // per class
  int minority_class = 0;

  std::string to_json() const;
};

// All 0/0 rates are defined as 0; an MCC with zero denominator is 0; the
// report never aborts on degenerate matrices. AUPRC is computed only when
// per-sample truth and minority scores are supplied (binary tasks).
MetricReport report(const ConfusionMatrix& cm, int minority_class,
                    const std::vector<int>* y_true = nullptr,
                    const std::vector<double>* y_score = nullptr);

// Step-interpolated area under the precision-recall curve: samples sorted by
// descending score (ties by index), summing precision * delta-recall.
double auprc(const std::vector<int>& y_true, const std::vector<double>& y_score);

}  // namespace frfacs
