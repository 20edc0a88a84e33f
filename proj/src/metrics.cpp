#include "frfacs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "frfacs/errors.hpp"

namespace frfacs {

namespace {

// 0/0 is defined as 0 throughout the report.
double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

ConfusionMatrix confusion(const std::vector<int>& y_true,
                          const std::vector<int>& y_pred, int num_classes) {
  if (y_true.size() != y_pred.size()) {
    throw ArgumentError("confusion: length mismatch");
  }
  ConfusionMatrix cm;
  cm.counts.assign(num_classes, std::vector<long>(num_classes, 0));
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] < 0 || y_true[i] >= num_classes || y_pred[i] < 0 ||
        y_pred[i] >= num_classes) {
      throw ArgumentError("confusion: label out of range at index " +
                          std::to_string(i));
    }
    ++cm.counts[y_true[i]][y_pred[i]];
  }
  cm.total = static_cast<long>(y_true.size());
  return cm;
}

double auprc(const std::vector<int>& y_true, const std::vector<double>& y_score) {
  if (y_true.size() != y_score.size()) throw ArgumentError("auprc: length mismatch");
  long positives = 0;
  for (int y : y_true) {
    if (y != 0 && y != 1) throw ArgumentError("auprc: labels must be binary 0/1");
    positives += y;
  }
  if (positives == 0) throw ArgumentError("auprc: no positive samples");

  std::vector<std::size_t> order(y_true.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return y_score[a] > y_score[b];
  });

  double area = 0.0;
  long tp = 0, fp = 0;
  for (std::size_t i : order) {
    if (y_true[i] == 1) {
      ++tp;
      const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
      area += precision / static_cast<double>(positives);
    } else {
      ++fp;
    }
  }
  return area;
}

MetricReport report(const ConfusionMatrix& cm, int minority_class,
                    const std::vector<int>* y_true,
                    const std::vector<double>* y_score) {
  const int k = cm.num_classes();
  if (minority_class < 0 || minority_class >= k) {
    throw ArgumentError("report: minority class out of range");
  }

  MetricReport rep;
  rep.minority_class = minority_class;
  rep.precision.resize(k);
  rep.recall.resize(k);

  std::vector<long> row_sum(k, 0), col_sum(k, 0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      row_sum[i] += cm.counts[i][j];
      col_sum[j] += cm.counts[i][j];
    }
  }

  double f1_sum = 0.0, recall_sum = 0.0;
  for (int c = 0; c < k; ++c) {
    const double tp = static_cast<double>(cm.counts[c][c]);
    rep.precision[c] = safe_div(tp, static_cast<double>(col_sum[c]));
    rep.recall[c] = safe_div(tp, static_cast<double>(row_sum[c]));
    const double f1 = safe_div(2.0 * rep.precision[c] * rep.recall[c],
                               rep.precision[c] + rep.recall[c]);
    if (c == minority_class) rep.minority_f1 = f1;
    f1_sum += f1;
    recall_sum += rep.recall[c];
  }
  rep.macro_f1 = f1_sum / static_cast<double>(k);
  rep.balanced_accuracy = recall_sum / static_cast<double>(k);

  // Multiclass MCC (reduces to the binary formula for K = 2).
  double trace = 0.0;
  for (int c = 0; c < k; ++c) trace += static_cast<double>(cm.counts[c][c]);
  const double s = static_cast<double>(cm.total);
  double dot_tp = 0.0, sq_t = 0.0, sq_p = 0.0;
  for (int c = 0; c < k; ++c) {
    dot_tp += static_cast<double>(row_sum[c]) * static_cast<double>(col_sum[c]);
    sq_t += static_cast<double>(row_sum[c]) * static_cast<double>(row_sum[c]);
    sq_p += static_cast<double>(col_sum[c]) * static_cast<double>(col_sum[c]);
  }
  const double denom = std::sqrt(s * s - sq_t) * std::sqrt(s * s - sq_p);
  rep.mcc = safe_div(trace * s - dot_tp, denom);

  if (k == 2) {
    const int majority = 1 - minority_class;
    const double sens = rep.recall[minority_class];
    const double spec = rep.recall[majority];
    rep.g_mean = std::sqrt(sens * spec);
    const double fp = static_cast<double>(cm.counts[majority][minority_class]);
    const double tn = static_cast<double>(cm.counts[majority][majority]);
    const double fn = static_cast<double>(cm.counts[minority_class][majority]);
    const double tp = static_cast<double>(cm.counts[minority_class][minority_class]);
    rep.type_i_rate = safe_div(fp, fp + tn);
    rep.type_ii_rate = safe_div(fn, fn + tp);
  }

  if (y_score) {
    if (k != 2) throw ArgumentError("report: AUPRC is only supported for K = 2");
    if (!y_true) throw ArgumentError("report: AUPRC needs per-sample truth");
    std::vector<int> binary(y_true->size());
    for (std::size_t i = 0; i < y_true->size(); ++i) {
      binary[i] = (*y_true)[i] == minority_class ? 1 : 0;
    }
    rep.auprc = auprc(binary, *y_score);
  }
  return rep;
}

std::string MetricReport::to_json() const {
  nlohmann::json j;
  j["macro_f1"] = macro_f1;
  j["minority_f1"] = minority_f1;
  j["balanced_accuracy"] = balanced_accuracy;
  j["g_mean"] = g_mean;
  if (auprc) j["auprc"] = *auprc;
  j["mcc"] = mcc;
  j["type_i_rate"] = type_i_rate;
  j["type_ii_rate"] = type_ii_rate;
  j["precision"] = precision;
  j["recall"] = recall;
  j["minority_class"] = minority_class;
  return j.dump();
}

}  // namespace frfacs
