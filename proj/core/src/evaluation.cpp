#include "nesa/evaluation.hpp"

#include "nesa/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace nesa {

long long ConfusionMatrix::total() const {
  long long t = 0;
  for (const auto& row : counts) {
    for (long long c : row) t += c;
  }
  return t;
}

long long ConfusionMatrix::row_sum(int gold) const {
  long long t = 0;
  for (long long c : counts[static_cast<std::size_t>(gold)]) t += c;
  return t;
}

long long ConfusionMatrix::col_sum(int pred) const {
  long long t = 0;
  for (const auto& row : counts) t += row[static_cast<std::size_t>(pred)];
  return t;
}

ConfusionMatrix confusion(std::span<const SentimentLabel> golds,
                          std::span<const SentimentLabel> preds) {
  require(golds.size() == preds.size(), ErrorKind::alignment,
          "confusion: " + std::to_string(golds.size()) + " golds vs " +
              std::to_string(preds.size()) + " predictions");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    cm.counts[static_cast<std::size_t>(label_index(golds[i]))]
             [static_cast<std::size_t>(label_index(preds[i]))] += 1;
  }
  return cm;
}

ClassMetrics class_metrics(const ConfusionMatrix& cm, int cls) {
  ClassMetrics m;
  const auto c = static_cast<std::size_t>(cls);
  long long tp = cm.counts[c][c];
  long long col = cm.col_sum(cls);
  long long row = cm.row_sum(cls);
  m.precision = col > 0 ? static_cast<double>(tp) / static_cast<double>(col) : 0.0;
  m.recall = row > 0 ? static_cast<double>(tp) / static_cast<double>(row) : 0.0;
  if (col > 0 && row > 0 && m.precision + m.recall > 0.0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

double macro_f1_pn(const ConfusionMatrix& cm) {
  double f1_pos = class_metrics(cm, label_index(SentimentLabel::positive)).f1;
  double f1_neg = class_metrics(cm, label_index(SentimentLabel::negative)).f1;
  return 100.0 * (f1_pos + f1_neg) / 2.0;
}

EvalMetrics evaluate(std::span<const SentimentLabel> golds,
                     std::span<const SentimentLabel> preds) {
  EvalMetrics metrics;
  metrics.cm = confusion(golds, preds);
  for (int c = 0; c < kNumClasses; ++c) {
    metrics.per_class[static_cast<std::size_t>(c)] = class_metrics(metrics.cm, c);
  }
  metrics.macro_f1_pn = macro_f1_pn(metrics.cm);
  return metrics;
}

std::string metrics_to_json(const EvalMetrics& metrics) {
  nlohmann::ordered_json j;
  j["macro_f1_pn"] = metrics.macro_f1_pn;
  j["f1_positive"] = 100.0 * metrics.per_class[0].f1;
  j["f1_negative"] = 100.0 * metrics.per_class[1].f1;
  j["f1_neutral"] = 100.0 * metrics.per_class[2].f1;
  for (int c = 0; c < kNumClasses; ++c) {
    const auto& m = metrics.per_class[static_cast<std::size_t>(c)];
    nlohmann::ordered_json pc;
    pc["precision"] = m.precision;
    pc["recall"] = m.recall;
    pc["f1"] = m.f1;
    j["per_class"][to_string(label_from_index(c))] = pc;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : metrics.cm.counts) {
    rows.push_back(row);
  }
  j["confusion_matrix"] = rows;
  return j.dump(2);
}

ErrorReport error_report(std::span<const Record> records,
                         std::span<const SentimentLabel> golds,
                         std::span<const SentimentLabel> preds,
                         std::span<const Eigen::Vector3d> probs) {
  require(records.size() == golds.size() && golds.size() == preds.size() &&
              preds.size() == probs.size(),
          ErrorKind::alignment, "error_report: input spans differ in length");

  ErrorReport report;
  report.scored = static_cast<long long>(records.size());

  std::array<std::vector<ErrorEntry>, kNumClasses * kNumClasses> cells;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (golds[i] == preds[i]) continue;
    ++report.errors;
    std::size_t cell = static_cast<std::size_t>(label_index(golds[i])) * kNumClasses +
                       static_cast<std::size_t>(label_index(preds[i]));
    cells[cell].push_back({records[i], golds[i], preds[i], probs[i]});
  }

  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    if (cells[cell].empty()) continue;
    ErrorGroup group;
    group.gold = label_from_index(static_cast<int>(cell) / kNumClasses);
    group.pred = label_from_index(static_cast<int>(cell) % kNumClasses);
    group.polarity_flip =
        (group.gold == SentimentLabel::positive && group.pred == SentimentLabel::negative) ||
        (group.gold == SentimentLabel::negative && group.pred == SentimentLabel::positive);
    group.entries = std::move(cells[cell]);
    std::stable_sort(group.entries.begin(), group.entries.end(),
                     [](const ErrorEntry& a, const ErrorEntry& b) {
                       double pa = a.probs(label_index(a.pred));
                       double pb = b.probs(label_index(b.pred));
                       if (pa != pb) return pa > pb;
                       return a.record.id < b.record.id;
                     });
    report.groups.push_back(std::move(group));
  }
  std::stable_sort(report.groups.begin(), report.groups.end(),
                   [](const ErrorGroup& a, const ErrorGroup& b) {
                     return a.entries.size() > b.entries.size();
                   });
  return report;
}

std::string report_to_text(const ErrorReport& report) {
  std::ostringstream out;
  out << "error report: " << report.errors << " misclassified of " << report.scored
      << " examples\n";
  if (report.errors == 0) {
    out << "no errors.\n";
    return out.str();
  }
  for (const ErrorGroup& group : report.groups) {
    out << "\n[" << to_string(group.gold) << " -> " << to_string(group.pred) << "] "
        << group.entries.size() << " example(s)";
    if (group.polarity_flip) out << "  ** polarity flip (rare) **";
    out << '\n';
    for (const ErrorEntry& e : group.entries) {
      out << "  p=" << e.probs(label_index(e.pred)) << "  id=" << e.record.id << "  entity=\""
          << e.record.entity_text << "\"\n"
          << "    " << e.record.sentence << '\n';
    }
  }
  return out.str();
}

std::string report_to_json(const ErrorReport& report) {
  nlohmann::ordered_json j;
  j["scored"] = report.scored;
  j["errors"] = report.errors;
  j["groups"] = nlohmann::json::array();
  for (const ErrorGroup& group : report.groups) {
    nlohmann::ordered_json g;
    g["gold"] = to_string(group.gold);
    g["pred"] = to_string(group.pred);
    g["count"] = group.entries.size();
    g["polarity_flip"] = group.polarity_flip;
    g["entries"] = nlohmann::json::array();
    for (const ErrorEntry& e : group.entries) {
      nlohmann::ordered_json entry;
      entry["id"] = e.record.id;
      entry["sentence"] = e.record.sentence;
      entry["entity"] = e.record.entity_text;
      entry["gold"] = to_string(e.gold);
      entry["pred"] = to_string(e.pred);
      entry["probs"] = {e.probs(0), e.probs(1), e.probs(2)};
      g["entries"].push_back(entry);
    }
    j["groups"].push_back(g);
  }
  return j.dump(2);
}

}  // namespace nesa
