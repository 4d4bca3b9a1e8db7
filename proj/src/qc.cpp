#include "usikit/qc.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "usikit/error.hpp"
#include "usikit/text.hpp"

namespace usikit {
namespace {

std::optional<Label> parse_label(std::string s) {
  s = text::trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "pass" || s == "1" || s == "true" || s == "yes") return Label::pass;
  if (s == "fail" || s == "0" || s == "false" || s == "no") return Label::fail;
  return std::nullopt;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      field.push_back(c);
    } else if (c == ',' && !quoted) {
      fields.push_back(text::trim(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(text::trim(field));
  return fields;
}

}  // namespace

ConfusionMatrix confusion_from_labels(std::span<const LabelPair> pairs) {
  if (pairs.empty()) throw Error("qc", "no label pairs");
  ConfusionMatrix m;
  for (const auto& p : pairs) {
    if (p.judge == Label::pass && p.truth == Label::pass) ++m.tp;
    else if (p.judge == Label::fail && p.truth == Label::fail) ++m.tn;
    else if (p.judge == Label::pass) ++m.fp;
    else ++m.fn;
  }
  return m;
}

QcStats qc_stats(const ConfusionMatrix& m) {
  QcStats s;
  const auto tp = static_cast<double>(m.tp), fp = static_cast<double>(m.fp);
  const auto fn = static_cast<double>(m.fn), tn = static_cast<double>(m.tn);
  const double n = tp + fp + fn + tn;
  if (m.tp + m.fp > 0) s.precision = tp / (tp + fp);
  if (m.tp + m.fn > 0) s.recall = tp / (tp + fn);
  if (m.n() > 0) {
    s.accuracy = (tp + tn) / n;
    const double p_o = (tp + tn) / n;
    const double p_e = ((tp + fp) * (tp + fn) + (fn + tn) * (fp + tn)) / (n * n);
    if (p_e < 1.0) s.kappa = (p_o - p_e) / (1.0 - p_e);
  }
  return s;
}

std::vector<LabelPair> read_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("qc", path.string() + ": cannot open");
  std::vector<LabelPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 3) {
      throw Error("qc", path.string() + ":" + std::to_string(line_no) + ": expected 3 columns (id, judge_label, truth_label)");
    }
    const auto judge = parse_label(fields[1]);
    const auto truth = parse_label(fields[2]);
    if (!judge || !truth) {
      if (pairs.empty() && line_no == 1) continue;  // header
      throw Error("qc", path.string() + ":" + std::to_string(line_no) + ": labels must be pass or fail");
    }
    pairs.push_back(LabelPair{fields[0], *judge, *truth});
  }
  if (pairs.empty()) throw Error("qc", path.string() + ": no label rows");
  return pairs;
}

}  // namespace usikit
