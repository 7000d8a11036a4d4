// Copyright 2026, The radar-moseve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "moseve/harness/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "moseve/errors.hpp"

namespace moseve::harness {

namespace {

constexpr const char* kClassNames[2] = {"static", "moving"};

double percent(std::size_t num, std::size_t den) {
  return den == 0 ? 100.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string threshold_key(double t) { return "eve.precision@" + format_double(t); }

}  // namespace

void Confusion::add(std::span<const geom::Motion> predicted, std::span<const geom::Motion> truth) {
  if (predicted.size() != truth.size()) throw ArgumentError("confusion: prediction and truth lengths differ");
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++counts[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
  }
}

std::size_t Confusion::total() const { return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1]; }

MosMetrics mos_metrics_from(const Confusion& confusion) {
  MosMetrics m;
  m.confusion = confusion;
  const auto& c = confusion.counts;
  for (std::size_t k = 0; k < 2; ++k) {
    const std::size_t other = 1 - k;
    const std::size_t tp = c[k][k], fp = c[other][k], fn = c[k][other];
    m.per_class[k].iou = percent(tp, tp + fp + fn);
    m.per_class[k].f1 = percent(2 * tp, 2 * tp + fp + fn);
    m.per_class[k].acc = percent(tp, tp + fn);
  }
  m.miou = 0.5 * (m.per_class[0].iou + m.per_class[1].iou);
  m.mf1 = 0.5 * (m.per_class[0].f1 + m.per_class[1].f1);
  m.acc_macro = 0.5 * (m.per_class[0].acc + m.per_class[1].acc);
  m.points = confusion.total();
  m.acc_overall = percent(c[0][0] + c[1][1], m.points);
  return m;
}

MosMetrics compute_mos_metrics(std::span<const geom::Motion> predicted, std::span<const geom::Motion> truth) {
  if (truth.empty()) throw ArgumentError("compute_mos_metrics: empty input");
  Confusion c;
  c.add(predicted, truth);
  return mos_metrics_from(c);
}

EveMetrics compute_eve_metrics(std::span<const double> estimates, std::span<const double> truths,
                               std::span<const double> thresholds) {
  if (estimates.empty()) throw ArgumentError("compute_eve_metrics: empty input");
  if (estimates.size() != truths.size()) throw ArgumentError("compute_eve_metrics: lengths differ");
  EveMetrics m;
  m.samples = estimates.size();
  m.thresholds.assign(thresholds.begin(), thresholds.end());
  m.precision.assign(thresholds.size(), 0.0);
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double e = estimates[i] - truths[i];
    m.errors.push_back(e);
    m.mae += std::abs(e);
    m.mse += e * e;
    for (std::size_t t = 0; t < thresholds.size(); ++t) m.precision[t] += std::abs(e) < thresholds[t];
  }
  const double n = static_cast<double>(m.samples);
  m.mae /= n;
  m.mse /= n;
  for (double& p : m.precision) p /= n;
  return m;
}

bool report_identities_hold(const MetricsReport& report, double tolerance) {
  auto in_range = [](double v) { return v >= 0.0 && v <= 100.0; };
  if (report.has_mos) {
    const auto& m = report.mos;
    for (const auto& c : m.per_class) {
      if (!in_range(c.iou) || !in_range(c.f1) || !in_range(c.acc)) return false;
      const double f = c.f1 / 100.0;
      if (std::abs(c.iou / 100.0 - f / (2.0 - f)) * 100.0 > tolerance) return false;
    }
    if (!in_range(m.miou) || !in_range(m.acc_macro) || !in_range(m.acc_overall)) return false;
  }
  if (report.has_eve) {
    for (std::size_t i = 1; i < report.eve.precision.size(); ++i) {
      if (report.eve.thresholds[i] >= report.eve.thresholds[i - 1] &&
          report.eve.precision[i] < report.eve.precision[i - 1]) {
        return false;
      }
    }
  }
  return true;
}

KeyValues report_to_kv(const MetricsReport& report) {
  KeyValues kv;
  kv.set("title", report.title);
  kv.set("pairs", report.pairs);
  kv.set("config_hash", report.config_hash);
  if (report.has_mos) {
    const auto& m = report.mos;
    for (std::size_t k = 0; k < 2; ++k) {
      const std::string p = std::string("mos.") + kClassNames[k] + ".";
      kv.set(p + "iou", m.per_class[k].iou);
      kv.set(p + "f1", m.per_class[k].f1);
      kv.set(p + "acc", m.per_class[k].acc);
    }
    kv.set("mos.miou", m.miou);
    kv.set("mos.mf1", m.mf1);
    kv.set("mos.acc_macro", m.acc_macro);
    kv.set("mos.acc_overall", m.acc_overall);
    kv.set("mos.points", m.points);
  }
  if (report.has_eve) {
    const auto& e = report.eve;
    kv.set("eve.mae", e.mae);
    kv.set("eve.mse", e.mse);
    kv.set("eve.samples", e.samples);
    for (std::size_t t = 0; t < e.thresholds.size(); ++t) kv.set(threshold_key(e.thresholds[t]), e.precision[t]);
  }
  kv.merge(report.counters, "count.");
  return kv;
}

std::string report_to_text(const MetricsReport& report) {
  std::string out;
  auto line = [&](const std::string& s) { out += s + '\n'; };
  line(report.title.empty() ? "evaluation report" : report.title);
  line(pad("pairs", 16) + std::to_string(report.pairs));
  line(pad("config hash", 16) + report.config_hash);
  if (report.has_mos) {
    const auto& m = report.mos;
    line("");
    line(pad("MOS (%)", 16) + lpad("IoU", 10) + lpad("F1", 10) + lpad("Acc", 10));
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& c = m.per_class[k];
      line(pad(std::string("  ") + kClassNames[k], 16) + lpad(fixed(c.iou), 10) + lpad(fixed(c.f1), 10) +
           lpad(fixed(c.acc), 10));
    }
    line(pad("  mean", 16) + lpad(fixed(m.miou), 10) + lpad(fixed(m.mf1), 10) + lpad(fixed(m.acc_macro), 10));
    line(pad("  overall acc", 16) + lpad(fixed(m.acc_overall), 30));
    line(pad("  points", 16) + lpad(std::to_string(m.points), 30));
  }
  if (report.has_eve) {
    const auto& e = report.eve;
    line("");
    line("EVE");
    line(pad("  MAE (m/s)", 24) + lpad(fixed(e.mae, 6), 12));
    line(pad("  MSE (m2/s2)", 24) + lpad(fixed(e.mse, 6), 12));
    for (std::size_t t = 0; t < e.thresholds.size(); ++t) {
      line(pad("  precision@" + format_double(e.thresholds[t]), 24) + lpad(fixed(100.0 * e.precision[t], 2) + "%", 12));
    }
    line(pad("  samples", 24) + lpad(std::to_string(e.samples), 12));
  }
  if (!report.counters.entries().empty()) {
    line("");
    for (const auto& [k, v] : report.counters.entries()) line(pad(k, 24) + lpad(v, 12));
  }
  return out;
}

void write_report(const MetricsReport& report, const std::string& dir) {
  if (!report_identities_hold(report)) throw ContractError("write_report: metric identities violated");
  std::filesystem::create_directories(dir);
  const auto root = std::filesystem::path(dir);
  for (const auto& [name, text] : {std::pair{"report.txt", report_to_text(report)},
                                   std::pair{"report.kv", report_to_kv(report).to_string()}}) {
    std::ofstream out(root / name, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + (root / name).string());
  }
}

MetricsReport pool_reports(const std::vector<MetricsReport>& reports) {
  if (reports.empty()) throw ArgumentError("pool_reports: nothing to pool");
  MetricsReport out;
  out.title = reports.front().title;
  out.config_hash = reports.front().config_hash;
  out.has_mos = reports.front().has_mos;
  out.has_eve = reports.front().has_eve;
  Confusion confusion;
  std::vector<double> errors;
  std::map<std::string, double> counters;
  for (const auto& r : reports) {
    if (r.has_mos != out.has_mos || r.has_eve != out.has_eve) throw ArgumentError("pool_reports: layouts differ");
    out.pairs += r.pairs;
    for (std::size_t t = 0; t < 2; ++t) {
      for (std::size_t p = 0; p < 2; ++p) confusion.counts[t][p] += r.mos.confusion.counts[t][p];
    }
    errors.insert(errors.end(), r.eve.errors.begin(), r.eve.errors.end());
    for (const auto& [k, v] : r.counters.entries()) {
      try {
        counters[k] += parse_double(v);
      } catch (const std::invalid_argument&) {
        out.counters.set(k, v);
      }
    }
  }
  for (const auto& [k, v] : counters) out.counters.set(k, v);
  if (out.has_mos) out.mos = mos_metrics_from(confusion);
  if (out.has_eve) {
    const std::vector<double> zeros(errors.size(), 0.0);
    out.eve = compute_eve_metrics(errors, zeros, reports.front().eve.thresholds);
  }
  out.counters.set("repeats", reports.size());
  return out;
}

}  // namespace moseve::harness
