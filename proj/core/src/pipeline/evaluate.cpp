#include "lfsr/pipeline/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "lfsr/lfrefine/lfrefine.hpp"
#include "lfsr/lightfield/io.hpp"
#include "lfsr/lightfield/metrics.hpp"
#include "lfsr/numcore/errors.hpp"

namespace lfsr {
namespace {

std::string csv_row(const std::string& method, int u, int v, double psnr_db) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), ",%d,%d,%.6f\n", u, v, psnr_db);
  return method + buf;
}

std::string csv_header(std::span<const std::string> notes) {
  std::string out;
  for (const auto& n : notes) out += "# " + n + "\n";
  return out + "method,u,v,psnr_db\n";
}

void check_method_label(const std::string& method) {
  if (method.empty() || method.find_first_of(",\n\r") != std::string::npos) {
    throw ArgumentError("method label '" + method + "' is empty or contains a separator");
  }
}

}  // namespace

std::vector<double> EvalReport::diagonal() const {
  if (u != v) throw DimensionError("diagonal of a " + std::to_string(u) + "x" + std::to_string(v) + " report");
  std::vector<double> d(static_cast<std::size_t>(u));
  for (int i = 0; i < u; ++i) d[static_cast<std::size_t>(i)] = at(i, i);
  return d;
}

double EvalReport::mean() const {
  double s = 0.0;
  for (double p : per_view_psnr) s += p;
  return per_view_psnr.empty() ? 0.0 : s / static_cast<double>(per_view_psnr.size());
}

EvalReport evaluate_lf(const LightField& pred, const LightField& gt, std::string label) {
  const auto& e = gt.extent();
  if (pred.extent() != e) {
    throw DimensionError("evaluate_lf: prediction extent differs from ground truth");
  }
  EvalReport r{std::move(label), e.u, e.v, {}};
  const auto n = static_cast<std::size_t>(e.h) * e.w * e.c;
  for (int u = 0; u < e.u; ++u) {
    for (int v = 0; v < e.v; ++v) {
      const auto off = static_cast<std::size_t>(gt.index(u, v, 0, 0, 0));
      r.per_view_psnr.push_back(psnr(pred.values().subspan(off, n), gt.values().subspan(off, n)));
    }
  }
  return r;
}

EvalReport mean_report(std::span<const EvalReport> reports, std::string label) {
  if (reports.empty()) throw ArgumentError("mean_report of no reports");
  EvalReport out{std::move(label), reports.front().u, reports.front().v,
                 std::vector<double>(reports.front().per_view_psnr.size(), 0.0)};
  for (const auto& r : reports) {
    if (r.u != out.u || r.v != out.v) throw DimensionError("mean_report: reports differ in geometry");
    for (std::size_t i = 0; i < out.per_view_psnr.size(); ++i) out.per_view_psnr[i] += r.per_view_psnr[i];
  }
  for (auto& p : out.per_view_psnr) p /= static_cast<double>(reports.size());
  return out;
}

std::string format_report_csv(std::span<const EvalReport> reports, std::span<const std::string> notes) {
  std::string out = csv_header(notes);
  for (const auto& r : reports) {
    check_method_label(r.method);
    for (int u = 0; u < r.u; ++u) {
      for (int v = 0; v < r.v; ++v) out += csv_row(r.method, u, v, r.at(u, v));
    }
  }
  return out;
}

std::string format_diagonal_csv(std::span<const EvalReport> reports, std::span<const std::string> notes) {
  std::string out = csv_header(notes);
  for (const auto& r : reports) {
    check_method_label(r.method);
    const auto d = r.diagonal();
    for (int i = 0; i < r.u; ++i) out += csv_row(r.method, i, i, d[static_cast<std::size_t>(i)]);
  }
  return out;
}

void write_report_csv(std::span<const EvalReport> reports, const std::filesystem::path& path,
                      std::span<const std::string> notes) {
  write_bytes_atomic(path, format_report_csv(reports, notes));
}

void write_diagonal_csv(std::span<const EvalReport> reports, const std::filesystem::path& path,
                        std::span<const std::string> notes) {
  write_bytes_atomic(path, format_diagonal_csv(reports, notes));
}

std::vector<EvalReport> read_report_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open report " + path.string());
  struct Row {
    int u, v;
    double psnr;
  };
  std::vector<std::string> order;
  std::map<std::string, std::vector<Row>> rows;
  std::string line;
  bool header = false;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "method,u,v,psnr_db") throw FormatError(path.string() + ": unexpected header '" + line + "'");
      header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string method, fu, fv, fp;
    if (!std::getline(ls, method, ',') || !std::getline(ls, fu, ',') || !std::getline(ls, fv, ',') ||
        !std::getline(ls, fp)) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected four fields");
    }
    Row row{};
    try {
      row = {std::stoi(fu), std::stoi(fv), std::stod(fp)};
    } catch (const std::exception&) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": malformed number");
    }
    if (row.u < 0 || row.v < 0) throw FormatError(path.string() + ":" + std::to_string(line_no) + ": negative view");
    if (!rows.contains(method)) order.push_back(method);
    rows[method].push_back(row);
  }
  if (!header) throw FormatError(path.string() + ": missing header");

  std::vector<EvalReport> out;
  for (const auto& method : order) {
    const auto& rs = rows[method];
    EvalReport r{method, 0, 0, {}};
    for (const auto& row : rs) {
      r.u = std::max(r.u, row.u + 1);
      r.v = std::max(r.v, row.v + 1);
    }
    r.per_view_psnr.assign(static_cast<std::size_t>(r.u) * r.v, std::numeric_limits<double>::quiet_NaN());
    for (const auto& row : rs) r.per_view_psnr[static_cast<std::size_t>(row.u * r.v + row.v)] = row.psnr;
    out.push_back(std::move(r));
  }
  return out;
}

std::string render_diagonal_svg(std::span<const EvalReport> reports, const std::string& title) {
  constexpr double kWidth = 640, kHeight = 400, kLeft = 64, kRight = 150, kTop = 40, kBottom = 48;
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  int n = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::vector<std::vector<double>> diags;
  for (const auto& r : reports) {
    diags.push_back(r.diagonal());
    n = std::max(n, r.u);
    for (double p : diags.back()) {
      if (std::isfinite(p)) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
      }
    }
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  lo = std::floor(lo) - 1;
  hi = std::ceil(hi) + 1;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](int i) { return kLeft + (n > 1 ? pw * i / (n - 1) : pw / 2); };
  auto py = [&](double p) { return kTop + ph * (hi - p) / (hi - lo); };

  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    const double p = lo + (hi - lo) * t / ticks;
    os << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << py(p) << "\" y2=\"" << py(p)
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(p) + 4 << "\" text-anchor=\"end\">" << p << "</text>\n";
  }
  for (int i = 0; i < n; ++i) {
    os << "<text x=\"" << px(i) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">(" << i << "," << i
       << ")</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 8 << "\" text-anchor=\"middle\">view</text>\n";
  os << "<text transform=\"translate(16," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">PSNR (dB)</text>\n";
  for (std::size_t m = 0; m < diags.size(); ++m) {
    const char* color = kColors[m % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (int i = 0; i < static_cast<int>(diags[m].size()); ++i) {
      if (std::isfinite(diags[m][static_cast<std::size_t>(i)])) {
        os << px(i) << "," << py(diags[m][static_cast<std::size_t>(i)]) << " ";
      }
    }
    os << "\"/>\n";
    for (int i = 0; i < static_cast<int>(diags[m].size()); ++i) {
      if (std::isfinite(diags[m][static_cast<std::size_t>(i)])) {
        os << "<circle cx=\"" << px(i) << "\" cy=\"" << py(diags[m][static_cast<std::size_t>(i)])
           << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    const double ly = kTop + 16 + 20.0 * static_cast<double>(m);
    os << "<line x1=\"" << kLeft + pw + 12 << "\" x2=\"" << kLeft + pw + 36 << "\" y1=\"" << ly << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kLeft + pw + 42 << "\" y=\"" << ly + 4 << "\">" << reports[m].method << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_diagonal_svg(std::span<const EvalReport> reports, const std::filesystem::path& path,
                        const std::string& title) {
  write_bytes_atomic(path, render_diagonal_svg(reports, title));
}

template <typename T>
DatasetEvaluation evaluate_dataset(const std::vector<synth::ScenePair>& scenes, const PipelineWeights<T>& weights) {
  if (scenes.empty()) throw ArgumentError("evaluate_dataset needs at least one scene");
  std::vector<EvalReport> bicubic, ttsr, refined;
  double epi[3] = {0, 0, 0};
  for (const auto& scene : scenes) {
    const auto base = bicubic_lf(scene.lr);
    const auto sr = superresolve_lf(scene.lr, weights);
    bicubic.push_back(evaluate_lf(base, scene.hr, kMethodBicubic));
    ttsr.push_back(evaluate_lf(sr.ttsr_lf, scene.hr, kMethodTtsr));
    refined.push_back(evaluate_lf(sr.refined_lf, scene.hr, kMethodRefined));
    epi[0] += lfrefine::epi_loss(base, scene.hr);
    epi[1] += lfrefine::epi_loss(sr.ttsr_lf, scene.hr);
    epi[2] += lfrefine::epi_loss(sr.refined_lf, scene.hr);
  }
  const double n = static_cast<double>(scenes.size());
  return {{mean_report(bicubic, kMethodBicubic), mean_report(ttsr, kMethodTtsr), mean_report(refined, kMethodRefined)},
          {epi[0] / n, epi[1] / n, epi[2] / n}};
}

std::vector<std::string> report_notes(const std::string& scenes) {
  return {"psnr: mean over all pixels and RGB channels, values in [0,1], peak 1, capped at 100 dB",
          "scenes: " + scenes};
}

template DatasetEvaluation evaluate_dataset(const std::vector<synth::ScenePair>&, const PipelineWeights<float>&);
template DatasetEvaluation evaluate_dataset(const std::vector<synth::ScenePair>&, const PipelineWeights<double>&);

}  // namespace lfsr
