#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lfsr/lightfield/lightfield.hpp"
#include "lfsr/pipeline/superresolve.hpp"
#include "lfsr/synthdata/synth.hpp"

namespace lfsr {

// Per-view PSNR of one method, u-major.
struct EvalReport {
  std::string method;
  int u = 0;
  int v = 0;
  std::vector<double> per_view_psnr;

  double at(int iu, int iv) const { return per_view_psnr[static_cast<std::size_t>(iu * v + iv)]; }
  // Entries (i,i); requires u == v.
  std::vector<double> diagonal() const;
  double mean() const;
};

// PSNR of every view pair. Throws DimensionError on extent mismatch.
EvalReport evaluate_lf(const LightField& pred, const LightField& gt, std::string label);

// Entry-wise mean over reports of identical geometry.
EvalReport mean_report(std::span<const EvalReport> reports, std::string label);

// "method,u,v,psnr_db" with six decimals, one row per view. `notes` lines
// are written first as "# ..." comments.
std::string format_report_csv(std::span<const EvalReport> reports, std::span<const std::string> notes = {});
void write_report_csv(std::span<const EvalReport> reports, const std::filesystem::path& path,
                      std::span<const std::string> notes = {});
// Same columns restricted to the diagonal views.
std::string format_diagonal_csv(std::span<const EvalReport> reports, std::span<const std::string> notes = {});
void write_diagonal_csv(std::span<const EvalReport> reports, const std::filesystem::path& path,
                        std::span<const std::string> notes = {});
// Reads either CSV layout back; views absent from the file stay NaN.
std::vector<EvalReport> read_report_csv(const std::filesystem::path& path);

// Line chart of diagonal PSNR against view index, one polyline per method.
std::string render_diagonal_svg(std::span<const EvalReport> reports, const std::string& title);
void write_diagonal_svg(std::span<const EvalReport> reports, const std::filesystem::path& path,
                        const std::string& title);

// "# psnr: ..." and "# scenes: ..." header notes for report CSVs. `scenes`
// describes the evaluation set.
std::vector<std::string> report_notes(const std::string& scenes);

inline constexpr const char* kMethodBicubic = "bicubic";
inline constexpr const char* kMethodTtsr = "ttsr";
inline constexpr const char* kMethodRefined = "proposed";

// Mean over scenes of the bicubic, texture-transfer and refined outputs.
struct DatasetEvaluation {
  std::vector<EvalReport> reports;  // bicubic, ttsr, proposed
  std::vector<double> epi_loss;     // same order
};

template <typename T>
DatasetEvaluation evaluate_dataset(const std::vector<synth::ScenePair>& scenes, const PipelineWeights<T>& weights);

}  // namespace lfsr
