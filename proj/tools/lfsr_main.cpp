// lfsr: dataset synthesis, stage training, super-resolution and evaluation.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lfsr/lightfield/io.hpp"
#include "lfsr/numcore/errors.hpp"
#include "lfsr/pipeline/config.hpp"
#include "lfsr/pipeline/evaluate.hpp"
#include "lfsr/pipeline/superresolve.hpp"
#include "lfsr/pipeline/train.hpp"
#include "lfsr/pipeline/weights_io.hpp"
#include "lfsr/synthdata/synth.hpp"

namespace {

using namespace lfsr;
namespace fs = std::filesystem;

enum class Precision { kF32, kF64 };

// Runs fn.template operator()<T>() with T chosen by precision.
template <typename Fn>
void with_precision(Precision p, Fn&& fn) {
  if (p == Precision::kF64) {
    fn.template operator()<double>();
  } else {
    fn.template operator()<float>();
  }
}

void add_precision(CLI::App* app, Precision& p) {
  app->add_option("--precision", p, "Arithmetic precision")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Precision>{{"f32", Precision::kF32},
                                                                           {"f64", Precision::kF64}}));
}

std::vector<synth::ScenePair> slice(std::vector<synth::ScenePair> all, int skip, int count) {
  if (skip < 0 || skip > static_cast<int>(all.size())) throw ArgumentError("--skip out of range");
  all.erase(all.begin(), all.begin() + skip);
  if (count > 0 && count < static_cast<int>(all.size())) all.resize(static_cast<std::size_t>(count));
  return all;
}

struct SynthArgs {
  fs::path out;
  int scenes = 72;
  int size = 128;
  std::uint64_t seed = 0;
};

void run_synth(const SynthArgs& a) {
  const auto dataset = synth::make_dataset(a.scenes, synth::Geometry{7, 7, a.size, a.size}, a.seed);
  synth::save_dataset(dataset, a.out);
  std::printf("wrote %d scenes (7x7x%dx%d HR) to %s\n", a.scenes, a.size, a.size, a.out.string().c_str());
}

struct TrainArgs {
  std::string stage;
  fs::path config;
  fs::path dataset;
  fs::path weights_dir;
  fs::path out;
  std::optional<std::uint64_t> seed;
  Precision precision = Precision::kF32;
  bool quiet = false;
};

void run_train(const TrainArgs& a) {
  TrainConfig config;
  if (!a.config.empty()) config = load_train_config(a.config);
  config.stage = parse_stage(a.stage);
  if (a.seed) config.seed = *a.seed;
  if (!a.dataset.empty()) config.dataset = a.dataset;
  if (config.dataset.empty()) throw ArgumentError("train: no dataset (pass --dataset or set dataset= in the config)");
  config.validate();
  const fs::path log_dir = a.out.empty() ? a.weights_dir : a.out;
  const auto dataset = synth::load_dataset(config.dataset);
  with_precision(a.precision, [&]<typename T>() {
    const auto upstream_weights = load_pipeline_weights<T>(a.weights_dir);
    Upstream<T> upstream;
    if (config.stage != Stage::kAhqrg) upstream.ahqrg = &upstream_weights.require(Stage::kAhqrg);
    if (config.stage == Stage::kLfrefine) upstream.ttsr = &upstream_weights.require(Stage::kTtsr);
    const long every = std::max<long>(1, config.steps / 20);
    auto result = train_stage<T>(config, dataset, upstream, [&](long step, double loss) {
      if (!a.quiet && (step % every == 0 || step == config.steps)) {
        std::printf("%s step %ld/%ld loss %.6f\n", std::string(stage_name(config.stage)).c_str(), step, config.steps,
                    loss);
        std::fflush(stdout);
      }
    });
    fs::create_directories(a.weights_dir);
    fs::create_directories(log_dir);
    save_weights(result.weights, weights_path(a.weights_dir, config.stage));
    if (!config.checkpoint.empty()) save_weights(result.weights, config.checkpoint);
    const std::string name(stage_name(config.stage));
    write_bytes_atomic(log_dir / (name + "_loss.txt"), format_loss_log(result.loss_log));
    write_bytes_atomic(log_dir / (name + "_config.txt"), format_train_config(config));
  });
  std::printf("saved %s\n", weights_path(a.weights_dir, config.stage).string().c_str());
}

struct DataArgs {
  fs::path dataset;
  fs::path weights_dir;
  fs::path out;
  int skip = 0;
  int count = 0;
  Precision precision = Precision::kF32;
};

void save_tensor_png(const fs::path& path, const auto& t) {
  std::vector<float> v(t.data().begin(), t.data().end());
  save_view_png(path, v, static_cast<int>(t.dim(1)), static_cast<int>(t.dim(2)));
}

void run_superresolve(const DataArgs& a) {
  const auto scenes = slice(synth::load_dataset(a.dataset), a.skip, a.count);
  with_precision(a.precision, [&]<typename T>() {
    const auto weights = load_pipeline_weights<T>(a.weights_dir);
    for (std::size_t k = 0; k < scenes.size(); ++k) {
      const auto out = superresolve_lf(scenes[k].lr, weights);
      const fs::path dir = a.out / ("scene_" + std::to_string(a.skip + static_cast<int>(k)));
      fs::create_directories(dir);
      save_tensor_png(dir / "reference.png", out.reference);
      save_lightfield(out.ttsr_lf, dir / kMethodTtsr);
      save_lightfield(out.refined_lf, dir / kMethodRefined);
      std::printf("%s\n", dir.string().c_str());
      std::fflush(stdout);
    }
  });
}

void run_eval(const DataArgs& a) {
  const auto scenes = slice(synth::load_dataset(a.dataset), a.skip, a.count);
  with_precision(a.precision, [&]<typename T>() {
    const auto evaluation = evaluate_dataset<T>(scenes, load_pipeline_weights<T>(a.weights_dir));
    const auto notes =
        report_notes(std::to_string(scenes.size()) + " synthetic light fields from " + a.dataset.string() +
                     " starting at scene " + std::to_string(a.skip) +
                     "; they replace the real light fields of the original comparison, which are not identified");
    fs::create_directories(a.out);
    write_report_csv(evaluation.reports, a.out / "report.csv", notes);
    write_diagonal_csv(evaluation.reports, a.out / "diagonal.csv", notes);
    std::string epi = "method,epi_loss\n";
    for (std::size_t m = 0; m < evaluation.reports.size(); ++m) {
      char line[128];
      std::snprintf(line, sizeof(line), "%s,%.9f\n", evaluation.reports[m].method.c_str(), evaluation.epi_loss[m]);
      epi += line;
      std::printf("%-9s mean %.3f dB  epi_loss %.6f\n", evaluation.reports[m].method.c_str(),
                  evaluation.reports[m].mean(), evaluation.epi_loss[m]);
    }
    write_bytes_atomic(a.out / "epi_loss.csv", epi);
  });
}

struct PlotArgs {
  fs::path report;
  fs::path out;
  std::string title = "PSNR of diagonal views";
};

void run_plot(const PlotArgs& a) {
  const auto reports = read_report_csv(a.report);
  // Carry the source file's notes over to the diagonal file.
  std::vector<std::string> notes;
  {
    std::ifstream in(a.report);
    for (std::string line; std::getline(in, line) && line.starts_with("# ");) notes.push_back(line.substr(2));
  }
  fs::create_directories(a.out);
  write_diagonal_csv(reports, a.out / "diagonal.csv", notes);
  write_diagonal_svg(reports, a.out / "diagonal.svg", a.title);
  std::printf("wrote %s and %s\n", (a.out / "diagonal.csv").string().c_str(), (a.out / "diagonal.svg").string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Light field super-resolution: synthetic data, training and evaluation"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Render a synthetic dataset of HR/LR light field pairs");
  synth->add_option("--out", synth_args.out, "Dataset root")->required();
  synth->add_option("--seed", synth_args.seed, "Dataset seed");
  synth->add_option("--scenes", synth_args.scenes, "Number of scenes")->check(CLI::PositiveNumber);
  synth->add_option("--size", synth_args.size, "HR view side (multiple of 4)")->check(CLI::PositiveNumber);

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train one stage with frozen upstream stages");
  train->add_option("--stage", train_args.stage, "ahqrg, ttsr or lfrefine")->required();
  train->add_option("--config", train_args.config, "key=value training config")->check(CLI::ExistingFile);
  train->add_option("--dataset", train_args.dataset, "Dataset root (overrides dataset= in the config)");
  train->add_option("--weights-dir", train_args.weights_dir, "Upstream weights in, trained weights out")->required();
  train->add_option("--out", train_args.out, "Directory for the loss log (default: weights dir)");
  train->add_option("--seed", train_args.seed, "Training seed (overrides the config)");
  train->add_flag("--quiet", train_args.quiet, "No progress lines");
  add_precision(train, train_args.precision);

  DataArgs sr_args;
  auto* sr = app.add_subcommand("superresolve", "Super-resolve the LR light fields of a dataset");
  DataArgs eval_args;
  auto* ev = app.add_subcommand("eval", "Per-view PSNR and EPI loss of bicubic, ttsr and proposed");
  for (auto [cmd, args] : {std::pair{sr, &sr_args}, std::pair{ev, &eval_args}}) {
    cmd->add_option("--dataset", args->dataset, "Dataset root")->required()->check(CLI::ExistingDirectory);
    cmd->add_option("--weights-dir", args->weights_dir, "Directory with the three stage weight files")
        ->required()
        ->check(CLI::ExistingDirectory);
    cmd->add_option("--out", args->out, "Output directory")->required();
    cmd->add_option("--skip", args->skip, "Ignore this many leading scenes");
    cmd->add_option("--count", args->count, "Use at most this many scenes (0 = all)");
    add_precision(cmd, args->precision);
  }

  PlotArgs plot_args;
  auto* plot = app.add_subcommand("plot-diagonal", "Diagonal-view CSV and SVG chart from a report CSV");
  plot->add_option("--report", plot_args.report, "report.csv written by eval")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_args.out, "Output directory")->required();
  plot->add_option("--title", plot_args.title, "Chart title");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*synth) run_synth(synth_args);
    if (*train) run_train(train_args);
    if (*sr) run_superresolve(sr_args);
    if (*ev) run_eval(eval_args);
    if (*plot) run_plot(plot_args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lfsr: %s\n", e.what());
    return 1;
  }
  return 0;
}
