#include "lfsr/pipeline/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "lfsr/numcore/errors.hpp"

namespace lfsr {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename N>
N parse_number(std::string_view value) {
  N out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ArgumentError("not a number: '" + std::string(value) + "'");
  return out;
}

using Setter = std::function<void(TrainConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"stage", [](TrainConfig& c, std::string_view v) { c.stage = parse_stage(v); }},
      {"lr", [](TrainConfig& c, std::string_view v) { c.lr = parse_number<double>(v); }},
      {"batch_size", [](TrainConfig& c, std::string_view v) { c.batch_size = parse_number<int>(v); }},
      {"steps", [](TrainConfig& c, std::string_view v) { c.steps = parse_number<long>(v); }},
      {"seed", [](TrainConfig& c, std::string_view v) { c.seed = parse_number<std::uint64_t>(v); }},
      {"lambda_epi", [](TrainConfig& c, std::string_view v) { c.lambda_epi = parse_number<double>(v); }},
      {"dataset", [](TrainConfig& c, std::string_view v) { c.dataset = std::string(v); }},
      {"checkpoint", [](TrainConfig& c, std::string_view v) { c.checkpoint = std::string(v); }},
      {"crop", [](TrainConfig& c, std::string_view v) { c.crop = parse_number<int>(v); }},
      {"scenes", [](TrainConfig& c, std::string_view v) { c.scenes = parse_number<int>(v); }},
  };
  return table;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::kAhqrg:
      return "ahqrg";
    case Stage::kTtsr:
      return "ttsr";
    case Stage::kLfrefine:
      return "lfrefine";
  }
  return "unknown";
}

Stage parse_stage(std::string_view name) {
  if (name == "ahqrg") return Stage::kAhqrg;
  if (name == "ttsr") return Stage::kTtsr;
  if (name == "lfrefine") return Stage::kLfrefine;
  throw ArgumentError("unknown stage '" + std::string(name) + "' (expected ahqrg, ttsr or lfrefine)");
}

void TrainConfig::validate() const {
  if (steps < 1) throw ArgumentError("steps must be >= 1, got " + std::to_string(steps));
  if (!(lr > 0)) throw ArgumentError("lr must be > 0, got " + format_double(lr));
  if (batch_size < 1) throw ArgumentError("batch_size must be >= 1, got " + std::to_string(batch_size));
  if (!(lambda_epi >= 0)) throw ArgumentError("lambda_epi must be >= 0, got " + format_double(lambda_epi));
  if (crop < 0) throw ArgumentError("crop must be >= 0, got " + std::to_string(crop));
  if (scenes < 0) throw ArgumentError("scenes must be >= 0, got " + std::to_string(scenes));
}

TrainConfig parse_train_config(std::string_view text, TrainConfig base) {
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const std::string where = "config line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw FormatError(where + "expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw FormatError(where + "unknown key '" + std::string(key) + "'");
    if (!seen.emplace(key).second) throw FormatError(where + "repeated key '" + std::string(key) + "'");
    try {
      it->second(base, value);
    } catch (const ArgumentError& e) {
      throw FormatError(where + std::string(key) + ": " + e.what());
    }
  }
  base.validate();
  return base;
}

TrainConfig load_train_config(const std::filesystem::path& path, TrainConfig base) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_train_config(ss.str(), std::move(base));
}

std::string format_train_config(const TrainConfig& c) {
  std::ostringstream os;
  os << "stage=" << stage_name(c.stage) << '\n'
     << "lr=" << format_double(c.lr) << '\n'
     << "batch_size=" << c.batch_size << '\n'
     << "steps=" << c.steps << '\n'
     << "seed=" << c.seed << '\n'
     << "lambda_epi=" << format_double(c.lambda_epi) << '\n'
     << "crop=" << c.crop << '\n'
     << "scenes=" << c.scenes << '\n';
  if (!c.dataset.empty()) os << "dataset=" << c.dataset.string() << '\n';
  if (!c.checkpoint.empty()) os << "checkpoint=" << c.checkpoint.string() << '\n';
  return os.str();
}

}  // namespace lfsr
