#include "lfsr/pipeline/weights_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "lfsr/lightfield/io.hpp"
#include "lfsr/numcore/errors.hpp"

namespace lfsr {
namespace {

static_assert(std::endian::native == std::endian::little, "weight files assume a little-endian host");

template <typename U>
void put(std::string& out, U value) {
  char buf[sizeof(U)];
  std::memcpy(buf, &value, sizeof(U));
  out.append(buf, sizeof(U));
}

void put_name(std::string& out, const std::string& name) {
  if (name.size() > 0xFFFF) throw ArgumentError("weight name longer than 65535 bytes");
  put<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
  out += name;
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename U>
  U get(const char* what) {
    need(sizeof(U), what);
    U value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(U));
    pos_ += sizeof(U);
    return value;
  }

  std::string name(const char* what) {
    const auto len = get<std::uint16_t>(what);
    need(len, what);
    std::string s(bytes_.substr(pos_, len));
    pos_ += len;
    return s;
  }

  const char* raw(std::size_t n, const char* what) {
    need(n, what);
    const char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) throw FormatError(std::string("weight file truncated while reading ") + what);
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

template <typename T>
std::string encode_weights(const StageWeights<T>& weights) {
  std::string out(kWeightsMagic, 4);
  put<std::uint32_t>(out, kWeightsVersion);
  put_name(out, weights.stage());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(weights.size()));
  for (const auto& e : weights.entries()) {
    put_name(out, e.name);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(e.tensor.rank()));
    for (auto d : e.tensor.shape()) put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
    for (T v : e.tensor.data()) put<float>(out, static_cast<float>(v));
  }
  return out;
}

template <typename T>
StageWeights<T> decode_weights(std::string_view bytes) {
  Reader in(bytes);
  const char* magic = in.raw(4, "magic");
  if (std::memcmp(magic, kWeightsMagic, 4) != 0) {
    throw FormatError("not a weight file: bad magic '" + std::string(magic, 4) + "'");
  }
  const auto version = in.get<std::uint32_t>("version");
  if (version != kWeightsVersion) {
    throw FormatError("unsupported weight file version " + std::to_string(version) + " (expected " +
                      std::to_string(kWeightsVersion) + ")");
  }
  StageWeights<T> weights(in.name("stage name"));
  const auto count = in.get<std::uint32_t>("entry count");
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = in.name("entry name");
    const auto rank = in.get<std::uint8_t>("rank");
    if (rank == 0) throw FormatError("entry '" + name + "' has rank 0");
    Shape shape;
    for (std::uint8_t r = 0; r < rank; ++r) {
      const auto d = in.get<std::uint32_t>("extent");
      if (d == 0) throw FormatError("entry '" + name + "' has a zero extent");
      shape.push_back(d);
    }
    const auto n = static_cast<std::size_t>(shape_numel(shape));
    const char* raw = in.raw(n * sizeof(float), "values");
    std::vector<T> values(n);
    for (std::size_t j = 0; j < n; ++j) {
      float f;
      std::memcpy(&f, raw + j * sizeof(float), sizeof(float));
      values[j] = static_cast<T>(f);
    }
    try {
      weights.add(std::move(name), Tensor<T>(std::move(shape), std::move(values)));
    } catch (const ArgumentError& e) {
      throw FormatError(e.what());
    }
  }
  if (!in.done()) throw FormatError("trailing bytes after last weight entry");
  return weights;
}

template <typename T>
void save_weights(const StageWeights<T>& weights, const std::filesystem::path& path) {
  write_bytes_atomic(path, encode_weights(weights));
}

template <typename T>
StageWeights<T> load_weights(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open weight file " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return decode_weights<T>(ss.str());
}

template std::string encode_weights(const StageWeights<float>&);
template std::string encode_weights(const StageWeights<double>&);
template StageWeights<float> decode_weights<float>(std::string_view);
template StageWeights<double> decode_weights<double>(std::string_view);
template void save_weights(const StageWeights<float>&, const std::filesystem::path&);
template void save_weights(const StageWeights<double>&, const std::filesystem::path&);
template StageWeights<float> load_weights<float>(const std::filesystem::path&);
template StageWeights<double> load_weights<double>(const std::filesystem::path&);

}  // namespace lfsr
