#include "decompound/model_io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace decompound::neural {

namespace {

constexpr char kMagic[4] = {'K', 'V', 'S', 'T'};

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

void read_exact(std::istream& in, void* dst, std::size_t n, const char* what) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw ModelFormatError(ModelFormatError::Kind::truncated,
                           std::string("model file truncated while reading ") + what);
  }
}

template <typename T>
T get_le(std::istream& in, const char* what) {
  unsigned char buf[sizeof(T)];
  read_exact(in, buf, sizeof(T), what);
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(buf[i]) << (8 * i);
  return value;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string metadata_text(const TrainedModel& model, std::size_t tensor_count) {
  const ModelConfig& c = model.config;
  std::ostringstream out;
  out << "embed_dim=" << c.embed_dim << '\n'
      << "hidden_dim=" << c.hidden_dim << '\n'
      << "num_layers=" << c.num_layers << '\n'
      << "max_len=" << c.max_len << '\n'
      << "learning_rate=" << format_double(c.learning_rate) << '\n'
      << "max_epochs=" << c.max_epochs << '\n'
      << "patience=" << c.patience << '\n'
      << "batch_size=" << c.batch_size << '\n'
      << "seed=" << c.seed << '\n'
      << "vocab_size=" << model.vocab.size() << '\n'
      << "vocab=";
  // Code points in hex so that whitespace and control characters survive.
  for (std::size_t i = 0; i < model.vocab.chars().size(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%s%X", i ? " " : "", static_cast<unsigned>(model.vocab.chars()[i]));
    out << buf;
  }
  out << '\n' << "tensor_count=" << tensor_count << '\n';
  return out.str();
}

std::map<std::string, std::string> parse_metadata(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ModelFormatError(ModelFormatError::Kind::metadata, "malformed metadata line '" + line + "'");
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    throw ModelFormatError(ModelFormatError::Kind::metadata, "metadata key '" + key + "' missing");
  }
  return it->second;
}

template <typename T>
T parse_number(const std::map<std::string, std::string>& kv, const std::string& key, int base = 10) {
  const std::string& s = require(kv, key);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, base);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ModelFormatError(ModelFormatError::Kind::metadata, "metadata key '" + key + "' is not a number");
  }
  return value;
}

double parse_real(const std::map<std::string, std::string>& kv, const std::string& key) {
  const std::string& s = require(kv, key);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) {
    throw ModelFormatError(ModelFormatError::Kind::metadata, "metadata key '" + key + "' is not a number");
  }
  return v;
}

}  // namespace

void save_model(std::ostream& out, const TrainedModel& model) {
  const auto names = model.params.tensor_names();
  const std::string meta = metadata_text(model, names.size());
  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, kModelFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(meta.size()));
  out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  model.params.for_each([&](const std::string& name, const Eigen::MatrixXd& m) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_le<std::uint32_t>(out, 2);
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) put_le(out, std::bit_cast<std::uint64_t>(m(i, j)));
    }
  });
  if (!out) throw std::runtime_error("failed writing model");
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  save_model(out, model);
}

TrainedModel load_model(std::istream& in) {
  char magic[4];
  read_exact(in, magic, 4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw ModelFormatError(ModelFormatError::Kind::version, "not a model file (bad magic bytes)");
  }
  const auto version = get_le<std::uint32_t>(in, "version");
  if (version != kModelFormatVersion) {
    throw ModelFormatError(ModelFormatError::Kind::version,
                           "unsupported model format version " + std::to_string(version));
  }
  const auto meta_len = get_le<std::uint32_t>(in, "metadata length");
  std::string meta(meta_len, '\0');
  read_exact(in, meta.data(), meta_len, "metadata");
  const auto kv = parse_metadata(meta);

  TrainedModel model;
  ModelConfig& c = model.config;
  c.embed_dim = parse_number<std::size_t>(kv, "embed_dim");
  c.hidden_dim = parse_number<std::size_t>(kv, "hidden_dim");
  c.num_layers = parse_number<std::size_t>(kv, "num_layers");
  c.max_len = parse_number<std::size_t>(kv, "max_len");
  c.learning_rate = parse_real(kv, "learning_rate");
  c.max_epochs = parse_number<std::size_t>(kv, "max_epochs");
  c.patience = parse_number<std::size_t>(kv, "patience");
  c.batch_size = parse_number<std::size_t>(kv, "batch_size");
  c.seed = parse_number<std::uint64_t>(kv, "seed");
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(ModelFormatError::Kind::metadata, e.what());
  }

  std::vector<char32_t> chars;
  {
    std::istringstream vs(require(kv, "vocab"));
    std::string hex;
    while (vs >> hex) {
      std::uint32_t cp = 0;
      const auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), cp, 16);
      if (ec != std::errc() || ptr != hex.data() + hex.size()) {
        throw ModelFormatError(ModelFormatError::Kind::metadata, "bad vocabulary entry '" + hex + "'");
      }
      chars.push_back(static_cast<char32_t>(cp));
    }
  }
  try {
    model.vocab = CharVocab(std::move(chars));
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(ModelFormatError::Kind::metadata, e.what());
  }
  if (parse_number<std::size_t>(kv, "vocab_size") != model.vocab.size()) {
    throw ModelFormatError(ModelFormatError::Kind::shape, "vocab_size disagrees with vocabulary");
  }

  const auto tensor_count = parse_number<std::size_t>(kv, "tensor_count");
  std::map<std::string, Eigen::MatrixXd> tensors;
  for (std::size_t k = 0; k < tensor_count; ++k) {
    const auto name_len = get_le<std::uint32_t>(in, "tensor name length");
    if (name_len > 4096) {
      throw ModelFormatError(ModelFormatError::Kind::shape, "implausible tensor name length");
    }
    std::string name(name_len, '\0');
    read_exact(in, name.data(), name_len, "tensor name");
    const auto rank = get_le<std::uint32_t>(in, "tensor rank");
    if (rank != 2) {
      throw ModelFormatError(ModelFormatError::Kind::shape,
                             "tensor '" + name + "' has rank " + std::to_string(rank) + ", expected 2");
    }
    const auto rows = get_le<std::uint64_t>(in, "tensor dims");
    const auto cols = get_le<std::uint64_t>(in, "tensor dims");
    if (rows > (1u << 24) || cols > (1u << 24)) {
      throw ModelFormatError(ModelFormatError::Kind::shape, "implausible dims for '" + name + "'");
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        m(i, j) = std::bit_cast<double>(get_le<std::uint64_t>(in, "tensor values"));
      }
    }
    tensors[name] = std::move(m);
  }

  model.params = ModelParameters::zeros(c, model.vocab.size());
  std::size_t used = 0;
  model.params.for_each([&](const std::string& name, Eigen::MatrixXd& dst) {
    const auto it = tensors.find(name);
    if (it == tensors.end()) {
      throw ModelFormatError(ModelFormatError::Kind::shape, "tensor '" + name + "' missing");
    }
    if (it->second.rows() != dst.rows() || it->second.cols() != dst.cols()) {
      throw ModelFormatError(ModelFormatError::Kind::shape,
                             "tensor '" + name + "' is " + std::to_string(it->second.rows()) + "x" +
                                 std::to_string(it->second.cols()) + ", expected " +
                                 std::to_string(dst.rows()) + "x" + std::to_string(dst.cols()));
    }
    dst = it->second;
    ++used;
  });
  if (used != tensors.size()) {
    throw ModelFormatError(ModelFormatError::Kind::shape, "model file has unexpected extra tensors");
  }
  return model;
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file " + path.string());
  return load_model(in);
}

}  // namespace decompound::neural
