#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "decompound/trainer.hpp"

namespace decompound::neural {

// Model container layout (all integers little-endian):
//   "KVST" | u32 version | u32 n | n bytes of `key=value\n` metadata |
//   tensor_count x (u32 name_len | name | u32 rank | u64 dims[rank] |
//                   row-major f64 values)
inline constexpr std::uint32_t kModelFormatVersion = 1;

class ModelFormatError : public std::runtime_error {
 public:
  enum class Kind { version, truncated, shape, metadata };
  ModelFormatError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

void save_model(std::ostream& out, const TrainedModel& model);
void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(std::istream& in);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace decompound::neural
