#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mosmc/mdp.hpp"

namespace mosmc {

inline constexpr int kModelFormatVersion = 1;

/// A model together with the named queries shipped alongside it.
struct ModelFile {
  Mdp model;
  std::vector<MultiQuery> queries;

  /// Query by name; the first one when `name` is empty.
  const MultiQuery& query(std::string_view name = {}) const;

  bool operator==(const ModelFile&) const = default;
};

/// Parses the JSON model format (schema in README.md) and validates the
/// result. Errors are ModelError with a JSON path such as
/// `actions[2][0].branches[1][1]` in the message.
ModelFile parse_model(std::string_view json_text);
std::string serialize_model(const ModelFile& file);

ModelFile load_model(const std::filesystem::path& path);
void save_model(const ModelFile& file, const std::filesystem::path& path);

}  // namespace mosmc
