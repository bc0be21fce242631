#pragma once

#include "toponav/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace toponav {

/// Bidirectional class-name <-> id table. Ids are dense from 0 in insertion
/// order. Names are single tokens (no whitespace, commas or brackets) so
/// they survive the text serialization of the topological map.
class ClassVocabulary {
 public:
  ClassVocabulary() = default;
  explicit ClassVocabulary(const std::vector<std::string>& names);

  ClassId add(const std::string& name);
  std::optional<ClassId> find(const std::string& name) const;
  ClassId id(const std::string& name) const;  ///< throws UnknownIdError
  const std::string& name(ClassId id) const;  ///< throws UnknownIdError
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  static bool valid_token(const std::string& name);

 private:
  std::vector<std::string> names_;
  std::map<std::string, ClassId> ids_;
};

}  // namespace toponav
