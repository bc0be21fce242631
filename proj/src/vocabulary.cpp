#include "toponav/vocabulary.hpp"

#include <algorithm>
#include <cctype>

namespace toponav {

ClassVocabulary::ClassVocabulary(const std::vector<std::string>& names) {
  for (const auto& n : names) add(n);
}

bool ClassVocabulary::valid_token(const std::string& name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](char ch) {
    return std::isspace(static_cast<unsigned char>(ch)) || ch == ',' || ch == '[' || ch == ']' || ch == '=';
  });
}

ClassId ClassVocabulary::add(const std::string& name) {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  if (!valid_token(name)) throw ConfigError("invalid class name '" + name + "'");
  const auto id = static_cast<ClassId>(names_.size());
  names_.push_back(name);
  ids_.emplace(name, id);
  return id;
}

std::optional<ClassId> ClassVocabulary::find(const std::string& name) const {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  return std::nullopt;
}

ClassId ClassVocabulary::id(const std::string& name) const {
  if (auto found = find(name)) return *found;
  throw UnknownIdError("unknown class '" + name + "'");
}

const std::string& ClassVocabulary::name(ClassId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= names_.size()) {
    throw UnknownIdError("unknown class id " + std::to_string(id));
  }
  return names_[static_cast<std::size_t>(id)];
}

}  // namespace toponav
