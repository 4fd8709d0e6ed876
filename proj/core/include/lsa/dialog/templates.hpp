#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "lsa/dialog/types.hpp"

namespace lsa::dialog {

using TemplateVars = std::map<std::string, std::string, std::less<>>;

/// One parsed template file: "# key: value" header lines, then sections
/// introduced by "@@ <name>". Section bodies may reference {{placeholders}}.
class PromptTemplates {
 public:
  static PromptTemplates parse(std::string_view text, std::string_view origin = "<memory>");
  static PromptTemplates load(const std::filesystem::path& path);

  const std::string& version() const noexcept { return version_; }
  const std::string& language() const noexcept { return language_; }

  bool has(std::string_view section) const;
  /// Raw section body; configuration error when absent.
  const std::string& section(std::string_view name) const;
  /// Section body with every {{name}} replaced. Unknown placeholders are a
  /// configuration error, unused variables are fine.
  std::string render(std::string_view name, const TemplateVars& vars = {}) const;

 private:
  std::string origin_;
  std::string version_;
  std::string language_;
  std::map<std::string, std::string, std::less<>> sections_;
};

/// Substitutes {{name}} placeholders in an arbitrary string.
std::string substitute(std::string_view text, const TemplateVars& vars, std::string_view origin);

/// Templates per language. The built-in catalog is compiled from
/// core/templates/*.txt.
class TemplateCatalog {
 public:
  static const TemplateCatalog& builtin();
  /// Loads en.txt and/or el.txt from a directory; at least one must exist.
  static TemplateCatalog from_directory(const std::filesystem::path& dir);

  void add(Language language, PromptTemplates templates);
  bool supports(Language language) const;
  /// Configuration error when no template is registered for the language.
  const PromptTemplates& get(Language language) const;

 private:
  std::map<Language, PromptTemplates> by_language_;
};

}  // namespace lsa::dialog
