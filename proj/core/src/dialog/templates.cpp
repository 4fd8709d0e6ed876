#include "lsa/dialog/templates.hpp"

#include <fstream>
#include <sstream>

#include "lsa/error.hpp"
#include "resources.hpp"

namespace lsa::dialog {

namespace {

std::string_view trim_newlines(std::string_view text) {
  while (!text.empty() && (text.front() == '\n' || text.front() == '\r')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) {
    text.remove_suffix(1);
  }
  return text;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return text;
}

}  // namespace

std::string substitute(std::string_view text, const TemplateVars& vars, std::string_view origin) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    const auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::Configuration,
                  std::string(origin) + ": unterminated placeholder");
    }
    out.append(text.substr(pos, open - pos));
    const auto name = trim(text.substr(open + 2, close - open - 2));
    const auto it = vars.find(name);
    if (it == vars.end()) {
      throw Error(ErrorCode::Configuration,
                  std::string(origin) + ": no value for placeholder {{" + std::string(name) + "}}");
    }
    out.append(it->second);
    pos = close + 2;
  }
  return out;
}

PromptTemplates PromptTemplates::parse(std::string_view text, std::string_view origin) {
  PromptTemplates result;
  result.origin_ = std::string(origin);

  std::string current;
  std::size_t body_start = 0;
  bool in_section = false;
  auto flush = [&](std::size_t end) {
    if (!in_section) return;
    auto body = trim_newlines(text.substr(body_start, end - body_start));
    if (!result.sections_.emplace(current, std::string(body)).second) {
      throw Error(ErrorCode::Configuration,
                  std::string(origin) + ": duplicate section '" + current + "'");
    }
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = text.substr(pos, eol - pos);
    if (line.rfind("@@ ", 0) == 0) {
      flush(pos);
      current = std::string(trim(line.substr(3)));
      if (current.empty()) {
        throw Error(ErrorCode::Configuration, std::string(origin) + ": empty section name");
      }
      in_section = true;
      body_start = eol + 1 > text.size() ? text.size() : eol + 1;
    } else if (!in_section && line.rfind("#", 0) == 0) {
      const auto meta = trim(line.substr(1));
      const auto colon = meta.find(':');
      if (colon != std::string_view::npos) {
        const auto key = trim(meta.substr(0, colon));
        const auto value = trim(meta.substr(colon + 1));
        if (key == "version") result.version_ = std::string(value);
        if (key == "language") result.language_ = std::string(value);
      }
    }
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  flush(text.size());

  if (result.version_.empty()) {
    throw Error(ErrorCode::Configuration, std::string(origin) + ": missing '# version:' header");
  }
  return result;
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Configuration, "cannot open template file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

bool PromptTemplates::has(std::string_view section) const {
  return sections_.find(section) != sections_.end();
}

const std::string& PromptTemplates::section(std::string_view name) const {
  const auto it = sections_.find(name);
  if (it == sections_.end()) {
    throw Error(ErrorCode::Configuration,
                origin_ + ": missing template section '" + std::string(name) + "'");
  }
  return it->second;
}

std::string PromptTemplates::render(std::string_view name, const TemplateVars& vars) const {
  return substitute(section(name), vars, origin_ + "#" + std::string(name));
}

const TemplateCatalog& TemplateCatalog::builtin() {
  static const TemplateCatalog catalog = [] {
    TemplateCatalog c;
    c.add(Language::English,
          PromptTemplates::parse(resources::find_embedded_resource("templates/en.txt"),
                                 "templates/en.txt"));
    c.add(Language::Greek,
          PromptTemplates::parse(resources::find_embedded_resource("templates/el.txt"),
                                 "templates/el.txt"));
    return c;
  }();
  return catalog;
}

TemplateCatalog TemplateCatalog::from_directory(const std::filesystem::path& dir) {
  TemplateCatalog c;
  for (const auto language : {Language::English, Language::Greek}) {
    const auto path = dir / (std::string(language_code(language)) + ".txt");
    if (std::filesystem::exists(path)) c.add(language, PromptTemplates::load(path));
  }
  if (c.by_language_.empty()) {
    throw Error(ErrorCode::Configuration, "no en.txt or el.txt templates in " + dir.string());
  }
  return c;
}

void TemplateCatalog::add(Language language, PromptTemplates templates) {
  by_language_.insert_or_assign(language, std::move(templates));
}

bool TemplateCatalog::supports(Language language) const {
  return by_language_.count(language) != 0;
}

const PromptTemplates& TemplateCatalog::get(Language language) const {
  const auto it = by_language_.find(language);
  if (it == by_language_.end()) {
    throw Error(ErrorCode::Configuration,
                "no prompt templates for language '" + std::string(language_code(language)) + "'");
  }
  return it->second;
}

}  // namespace lsa::dialog
