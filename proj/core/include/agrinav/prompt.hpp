#pragma once

#include <map>
#include <string>
#include <vector>

namespace agrinav {

// Text template with {{name}} placeholders.
struct PromptTemplate {
  std::string name;
  std::string body;
};

// Built-in defaults; the files under templates/ ship the same text for
// users who want a starting point to customize.
PromptTemplate default_decompose_template();
PromptTemplate default_decision_template();

PromptTemplate load_template(const std::string& path);

// Throws Error(kMissingPlaceholder) when a required placeholder is absent.
void require_placeholders(const PromptTemplate& tpl, const std::vector<std::string>& required);

bool has_placeholder(const PromptTemplate& tpl, const std::string& name);

std::string render_template(const PromptTemplate& tpl,
                            const std::map<std::string, std::string>& values);

}  // namespace agrinav
