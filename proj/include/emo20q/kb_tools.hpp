#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "emo20q/core/knowledge_base.hpp"

namespace emo20q {

struct KbValidation {
  std::vector<std::string> problems;
  std::optional<KnowledgeBase> kb;
  bool ok() const { return problems.empty(); }
};

// Loads the file and checks every KB invariant; never throws.
KbValidation validate_kb_file(const std::filesystem::path& path);

std::string kb_stats_text(const KnowledgeBase& kb);
std::string kb_stats_json(const KnowledgeBase& kb);

}  // namespace emo20q
