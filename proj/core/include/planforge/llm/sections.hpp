#pragma once

#include <map>
#include <string>
#include <vector>

namespace planforge::llm {

/// Pull named "### Heading" blocks out of a completion. A block is either
/// the first fenced code block after the heading or, if none opens before
/// the next heading, the plain text up to the next heading. When a heading
/// repeats, the last occurrence wins (models often correct themselves).
/// Heading match is case-insensitive. A block whose content is exactly
/// "No new predicates" (any case, optional trailing period) is returned
/// empty. MissingSection names the first absent heading.
std::map<std::string, std::string> extract_sections(const std::string& completion,
                                                    const std::vector<std::string>& headings);

/// Split a block into trimmed, non-empty lines with bullet markers and
/// "N." numbering stripped.
std::vector<std::string> block_lines(const std::string& block);

}  // namespace planforge::llm
