#include "planforge/llm/sections.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "planforge/error.hpp"

namespace planforge::llm {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// "### Objects" / "## objects:" -> "objects"; empty if not a heading.
std::string heading_of(const std::string& line) {
  std::string t = trim(line);
  std::size_t hashes = 0;
  while (hashes < t.size() && t[hashes] == '#') ++hashes;
  if (hashes == 0 || hashes > 6) return "";
  std::string rest = trim(t.substr(hashes));
  if (!rest.empty() && rest.back() == ':') rest = trim(rest.substr(0, rest.size() - 1));
  return lower(rest);
}

bool is_fence(const std::string& line) { return trim(line).rfind("```", 0) == 0; }

bool is_sentinel(const std::string& block) {
  std::string t = lower(trim(block));
  if (!t.empty() && t.back() == '.') t = trim(t.substr(0, t.size() - 1));
  return t == "no new predicates";
}

}  // namespace

std::map<std::string, std::string> extract_sections(const std::string& completion,
                                                    const std::vector<std::string>& headings) {
  std::vector<std::string> lines;
  {
    std::istringstream in(completion);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
  }

  std::map<std::string, std::string> found;  // lowered heading -> block
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string head = heading_of(lines[i]);
    if (head.empty()) continue;

    std::string plain;
    std::string fenced;
    std::string current;
    bool in_fence = false;
    bool have_fenced = false;
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (!in_fence && !heading_of(lines[j]).empty()) break;
      if (is_fence(lines[j])) {
        if (in_fence) {
          fenced = current;  // last complete fence in the section wins
          have_fenced = true;
          in_fence = false;
        } else {
          in_fence = true;
          current.clear();
        }
        continue;
      }
      (in_fence ? current : plain) += lines[j] + "\n";
    }
    if (in_fence && !current.empty()) {  // unterminated fence at EOF
      fenced = current;
      have_fenced = true;
    }
    found[head] = trim(have_fenced ? fenced : plain);  // later headings overwrite
  }

  std::map<std::string, std::string> out;
  for (const auto& want : headings) {
    auto it = found.find(lower(trim(want)));
    if (it == found.end())
      throw Error(Errc::MissingSection, "no \"### " + want + "\" section in completion");
    out[want] = is_sentinel(it->second) ? "" : it->second;
  }
  return out;
}

std::vector<std::string> block_lines(const std::string& block) {
  std::vector<std::string> out;
  std::istringstream in(block);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.rfind("- ", 0) == 0) t = trim(t.substr(2));
    else if (t.rfind("* ", 0) == 0) t = trim(t.substr(2));
    else {
      std::size_t i = 0;
      while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
      if (i > 0 && i < t.size() && t[i] == '.') t = trim(t.substr(i + 1));
    }
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

}  // namespace planforge::llm
