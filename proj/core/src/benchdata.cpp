// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include "ong/benchdata.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include "ong/errors.hpp"

namespace ong::bench {
namespace {

using json = nlohmann::json;

constexpr std::array<std::string_view, 6> kCategoryNames = {
    "place_scene",      "event_action",     "cooccurring_object",
    "dominant_subtype", "object_component", "occupation_role"};

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

const std::string& string_field(const json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError("missing required field", path + "." + key);
  if (!it->is_string()) throw ValidationError("expected a string", path + "." + key);
  return it->get_ref<const std::string&>();
}

}  // namespace

std::string_view to_string(Category c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::string_view to_string(Source s) {
  switch (s) {
    case Source::llm_generated:
      return "llm_generated";
    case Source::coco_derived:
      return "coco_derived";
    case Source::unknown:
      return "unknown";
  }
  return "unknown";
}

Category parse_category(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return kCategories[i];
  }
  throw ValidationError("unknown category '" + std::string(name) + "'", "category");
}

Source parse_source(std::string_view name) {
  if (name == "llm_generated") return Source::llm_generated;
  if (name == "coco_derived") return Source::coco_derived;
  if (name == "unknown") return Source::unknown;
  throw ValidationError("unknown source '" + std::string(name) + "'", "source");
}

std::vector<Scenario> parse_scenarios(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("parse error at line " + std::to_string(line_of(json_text, e.byte)) +
                          ": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError("dataset must be a JSON object");
  const auto version = doc.find("version");
  if (version == doc.end()) throw ValidationError("missing required field", "version");
  if (!version->is_number_integer() || version->get<int>() != kDatasetVersion) {
    throw ValidationError("unsupported dataset version", "version");
  }
  const auto list = doc.find("scenarios");
  if (list == doc.end()) throw ValidationError("missing required field", "scenarios");
  if (!list->is_array()) throw ValidationError("expected an array", "scenarios");

  std::vector<Scenario> out;
  out.reserve(list->size());
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string path = "scenarios[" + std::to_string(i) + "]";
    const json& item = (*list)[i];
    if (!item.is_object()) throw ValidationError("expected an object", path);
    Scenario s;
    s.prompt = string_field(item, "prompt", path);
    s.target = string_field(item, "target", path);
    if (s.prompt.empty()) throw ValidationError("must not be empty", path + ".prompt");
    if (s.target.empty()) throw ValidationError("must not be empty", path + ".target");
    try {
      s.category = parse_category(string_field(item, "category", path));
      s.source = parse_source(string_field(item, "source", path));
    } catch (const ValidationError& e) {
      throw ValidationError(e.what(), path);
    }
    if (!seen.emplace(s.prompt, s.target).second) {
      throw ValidationError("duplicate (prompt, target) pair ('" + s.prompt + "', '" + s.target +
                                "')",
                            path);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Scenario> load_scenarios(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read dataset file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenarios(buf.str());
}

std::string serialize_scenarios(std::span<const Scenario> scenarios) {
  json list = json::array();
  for (const auto& s : scenarios) {
    list.push_back({{"prompt", s.prompt},
                    {"target", s.target},
                    {"category", std::string(to_string(s.category))},
                    {"source", std::string(to_string(s.source))}});
  }
  return json{{"version", kDatasetVersion}, {"scenarios", list}}.dump(2) + "\n";
}

double CategoryStats::proportion(Category c) const {
  if (total == 0) return 0.0;
  return std::round(static_cast<double>(count(c)) / static_cast<double>(total) * 1e4) / 1e4;
}

CategoryStats category_stats(std::span<const Scenario> scenarios) {
  CategoryStats stats;
  for (const auto& s : scenarios) ++stats.counts[static_cast<std::size_t>(s.category)];
  stats.total = scenarios.size();
  return stats;
}

void write_stats_csv(std::ostream& out, const CategoryStats& stats) {
  char buf[32];
  out << "category,count,proportion\n";
  for (Category c : kCategories) {
    std::snprintf(buf, sizeof buf, "%.4f", stats.proportion(c));
    out << to_string(c) << ',' << stats.count(c) << ',' << buf << '\n';
  }
  out << "total," << stats.total << ',' << (stats.total == 0 ? "0.0000" : "1.0000") << '\n';
}

bool cooccurrence_verdict(std::span<const bool> detections, const VerdictRule& rule) {
  if (rule.strict && detections.size() != rule.images) {
    throw ValidationError("expected " + std::to_string(rule.images) + " detections, got " +
                          std::to_string(detections.size()));
  }
  const auto hits = static_cast<std::size_t>(std::count(detections.begin(), detections.end(), true));
  return hits >= rule.min_detections;
}

std::string_view template_file_name(JudgeTemplate t) {
  switch (t) {
    case JudgeTemplate::negative_concept_suppression:
      return "negative_concept_suppression.txt";
    case JudgeTemplate::prompt_alignment:
      return "prompt_alignment.txt";
    case JudgeTemplate::image_quality:
      return "image_quality.txt";
  }
  return "";
}

std::string load_template(const std::filesystem::path& directory, JudgeTemplate t) {
  const auto path = directory / template_file_name(t);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read template " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string render_template(std::string_view text, const std::map<std::string, std::string>& values) {
  std::map<std::string, std::string> by_lower;
  for (const auto& [k, v] : values) by_lower[lower(k)] = v;

  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t open = text.find('{', i);
    if (open == std::string_view::npos) break;
    const std::size_t close = text.find('}', open + 1);
    if (close == std::string_view::npos) break;
    out.append(text.substr(i, open - i));
    const auto it = by_lower.find(lower(text.substr(open + 1, close - open - 1)));
    if (it != by_lower.end()) {
      out += it->second;
    } else {
      out.append(text.substr(open, close - open + 1));
    }
    i = close + 1;
  }
  out.append(text.substr(i));
  return out;
}

}  // namespace ong::bench
