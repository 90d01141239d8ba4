// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

// Concept-suppression benchmark scenarios: (prompt, suppression target)
// pairs grouped into six relationship categories, the k-of-n co-occurrence
// rule used to admit a pair, and the judge prompt templates.
//
// Dataset file:
//   {"version": 1,
//    "scenarios": [{"prompt": "...", "target": "...",
//                   "category": "place_scene", "source": "unknown"}, ...]}

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ong::bench {

enum class Category {
  place_scene,         // associated concept for a place or scene
  event_action,        // associated concept for an event or action
  cooccurring_object,  // another object that co-occurs with an object
  dominant_subtype,    // dominant subtype of a supercategory
  object_component,    // component of an object
  occupation_role,     // associated concept for an occupation or role
};

inline constexpr std::array<Category, 6> kCategories = {
    Category::place_scene,      Category::event_action,     Category::cooccurring_object,
    Category::dominant_subtype, Category::object_component, Category::occupation_role};

enum class Source { llm_generated, coco_derived, unknown };

std::string_view to_string(Category c);
std::string_view to_string(Source s);
/// Throw ValidationError on unknown names.
Category parse_category(std::string_view name);
Source parse_source(std::string_view name);

struct Scenario {
  std::string prompt;
  std::string target;
  Category category = Category::place_scene;
  Source source = Source::unknown;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline constexpr int kDatasetVersion = 1;

/// Parses and validates a dataset document. Errors carry the line number.
std::vector<Scenario> parse_scenarios(std::string_view json_text);
std::vector<Scenario> load_scenarios(const std::filesystem::path& path);

/// Canonical form: sorted keys, two-space indent, trailing newline.
std::string serialize_scenarios(std::span<const Scenario> scenarios);

struct CategoryStats {
  std::array<std::size_t, kCategories.size()> counts{};
  std::size_t total = 0;

  std::size_t count(Category c) const { return counts[static_cast<std::size_t>(c)]; }
  /// count / total rounded to 4 decimals; 0 for an empty set.
  double proportion(Category c) const;
};

CategoryStats category_stats(std::span<const Scenario> scenarios);

/// Header: category,count,proportion; one row per category, then a total row.
void write_stats_csv(std::ostream& out, const CategoryStats& stats);

struct VerdictRule {
  std::size_t min_detections = 2;
  std::size_t images = 4;
  /// Reject detection lists whose length differs from `images`.
  bool strict = true;
};

/// True iff at least rule.min_detections entries are true.
bool cooccurrence_verdict(std::span<const bool> detections, const VerdictRule& rule = {});

enum class JudgeTemplate { negative_concept_suppression, prompt_alignment, image_quality };

std::string_view template_file_name(JudgeTemplate t);
std::string load_template(const std::filesystem::path& directory, JudgeTemplate t);

/// Replaces every {name} placeholder whose name matches a key, ignoring case.
/// Unmatched placeholders are left as they are.
std::string render_template(std::string_view text, const std::map<std::string, std::string>& values);

}  // namespace ong::bench
