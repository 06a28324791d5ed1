// revspeech/srsdoc.hpp

// Copyright 2026  The revspeech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Requirement report assembly: forward transcript segments become numbered
// requirements, reverse-audio segments are paired with them by time overlap
// and categorized through a synonym/antonym lexicon. Contradicting pairs are
// flagged for review; nothing is ever removed from the requirement list.

#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "revspeech/recognizer.hpp"

namespace revspeech {

enum class Category { kUncategorized, kCongruent, kIncongruent, kExpansive, kUnmatched };

std::string ToString(Category category);
Category ParseCategory(const std::string &name);

enum class Relation { kNone, kSynonym, kAntonym };

/// Symmetric word relations. Labels prefixed "not_" or "not-" are treated as
/// antonyms of the bare label.
class Lexicon {
 public:
  void AddSynonym(const std::string &a, const std::string &b);
  void AddAntonym(const std::string &a, const std::string &b);
  Relation Lookup(const std::string &a, const std::string &b) const;

  std::size_t size() const { return synonyms_.size() + antonyms_.size(); }

 private:
  static std::pair<std::string, std::string> Key(const std::string &a, const std::string &b);
  std::set<std::pair<std::string, std::string>> synonyms_;
  std::set<std::pair<std::string, std::string>> antonyms_;
};

/// Comma-separated triples "word,synonym-of|antonym-of,word"; '#' starts a
/// comment line.
Lexicon ParseLexicon(const std::string &text);
Lexicon LoadLexicon(const std::filesystem::path &path);
const char *DefaultLexiconText();
Lexicon DefaultLexicon();

struct ReversalPair {
  SegmentHypothesis forward_segment;
  std::optional<SegmentHypothesis> reverse_segment;  // in forward time
  Category category = Category::kUncategorized;
  std::string note;
  std::string requirement_id;

  bool operator==(const ReversalPair &) const = default;
};

struct Requirement {
  std::string id;
  std::string text;
  std::vector<std::string> supporting_labels;
  double start_s = 0.0;
  double end_s = 0.0;
  double score = 0.0;

  bool operator==(const Requirement &) const = default;
};

struct ReportMeta {
  std::string source_file;
  std::string timestamp;
  std::string tool_config_fingerprint;
};

struct SrsReport {
  std::string source_file;
  std::string timestamp;
  std::string tool_config_fingerprint;
  std::vector<Requirement> requirements;
  std::vector<ReversalPair> pairs;
  std::vector<ReversalPair> flagged;

  bool operator==(const SrsReport &) const = default;
};

/// Formats a requirement id, 1-based: R-001, R-002, ...
std::string RequirementId(std::size_t index);

/// Pairs every reverse segment with the forward segment it overlaps most
/// (nearest one when nothing overlaps). Forward segments left without a
/// reverse partner yield unmatched pairs. Categories other than unmatched
/// are left unset.
std::vector<ReversalPair> PairSegments(const Transcript &forward, const Transcript &reverse);

Category Categorize(const ReversalPair &pair, const Lexicon &lexicon);

SrsReport BuildReport(const Transcript &forward, const Transcript &reverse,
                      const Lexicon &lexicon, const ReportMeta &meta);

enum class ReportFormat { kMarkdown, kStructured };

std::string Render(const SrsReport &report, ReportFormat format);

/// Inverse of Render(report, kStructured).
SrsReport ParseStructuredReport(const std::string &text);

}  // namespace revspeech
