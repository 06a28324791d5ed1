// srsdoc.cpp

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

#include "revspeech/srsdoc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "revspeech/errors.hpp"

namespace revspeech {

std::string ToString(Category category) {
  switch (category) {
    case Category::kUncategorized:
      return "uncategorized";
    case Category::kCongruent:
      return "congruent";
    case Category::kIncongruent:
      return "incongruent";
    case Category::kExpansive:
      return "expansive";
    case Category::kUnmatched:
      return "unmatched";
  }
  return "uncategorized";
}

Category ParseCategory(const std::string &name) {
  for (Category c : {Category::kUncategorized, Category::kCongruent, Category::kIncongruent,
                     Category::kExpansive, Category::kUnmatched})
    if (ToString(c) == name) return c;
  throw FormatError("unknown reversal category '" + name + "'");
}

// ---------------------------------------------------------------------------
// Lexicon

std::pair<std::string, std::string> Lexicon::Key(const std::string &a, const std::string &b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

void Lexicon::AddSynonym(const std::string &a, const std::string &b) {
  if (antonyms_.count(Key(a, b)))
    throw FormatError("lexicon lists '" + a + "' and '" + b + "' as both synonyms and antonyms");
  synonyms_.insert(Key(a, b));
}

void Lexicon::AddAntonym(const std::string &a, const std::string &b) {
  if (synonyms_.count(Key(a, b)))
    throw FormatError("lexicon lists '" + a + "' and '" + b + "' as both synonyms and antonyms");
  antonyms_.insert(Key(a, b));
}

namespace {

std::optional<std::string> NegatedStem(const std::string &label) {
  for (const char *prefix : {"not_", "not-"}) {
    const std::string p(prefix);
    if (label.size() > p.size() && label.compare(0, p.size(), p) == 0) return label.substr(p.size());
  }
  return std::nullopt;
}

std::string Trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Relation Lexicon::Lookup(const std::string &a, const std::string &b) const {
  if (a == b || synonyms_.count(Key(a, b))) return Relation::kSynonym;
  if (antonyms_.count(Key(a, b))) return Relation::kAntonym;
  const auto na = NegatedStem(a), nb = NegatedStem(b);
  if ((na && *na == b) || (nb && *nb == a)) return Relation::kAntonym;
  return Relation::kNone;
}

Lexicon ParseLexicon(const std::string &text) {
  Lexicon lex;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    std::vector<std::string> fields;
    std::istringstream fs(trimmed);
    std::string field;
    while (std::getline(fs, field, ',')) fields.push_back(Trim(field));
    if (fields.size() != 3 || fields[0].empty() || fields[2].empty())
      throw FormatError("lexicon line " + std::to_string(line_no) +
                        ": expected 'word,relation,word'");
    if (fields[1] == "synonym-of")
      lex.AddSynonym(fields[0], fields[2]);
    else if (fields[1] == "antonym-of")
      lex.AddAntonym(fields[0], fields[2]);
    else
      throw FormatError("lexicon line " + std::to_string(line_no) + ": unknown relation '" +
                        fields[1] + "'");
  }
  return lex;
}

Lexicon LoadLexicon(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return ParseLexicon(std::string((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>()));
}

const char *DefaultLexiconText() {
  return "# word,relation,word\n"
         "accept,antonym-of,reject\n"
         "approve,antonym-of,deny\n"
         "agree,antonym-of,disagree\n"
         "allow,antonym-of,block\n"
         "enable,antonym-of,disable\n"
         "include,antonym-of,exclude\n"
         "start,antonym-of,stop\n"
         "yes,antonym-of,no\n"
         "true,antonym-of,false\n"
         "accept,synonym-of,approve\n"
         "agree,synonym-of,accept\n"
         "yes,synonym-of,yeah\n"
         "ok,synonym-of,okay\n";
}

Lexicon DefaultLexicon() { return ParseLexicon(DefaultLexiconText()); }

// ---------------------------------------------------------------------------
// Pairing and categorization

std::string RequirementId(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "R-%03zu", index + 1);
  return buf;
}

namespace {

double Overlap(const SegmentHypothesis &a, const SegmentHypothesis &b) {
  return std::max(0.0, std::min(a.end_s, b.end_s) - std::max(a.start_s, b.start_s));
}

double Gap(const SegmentHypothesis &a, const SegmentHypothesis &b) {
  return std::max({0.0, a.start_s - b.end_s, b.start_s - a.end_s});
}

std::string Percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * fraction);
  return buf;
}

}  // namespace

std::vector<ReversalPair> PairSegments(const Transcript &forward, const Transcript &reverse) {
  if (std::abs(forward.source_duration_s - reverse.source_duration_s) > 1e-3)
    throw ContractError("forward and reverse transcripts cover different durations");
  if (forward.direction != Direction::kForward || reverse.direction != Direction::kReverse)
    throw ContractError("PairSegments expects a forward and a reverse transcript");
  if (forward.segments.empty() && !reverse.segments.empty())
    throw ContractError("forward transcript has no segments to pair with");

  const double duration = forward.source_duration_s;
  // Reverse pairs grouped by forward segment, keyed by reverse start time.
  std::vector<std::vector<std::pair<double, ReversalPair>>> by_forward(forward.segments.size());
  for (const SegmentHypothesis &rev : reverse.segments) {
    const SegmentHypothesis mapped = ToForwardTime(rev, duration);
    std::size_t best = 0;
    double best_overlap = -1.0;
    for (std::size_t i = 0; i < forward.segments.size(); ++i) {
      const double o = Overlap(forward.segments[i], mapped);
      if (o > best_overlap) {
        best_overlap = o;
        best = i;
      }
    }
    ReversalPair pair;
    if (best_overlap > 0.0) {
      pair.note = "overlap " + Percent(best_overlap / (mapped.end_s - mapped.start_s)) +
                  " of reverse segment";
    } else {
      double best_gap = Gap(forward.segments[0], mapped);
      best = 0;
      for (std::size_t i = 1; i < forward.segments.size(); ++i) {
        const double g = Gap(forward.segments[i], mapped);
        if (g < best_gap) {
          best_gap = g;
          best = i;
        }
      }
      pair.note = "no time overlap; paired with nearest forward segment";
    }
    pair.forward_segment = forward.segments[best];
    pair.reverse_segment = mapped;
    pair.requirement_id = RequirementId(best);
    by_forward[best].emplace_back(mapped.start_s, std::move(pair));
  }

  std::vector<ReversalPair> pairs;
  for (std::size_t i = 0; i < forward.segments.size(); ++i) {
    auto &group = by_forward[i];
    if (group.empty()) {
      ReversalPair pair;
      pair.forward_segment = forward.segments[i];
      pair.category = Category::kUnmatched;
      pair.note = "no reverse segment";
      pair.requirement_id = RequirementId(i);
      pairs.push_back(std::move(pair));
      continue;
    }
    std::stable_sort(group.begin(), group.end(),
                     [](const auto &a, const auto &b) { return a.first < b.first; });
    for (auto &entry : group) pairs.push_back(std::move(entry.second));
  }
  return pairs;
}

Category Categorize(const ReversalPair &pair, const Lexicon &lexicon) {
  if (!pair.reverse_segment) return Category::kUnmatched;
  switch (lexicon.Lookup(pair.forward_segment.label, pair.reverse_segment->label)) {
    case Relation::kSynonym:
      return Category::kCongruent;
    case Relation::kAntonym:
      return Category::kIncongruent;
    case Relation::kNone:
      break;
  }
  return Category::kExpansive;
}

SrsReport BuildReport(const Transcript &forward, const Transcript &reverse,
                      const Lexicon &lexicon, const ReportMeta &meta) {
  SrsReport report;
  report.source_file = meta.source_file;
  report.timestamp = meta.timestamp;
  report.tool_config_fingerprint = meta.tool_config_fingerprint;
  for (std::size_t i = 0; i < forward.segments.size(); ++i) {
    const SegmentHypothesis &seg = forward.segments[i];
    report.requirements.push_back(
        {RequirementId(i), seg.label, {seg.label}, seg.start_s, seg.end_s, seg.score});
  }
  report.pairs = PairSegments(forward, reverse);
  for (ReversalPair &pair : report.pairs) {
    pair.category = Categorize(pair, lexicon);
    if (pair.category == Category::kIncongruent) report.flagged.push_back(pair);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

using Json = nlohmann::ordered_json;

std::string Fixed(double v, int decimals) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string Span(const SegmentHypothesis &s) { return Fixed(s.start_s, 3) + "-" + Fixed(s.end_s, 3); }

std::string Cell(const std::string &text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

std::string RenderMarkdown(const SrsReport &report) {
  std::string md = "# Software Requirement Specification\n\n";
  md += "## Header\n\n";
  md += "- Source: " + report.source_file + "\n";
  md += "- Config fingerprint: " + report.tool_config_fingerprint + "\n";
  md += "- Timestamp: " + report.timestamp + "\n\n";

  md += "## Functional Requirements\n\n";
  md += "| ID | Requirement | Time span (s) | Score |\n";
  md += "|----|-------------|---------------|-------|\n";
  for (const Requirement &r : report.requirements)
    md += "| " + r.id + " | " + Cell(r.text) + " | " + Fixed(r.start_s, 3) + "-" +
          Fixed(r.end_s, 3) + " | " + Fixed(r.score, 3) + " |\n";
  md += "\n";

  md += "## Reversal Analysis\n\n";
  md += "| Requirement | Forward | Forward span (s) | Reverse | Reverse span (s) | Category | Note |\n";
  md += "|-------------|---------|------------------|---------|------------------|----------|------|\n";
  for (const ReversalPair &p : report.pairs) {
    md += "| " + p.requirement_id + " | " + Cell(p.forward_segment.label) + " | " +
          Span(p.forward_segment) + " | " +
          (p.reverse_segment ? Cell(p.reverse_segment->label) : "-") + " | " +
          (p.reverse_segment ? Span(*p.reverse_segment) : "-") + " | " + ToString(p.category) +
          " | " + Cell(p.note) + " |\n";
  }
  md += "\n";

  md += "## Flagged Inconsistencies\n\n";
  if (report.flagged.empty()) {
    md += "None detected.\n";
  } else {
    for (const ReversalPair &p : report.flagged)
      md += "- " + p.requirement_id + " \"" + p.forward_segment.label + "\" (" +
            Span(p.forward_segment) + " s) is contradicted by reversal \"" +
            p.reverse_segment->label + "\" (" + Span(*p.reverse_segment) +
            " s). Review before sign-off.\n";
  }
  return md;
}

Json SegmentToJson(const SegmentHypothesis &s) {
  return Json{{"start_s", s.start_s}, {"end_s", s.end_s},   {"label", s.label},
              {"score", s.score},     {"margin", s.margin}, {"direction", ToString(s.direction)}};
}

SegmentHypothesis SegmentFromJson(const Json &j) {
  SegmentHypothesis s;
  s.start_s = j.at("start_s").get<double>();
  s.end_s = j.at("end_s").get<double>();
  s.label = j.at("label").get<std::string>();
  s.score = j.at("score").get<double>();
  s.margin = j.at("margin").get<double>();
  s.direction = ParseDirection(j.at("direction").get<std::string>());
  return s;
}

Json PairToJson(const ReversalPair &p) {
  return Json{{"requirement_id", p.requirement_id},
              {"forward_segment", SegmentToJson(p.forward_segment)},
              {"reverse_segment", p.reverse_segment ? SegmentToJson(*p.reverse_segment) : Json()},
              {"category", ToString(p.category)},
              {"note", p.note}};
}

ReversalPair PairFromJson(const Json &j) {
  ReversalPair p;
  p.requirement_id = j.at("requirement_id").get<std::string>();
  p.forward_segment = SegmentFromJson(j.at("forward_segment"));
  if (!j.at("reverse_segment").is_null()) p.reverse_segment = SegmentFromJson(j.at("reverse_segment"));
  p.category = ParseCategory(j.at("category").get<std::string>());
  p.note = j.at("note").get<std::string>();
  if ((p.category == Category::kUnmatched) != !p.reverse_segment)
    throw FormatError("report pair: category 'unmatched' must coincide with a missing reverse segment");
  return p;
}

std::string RenderStructured(const SrsReport &report) {
  Json doc;
  doc["format"] = "srs-report-v1";
  doc["source_file"] = report.source_file;
  doc["timestamp"] = report.timestamp;
  doc["tool_config_fingerprint"] = report.tool_config_fingerprint;
  doc["requirements"] = Json::array();
  for (const Requirement &r : report.requirements)
    doc["requirements"].push_back(Json{{"id", r.id},
                                       {"text", r.text},
                                       {"supporting_labels", r.supporting_labels},
                                       {"start_s", r.start_s},
                                       {"end_s", r.end_s},
                                       {"score", r.score}});
  doc["pairs"] = Json::array();
  for (const ReversalPair &p : report.pairs) doc["pairs"].push_back(PairToJson(p));
  doc["flagged"] = Json::array();
  for (const ReversalPair &p : report.flagged) doc["flagged"].push_back(PairToJson(p));
  return doc.dump(2) + "\n";
}

}  // namespace

std::string Render(const SrsReport &report, ReportFormat format) {
  return format == ReportFormat::kMarkdown ? RenderMarkdown(report) : RenderStructured(report);
}

SrsReport ParseStructuredReport(const std::string &text) {
  try {
    const Json doc = Json::parse(text);
    if (doc.at("format").get<std::string>() != "srs-report-v1")
      throw FormatError("unsupported report format");
    SrsReport report;
    report.source_file = doc.at("source_file").get<std::string>();
    report.timestamp = doc.at("timestamp").get<std::string>();
    report.tool_config_fingerprint = doc.at("tool_config_fingerprint").get<std::string>();
    for (const auto &r : doc.at("requirements")) {
      report.requirements.push_back({r.at("id").get<std::string>(), r.at("text").get<std::string>(),
                                     r.at("supporting_labels").get<std::vector<std::string>>(),
                                     r.at("start_s").get<double>(), r.at("end_s").get<double>(),
                                     r.at("score").get<double>()});
    }
    for (const auto &p : doc.at("pairs")) report.pairs.push_back(PairFromJson(p));
    for (const auto &p : doc.at("flagged")) report.flagged.push_back(PairFromJson(p));
    for (std::size_t i = 0; i < report.requirements.size(); ++i)
      if (report.requirements[i].id != RequirementId(i))
        throw FormatError("requirement ids must be unique and sequential");
    for (const ReversalPair &f : report.flagged)
      if (std::find(report.pairs.begin(), report.pairs.end(), f) == report.pairs.end())
        throw FormatError("flagged entry missing from the pair list");
    return report;
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace revspeech
