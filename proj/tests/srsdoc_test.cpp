// srsdoc_test.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "revspeech/errors.hpp"
#include "revspeech/srsdoc.hpp"

using namespace revspeech;

namespace {

SegmentHypothesis Seg(double start, double end, const std::string &label, Direction d) {
  return {start, end, label, -10.0, 1.0, d};
}

// Builds a reverse transcript whose segments mirror the given forward-time spans.
Transcript Mirror(const Transcript &fwd, const std::vector<std::string> &labels) {
  Transcript rev;
  rev.direction = Direction::kReverse;
  rev.source_duration_s = fwd.source_duration_s;
  for (std::size_t i = fwd.segments.size(); i-- > 0;) {
    const auto &s = fwd.segments[i];
    rev.segments.push_back(Seg(fwd.source_duration_s - s.end_s, fwd.source_duration_s - s.start_s,
                               labels[i], Direction::kReverse));
  }
  return rev;
}

Transcript Forward(std::vector<std::pair<double, double>> spans, std::vector<std::string> labels, double dur) {
  Transcript t;
  t.direction = Direction::kForward;
  t.source_duration_s = dur;
  for (std::size_t i = 0; i < spans.size(); ++i)
    t.segments.push_back(Seg(spans[i].first, spans[i].second, labels[i], Direction::kForward));
  return t;
}

double Overlap(const SegmentHypothesis &a, const SegmentHypothesis &b) {
  return std::max(0.0, std::min(a.end_s, b.end_s) - std::max(a.start_s, b.start_s));
}

double Gap(const SegmentHypothesis &a, const SegmentHypothesis &b) {
  return std::max({0.0, a.start_s - b.end_s, b.start_s - a.end_s});
}

int CountLinesStartingWith(const std::string &text, const std::string &prefix) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) n += line.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST_CASE("requirement ids are zero padded") {
  CHECK(RequirementId(0) == "R-001");
  CHECK(RequirementId(41) == "R-042");
  CHECK(RequirementId(999) == "R-1000");
}

TEST_CASE("identical mirrored transcripts pair one to one") {
  const Transcript fwd = Forward({{0.5, 1.0}, {1.5, 2.5}, {3.0, 3.4}}, {"a", "b", "c"}, 4.0);
  const Transcript rev = Mirror(fwd, {"a", "b", "c"});
  const auto pairs = PairSegments(fwd, rev);
  REQUIRE(pairs.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(pairs[i].forward_segment == fwd.segments[i]);
    REQUIRE(pairs[i].reverse_segment);
    CHECK(pairs[i].reverse_segment->start_s == doctest::Approx(fwd.segments[i].start_s));
    CHECK(pairs[i].reverse_segment->end_s == doctest::Approx(fwd.segments[i].end_s));
    CHECK(pairs[i].requirement_id == RequirementId(i));
  }
}

TEST_CASE("reverse segment spanning two forward segments goes to the larger overlap") {
  // Forward-time reverse span [1.0, 2.0]: 0.7 s with A, 0.3 s with B.
  const Transcript fwd = Forward({{0.0, 1.7}, {1.7, 3.0}}, {"A", "B"}, 3.0);
  Transcript rev;
  rev.direction = Direction::kReverse;
  rev.source_duration_s = 3.0;
  rev.segments.push_back(Seg(1.0, 2.0, "X", Direction::kReverse));
  const auto pairs = PairSegments(fwd, rev);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].forward_segment.label == "A");
  REQUIRE(pairs[0].reverse_segment);
  CHECK(pairs[0].reverse_segment->label == "X");
  CHECK(pairs[1].forward_segment.label == "B");
  CHECK_FALSE(pairs[1].reverse_segment);
  CHECK(pairs[1].category == Category::kUnmatched);
}

TEST_CASE("pairing agrees with a brute-force overlap oracle") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const double dur = 10.0;
    auto random_spans = [&](int n) {
      std::uniform_real_distribution<double> u(0.0, dur);
      std::vector<double> cuts;
      for (int i = 0; i < 2 * n; ++i) cuts.push_back(u(rng));
      std::sort(cuts.begin(), cuts.end());
      std::vector<std::pair<double, double>> spans;
      for (int i = 0; i < n; ++i) spans.push_back({cuts[2 * i], cuts[2 * i + 1]});
      return spans;
    };
    const int nf = 1 + trial % 5, nr = trial % 6;
    const auto fspans = random_spans(nf);
    std::vector<std::string> labels(nf, "w");
    const Transcript fwd = Forward(fspans, labels, dur);
    Transcript rev;
    rev.direction = Direction::kReverse;
    rev.source_duration_s = dur;
    for (const auto &[a, b] : random_spans(nr)) rev.segments.push_back(Seg(a, b, "r", Direction::kReverse));

    const auto pairs = PairSegments(fwd, rev);
    std::size_t with_reverse = 0;
    std::vector<int> used(nf, 0);
    for (const ReversalPair &p : pairs) {
      const auto it = std::find(fwd.segments.begin(), fwd.segments.end(), p.forward_segment);
      REQUIRE(it != fwd.segments.end());
      const std::size_t fi = it - fwd.segments.begin();
      CHECK(p.requirement_id == RequirementId(fi));
      ++used[fi];
      if (!p.reverse_segment) continue;
      ++with_reverse;
      double best_overlap = 0.0, best_gap = 1e9;
      for (const auto &f : fwd.segments) {
        best_overlap = std::max(best_overlap, Overlap(f, *p.reverse_segment));
        best_gap = std::min(best_gap, Gap(f, *p.reverse_segment));
      }
      if (best_overlap > 0.0)
        CHECK(Overlap(p.forward_segment, *p.reverse_segment) == doctest::Approx(best_overlap));
      else
        CHECK(Gap(p.forward_segment, *p.reverse_segment) == doctest::Approx(best_gap));
    }
    CHECK(with_reverse == rev.segments.size());
    for (int u : used) CHECK(u >= 1);  // every forward segment is reported
  }
}

TEST_CASE("pairing contract errors") {
  const Transcript fwd = Forward({{0.0, 1.0}}, {"a"}, 2.0);
  Transcript rev = Mirror(fwd, {"a"});
  rev.source_duration_s = 2.5;
  CHECK_THROWS_AS(PairSegments(fwd, rev), ContractError);
  CHECK_THROWS_AS(PairSegments(fwd, fwd), ContractError);
}

TEST_CASE("categorization uses the lexicon") {
  const Lexicon lex = DefaultLexicon();
  auto pair = [](const std::string &f, const std::string &r) {
    ReversalPair p;
    p.forward_segment = Seg(0, 1, f, Direction::kForward);
    p.reverse_segment = Seg(0, 1, r, Direction::kReverse);
    return p;
  };
  CHECK(Categorize(pair("accept", "accept"), lex) == Category::kCongruent);
  CHECK(Categorize(pair("accept", "approve"), lex) == Category::kCongruent);
  CHECK(Categorize(pair("accept", "reject"), lex) == Category::kIncongruent);
  CHECK(Categorize(pair("reject", "accept"), lex) == Category::kIncongruent);
  CHECK(Categorize(pair("login", "not_login"), lex) == Category::kIncongruent);
  CHECK(Categorize(pair("not-submit", "submit"), lex) == Category::kIncongruent);
  CHECK(Categorize(pair("login", "submit"), lex) == Category::kExpansive);
  ReversalPair lone;
  lone.forward_segment = Seg(0, 1, "login", Direction::kForward);
  CHECK(Categorize(lone, lex) == Category::kUnmatched);
  for (Category c : {Category::kUncategorized, Category::kCongruent, Category::kIncongruent, Category::kExpansive,
                     Category::kUnmatched})
    CHECK(ParseCategory(ToString(c)) == c);
}

TEST_CASE("lexicon parsing") {
  const Lexicon lex = ParseLexicon("# comment\n\n up , synonym-of , raise \nup,antonym-of,down\n");
  CHECK(lex.Lookup("raise", "up") == Relation::kSynonym);
  CHECK(lex.Lookup("down", "up") == Relation::kAntonym);
  CHECK(lex.Lookup("up", "left") == Relation::kNone);
  CHECK_THROWS_AS(ParseLexicon("up,down\n"), FormatError);
  CHECK_THROWS_AS(ParseLexicon("up,opposite-of,down\n"), FormatError);
  CHECK_THROWS_AS(ParseLexicon("up,synonym-of,\n"), FormatError);
  CHECK_THROWS_AS(ParseLexicon("up,synonym-of,down\ndown,antonym-of,up\n"), FormatError);
  CHECK(DefaultLexicon().Lookup("reject", "accept") == Relation::kAntonym);
}

TEST_CASE("consistent transcripts produce no flags") {
  const Transcript fwd = Forward({{0.2, 0.8}, {1.2, 1.9}, {2.4, 3.0}}, {"login", "accept", "submit"}, 3.5);
  const Transcript rev = Mirror(fwd, {"login", "accept", "submit"});
  const SrsReport report = BuildReport(fwd, rev, DefaultLexicon(), {"demo.wav", "unspecified", "0123"});
  CHECK(report.flagged.empty());
  CHECK(report.requirements.size() == 3);
  const std::string md = Render(report, ReportFormat::kMarkdown);
  CHECK(md.find("## Flagged Inconsistencies\n\nNone detected.\n") != std::string::npos);
  CHECK(CountLinesStartingWith(md, "| R-") == static_cast<int>(report.requirements.size() + report.pairs.size()));
  CHECK(md.find("demo.wav") != std::string::npos);
}

TEST_CASE("one planted antonym is flagged exactly once") {
  const Transcript fwd = Forward({{0.2, 0.8}, {1.2, 1.9}, {2.4, 3.0}}, {"login", "accept", "submit"}, 3.5);
  const Transcript rev = Mirror(fwd, {"login", "reject", "submit"});
  const SrsReport report = BuildReport(fwd, rev, DefaultLexicon(), {"demo.wav", "unspecified", "0123"});
  REQUIRE(report.flagged.size() == 1);
  CHECK(report.flagged[0].forward_segment.label == "accept");
  CHECK(report.flagged[0].reverse_segment->label == "reject");
  CHECK(report.flagged[0].requirement_id == "R-002");
  const std::string md = Render(report, ReportFormat::kMarkdown);
  CHECK(md.find("None detected.") == std::string::npos);
  CHECK(CountLinesStartingWith(md, "- R-002") == 1);
}

TEST_CASE("structured report round trips and rendering is reproducible") {
  const Transcript fwd = Forward({{0.2, 0.8}, {1.2, 1.9}, {2.4, 3.0}}, {"lo|gin", "accept", "submit"}, 3.5);
  Transcript rev = Mirror(fwd, {"x", "reject", "not_submit"});
  rev.segments.pop_back();  // leaves the first forward segment unmatched
  const SrsReport report = BuildReport(fwd, rev, DefaultLexicon(), {"a \"b\".wav", "2026-01-01T00:00:00Z", "ff"});
  const std::string json = Render(report, ReportFormat::kStructured);
  const SrsReport back = ParseStructuredReport(json);
  CHECK(back == report);
  CHECK(Render(back, ReportFormat::kStructured) == json);
  CHECK(Render(back, ReportFormat::kMarkdown) == Render(report, ReportFormat::kMarkdown));
  CHECK(report.flagged.size() == 2);
  CHECK_THROWS_AS(ParseStructuredReport("{}"), FormatError);
  CHECK_THROWS_AS(ParseStructuredReport("not json"), FormatError);
}
