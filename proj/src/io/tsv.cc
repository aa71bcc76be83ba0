#include "ispo/io/tsv.h"

#include <charconv>

#include "ispo/core/error.h"
#include "ispo/io/lines.h"

namespace ispo::io {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<int64_t> ParseInt(std::string_view s) {
  s = Trim(s);
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

AnnotatedCorpus ReadCorpusTsv(std::string_view text, std::string name) {
  AnnotatedCorpus corpus(std::move(name), 0);
  std::optional<int64_t> sample_size;
  bool saw_header = false;
  int line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    if (line.front() == '#') {
      if (StartsWith(line, "#sample_size=")) {
        std::optional<int64_t> n = ParseInt(line.substr(13));
        if (!n || *n <= 0) {
          throw Error(ErrorCode::kParseError, "sample_size must be positive",
                      line_no);
        }
        if (sample_size && *sample_size != *n) {
          throw Error(ErrorCode::kParseError, "conflicting sample_size",
                      line_no);
        }
        sample_size = n;
      } else if (StartsWith(line, "#name=") && corpus.name().empty()) {
        corpus.set_name(std::string(Trim(line.substr(6))));
      }
      continue;
    }
    std::vector<std::string_view> cols = Split(line, '\t');
    if (Trim(cols[0]) == "surface") {
      if (cols.size() < 2 || Trim(cols[1]) != "entity_count") {
        throw Error(ErrorCode::kParseError, "malformed header row", line_no);
      }
      saw_header = true;
      continue;
    }
    if (!saw_header) {
      throw Error(ErrorCode::kParseError,
                  "expected header 'surface<TAB>entity_count'", line_no);
    }
    if (cols.size() < 2 || cols.size() > 3) {
      throw Error(ErrorCode::kParseError, "expected 2 or 3 columns", line_no);
    }
    std::optional<int64_t> count = ParseInt(cols[1]);
    if (!count) {
      throw Error(ErrorCode::kParseError,
                  "bad entity_count '" + std::string(cols[1]) + "'", line_no);
    }
    if (*count < 0) {
      throw Error(ErrorCode::kNegativeCount, std::string(Trim(cols[0])),
                  line_no);
    }
    std::optional<std::vector<std::string>> ids;
    if (cols.size() == 3 && !Trim(cols[2]).empty()) {
      ids.emplace();
      for (std::string_view id : Split(cols[2], '|')) {
        id = Trim(id);
        if (!id.empty()) ids->emplace_back(id);
      }
    }
    try {
      corpus.Add(cols[0], *count, std::move(ids));
    } catch (const Error &e) {
      throw Error(e.code(), e.reason(), line_no);
    }
  }
  if (!sample_size) throw Error(ErrorCode::kMissingSampleSize, "");
  corpus.set_sample_size(*sample_size);
  for (const CorpusRecord &rec : corpus.records()) {
    if (rec.patient_ids &&
        static_cast<int64_t>(rec.patient_ids->size()) > *sample_size) {
      throw Error(ErrorCode::kParseError,
                  "more patient ids than sample_size for '" + rec.surface + "'");
    }
  }
  return corpus;
}

std::string WriteCorpusTsv(const AnnotatedCorpus &corpus) {
  std::string out = "#sample_size=" + std::to_string(corpus.sample_size()) + "\n";
  if (!corpus.name().empty()) out += "#name=" + corpus.name() + "\n";
  bool with_ids = false;
  for (const CorpusRecord &rec : corpus.records()) {
    with_ids = with_ids || rec.patient_ids.has_value();
  }
  out += with_ids ? "surface\tentity_count\tpatient_ids\n"
                  : "surface\tentity_count\n";
  for (const CorpusRecord &rec : corpus.records()) {
    out += rec.surface + "\t" + std::to_string(rec.entity_count);
    if (with_ids) {
      out += "\t";
      if (rec.patient_ids) {
        for (size_t i = 0; i < rec.patient_ids->size(); ++i) {
          if (i) out += "|";
          out += (*rec.patient_ids)[i];
        }
      }
    }
    out += "\n";
  }
  return out;
}

std::vector<RawRule> ReadRulesTsv(std::string_view text) {
  std::vector<RawRule> rules;
  int line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    if (Trim(line).empty() || line.front() == '#') continue;
    std::vector<std::string_view> cols = Split(line, '\t');
    if (cols.size() != 2) {
      throw Error(ErrorCode::kParseError, "expected source<TAB>targets",
                  line_no);
    }
    if (line_no == 1 && Trim(cols[0]) == "source") continue;
    RawRule rule{std::string(Trim(cols[0])), {}, line_no};
    for (std::string_view t : Split(cols[1], '|')) {
      t = Trim(t);
      if (!t.empty()) rule.targets.emplace_back(t);
    }
    if (rule.source.empty() || rule.targets.empty()) {
      throw Error(ErrorCode::kParseError, "rule needs a source and targets",
                  line_no);
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

void XrefSet::Add(const std::string &external_id, const ConceptId &cui) {
  auto it = index_.find(external_id);
  if (it != index_.end()) {
    if (it->second != cui) {
      throw Error(ErrorCode::kConflictingXref,
                  external_id + " maps to both " + it->second + " and " + cui);
    }
    return;
  }
  index_.emplace(external_id, cui);
  pairs_.push_back({external_id, cui});
}

std::optional<ConceptId> XrefSet::Lookup(std::string_view external_id) const {
  auto it = index_.find(external_id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

XrefSet ReadXrefTsv(std::string_view text) {
  XrefSet xrefs;
  int line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    if (Trim(line).empty() || line.front() == '#') continue;
    std::vector<std::string_view> cols = Split(line, '\t');
    if (cols.size() != 2) {
      throw Error(ErrorCode::kParseError, "expected external_id<TAB>cui",
                  line_no);
    }
    std::string ext(Trim(cols[0]));
    std::string cui(Trim(cols[1]));
    if (ext == "external_id" && cui == "cui") continue;
    if (ext.empty() || !IsConceptId(cui)) {
      throw Error(ErrorCode::kParseError, "bad xref row", line_no);
    }
    try {
      xrefs.Add(ext, cui);
    } catch (const Error &e) {
      throw Error(e.code(), e.reason(), line_no);
    }
  }
  return xrefs;
}

std::vector<std::string> ReadTermList(std::string_view text) {
  std::vector<std::string> terms;
  for (std::string_view line : SplitLines(text)) {
    line = Trim(line);
    if (!line.empty() && line.front() != '#') terms.emplace_back(line);
  }
  return terms;
}

}  // namespace ispo::io
