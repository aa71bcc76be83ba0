#include "ispo/io/canonical.h"

#include <istream>
#include <iterator>
#include <sstream>

#include "ispo/core/error.h"
#include "json.hpp"

namespace ispo::io {

using nlohmann::json;

namespace {

std::string Dump(const json &j) {
  return j.dump(-1, ' ', false, json::error_handler_t::strict);
}

json HeaderJson(const OntologyCounters &c) {
  return json{{"record", "header"},
              {"format", kCanonicalFormat},
              {"version", kCanonicalVersion},
              {"counters",
               {{"cui", c.cui},
                {"sui", c.sui},
                {"aui", c.aui},
                {"ctx", c.ctx},
                {"roots", c.root_segments}}}};
}

json ConceptJson(const Concept &c) {
  json j{{"record", "concept"},
         {"cui", c.cui},
         {"code", c.code.str()},
         {"status", c.active() ? "active" : "retired"},
         {"next_segment", c.next_segment}};
  if (c.parent) j["parent"] = *c.parent;
  if (!c.preferred_aui.empty()) j["preferred_aui"] = c.preferred_aui;
  if (c.forward) j["forward"] = *c.forward;
  return j;
}

json TermJson(const TermString &t) {
  return json{{"record", "term"},
              {"sui", t.sui},
              {"text", t.text},
              {"raw", t.raw},
              {"lang", LanguageName(t.language)}};
}

json AtomJson(const Atom &a) {
  json j{{"record", "atom"},
         {"aui", a.aui},
         {"cui", a.cui},
         {"sui", a.sui},
         {"source", a.source}};
  if (a.source_code) j["source_code"] = *a.source_code;
  return j;
}

json ContextJson(const ContextText &x) {
  return json{{"record", "context"},
              {"id", x.id},
              {"cui", x.cui},
              {"kind", ContextKindName(x.kind)},
              {"text", x.text},
              {"source", x.source}};
}

// Section rank of each record kind; records must appear in rank order.
int Rank(std::string_view record) {
  if (record == "header") return 0;
  if (record == "concept") return 1;
  if (record == "term") return 2;
  if (record == "atom") return 3;
  if (record == "context") return 4;
  return -1;
}

std::optional<std::string> OptString(const json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

std::string ExportCanonical(const Ontology &ontology) {
  std::vector<Violation> violations = ontology.Validate();
  if (!violations.empty()) {
    throw Error(ErrorCode::kInvalidStore,
                std::to_string(violations.size()) + " violation(s), first: " +
                    std::string(ViolationKindName(violations[0].kind)) + " " +
                    violations[0].subject);
  }
  std::string out;
  out += Dump(HeaderJson(ontology.counters()));
  out += '\n';
  for (const auto &[id, c] : ontology.concepts()) {
    out += Dump(ConceptJson(c));
    out += '\n';
  }
  for (const auto &[id, t] : ontology.terms()) {
    out += Dump(TermJson(t));
    out += '\n';
  }
  for (const auto &[id, a] : ontology.atoms()) {
    out += Dump(AtomJson(a));
    out += '\n';
  }
  for (const auto &[id, x] : ontology.contexts()) {
    out += Dump(ContextJson(x));
    out += '\n';
  }
  return out;
}

Ontology ImportCanonical(std::string_view text) {
  OntologyRecords records;
  int line_no = 0;
  int last_rank = -1;
  std::string last_id;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      throw Error(ErrorCode::kParseError, "missing final LF", line_no + 1);
    }
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception &e) {
      throw Error(ErrorCode::kParseError, e.what(), line_no);
    }
    try {
      if (!j.is_object()) {
        throw Error(ErrorCode::kParseError, "record is not an object", line_no);
      }
      const std::string record = j.at("record").get<std::string>();
      const int rank = Rank(record);
      if (rank < 0) {
        throw Error(ErrorCode::kParseError, "unknown record '" + record + "'",
                    line_no);
      }
      if ((line_no == 1) != (rank == 0)) {
        throw Error(ErrorCode::kParseError,
                    "the header must be the first and only header line",
                    line_no);
      }
      if (rank < last_rank) {
        throw Error(ErrorCode::kParseError, record + " record out of order",
                    line_no);
      }
      if (rank != last_rank) last_id.clear();
      last_rank = rank;

      std::string id;
      switch (rank) {
        case 0: {
          if (j.at("format").get<std::string>() != kCanonicalFormat ||
              j.at("version").get<int>() != kCanonicalVersion) {
            throw Error(ErrorCode::kParseError, "unsupported format/version",
                        line_no);
          }
          const json &c = j.at("counters");
          records.counters.cui = c.at("cui").get<uint64_t>();
          records.counters.sui = c.at("sui").get<uint64_t>();
          records.counters.aui = c.at("aui").get<uint64_t>();
          records.counters.ctx = c.at("ctx").get<uint64_t>();
          records.counters.root_segments = c.at("roots").get<int>();
          break;
        }
        case 1: {
          Concept c;
          c.cui = j.at("cui").get<std::string>();
          c.code = ClassificationCode::Parse(j.at("code").get<std::string>());
          c.parent = OptString(j, "parent");
          c.preferred_aui = OptString(j, "preferred_aui").value_or("");
          c.forward = OptString(j, "forward");
          c.next_segment = j.at("next_segment").get<int>();
          const std::string status = j.at("status").get<std::string>();
          if (status == "active") {
            c.status = ConceptStatus::kActive;
          } else if (status == "retired") {
            c.status = ConceptStatus::kRetired;
          } else {
            throw Error(ErrorCode::kParseError, "bad status '" + status + "'",
                        line_no);
          }
          id = c.cui;
          records.concepts.push_back(std::move(c));
          break;
        }
        case 2: {
          TermString t;
          t.sui = j.at("sui").get<std::string>();
          t.text = j.at("text").get<std::string>();
          t.raw = j.at("raw").get<std::string>();
          t.language = ParseLanguage(j.at("lang").get<std::string>());
          id = t.sui;
          records.terms.push_back(std::move(t));
          break;
        }
        case 3: {
          Atom a;
          a.aui = j.at("aui").get<std::string>();
          a.cui = j.at("cui").get<std::string>();
          a.sui = j.at("sui").get<std::string>();
          a.source = j.at("source").get<std::string>();
          a.source_code = OptString(j, "source_code");
          id = a.aui;
          records.atoms.push_back(std::move(a));
          break;
        }
        case 4: {
          ContextText x;
          x.id = j.at("id").get<std::string>();
          x.cui = j.at("cui").get<std::string>();
          x.kind = ParseContextKind(j.at("kind").get<std::string>());
          x.text = j.at("text").get<std::string>();
          x.source = j.at("source").get<std::string>();
          id = x.id;
          records.contexts.push_back(std::move(x));
          break;
        }
      }
      if (rank > 0) {
        if (!last_id.empty() && id <= last_id) {
          throw Error(ErrorCode::kParseError,
                      "identifier " + id + " not in ascending order", line_no);
        }
        last_id = id;
      }
    } catch (const json::exception &e) {
      throw Error(ErrorCode::kParseError, e.what(), line_no);
    } catch (const Error &e) {
      if (e.code() == ErrorCode::kParseError) throw;
      throw Error(ErrorCode::kParseError, e.what(), line_no);
    }
  }
  if (line_no == 0) throw Error(ErrorCode::kParseError, "missing header", 1);

  Ontology ontology = Ontology::FromRecords(std::move(records));
  std::vector<Violation> violations = ontology.Validate();
  if (!violations.empty()) {
    std::string message;
    for (const Violation &v : violations) {
      if (!message.empty()) message += "; ";
      message += std::string(ViolationKindName(v.kind)) + " " + v.subject;
    }
    throw Error(ErrorCode::kInvariantViolation, message);
  }
  return ontology;
}

Ontology ImportCanonical(std::istream &in) {
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return ImportCanonical(text);
}

}  // namespace ispo::io
