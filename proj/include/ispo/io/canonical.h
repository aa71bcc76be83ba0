#ifndef ISPO_IO_CANONICAL_H_
#define ISPO_IO_CANONICAL_H_

#include <iosfwd>
#include <string>
#include <string_view>

#include "ispo/core/ontology.h"

namespace ispo::io {

// Canonical store format (.ispo.jsonl): UTF-8, one JSON object per LF-ended
// line, keys in sorted order, no insignificant whitespace.
//
//   {"counters":{...},"format":"ispo-canonical","record":"header","version":1}
//   {"code":"01","cui":"C00000001",...,"record":"concept",...}   by CUI
//   {"lang":"en","raw":"Cough","record":"term","sui":...,"text":"cough"}  by SUI
//   {"aui":...,"cui":...,"record":"atom","source":"MeSH",...}   by AUI
//   {"cui":...,"id":"X00000001","kind":"definition","record":"context",...}
//
// Equal stores serialize to identical bytes.
inline constexpr std::string_view kCanonicalFormat = "ispo-canonical";
inline constexpr int kCanonicalVersion = 1;

// Throws InvalidStore when the store does not validate.
std::string ExportCanonical(const Ontology &ontology);

// Throws ParseError(line, reason) on malformed input and InvariantViolation
// when the decoded store fails validation.
Ontology ImportCanonical(std::string_view text);
Ontology ImportCanonical(std::istream &in);

}  // namespace ispo::io

#endif  // ISPO_IO_CANONICAL_H_
