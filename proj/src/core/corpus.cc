#include "ispo/core/corpus.h"

#include <algorithm>

#include "ispo/core/error.h"
#include "ispo/core/text.h"

namespace ispo {

namespace {

std::vector<std::string> SortedUnique(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

void AnnotatedCorpus::Add(std::string_view surface, int64_t entity_count,
                          std::optional<std::vector<std::string>> patient_ids) {
  if (entity_count < 0) {
    throw Error(ErrorCode::kNegativeCount,
                "negative entity count for '" + std::string(surface) + "'");
  }
  std::string key = Normalize(surface);
  if (key.empty()) throw Error(ErrorCode::kEmptyText, "empty corpus surface");
  if (patient_ids) patient_ids = SortedUnique(std::move(*patient_ids));

  auto it = index_.find(key);
  if (it == index_.end()) {
    index_.emplace(key, records_.size());
    records_.push_back({std::move(key), entity_count, std::move(patient_ids)});
    return;
  }
  CorpusRecord &rec = records_[it->second];
  rec.entity_count += entity_count;
  if (patient_ids) {
    if (rec.patient_ids) {
      std::vector<std::string> merged = *rec.patient_ids;
      merged.insert(merged.end(), patient_ids->begin(), patient_ids->end());
      rec.patient_ids = SortedUnique(std::move(merged));
    } else {
      rec.patient_ids = std::move(patient_ids);
    }
  }
}

const CorpusRecord *AnnotatedCorpus::Find(std::string_view normalized) const {
  auto it = index_.find(normalized);
  return it == index_.end() ? nullptr : &records_[it->second];
}

int64_t AnnotatedCorpus::CountOf(std::string_view normalized) const {
  const CorpusRecord *rec = Find(normalized);
  return rec ? rec->entity_count : 0;
}

}  // namespace ispo
