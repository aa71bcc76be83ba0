#ifndef ISPO_CORE_CORPUS_H_
#define ISPO_CORE_CORPUS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ispo {

struct CorpusRecord {
  std::string surface;  // normalized
  int64_t entity_count = 0;
  // Sorted, unique. Absent when the source carries no per-patient incidence.
  std::optional<std::vector<std::string>> patient_ids;

  bool operator==(const CorpusRecord &) const = default;
};

// Surface forms of annotated symptom mentions with occurrence counts.
class AnnotatedCorpus {
 public:
  AnnotatedCorpus() = default;
  AnnotatedCorpus(std::string name, int64_t sample_size)
      : name_(std::move(name)), sample_size_(sample_size) {}

  // Normalizes `surface` and merges into an existing record with the same
  // key: counts add, patient sets union. Throws NegativeCount / EmptyText.
  void Add(std::string_view surface, int64_t entity_count,
           std::optional<std::vector<std::string>> patient_ids = std::nullopt);

  const std::string &name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  int64_t sample_size() const { return sample_size_; }
  void set_sample_size(int64_t n) { sample_size_ = n; }

  // Records in first-appearance order.
  const std::vector<CorpusRecord> &records() const { return records_; }
  const CorpusRecord *Find(std::string_view normalized) const;
  int64_t CountOf(std::string_view normalized) const;
  bool empty() const { return records_.empty(); }

  bool operator==(const AnnotatedCorpus &other) const {
    return name_ == other.name_ && sample_size_ == other.sample_size_ &&
           records_ == other.records_;
  }

 private:
  std::string name_;
  int64_t sample_size_ = 0;
  std::vector<CorpusRecord> records_;
  std::map<std::string, size_t, std::less<>> index_;
};

}  // namespace ispo

#endif  // ISPO_CORE_CORPUS_H_
