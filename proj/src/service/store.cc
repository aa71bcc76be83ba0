#include "ispo/service/store.h"

#include <unistd.h>

#include "ispo/core/error.h"
#include "ispo/io/canonical.h"
#include "ispo/io/lines.h"

namespace ispo::service {

namespace fs = std::filesystem;

Store::Store(Ontology base) : workspace_(std::move(base)) {}

Store::~Store() {
  if (audit_ != nullptr) std::fclose(audit_);
}

void Store::Init(const fs::path &dir, const Ontology &base) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, dir.string() + ": " + ec.message());
  if (fs::exists(dir / kBaseFile) || fs::exists(dir / kAuditFile)) {
    throw Error(ErrorCode::kIoError, dir.string() + " already holds a store");
  }
  io::WriteFile(dir / kBaseFile, io::ExportCanonical(base));
  io::WriteFile(dir / kAuditFile, "");
}

Store::Store(const fs::path &dir) : dir_(dir) {
  const fs::path base_path = dir / kBaseFile;
  const fs::path audit_path = dir / kAuditFile;
  try {
    if (!fs::exists(base_path)) {
      throw Error(ErrorCode::kIoError, base_path.string() + " is missing");
    }
    Ontology base = io::ImportCanonical(io::ReadFile(base_path));
    std::vector<curation::AuditEvent> events;
    if (fs::exists(audit_path)) {
      const std::string log = io::ReadFile(audit_path);
      if (!log.empty() && log.back() != '\n') {
        throw Error(ErrorCode::kParseError, "audit log ends mid-line");
      }
      events = curation::ParseAuditLog(log);
    }
    workspace_ = curation::Replay(events, std::move(base));
  } catch (const Error &e) {
    throw Error(ErrorCode::kCorruptStore, dir.string() + ": " + e.what());
  }
  audit_ = std::fopen(audit_path.c_str(), "a");
  if (audit_ == nullptr) {
    throw Error(ErrorCode::kIoError, "cannot append to " + audit_path.string());
  }
}

int64_t Store::version() const {
  std::shared_lock lock = SharedLock();
  return workspace_.version();
}

void Store::Persist(int64_t since) {
  if (audit_ == nullptr) return;
  const std::vector<curation::AuditEvent> &log = workspace_.log();
  bool wrote = false;
  for (size_t i = static_cast<size_t>(since); i < log.size(); ++i) {
    const std::string line = curation::ToJsonLine(log[i]) + "\n";
    if (std::fwrite(line.data(), 1, line.size(), audit_) != line.size()) {
      throw Error(ErrorCode::kIoError, "audit log write failed");
    }
    wrote = true;
  }
  if (!wrote) return;
  if (std::fflush(audit_) != 0 || ::fsync(::fileno(audit_)) != 0) {
    throw Error(ErrorCode::kIoError, "audit log sync failed");
  }
}

}  // namespace ispo::service
