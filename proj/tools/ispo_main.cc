// Command-line front end for the symptom ontology toolkit.
//
//   ispo import vocab.obo --format obo --source SO --store out/
//   ispo validate --store out/
//   ispo metrics --store out/ --format json
//   ispo coverage --store out/ --corpus hbtcms.tsv --min-rate 0.0001
//   ispo link --store out/ --rules rules.tsv terms.txt
//   ispo serve --store out/ --addr 127.0.0.1:8080
//
// Exit status: 0 success, 1 validation or data failure, 2 usage error.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ispo/core/error.h"
#include "ispo/core/source.h"
#include "ispo/core/taxonomy.h"
#include "ispo/core/text.h"
#include "ispo/coverage/coverage.h"
#include "ispo/curation/curation.h"
#include "ispo/io/canonical.h"
#include "ispo/io/lines.h"
#include "ispo/io/tsv.h"
#include "ispo/io/vocabulary.h"
#include "ispo/linking/linker.h"
#include "ispo/metrics/metrics.h"
#include "ispo/service/api.h"
#include "ispo/service/search.h"
#include "ispo/service/store.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool IsStoreDir(const std::string &path) {
  return fs::is_directory(path) ||
         (!fs::exists(path) && path.find(".jsonl") == std::string::npos);
}

// A store is either a canonical .ispo.jsonl file or a store directory whose
// audit log is replayed over its snapshot.
ispo::Ontology LoadOntology(const std::string &path) {
  if (path.empty()) throw UsageError("--store is required");
  if (fs::is_directory(path)) {
    ispo::service::Store store{fs::path(path)};
    return store.Read([](const ispo::curation::Workspace &ws) { return ws.ontology(); });
  }
  return ispo::io::ImportCanonical(ispo::io::ReadFile(path));
}

std::string ReadInput(const std::string &path) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin),
                       std::istreambuf_iterator<char>());
  }
  return ispo::io::ReadFile(path);
}

void Emit(const json &j) {
  std::cout << j.dump(2, ' ', false, json::error_handler_t::replace) << "\n";
}

void RequireFormat(const std::string &format, std::set<std::string> allowed) {
  if (!allowed.count(format)) throw UsageError("unsupported --format " + format);
}

std::vector<std::string> CommaList(const std::string &text) {
  std::vector<std::string> out;
  for (std::string_view s : ispo::io::Split(text, ',')) {
    if (!s.empty()) out.emplace_back(s);
  }
  return out;
}

ispo::service::HttpServer *g_server = nullptr;

void OnSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Symptom ontology toolkit"};
  app.require_subcommand(1);

  std::string store, format = "text", input;
  auto add_store = [&](CLI::App *cmd) {
    cmd->add_option("--store", store, "Store directory or canonical .jsonl file");
  };

  // import
  std::string import_format = "canonical", import_source = "MANUAL";
  bool seed_categories = false;
  CLI::App *import_cmd = app.add_subcommand("import", "Build a store from a file");
  import_cmd->add_option("input", input, "Canonical, OBO or empty for a fresh store");
  import_cmd->add_option("--format", import_format, "canonical|obo")
      ->check(CLI::IsMember({"canonical", "obo"}));
  import_cmd->add_option("--source", import_source, "Source id for OBO atoms");
  import_cmd->add_flag("--seed-categories", seed_categories,
                       "Start with the 12 top-level categories");
  add_store(import_cmd);

  // export
  std::string out_path;
  CLI::App *export_cmd = app.add_subcommand("export", "Write the canonical form");
  add_store(export_cmd);
  export_cmd->add_option("--out", out_path, "Output file (default stdout)");

  // validate
  CLI::App *validate_cmd = app.add_subcommand("validate", "Check store invariants");
  validate_cmd->add_option("input", input, "Canonical file (instead of --store)");
  add_store(validate_cmd);

  // metrics
  std::string by_source, external_path, xref_path, eligible;
  CLI::App *metrics_cmd = app.add_subcommand("metrics", "Structural and category metrics");
  add_store(metrics_cmd);
  metrics_cmd->add_option("--format", format, "text|json");
  metrics_cmd->add_option("--by-source", by_source, "Count only concepts with atoms from SOURCE");
  metrics_cmd->add_option("--external", external_path, "External vocabulary (OBO)");
  metrics_cmd->add_option("--xrefs", xref_path, "external_id<TAB>cui crossmap");
  metrics_cmd->add_option("--eligible", eligible, "Comma-separated type labels");

  // coverage
  std::string corpus_path, min_rate = "0.0001", bands;
  CLI::App *coverage_cmd = app.add_subcommand("coverage", "Corpus coverage report");
  add_store(coverage_cmd);
  coverage_cmd->add_option("--corpus", corpus_path, "Corpus TSV")->required();
  coverage_cmd->add_option("--min-rate", min_rate, "Minimum occurrence rate");
  coverage_cmd->add_option("--bands", bands, "Comma-separated interior band edges");
  coverage_cmd->add_option("--format", format, "json|tsv");

  // impact
  std::string terms_path;
  CLI::App *impact_cmd = app.add_subcommand("impact", "Standardization impact");
  add_store(impact_cmd);
  impact_cmd->add_option("--corpus", corpus_path, "Corpus TSV with patient ids")->required();
  impact_cmd->add_option("--terms", terms_path, "One input term per line")->required();
  impact_cmd->add_option("--format", format, "json|tsv");

  // link
  std::string rules_path, gold_path;
  double threshold = 0.5, split = 0.8;
  int top_k = 5;
  uint64_t seed = 0;
  CLI::App *link_cmd = app.add_subcommand("link", "Link terms to concepts");
  add_store(link_cmd);
  link_cmd->add_option("input", input, "Terms, one per line (default stdin)");
  link_cmd->add_option("--rules", rules_path, "Mapping rules TSV");
  link_cmd->add_option("--threshold", threshold, "Candidate acceptance threshold")
      ->check(CLI::Range(0.0, 1.0));
  link_cmd->add_option("--top-k", top_k, "Candidates per term")->check(CLI::PositiveNumber);
  link_cmd->add_option("--evaluate", gold_path, "Gold TSV; report split accuracy");
  link_cmd->add_option("--split", split, "Train fraction for --evaluate")
      ->check(CLI::Range(0.0, 1.0));
  link_cmd->add_option("--seed", seed, "Shuffle seed for --evaluate");
  link_cmd->add_option("--format", format, "tsv|json");

  // search
  std::string query, root;
  CLI::App *search_cmd = app.add_subcommand("search", "Synonym-expanded search");
  add_store(search_cmd);
  search_cmd->add_option("query", query, "Query text")->required();
  search_cmd->add_option("--root", root, "Restrict to this subtree");
  search_cmd->add_option("--format", format, "text|json");

  // tasks
  std::string annotators, actor = "cli", state, task_id, proposal_json, reviewer;
  int group_count = 5, per_term = 3;
  bool force = false;
  CLI::App *tasks_cmd = app.add_subcommand("tasks", "Curation tasks on a store directory");
  tasks_cmd->require_subcommand(1);
  add_store(tasks_cmd);
  tasks_cmd->add_option("--actor", actor, "Actor recorded in the audit log");
  CLI::App *tasks_list = tasks_cmd->add_subcommand("list", "List tasks");
  tasks_list->add_option("--state", state, "Open|Consensus|Escalated|Finalized");
  CLI::App *tasks_create = tasks_cmd->add_subcommand("create", "Create a batch");
  tasks_create->add_option("--terms", terms_path, "One term per line")->required();
  tasks_create->add_option("--annotators", annotators, "Comma-separated ids")->required();
  tasks_create->add_option("--groups", group_count, "Group count");
  tasks_create->add_option("--per-term", per_term, "Annotators per term");
  tasks_create->add_option("--seed", seed, "Shuffle seed");
  CLI::App *tasks_reviewer = tasks_cmd->add_subcommand("reviewer", "Register a reviewer");
  tasks_reviewer->add_option("id", reviewer)->required();
  CLI::App *tasks_vote = tasks_cmd->add_subcommand("vote", "Vote as --actor");
  tasks_vote->add_option("task", task_id)->required();
  tasks_vote->add_option("proposal", proposal_json, "JSON proposal")->required();
  CLI::App *tasks_resolve = tasks_cmd->add_subcommand("resolve", "Resolve a task");
  tasks_resolve->add_option("task", task_id)->required();
  tasks_resolve->add_flag("--force", force, "Resolve on two matching votes");
  CLI::App *tasks_finalize = tasks_cmd->add_subcommand("finalize", "Finalize as --actor");
  tasks_finalize->add_option("task", task_id)->required();
  tasks_finalize->add_option("--override", proposal_json, "JSON proposal");

  // serve
  std::string addr = "127.0.0.1:8080";
  CLI::App *serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  add_store(serve_cmd);
  serve_cmd->add_option("--addr", addr, "host:port");
  serve_cmd->add_option("--rules", rules_path, "Mapping rules TSV for /api/link");
  serve_cmd->add_option("--threshold", threshold, "Candidate acceptance threshold");
  serve_cmd->add_option("--top-k", top_k, "Candidates per term");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*import_cmd) {
      if (store.empty()) throw UsageError("--store is required");
      ispo::Ontology ontology;
      if (import_format == "obo") {
        if (input.empty()) throw UsageError("import --format obo needs an input file");
        ispo::io::VocabularyImport im = ispo::io::ToOntology(
            ispo::io::ImportOboSubset(ReadInput(input), import_source), import_source);
        for (const std::string &s : im.skipped_synonyms) {
          std::cerr << "skipped synonym " << s << "\n";
        }
        for (const std::string &id : im.unplaced) std::cerr << "unplaced " << id << "\n";
        ontology = std::move(im.ontology);
      } else if (!input.empty()) {
        ontology = ispo::io::ImportCanonical(ReadInput(input));
      }
      if (seed_categories) ispo::SeedTopCategories(&ontology);
      if (IsStoreDir(store)) {
        ispo::service::Store::Init(store, ontology);
      } else {
        ispo::io::WriteFile(store, ispo::io::ExportCanonical(ontology));
      }
      std::cerr << ontology.active_count() << " concepts written to " << store << "\n";
      return kExitOk;
    }

    if (*export_cmd) {
      const std::string bytes = ispo::io::ExportCanonical(LoadOntology(store));
      if (out_path.empty()) {
        std::cout << bytes;
      } else {
        ispo::io::WriteFile(out_path, bytes);
      }
      return kExitOk;
    }

    if (*validate_cmd) {
      ispo::Ontology ontology;
      if (!input.empty()) {
        // Decode without the import-time validation so every violation is listed.
        try {
          ontology = ispo::io::ImportCanonical(ReadInput(input));
        } catch (const ispo::Error &e) {
          if (e.code() != ispo::ErrorCode::kInvariantViolation) throw;
          std::cout << e.reason() << "\n";
          return kExitFailure;
        }
      } else {
        ontology = LoadOntology(store);
      }
      const std::vector<ispo::Violation> violations = ontology.Validate();
      for (const ispo::Violation &v : violations) {
        std::cout << ispo::ViolationKindName(v.kind) << "\t" << v.subject << "\t"
                  << v.detail << "\n";
      }
      if (!violations.empty()) return kExitFailure;
      std::cout << "ok: " << ontology.active_count() << " active concepts\n";
      return kExitOk;
    }

    if (*metrics_cmd) {
      RequireFormat(format, {"text", "json"});
      const ispo::Ontology ontology = LoadOntology(store);
      json out;
      std::string text;
      if (!external_path.empty()) {
        const ispo::io::ExternalVocabulary vocab = ispo::io::ImportOboSubset(
            ReadInput(external_path), fs::path(external_path).stem().string());
        std::set<ispo::io::TypeLabel> types;
        for (const std::string &t : CommaList(eligible)) {
          std::optional<ispo::io::TypeLabel> label = ispo::io::ParseTypeLabel(t);
          if (!label) throw UsageError("unknown type label " + t);
          types.insert(*label);
        }
        out["external"] = ispo::metrics::ToJson(ispo::metrics::ComputeExternalDistribution(vocab));
        text += ispo::metrics::ToText(ispo::metrics::ComputeExternalDistribution(vocab));
        if (!xref_path.empty()) {
          const ispo::metrics::CrossmapReport r = ispo::metrics::ComputeCrossmap(
              ontology, vocab, ispo::io::ReadXrefTsv(ReadInput(xref_path)), types);
          out["crossmap"] = ispo::metrics::ToJson(r);
          text += "\n" + ispo::metrics::ToText(r);
        }
        bool labeled = false;
        for (const auto &c : vocab.concepts()) labeled = labeled || c.type_label;
        if (labeled) {
          const auto t = ispo::metrics::ComputeTypeDistribution(vocab);
          out["types"] = ispo::metrics::ToJson(t);
          text += "\n" + ispo::metrics::ToText(t);
        }
      } else {
        const auto m = ispo::metrics::ComputeMetrics(ontology);
        const auto d = by_source.empty()
                           ? ispo::metrics::ComputeCategoryDistribution(ontology)
                           : ispo::metrics::ComputeCategoryDistribution(
                                 ontology, ispo::metrics::GroupBy::kAtomSource, by_source);
        out["structure"] = ispo::metrics::ToJson(m);
        out["categories"] = ispo::metrics::ToJson(d);
        text = ispo::metrics::ToText(m) + "\n" + ispo::metrics::ToText(d);
      }
      if (format == "json") {
        Emit(out);
      } else {
        std::cout << text;
      }
      return kExitOk;
    }

    if (*coverage_cmd) {
      if (format == "text") format = "json";
      RequireFormat(format, {"json", "tsv"});
      ispo::coverage::CoverageOptions options;
      options.min_rate = min_rate;
      if (!bands.empty()) options.band_edges = CommaList(bands);
      const auto r = ispo::coverage::ComputeCoverage(
          ispo::io::ReadCorpusTsv(ReadInput(corpus_path),
                                  fs::path(corpus_path).stem().string()),
          LoadOntology(store), options);
      if (format == "json") {
        Emit(ispo::coverage::ToJson(r));
      } else {
        std::cout << ispo::coverage::ToTsv(r);
      }
      return kExitOk;
    }

    if (*impact_cmd) {
      if (format == "text") format = "json";
      RequireFormat(format, {"json", "tsv"});
      const auto r = ispo::coverage::ComputeImpact(
          ispo::io::ReadCorpusTsv(ReadInput(corpus_path)),
          ispo::io::ReadTermList(ReadInput(terms_path)), LoadOntology(store));
      if (format == "json") {
        Emit(ispo::coverage::ToJson(r));
      } else {
        std::cout << ispo::coverage::ToTsv(r);
      }
      return kExitOk;
    }

    if (*link_cmd) {
      if (format == "text") format = "tsv";
      RequireFormat(format, {"json", "tsv"});
      const ispo::Ontology ontology = LoadOntology(store);
      const ispo::linking::DiceCandidateGenerator generator;
      ispo::linking::LinkOptions options{threshold, top_k};
      if (!gold_path.empty()) {
        std::vector<ispo::linking::MappingRule> gold;
        for (const auto &raw : ispo::io::ReadRulesTsv(ReadInput(gold_path))) {
          gold.push_back(ispo::linking::ResolveRule(raw, ontology));
        }
        ispo::linking::EvaluationOptions eval{split, seed, options};
        Emit(ispo::linking::ToJson(
            ispo::linking::EvaluateLinking(gold, ontology, generator, eval)));
        return kExitOk;
      }
      ispo::linking::RuleSet rules;
      if (!rules_path.empty()) {
        rules = ispo::linking::ResolveRules(
            ispo::io::ReadRulesTsv(ReadInput(rules_path)), ontology);
      }
      json results = json::array();
      for (const std::string &term : ispo::io::ReadTermList(ReadInput(input))) {
        const auto r = ispo::linking::Link(term, ontology, rules, generator, options);
        if (format == "tsv") {
          std::cout << ispo::linking::FormatLinkTsv(r) << "\n";
        } else {
          results.push_back(ispo::linking::ToJson(r));
        }
      }
      if (format == "json") Emit(results);
      return kExitOk;
    }

    if (*search_cmd) {
      RequireFormat(format, {"text", "json"});
      const ispo::Ontology ontology = LoadOntology(store);
      std::optional<ispo::ConceptId> scope;
      if (!root.empty()) scope = root;
      const auto results = ispo::service::Search(ontology, query, scope);
      if (format == "json") {
        json out = json::array();
        for (const auto &r : results) out.push_back(ispo::service::ToJson(r, ontology));
        Emit(out);
      } else {
        for (const auto &r : results) {
          std::cout << r.cui << "\t" << ontology.Get(r.cui).code.str() << "\t"
                    << ontology.PreferredText(r.cui) << "\t"
                    << ispo::service::MatchKindName(r.match_kind) << "\t"
                    << r.matched_term << (r.exact ? "\texact" : "") << "\n";
        }
      }
      return kExitOk;
    }

    if (*tasks_cmd) {
      if (store.empty() || !fs::is_directory(store)) {
        throw UsageError("tasks needs --store DIR");
      }
      ispo::service::Store s{fs::path(store)};
      const std::string at = ispo::service::UtcNow();
      json out;
      if (*tasks_list) {
        std::optional<ispo::curation::TaskState> filter;
        if (!state.empty()) filter = ispo::curation::ParseTaskState(state);
        out = s.Read([&](const ispo::curation::Workspace &ws) {
          json list = json::array();
          for (const auto *t : ws.tasks().List(filter)) list.push_back(ispo::curation::ToJson(*t));
          return list;
        });
      } else if (*tasks_create) {
        ispo::curation::BatchOptions options{group_count, per_term, seed};
        const std::vector<std::string> terms = ispo::io::ReadTermList(ReadInput(terms_path));
        out = s.Write([&](ispo::curation::Workspace &ws) {
          return json(ws.CreateBatch(actor, terms, CommaList(annotators), options, at));
        });
      } else if (*tasks_reviewer) {
        s.Write([&](ispo::curation::Workspace &ws) { ws.AddReviewer(actor, reviewer, at); });
        out = {{"reviewer", reviewer}};
      } else if (*tasks_vote || *tasks_finalize) {
        std::optional<ispo::curation::Proposal> proposal;
        if (!proposal_json.empty()) {
          try {
            proposal = ispo::curation::ProposalFromJson(json::parse(proposal_json));
          } catch (const json::parse_error &e) {
            throw UsageError(std::string("proposal is not JSON: ") + e.what());
          }
        }
        out = s.Write([&](ispo::curation::Workspace &ws) {
          return *tasks_vote
                     ? ispo::curation::ToJson(ws.SubmitVote(actor, task_id, *proposal, at))
                     : ispo::curation::ToJson(ws.Finalize(actor, task_id, proposal, at));
        });
      } else if (*tasks_resolve) {
        out = s.Write([&](ispo::curation::Workspace &ws) {
          return ispo::curation::ToJson(ws.Resolve(actor, task_id, force, at));
        });
      }
      Emit(out);
      return kExitOk;
    }

    if (*serve_cmd) {
      if (store.empty() || !fs::is_directory(store)) {
        throw UsageError("serve needs --store DIR (create one with import)");
      }
      const size_t colon = addr.rfind(':');
      if (colon == std::string::npos) throw UsageError("--addr must be host:port");
      const std::string host = addr.substr(0, colon);
      int port = 0;
      try {
        port = std::stoi(addr.substr(colon + 1));
      } catch (const std::exception &) {
        throw UsageError("--addr must be host:port");
      }
      ispo::service::Store s{fs::path(store)};
      ispo::service::ServiceOptions options;
      options.link = {threshold, top_k};
      if (!rules_path.empty()) {
        const ispo::Ontology snapshot =
            s.Read([](const ispo::curation::Workspace &ws) { return ws.ontology(); });
        options.rules = ispo::linking::ResolveRules(
            ispo::io::ReadRulesTsv(ReadInput(rules_path)), snapshot);
      }
      ispo::service::ApiRouter router(s, std::move(options));
      ispo::service::HttpServer server(router);
      const int bound = server.Bind(host, port);
      g_server = &server;
      std::signal(SIGINT, OnSignal);
      std::signal(SIGTERM, OnSignal);
      std::cerr << "listening on " << host << ":" << bound << "\n";
      server.Run();
      g_server = nullptr;
      return kExitOk;
    }
  } catch (const UsageError &e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ispo::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ispo::ErrorCode::kInvalidArgument ? kExitUsage : kExitFailure;
  }
  return kExitUsage;
}
