#include "ispo/service/api.h"

#include <chrono>
#include <ctime>

#include "ispo/core/source.h"
#include "ispo/core/text.h"
#include "ispo/coverage/coverage.h"
#include "ispo/io/lines.h"
#include "ispo/io/tsv.h"
#include "ispo/metrics/metrics.h"
#include "ispo/service/search.h"

namespace ispo::service {

using curation::Workspace;
using nlohmann::json;

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownConcept:
    case ErrorCode::kUnknownAtom:
    case ErrorCode::kUnknownTask:
    case ErrorCode::kUnknownScopeRoot:
      return 404;
    case ErrorCode::kNotAssigned:
    case ErrorCode::kUnknownReviewer:
      return 403;
    case ErrorCode::kCycle:
    case ErrorCode::kHierarchyConflict:
    case ErrorCode::kHasChildren:
    case ErrorCode::kPreferredAtom:
    case ErrorCode::kDuplicateRootLabel:
    case ErrorCode::kSharedSynonym:
    case ErrorCode::kAmbiguousTerm:
    case ErrorCode::kAlreadyVoted:
    case ErrorCode::kTaskClosed:
    case ErrorCode::kVotesPending:
    case ErrorCode::kNotResolved:
      return 409;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParseError:
    case ErrorCode::kEmptyLabel:
    case ErrorCode::kEmptyText:
    case ErrorCode::kEmptyQuery:
    case ErrorCode::kEmptyTerms:
    case ErrorCode::kEmptyCorpus:
    case ErrorCode::kMissingSampleSize:
    case ErrorCode::kNegativeCount:
    case ErrorCode::kTooFewAnnotators:
      return 400;
    case ErrorCode::kIoError:
    case ErrorCode::kCorruptStore:
      return 500;
    default:
      return 422;
  }
}

std::string UtcNow() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const std::time_t t = system_clock::to_time_t(now);
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

namespace {

struct Reply {
  int status = 200;
  json body;
  int64_t version = 0;
};

Error BadRequest(const std::string &message) {
  return Error(ErrorCode::kInvalidArgument, message);
}

json ParseBody(const ApiRequest &req) {
  if (req.body.empty()) return json::object();
  json j;
  try {
    j = json::parse(req.body);
  } catch (const json::parse_error &e) {
    throw BadRequest(std::string("body is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw BadRequest("body must be a JSON object");
  return j;
}

std::string Str(const json &body, const char *name) {
  if (!body.contains(name) || !body[name].is_string()) {
    throw BadRequest(std::string("field '") + name + "' must be a string");
  }
  return body[name].get<std::string>();
}

std::optional<std::string> OptStr(const json &body, const char *name) {
  if (!body.contains(name) || body[name].is_null()) return std::nullopt;
  return Str(body, name);
}

int64_t ParseInt(const std::string &text, const char *name) {
  try {
    size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(name);
    return v;
  } catch (const std::exception &) {
    throw BadRequest(std::string("parameter '") + name + "' must be an integer");
  }
}

std::optional<std::string> QueryParam(const ApiRequest &req, const char *name) {
  auto it = req.query.find(name);
  if (it == req.query.end()) return std::nullopt;
  return it->second;
}

std::string Actor(const ApiRequest &req) {
  auto it = req.headers.find("x-actor");
  return it == req.headers.end() || it->second.empty() ? "anonymous" : it->second;
}

Language LanguageOf(const json &body, const char *name, const std::string &text) {
  if (std::optional<std::string> lang = OptStr(body, name)) return ParseLanguage(*lang);
  return DetectLanguage(Normalize(text));
}

std::vector<std::string> Segments(const std::string &path) {
  std::vector<std::string> out;
  for (std::string_view s : io::Split(path, '/')) {
    if (!s.empty()) out.emplace_back(s);
  }
  return out;
}

json TaskList(const std::vector<const curation::MappingTask *> &tasks) {
  json out = json::array();
  for (const curation::MappingTask *t : tasks) out.push_back(curation::ToJson(*t));
  return out;
}

}  // namespace

ApiRouter::ApiRouter(Store &store, ServiceOptions options)
    : store_(store),
      options_(std::move(options)),
      generator_(std::make_unique<linking::DiceCandidateGenerator>()) {
  if (!options_.clock) options_.clock = UtcNow;
}

ApiResponse ApiRouter::Handle(const ApiRequest &req) const {
  const std::vector<std::string> seg = Segments(req.path);
  const std::string &m = req.method;
  const std::string actor = Actor(req);

  auto read = [&](auto fn) {
    return store_.Read([&](const Workspace &ws) {
      Reply r;
      r.body = fn(ws);
      r.version = ws.version();
      return r;
    });
  };
  auto write = [&](int status, auto fn) {
    const std::string at = options_.clock();
    return store_.Write([&](Workspace &ws) {
      Reply r;
      r.status = status;
      r.body = fn(ws, at);
      r.version = ws.version();
      return r;
    });
  };
  auto not_found = [&]() {
    Reply r;
    r.status = 404;
    r.body = {{"error", "NotFound"}, {"message", m + " " + req.path}};
    r.version = store_.version();
    return r;
  };
  auto method_not_allowed = [&]() {
    Reply r;
    r.status = 405;
    r.body = {{"error", "MethodNotAllowed"}, {"message", m + " " + req.path}};
    r.version = store_.version();
    return r;
  };

  Reply reply;
  try {
    if (seg.empty() || seg[0] != "api") {
      reply = not_found();
    } else if (seg.size() == 2 && seg[1] == "roots") {
      if (m != "GET") {
        reply = method_not_allowed();
      } else {
        reply = read([&](const Workspace &ws) {
          json out = json::array();
          for (const ConceptId &cui : ws.ontology().Roots()) {
            out.push_back(ConceptSummary(ws.ontology(), cui));
          }
          return out;
        });
      }
    } else if (seg.size() == 2 && seg[1] == "concepts") {
      if (m != "POST") {
        reply = method_not_allowed();
      } else {
        const json body = ParseBody(req);
        const std::string label = Str(body, "label");
        const Language lang = LanguageOf(body, "language", label);
        const std::optional<ConceptId> parent = OptStr(body, "parent");
        const std::string source =
            OptStr(body, "source").value_or(std::string(kManualSource));
        reply = write(201, [&](Workspace &ws, const std::string &at) {
          ConceptId cui = ws.CreateConcept(actor, label, lang, parent, source, at);
          return ConceptDetail(ws.ontology(), cui);
        });
      }
    } else if (seg.size() >= 3 && seg[1] == "concepts") {
      const ConceptId cui = seg[2];
      if (seg.size() == 3) {
        if (m == "GET") {
          reply = read([&](const Workspace &ws) {
            return ConceptDetail(ws.ontology(), cui);
          });
        } else if (m == "PATCH") {
          const json body = ParseBody(req);
          const int ops = body.contains("parent") + body.contains("label") +
                          body.contains("merge_into");
          if (ops != 1) {
            throw BadRequest("PATCH takes exactly one of parent, label, merge_into");
          }
          reply = write(200, [&](Workspace &ws, const std::string &at) {
            if (body.contains("parent")) {
              auto codes = ws.Reparent(actor, cui, Str(body, "parent"), at);
              json out = ConceptDetail(ws.ontology(), cui);
              out["changed_codes"] = codes;
              return out;
            }
            if (body.contains("label")) {
              const std::string label = Str(body, "label");
              ws.Relabel(actor, cui, label, LanguageOf(body, "language", label), at);
              return ConceptDetail(ws.ontology(), cui);
            }
            const ConceptId keep =
                ws.Merge(actor, Str(body, "merge_into"), cui, at);
            return ConceptDetail(ws.ontology(), keep);
          });
        } else if (m == "DELETE") {
          reply = write(200, [&](Workspace &ws, const std::string &at) {
            ws.DeleteConcept(actor, cui, at);
            return json{{"cui", cui}, {"status", "retired"}};
          });
        } else {
          reply = method_not_allowed();
        }
      } else if (seg.size() == 4 && seg[3] == "children") {
        if (m != "GET") {
          reply = method_not_allowed();
        } else {
          reply = read([&](const Workspace &ws) {
            const Ontology &o = ws.ontology();
            json out = json::array();
            for (const ConceptId &c : o.Children(o.Get(cui).cui)) {
              out.push_back(ConceptSummary(o, c));
            }
            return out;
          });
        }
      } else if (seg.size() == 4 && seg[3] == "neighborhood") {
        if (m != "GET") {
          reply = method_not_allowed();
        } else {
          const std::optional<std::string> r = QueryParam(req, "radius");
          const int radius = r ? static_cast<int>(ParseInt(*r, "radius")) : 1;
          reply = read([&](const Workspace &ws) {
            const Ontology &o = ws.ontology();
            return ToJson(Neighborhood(o, o.Get(cui).cui, radius), o);
          });
        }
      } else if (seg.size() == 4 && seg[3] == "terms") {
        if (m != "POST") {
          reply = method_not_allowed();
        } else {
          const json body = ParseBody(req);
          const std::string text = Str(body, "text");
          const Language lang = LanguageOf(body, "language", text);
          const std::string source =
              OptStr(body, "source").value_or(std::string(kManualSource));
          const std::optional<std::string> code = OptStr(body, "source_code");
          reply = write(201, [&](Workspace &ws, const std::string &at) {
            AddTermResult r = ws.AddTerm(actor, cui, text, lang, source, code, at);
            json out = ConceptDetail(ws.ontology(), r.atom.cui);
            out["atom"] = r.atom.aui;
            out["created"] = r.created;
            return out;
          });
          if (!reply.body.value("created", true)) reply.status = 200;
        }
      } else {
        reply = not_found();
      }
    } else if (seg.size() == 3 && seg[1] == "terms") {
      if (m != "DELETE") {
        reply = method_not_allowed();
      } else {
        const AtomId aui = seg[2];
        reply = write(200, [&](Workspace &ws, const std::string &at) {
          const Atom *atom = ws.ontology().FindAtom(aui);
          if (atom == nullptr) throw Error(ErrorCode::kUnknownAtom, aui);
          const ConceptId owner = atom->cui;
          ws.RemoveAtom(actor, aui, at);
          return ConceptDetail(ws.ontology(), owner);
        });
      }
    } else if (seg.size() == 2 && seg[1] == "search") {
      if (m != "GET") {
        reply = method_not_allowed();
      } else {
        const std::string q = QueryParam(req, "q").value_or("");
        const std::string scope = QueryParam(req, "scope").value_or("");
        std::optional<ConceptId> root = QueryParam(req, "root");
        if (root && root->empty()) root.reset();
        if (scope == "subtree" && !root) {
          throw BadRequest("scope=subtree needs a root");
        }
        if (!scope.empty() && scope != "global" && scope != "subtree") {
          throw BadRequest("scope must be global or subtree");
        }
        if (scope == "global") root.reset();
        reply = read([&](const Workspace &ws) {
          json results = json::array();
          for (const SearchResult &r : Search(ws.ontology(), q, root)) {
            results.push_back(ToJson(r, ws.ontology()));
          }
          return json{{"query", Normalize(q)}, {"results", std::move(results)}};
        });
      }
    } else if (seg.size() == 2 && seg[1] == "link") {
      if (m != "POST") {
        reply = method_not_allowed();
      } else {
        const json body = ParseBody(req);
        if (!body.contains("terms") || !body["terms"].is_array()) {
          throw BadRequest("field 'terms' must be an array of strings");
        }
        linking::LinkOptions opts = options_.link;
        if (body.contains("threshold")) opts.threshold = body["threshold"].get<double>();
        if (body.contains("k")) opts.k = body["k"].get<int>();
        reply = read([&](const Workspace &ws) {
          json results = json::array();
          for (const json &t : body["terms"]) {
            if (!t.is_string()) throw BadRequest("terms must be strings");
            results.push_back(linking::ToJson(linking::Link(
                t.get<std::string>(), ws.ontology(), options_.rules, *generator_,
                opts)));
          }
          return json{{"results", std::move(results)}};
        });
      }
    } else if (seg.size() == 2 && seg[1] == "metrics") {
      if (m != "GET") {
        reply = method_not_allowed();
      } else {
        reply = read([&](const Workspace &ws) {
          return json{
              {"structure", metrics::ToJson(metrics::ComputeMetrics(ws.ontology()))},
              {"categories", metrics::ToJson(metrics::ComputeCategoryDistribution(
                                 ws.ontology()))}};
        });
      }
    } else if (seg.size() == 2 && seg[1] == "coverage") {
      if (m != "POST") {
        reply = method_not_allowed();
      } else {
        coverage::CoverageOptions opts;
        std::string tsv;
        const bool is_json = !req.body.empty() && req.body.front() == '{';
        if (is_json) {
          const json body = ParseBody(req);
          tsv = Str(body, "corpus");
          if (body.contains("min_rate")) {
            opts.min_rate = body["min_rate"].is_string()
                                ? body["min_rate"].get<std::string>()
                                : body["min_rate"].dump();
          }
          if (body.contains("bands")) {
            opts.band_edges.clear();
            for (const json &b : body["bands"]) {
              opts.band_edges.push_back(b.is_string() ? b.get<std::string>() : b.dump());
            }
          }
        } else {
          tsv = req.body;
          if (auto v = QueryParam(req, "min_rate")) opts.min_rate = *v;
          if (auto v = QueryParam(req, "bands")) {
            opts.band_edges.clear();
            for (std::string_view b : io::Split(*v, ',')) opts.band_edges.emplace_back(b);
          }
        }
        const AnnotatedCorpus corpus = io::ReadCorpusTsv(tsv);
        reply = read([&](const Workspace &ws) {
          return coverage::ToJson(coverage::ComputeCoverage(corpus, ws.ontology(), opts));
        });
      }
    } else if (seg.size() == 2 && seg[1] == "reviewers") {
      if (m != "POST") {
        reply = method_not_allowed();
      } else {
        const json body = ParseBody(req);
        const std::string reviewer = Str(body, "reviewer");
        reply = write(201, [&](Workspace &ws, const std::string &at) {
          ws.AddReviewer(actor, reviewer, at);
          return json{{"reviewer", reviewer}};
        });
      }
    } else if (seg.size() == 2 && seg[1] == "tasks") {
      if (m == "GET") {
        std::optional<curation::TaskState> state;
        if (auto s = QueryParam(req, "state"); s && !s->empty()) {
          state = curation::ParseTaskState(*s);
        }
        reply = read([&](const Workspace &ws) {
          return json{{"tasks", TaskList(ws.tasks().List(state))}};
        });
      } else if (m == "POST") {
        const json body = ParseBody(req);
        if (!body.contains("terms") || !body["terms"].is_array() ||
            !body.contains("annotators") || !body["annotators"].is_array()) {
          throw BadRequest("fields 'terms' and 'annotators' must be arrays");
        }
        curation::BatchOptions opts;
        try {
          opts.group_count = body.value("group_count", opts.group_count);
          opts.per_term = body.value("per_term", opts.per_term);
          opts.seed = body.value("seed", opts.seed);
        } catch (const json::exception &) {
          throw BadRequest("group_count, per_term and seed must be integers");
        }
        std::vector<std::string> terms, annotators;
        try {
          terms = body["terms"].get<std::vector<std::string>>();
          annotators = body["annotators"].get<std::vector<std::string>>();
        } catch (const json::exception &) {
          throw BadRequest("terms and annotators must be strings");
        }
        reply = write(201, [&](Workspace &ws, const std::string &at) {
          std::vector<const curation::MappingTask *> created;
          for (const std::string &id : ws.CreateBatch(actor, terms, annotators, opts, at)) {
            created.push_back(&ws.tasks().Get(id));
          }
          return json{{"tasks", TaskList(created)}};
        });
      } else {
        reply = method_not_allowed();
      }
    } else if (seg.size() == 4 && seg[1] == "tasks") {
      const std::string id = seg[2];
      const std::string &op = seg[3];
      if (op != "votes" && op != "resolve" && op != "finalize") {
        reply = not_found();
      } else if (m != "POST") {
        reply = method_not_allowed();
      } else {
        const json body = ParseBody(req);
        if (op == "votes") {
          if (!body.contains("proposal")) throw BadRequest("missing 'proposal'");
          const curation::Proposal proposal = curation::ProposalFromJson(body["proposal"]);
          const std::string annotator = OptStr(body, "annotator").value_or(actor);
          reply = write(201, [&](Workspace &ws, const std::string &at) {
            return curation::ToJson(ws.SubmitVote(annotator, id, proposal, at));
          });
        } else if (op == "resolve") {
          const bool force = body.value("force", false);
          reply = write(200, [&](Workspace &ws, const std::string &at) {
            return curation::ToJson(ws.Resolve(actor, id, force, at));
          });
        } else {
          std::optional<curation::Proposal> override_proposal;
          if (body.contains("override") && !body["override"].is_null()) {
            override_proposal = curation::ProposalFromJson(body["override"]);
          }
          const std::string reviewer = OptStr(body, "reviewer").value_or(actor);
          reply = write(200, [&](Workspace &ws, const std::string &at) {
            return curation::ToJson(ws.Finalize(reviewer, id, override_proposal, at));
          });
        }
      }
    } else if (seg.size() == 2 && seg[1] == "audit") {
      if (m != "GET") {
        reply = method_not_allowed();
      } else {
        const std::optional<std::string> s = QueryParam(req, "since");
        const int64_t since = s && !s->empty() ? ParseInt(*s, "since") : 0;
        reply = read([&](const Workspace &ws) {
          json events = json::array();
          for (const curation::AuditEvent &e : ws.Since(since)) {
            events.push_back({{"seq", e.seq},
                              {"actor", e.actor},
                              {"action", e.action},
                              {"payload", e.payload},
                              {"at", e.at}});
          }
          return json{{"events", std::move(events)}};
        });
      }
    } else {
      reply = not_found();
    }
  } catch (const Error &e) {
    reply.status = HttpStatusFor(e.code());
    reply.body = {{"error", ErrorName(e.code())}, {"message", e.reason()}};
    reply.version = store_.version();
  } catch (const json::exception &e) {
    reply.status = 400;
    reply.body = {{"error", ErrorName(ErrorCode::kInvalidArgument)},
                  {"message", e.what()}};
    reply.version = store_.version();
  }

  ApiResponse out;
  out.status = reply.status;
  out.body = reply.body.dump(-1, ' ', false, json::error_handler_t::replace);
  out.headers["X-Store-Version"] = std::to_string(reply.version);
  out.headers["ETag"] = "\"v" + std::to_string(reply.version) + "\"";
  return out;
}

}  // namespace ispo::service
