#include "harness/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <ctime>
#include <optional>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "core/error.hpp"
#include "gateway/sha256.hpp"
#include "ngram/ngram.hpp"
#include "semantic/gateway_backend.hpp"
#include "semantic/mock_backend.hpp"

namespace captem::harness {

MetricSet MetricSet::parse(std::string_view list) {
  MetricSet m;
  bool any = false;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    auto name = list.substr(start, comma == std::string_view::npos ? list.size() - start
                                                                   : comma - start);
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    if (name == "tem") {
      m.tem = true;
    } else if (name == "autodq") {
      m.autodq = true;
    } else if (name == "cider") {
      m.cider = true;
    } else if (name == "rougel" || name == "rouge_l" || name == "rouge-l") {
      m.rouge_l = true;
    } else if (name == "judge") {
      m.judge = true;
    } else if (!name.empty()) {
      throw Error(ErrorCode::kConfig, fmt::format("unknown metric '{}'", name));
    }
    any = any || !name.empty();
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (!any) throw Error(ErrorCode::kConfig, "metric list is empty");
  return m;
}

std::vector<std::string> MetricSet::names() const {
  std::vector<std::string> out;
  if (tem) out.emplace_back("tem");
  if (autodq) out.emplace_back("autodq");
  if (cider) out.emplace_back("cider");
  if (rouge_l) out.emplace_back("rougel");
  if (judge) out.emplace_back("judge");
  return out;
}

std::unique_ptr<semantic::SemanticBackend> make_backend(std::string_view kind,
                                                        const HarnessConfig& config) {
  if (kind == "mock") return std::make_unique<semantic::MockBackend>();
  if (kind == "gateway") {
    auto templates = config.template_dir.empty()
                         ? semantic::TemplateSet::builtin()
                         : semantic::TemplateSet::load_dir(config.template_dir);
    return std::make_unique<semantic::GatewayBackend>(
        std::make_shared<gateway::Gateway>(config.gateway), std::move(templates));
  }
  throw Error(ErrorCode::kConfig, fmt::format("unknown backend '{}' (mock|gateway)", kind));
}

std::string default_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"); sde && *sde) {
    t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string config_hash(const HarnessConfig& config, const semantic::SemanticBackend& backend,
                        const EvalOptions& options) {
  std::string text = config.canonical();
  text += "backend=" + backend.identity() + "\n";
  for (const auto& t : backend.template_versions()) {
    text += fmt::format("template={}@{}\n", t.name, t.version);
  }
  text += fmt::format("metrics={}\nalign={}\n", fmt::join(options.metrics.names(), ","),
                      options.align ? 1 : 0);
  return gateway::sha256_hex(text);
}

namespace {

struct Shared {
  const semantic::SemanticBackend& backend;
  const ngram::IdfTable* idf;
  const HarnessConfig& config;
  const EvalOptions& options;
  std::atomic<bool> backend_down{false};
};

void record_error(PairRecord& rec, const std::string& metric, const Error& e) {
  rec.errors.push_back({metric, std::string(error_code_name(e.code())), e.what()});
}

// Runs `fn`; on failure records one error per listed metric.
template <typename Fn>
bool guarded(Shared& sh, PairRecord& rec, std::initializer_list<const char*> metrics, Fn&& fn) {
  if (sh.backend_down.load()) {
    const Error skipped(ErrorCode::kBackendUnavailable,
                        "skipped: backend became unavailable earlier in the run");
    for (const char* m : metrics) record_error(rec, m, skipped);
    return false;
  }
  try {
    fn();
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kBackendUnavailable) sh.backend_down = true;
    for (const char* m : metrics) record_error(rec, m, e);
  } catch (const std::exception& e) {
    for (const char* m : metrics) record_error(rec, m, Error(ErrorCode::kInternal, e.what()));
  }
  return false;
}

PairRecord score_pair(const CaptionPair& pair, Shared& sh) {
  PairRecord rec;
  rec.id = pair.id;
  const MetricSet& ms = sh.options.metrics;

  if (ms.needs_backend()) {
    std::string text = pair.prediction;
    bool text_ok = true;
    if (sh.options.align) {
      text_ok = guarded(sh, rec, {"align"},
                        [&] { text = sh.backend.align_format(pair.prediction, pair.reference); });
      if (!text_ok) {
        const Error e(ErrorCode::kBackendUnavailable, "format alignment failed");
        for (const auto& name : ms.names()) {
          if (name == "tem" || name == "autodq" || name == "judge") record_error(rec, name, e);
        }
      }
    }
    if (text_ok && ms.needs_events()) {
      const auto run = [&] {
        const auto gen = sh.backend.extract_events(text, SourceRole::kGenerated);
        const auto ref = sh.backend.extract_events(pair.reference, SourceRole::kReference);
        const MatchMatrix match = sh.backend.classify_relations(gen, ref);
        if (match.rows() != gen.size() || match.cols() != ref.size()) {
          throw Error(ErrorCode::kMalformedBackendReply, "relation matrix has wrong shape");
        }
        const TemScore score = tem_score(match);
        if (ms.tem) rec.tem = TemRecord{score, gen.size(), ref.size()};
        if (ms.autodq) rec.autodq_f = score.f_measure;
      };
      if (ms.tem && ms.autodq) {
        guarded(sh, rec, {"tem", "autodq"}, run);
      } else {
        guarded(sh, rec, {ms.tem ? "tem" : "autodq"}, run);
      }
    }
    if (text_ok && ms.judge) {
      guarded(sh, rec, {"judge"}, [&] { rec.judge = sh.backend.judge_scores(text, pair.reference); });
    }
  }

  if (ms.cider || ms.rouge_l) {
    const auto gen = ngram::tokenize(pair.prediction);
    const auto ref = ngram::tokenize(pair.reference);
    if (ms.cider) rec.cider = ngram::cider(gen, ref, *sh.idf, sh.config.cider_scale);
    if (ms.rouge_l) rec.rouge_l = ngram::rouge_l(gen, ref, sh.config.rouge_beta);
  }
  return rec;
}

}  // namespace

MetricReport run_eval(const std::vector<CaptionPair>& pairs,
                      const std::vector<std::string>& reference_corpus,
                      const semantic::SemanticBackend& backend, const HarnessConfig& config,
                      const EvalOptions& options) {
  config.validate();
  std::optional<ngram::IdfTable> idf;
  if (options.metrics.cider) {
    std::vector<ngram::TokenSequence> docs;
    docs.reserve(reference_corpus.size());
    for (const auto& r : reference_corpus) docs.push_back(ngram::tokenize(r));
    idf = ngram::IdfTable::build(docs);
  }

  Shared shared{backend, idf ? &*idf : nullptr, config, options};
  MetricReport report;
  report.pairs.resize(pairs.size());

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < pairs.size(); i = next.fetch_add(1)) {
      report.pairs[i] = score_pair(pairs[i], shared);
    }
  };
  const std::size_t n_workers = std::min(config.workers, std::max<std::size_t>(1, pairs.size()));
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();

  report.meta.tool_version = std::string(kToolVersion);
  report.meta.backend = backend.identity();
  report.meta.config_hash = config_hash(config, backend, options);
  report.meta.templates = backend.template_versions();
  report.meta.metrics = options.metrics.names();
  report.meta.align = options.align;
  report.meta.timestamp = options.timestamp.empty() ? default_timestamp() : options.timestamp;
  report.recompute_aggregates();
  return report;
}

MetricReport run_eval_files(const std::filesystem::path& predictions,
                            const std::filesystem::path& references,
                            const semantic::SemanticBackend& backend,
                            const HarnessConfig& config, const EvalOptions& options) {
  const auto preds = read_text_jsonl(predictions, "prediction");
  const auto refs = read_text_jsonl(references, "reference", /*allow_empty=*/false);
  const auto pairs = join_pairs(preds, refs);
  std::vector<std::string> corpus;
  corpus.reserve(refs.size());
  for (const auto& r : refs) corpus.push_back(r.text);
  return run_eval(pairs, corpus, backend, config, options);
}

}  // namespace captem::harness
