#include "xlnews/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <unordered_set>

namespace xlnews {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path resolve(const json& j, const char* key, const fs::path& base) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  fs::path p = it->get<std::string>();
  return p.is_relative() && !base.empty() ? base / p : p;
}

const fs::path& require_path(const fs::path& p, const char* what) {
  if (p.empty()) throw ConfigError(std::string("config is missing the \"") + what + "\" path");
  return p;
}

// Output paths get their parent directory created.
const fs::path& output_path(const fs::path& p, const char* what) {
  require_path(p, what);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

const fs::path& require_existing(const fs::path& p, const char* what) {
  require_path(p, what);
  if (!fs::exists(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
  return p;
}

std::vector<TokenizedDoc> tokenize_all(std::span<const NewsArticle> articles) {
  std::vector<TokenizedDoc> docs;
  docs.reserve(articles.size());
  for (const auto& a : articles) docs.push_back(tokenize(a));
  return docs;
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    PipelineConfig cfg;
    cfg.corpus = resolve(j, "corpus", base_dir);
    cfg.vector_store = resolve(j, "vector_store", base_dir);
    cfg.lda_model = resolve(j, "lda_model", base_dir);
    cfg.topic_matrix = resolve(j, "topic_matrix", base_dir);
    cfg.cluster_state = resolve(j, "cluster_state", base_dir);
    cfg.assignment_log = resolve(j, "assignment_log", base_dir);
    cfg.report = resolve(j, "report", base_dir);
    if (j.contains("lda")) cfg.lda = LdaConfig::from_json(j["lda"]);
    if (j.contains("cluster")) {
      const auto& c = j["cluster"];
      if (c.contains("coarse")) {
        json cj = c["coarse"];
        cj["mode"] = "coarse";
        cfg.coarse = ClusterParams::from_json(cj);
      }
      if (c.contains("fine")) {
        json fj = c["fine"];
        fj["mode"] = "fine";
        cfg.fine = ClusterParams::from_json(fj);
      }
    }
    cfg.mode = parse_cluster_mode(j.value("mode", std::string("coarse")));
    cfg.topic_words = j.value("topic_words", cfg.topic_words);
    if (cfg.topic_words < 1) throw ConfigError("topic_words must be >= 1");
    if (j.contains("embedder")) {
      const auto& e = j["embedder"];
      const auto type = e.value("type", std::string("store"));
      if (type == "store") {
        cfg.embedder.kind = EmbedderChoice::Kind::store;
      } else if (type == "hash") {
        cfg.embedder.kind = EmbedderChoice::Kind::hash;
        cfg.embedder.seed = e.value("seed", std::uint64_t{0});
        cfg.embedder.dim = e.value("dim", std::size_t{768});
      } else {
        throw ConfigError("unknown embedder type '" + type + "', expected store or hash");
      }
    }
    cfg.noise_fraction = j.value("noise_fraction", cfg.noise_fraction);
    if (!(cfg.noise_fraction >= 0.0 && cfg.noise_fraction < 1.0)) {
      throw ConfigError("noise_fraction must be in [0,1)");
    }
    cfg.resume = j.value("resume", false);
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

std::unique_ptr<EmbeddingProvider> make_provider(const PipelineConfig& cfg) {
  if (cfg.embedder.kind == EmbedderChoice::Kind::hash) {
    return std::make_unique<HashEmbedder>(cfg.embedder.dim, cfg.embedder.seed);
  }
  return std::make_unique<VectorStore>(
      VectorStore::load(require_existing(cfg.vector_store, "vector_store")));
}

void cmd_train_lda(const PipelineConfig& cfg, std::ostream& log) {
  const auto articles = load_articles(require_existing(cfg.corpus, "corpus"));
  const auto docs = tokenize_all(articles);
  TrainStats stats;
  const LdaModel model = train_lda(docs, cfg.lda, &stats);
  model.save(output_path(cfg.lda_model, "lda_model"));
  for (const auto& w : stats.warnings) log << "warning: " << w << '\n';
  log << "trained lda: K=" << model.num_topics() << " V=" << model.vocab_size()
      << " docs=" << stats.num_docs << " tokens=" << stats.num_tokens
      << " iterations=" << cfg.lda.train_iters << " seed=" << cfg.lda.seed << '\n';
}

void cmd_topic_matrix(const PipelineConfig& cfg, std::ostream& log) {
  const LdaModel model = LdaModel::load(require_existing(cfg.lda_model, "lda_model"));
  const auto provider = make_provider(cfg);
  const TopicSimMatrix tm = build_topic_matrix(model, *provider, cfg.topic_words);
  if (tm.degenerate) {
    log << "warning: all off-diagonal topic similarities are equal; remapped to 0.5\n";
  }
  tm.save(output_path(cfg.topic_matrix, "topic_matrix"));
  log << "topic matrix: K=" << tm.K() << " m=" << tm.m << " sim_min=" << tm.sim_min
      << " sim_max=" << tm.sim_max << '\n';
}

void cmd_cluster(const PipelineConfig& cfg, ClusterMode mode, std::ostream& log) {
  auto articles = load_articles(require_existing(cfg.corpus, "corpus"));
  const LdaModel model = LdaModel::load(require_existing(cfg.lda_model, "lda_model"));
  const TopicSimMatrix tm = TopicSimMatrix::load(require_existing(cfg.topic_matrix, "topic_matrix"));
  if (tm.K() != model.num_topics()) {
    throw Error("topic matrix has K=" + std::to_string(tm.K()) + " but lda model has K=" +
                std::to_string(model.num_topics()));
  }
  const auto provider = make_provider(cfg);
  const ClusterParams& params = cfg.params(mode);
  const fs::path& state_path = output_path(cfg.cluster_state, "cluster_state");

  ClusterState state;
  const bool resuming = cfg.resume && fs::exists(state_path);
  if (resuming) {
    ClusterParams stored;
    state = ClusterState::load(state_path, &stored);
    if (stored.mode != mode) {
      throw ConfigError("cannot resume: saved state was clustered in " +
                        std::string(to_string(stored.mode)) + " mode");
    }
    const auto seen = state.assignments();
    std::erase_if(articles, [&](const NewsArticle& a) { return seen.contains(a.id); });
  }
  if (mode == ClusterMode::fine) {
    std::stable_sort(articles.begin(), articles.end(), [](const NewsArticle& a, const NewsArticle& b) {
      return a.published_at < b.published_at;
    });
  }

  std::ofstream assignment_log;
  if (!cfg.assignment_log.empty()) {
    assignment_log.open(output_path(cfg.assignment_log, "assignment_log"), resuming ? std::ios::app : std::ios::trunc);
    if (!assignment_log) throw Error("cannot write assignment log: " + cfg.assignment_log.string());
  }
  for (const auto& article : articles) {
    const NewsRepr repr = represent(article, *provider, model, cfg.lda);
    const Assignment a = assign(state, repr, params, tm);
    if (assignment_log.is_open()) assignment_log << a.to_json().dump() << '\n';
  }
  state.save(state_path, params);
  log << "clustered " << articles.size() << " article(s) in " << to_string(mode) << " mode"
      << (resuming ? " (resumed)" : "") << ": " << state.clusters.size() << " cluster(s), "
      << state.sim_eval_counter << " similarity evaluations\n";
}

json evaluation_report(const ClusterState& state, std::span<const NewsArticle> articles,
                       double noise_fraction) {
  const AssignmentMap assignments = state.assignments();
  LabelMap labels;
  LangMap langs;
  for (const auto& a : articles) {
    if (a.label) labels.emplace(a.id, *a.label);
    langs.emplace(a.id, a.lang);
  }
  const ClusterReport purity_report = purity(assignments, labels, noise_fraction);
  const LanguageBalanceReport balance = language_balance(assignments, langs, labels, noise_fraction);
  const std::set<int> excluded(purity_report.excluded.begin(), purity_report.excluded.end());
  const auto mapping = majority_mapping(assignments, labels, excluded);
  const EventReport events = event_prf(assignments, labels, mapping);

  json j;
  j["purity"] = to_json(purity_report);
  j["language_balance"] = to_json(balance);
  j["events"] = to_json(events);
  json jm = json::object();
  for (const auto& [cluster, event] : mapping) jm[std::to_string(cluster)] = event;
  j["mapping"] = std::move(jm);
  const ConfusionMatrix cm = mapped_confusion(assignments, labels, mapping);
  try {
    j["kappa"] = to_json(kappa(cm));
  } catch (const Error&) {
    j["kappa"] = nullptr;  // single-class data
  }
  j["noise_fraction"] = noise_fraction;
  j["num_clusters"] = state.clusters.size();
  j["num_articles"] = assignments.size();
  return j;
}

void cmd_evaluate(const PipelineConfig& cfg, std::ostream& log) {
  const auto articles = load_articles(require_existing(cfg.corpus, "corpus"));
  const ClusterState state = ClusterState::load(require_existing(cfg.cluster_state, "cluster_state"));
  std::unordered_set<std::string> known;
  for (const auto& a : articles) known.insert(a.id);
  for (const auto& [id, cluster] : state.assignments()) {
    if (!known.contains(id)) throw Error("cluster state references unknown article \"" + id + "\"");
  }
  const json report = evaluation_report(state, articles, cfg.noise_fraction);

  const fs::path& out_path = output_path(cfg.report, "report");
  {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write report: " + out_path.string());
    out << report.dump(2) << '\n';
  }

  // Plain-text twin of the JSON report.
  const AssignmentMap assignments = state.assignments();
  LabelMap labels;
  LangMap langs;
  for (const auto& a : articles) {
    if (a.label) labels.emplace(a.id, *a.label);
    langs.emplace(a.id, a.lang);
  }
  const ClusterReport pr = purity(assignments, labels, cfg.noise_fraction);
  const std::set<int> excluded(pr.excluded.begin(), pr.excluded.end());
  std::ofstream txt(fs::path(out_path).concat(".txt"));
  txt << "Cluster purity\n" << format_purity_table(pr) << '\n'
      << "Language balance (majority-label members)\n"
      << format_language_table(language_balance(assignments, langs, labels, cfg.noise_fraction))
      << '\n'
      << "Per-event precision / recall / F1\n"
      << format_event_table(event_prf(assignments, labels, majority_mapping(assignments, labels, excluded)));
  if (report["kappa"].is_null()) {
    txt << "kappa: undefined\n";
  } else {
    txt << "kappa " << report["kappa"]["kappa"].get<double>() << '\n';
  }

  log << "evaluated " << assignments.size() << " article(s) in " << state.clusters.size()
      << " cluster(s): average purity " << pr.average_purity << ", event accuracy "
      << report["events"]["accuracy"].get<double>() << '\n';
}

void cmd_pipeline(const PipelineConfig& cfg, ClusterMode mode, std::ostream& log) {
  cmd_train_lda(cfg, log);
  cmd_topic_matrix(cfg, log);
  cmd_cluster(cfg, mode, log);
  cmd_evaluate(cfg, log);
}

}  // namespace xlnews
