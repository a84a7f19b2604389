#include <cmath>
#include <map>
#include <memory>

#include "cli.hpp"
#include "infcartel/empirics/lda.hpp"
#include "infcartel/empirics/regression.hpp"
#include "infcartel/empirics/similarity.hpp"
#include "infcartel/empirics/synth.hpp"
#include "infcartel/empirics/topics.hpp"
#include "infcartel/io.hpp"
#include "infcartel/model.hpp"

namespace infcartel::cli {

namespace {

using namespace empirics;

Table panel_table(const std::vector<PanelObservation>& panel) {
  Table t{{"author_id", "commenter_id", "class", "similarity"}};
  for (const auto& o : panel) t.add({o.author_id, o.commenter_id, to_string(o.commenter_class), o.similarity});
  return t;
}

// Header `id,<d>` followed by `id,x1,...,xd`, as read by the loaders.
Table vector_table(const std::vector<std::pair<std::string, std::vector<double>>>& rows, std::size_t d) {
  Table t{{"id", std::to_string(d)}};
  for (const auto& [id, v] : rows) {
    std::vector<Json> row{id};
    row.insert(row.end(), v.begin(), v.end());
    t.add(std::move(row));
  }
  return t;
}

Json prune_json(const PruneReport& p) {
  return {{"users_in", p.users_in},       {"users_out", p.users_out},       {"vocabulary_in", p.vocabulary_in},
          {"dropped_rare", p.dropped_rare}, {"dropped_common", p.dropped_common},
          {"truncated_users", p.truncated_users}, {"dropped_users", p.dropped_users}};
}

Json model_json(const LdaModel& m) {
  return {{"k", m.k},
          {"alpha", m.alpha},
          {"beta", m.beta},
          {"log_likelihood", m.log_likelihood},
          {"chain", m.chain},
          {"vocabulary", m.vocabulary},
          {"doc_ids", m.doc_ids},
          {"topic_word", m.topic_word},
          {"doc_topic", m.doc_topic},
          {"prune", prune_json(m.prune)}};
}

LdaModel load_model(const std::string& path) {
  const Json doc = read_json_path(path);
  const Json& j = doc.contains("model") ? doc.at("model") : doc;
  try {
    LdaModel m;
    m.k = j.at("k").get<std::size_t>();
    m.alpha = j.at("alpha").get<double>();
    m.beta = j.at("beta").get<double>();
    m.log_likelihood = j.value("log_likelihood", 0.0);
    m.chain = j.value("chain", std::size_t{0});
    m.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
    m.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
    m.topic_word = j.at("topic_word").get<std::vector<std::vector<double>>>();
    m.doc_topic = j.at("doc_topic").get<std::vector<std::vector<double>>>();
    if (m.topic_word.size() != m.k || m.doc_topic.size() != m.doc_ids.size())
      throw io::InputError(path, 0, "model dimensions do not match k and doc_ids");
    for (const auto& row : m.topic_word)
      if (row.size() != m.vocabulary.size()) throw io::InputError(path, 0, "topic_word row length != vocabulary");
    for (const auto& row : m.doc_topic)
      if (row.size() != m.k) throw io::InputError(path, 0, "doc_topic row length != k");
    return m;
  } catch (const Json::exception& e) {
    throw io::InputError(path, 0, std::string("bad model: ") + e.what());
  }
}

TopicRows load_topic_rows(const std::string& path) {
  TopicRows rows;
  for (auto& e : io::load_embeddings(io::read_csv_path(path))) rows[e.id] = std::move(e.values);
  return rows;
}

void add_synth(CLI::App& parent, Registry& reg) {
  struct Args {
    SynthConfig cfg;
    double lambda_topic_deg = 45.0;
    std::vector<std::size_t> commenters{5, 5, 5, 5};
    std::string embeddings_out, topic_rows_out;
  };
  auto a = std::make_shared<Args>();
  auto* sub = parent.add_subcommand("synth", "Synthetic panel with known ground truth");
  sub->add_option("--authors", a->cfg.n_authors, "Number of authors");
  sub->add_option("--commenters", a->commenters, "Commenters per author: natural,general,topic,random")
      ->delimiter(',')
      ->expected(4);
  sub->add_option("--gamma", a->cfg.gamma, "Internalized share in (0, 1)");
  sub->add_option("--lambda-topic", a->lambda_topic_deg, "Topic cartel requirement, degrees");
  sub->add_option("--sigma", a->cfg.noise_sigma, "Embedding noise standard deviation");
  sub->add_option("--dim", a->cfg.embed_dim, "Embedding dimension");
  sub->add_option("--topics", a->cfg.topics, "Topics for the topic rows");
  sub->add_option("--concentration", a->cfg.topic_concentration, "Topic row concentration");
  sub->add_option("--seed", a->cfg.seed, "Seed");
  sub->add_option("--embeddings-out", a->embeddings_out, "Also write user embeddings here");
  sub->add_option("--topic-rows-out", a->topic_rows_out, "Also write topic rows here");
  reg.add(sub, [a] {
    SynthConfig cfg = a->cfg;
    cfg.lambda_topic = deg_to_rad(a->lambda_topic_deg);
    for (std::size_t c = 0; c < 4; ++c) cfg.commenters_per_class[c] = a->commenters[c];
    const SynthData d = synth_generate(cfg);
    Result r{"panel", panel_table(d.panel)};
    r.metadata = {{"class_mean_similarity", d.truth.class_mean_similarity}, {"seed", cfg.seed}};
    if (!a->embeddings_out.empty()) {
      std::vector<std::pair<std::string, std::vector<double>>> rows;
      for (const auto& e : d.embeddings) rows.emplace_back(e.id, e.values);
      r.side_files.push_back({a->embeddings_out, "embeddings", vector_table(rows, cfg.embed_dim)});
    }
    if (!a->topic_rows_out.empty()) {
      std::vector<std::pair<std::string, std::vector<double>>> rows;
      for (const auto& e : d.embeddings) rows.emplace_back(e.id, d.topic_rows.at(e.id));
      r.side_files.push_back({a->topic_rows_out, "topic-rows", vector_table(rows, cfg.topics)});
    }
    return r;
  });
}

void add_similarity(CLI::App& parent, Registry& reg) {
  struct Args {
    std::string pairs = "-", embeddings;
  };
  auto a = std::make_shared<Args>();
  auto* sub = parent.add_subcommand("similarity", "Cosine similarity of author and commenter embeddings");
  sub->add_option("--pairs", a->pairs, "CSV with author_id,commenter_id,class; '-' for stdin");
  sub->add_option("--embeddings", a->embeddings, "Post or user embeddings (header id,<d>); rows sharing an id are averaged")
      ->required();
  reg.add(sub, [a] {
    std::map<std::string, std::vector<EmbeddingVector>> posts;
    for (auto& e : io::load_embeddings(io::read_csv_path(a->embeddings))) posts[e.id].push_back(std::move(e));
    std::map<std::string, EmbeddingVector> users;
    for (const auto& [id, v] : posts) users.emplace(id, user_embedding(id, v));

    const io::CsvTable t = io::read_csv_path(a->pairs);
    const std::size_t ca = t.column("author_id"), cc = t.column("commenter_id"), ck = t.column("class");
    std::vector<PanelObservation> panel;
    for (const auto& row : t.rows) {
      PanelObservation o;
      o.author_id = t.field(row, ca);
      o.commenter_id = t.field(row, cc);
      try {
        o.commenter_class = parse_commenter_class(t.field(row, ck));
      } catch (const std::invalid_argument& e) {
        throw io::InputError(t.source, row.line, e.what());
      }
      const auto au = users.find(o.author_id), cu = users.find(o.commenter_id);
      if (au == users.end() || cu == users.end())
        throw io::InputError(t.source, row.line,
                             "no embedding for '" + (au == users.end() ? o.author_id : o.commenter_id) + "'");
      try {
        o.similarity = cosine_similarity(au->second, cu->second);
      } catch (const std::domain_error& e) {
        throw io::InputError(t.source, row.line, e.what());
      }
      panel.push_back(std::move(o));
    }
    return Result{"panel", panel_table(panel)};
  });
}

const std::vector<std::pair<CommenterClass, const char*>> kAllClasses = {
    {CommenterClass::Natural, "natural"},
    {CommenterClass::GeneralCartel, "general"},
    {CommenterClass::TopicCartel, "topic"},
    {CommenterClass::RandomUser, "random"}};

void add_regress(CLI::App& parent, Registry& reg) {
  auto panel = std::make_shared<std::string>("-");
  auto* sub = parent.add_subcommand("regress", "Similarity on commenter class with author fixed effects");
  sub->add_option("--panel", *panel, "Panel CSV (author_id,commenter_id,class,similarity); '-' for stdin");
  reg.add(sub, [panel] {
    const auto fit = fe_regression(io::load_panel(io::read_csv_path(*panel)));
    Result r{"regression", {{"class", "coefficient", "std_error", "class_mean"}}};
    for (const auto& [c, name] : kAllClasses)
      r.table.add({name, fit.coefficient(c), c == CommenterClass::Natural ? 0.0 : fit.std_error(c),
                   fit.class_mean(c)});
    r.metadata = {{"n_obs", fit.n_obs}, {"n_authors", fit.n_authors},
                  {"small_sample_factor", fit.small_sample_factor}, {"base_mean", fit.base_mean}};
    return r;
  });
}

void add_value(CLI::App& parent, Registry& reg) {
  struct Args {
    std::string panel;
    double sim_class = std::nan(""), sim_natural = std::nan(""), sim_random = std::nan("");
  };
  auto a = std::make_shared<Args>();
  auto* sub = parent.add_subcommand("value", "Normalized value of engagement relative to natural and random");
  auto* p = sub->add_option("--panel", a->panel, "Panel CSV; values from the fixed-effects class means");
  sub->add_option("--class-similarity", a->sim_class, "Mean similarity of the class")->excludes(p);
  sub->add_option("--natural-similarity", a->sim_natural, "Mean similarity of natural commenters")->excludes(p);
  sub->add_option("--random-similarity", a->sim_random, "Mean similarity of random users")->excludes(p);
  reg.add(sub, [a] {
    Result r{"value", {{"class", "class_mean", "normalized_value"}}};
    if (a->panel.empty()) {
      if (std::isnan(a->sim_class) || std::isnan(a->sim_natural) || std::isnan(a->sim_random))
        throw UsageError("value: give --panel or all three similarities");
      r.table.add({"class", a->sim_class, normalized_value(a->sim_class, a->sim_natural, a->sim_random)});
      return r;
    }
    const auto fit = fe_regression(io::load_panel(io::read_csv_path(a->panel)));
    const double nat = fit.class_mean(CommenterClass::Natural), rnd = fit.class_mean(CommenterClass::RandomUser);
    for (const auto& [c, name] : kAllClasses) {
      const double m = fit.class_mean(c);
      r.table.add({name, m, std::isnan(m) || std::isnan(rnd) ? Json(nullptr) : Json(normalized_value(m, nat, rnd))});
    }
    return r;
  });
}

void add_lda(CLI::App& parent, Registry& reg) {
  struct Args {
    std::string corpus = "-", doc_topics_out;
    LdaConfig cfg;
    bool no_prune = false;
  };
  auto a = std::make_shared<Args>();
  auto* sub = parent.add_subcommand("lda", "Fit a topic model to users' hashtags; writes the model as JSON");
  sub->add_option("--corpus", a->corpus, "Posts CSV (user_id,text); '-' for stdin");
  sub->add_option("--k", a->cfg.k, "Number of topics");
  sub->add_option("--alpha", a->cfg.alpha, "Document-topic prior; negative for 50/K");
  sub->add_option("--beta", a->cfg.beta, "Topic-word prior");
  sub->add_option("--iterations", a->cfg.iterations, "Gibbs sweeps");
  sub->add_option("--burn-in", a->cfg.burn_in, "Sweeps before averaging");
  sub->add_option("--thin", a->cfg.thin, "Sweeps between averaged samples");
  sub->add_option("--chains", a->cfg.chains, "Independent chains; the best is kept");
  sub->add_option("--threads", a->cfg.threads, "Worker threads for chains");
  sub->add_option("--seed", a->cfg.seed, "Seed");
  sub->add_option("--min-users", a->cfg.prune.min_users, "Drop tokens used by fewer users");
  sub->add_option("--max-share", a->cfg.prune.max_share_num, "Drop tokens used by more than this percent of users");
  sub->add_option("--max-tokens", a->cfg.prune.max_tokens, "Keep each user's first tokens up to this many");
  sub->add_option("--min-unique", a->cfg.prune.min_unique, "Drop users with fewer distinct tokens");
  sub->add_flag("--no-prune", a->no_prune, "Skip all pruning");
  sub->add_option("--doc-topics-out", a->doc_topics_out, "Also write per-user topic rows here");
  reg.add(sub, [a] {
    LdaConfig cfg = a->cfg;
    if (a->no_prune) cfg.prune = PruneConfig::none();
    const LdaModel m = lda_fit(io::load_corpus(io::read_csv_path(a->corpus)), cfg);
    Result r{"lda-model"};
    r.document = model_json(m);
    r.metadata = {{"seed", cfg.seed}, {"prune", m.prune.summary()}};
    if (!a->doc_topics_out.empty()) {
      std::vector<std::pair<std::string, std::vector<double>>> rows;
      for (std::size_t d = 0; d < m.doc_ids.size(); ++d) rows.emplace_back(m.doc_ids[d], m.doc_topic[d]);
      r.side_files.push_back({a->doc_topics_out, "topic-rows", vector_table(rows, m.k)});
    }
    return r;
  });
}

void add_coherence(CLI::App& parent, Registry& reg) {
  struct Args {
    std::string model, corpus;
    std::size_t top_n = 10, window = 5;
  };
  auto a = std::make_shared<Args>();
  auto* sub = parent.add_subcommand("coherence", "NPMI coherence of each topic");
  sub->add_option("--model", a->model, "Model JSON from 'empirics lda'")->required();
  sub->add_option("--corpus", a->corpus, "Posts CSV (user_id,text)")->required();
  sub->add_option("--top-n", a->top_n, "Top words per topic");
  sub->add_option("--window", a->window, "Sliding window length in tokens");
  reg.add(sub, [a] {
    const LdaModel m = load_model(a->model);
    const auto scores = npmi_coherence(m, io::load_corpus(io::read_csv_path(a->corpus)), a->top_n, a->window);
    Result r{"coherence", {{"topic", "npmi", "top_words"}}};
    double sum = 0.0;
    for (std::size_t t = 0; t < scores.size(); ++t) {
      std::string words;
      for (std::size_t w : m.top_words(t, a->top_n)) words += (words.empty() ? "" : " ") + m.vocabulary[w];
      r.table.add({t, scores[t], words});
      sum += scores[t];
    }
    r.metadata = {{"mean_npmi", scores.empty() ? 0.0 : sum / static_cast<double>(scores.size())}};
    return r;
  });
}

void add_topic_match(CLI::App& parent, Registry& reg) {
  struct Args {
    std::string model, topic_rows, panel = "-";
  };
  auto a = std::make_shared<Args>();
  auto* sub = parent.add_subcommand("topic-match", "Commenters' weight on the author's main topic");
  auto* m = sub->add_option("--model", a->model, "Model JSON from 'empirics lda'");
  sub->add_option("--topic-rows", a->topic_rows, "Topic rows CSV (header id,<K>)")->excludes(m);
  sub->add_option("--panel", a->panel, "Panel CSV; '-' for stdin");
  reg.add(sub, [a] {
    if (a->model.empty() == a->topic_rows.empty()) throw UsageError("topic-match: give --model or --topic-rows");
    const TopicRows rows = a->model.empty() ? load_topic_rows(a->topic_rows) : topic_rows(load_model(a->model));
    const auto table = topic_match_table(rows, io::load_panel(io::read_csv_path(a->panel)));
    Result r{"topic-match", {{"topic", "class", "n", "mean", "std_error", "ci_low", "ci_high"}}};
    auto opt = [](const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); };
    for (const auto& c : table.cells)
      r.table.add({c.topic, to_string(c.commenter_class), c.n, c.mean, opt(c.std_error), opt(c.ci_low),
                   opt(c.ci_high)});
    r.metadata = {{"skipped", table.skipped}};
    return r;
  });
}

}  // namespace

void add_empirics_commands(CLI::App& app, Registry& reg) {
  auto* emp = app.add_subcommand("empirics", "Empirical pipeline on embeddings, panels and hashtags");
  emp->require_subcommand(1);
  add_synth(*emp, reg);
  add_similarity(*emp, reg);
  add_regress(*emp, reg);
  add_lda(*emp, reg);
  add_coherence(*emp, reg);
  add_topic_match(*emp, reg);
  add_value(*emp, reg);
}

}  // namespace infcartel::cli
