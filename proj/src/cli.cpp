// Copyright 2026 The grel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "grel/cli.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <thread>

#include "CLI11.hpp"
#include "grel/aggregation.hpp"
#include "grel/answers.hpp"
#include "grel/catalog.hpp"
#include "grel/eval.hpp"
#include "grel/features.hpp"
#include "grel/hits.hpp"
#include "grel/http_server.hpp"
#include "grel/ingest.hpp"
#include "grel/pairs.hpp"
#include "grel/quality_gate.hpp"
#include "grel/service.hpp"
#include "grel/synth.hpp"
#include "grel/trainer.hpp"
#include "grel/util.hpp"
#include "grel/worker_sim.hpp"

namespace grel {

namespace fs = std::filesystem;

namespace {

void emit(const std::string& path, std::string_view content) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  write_file_atomic(path, content);
}

std::string escape_msg(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\r' || c == '\t') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

void report_error(std::ostream& err, int code, std::string_view kind, std::string_view msg) {
  err << "grel: error code=" << code << " kind=" << kind << " msg=\"" << escape_msg(msg)
      << "\"\n";
}

ArtifactHeader header(std::string stage, std::uint64_t seed,
                      std::initializer_list<std::string> inputs) {
  ArtifactHeader h;
  h.stage = std::move(stage);
  h.seed = seed;
  for (const auto& path : inputs) {
    if (!path.empty()) h.add_input_file(path);
  }
  return h;
}

Split split_arg(const std::string& s) {
  auto sp = parse_split(s);
  if (!sp) throw InvalidArgument("unknown split '" + s + "'");
  return *sp;
}

std::vector<std::string> read_id_list(const std::string& path) {
  std::vector<std::string> ids;
  std::string text = read_file(path);
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() : nl + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty() && line.front() != '#') ids.push_back(line);
  }
  return ids;
}

const std::vector<std::string>& regime_names() {
  static const std::vector<std::string> names = {std::string(kBiCrRel), std::string(kBiRel),
                                                 std::string(kUnion)};
  return names;
}

const PairSet& find_pairs(const std::vector<PairSet>& sets, const std::string& name, Split s) {
  for (const auto& p : sets) {
    if (p.name == name && p.split == s) return p;
  }
  throw DataError("pair file has no '" + name + "' set for split " + std::string(to_string(s)));
}

std::string env_name(std::string_view option) {
  std::string env = "GREL_";
  for (char c : option) env += c == '-' ? '_' : static_cast<char>(std::toupper(c));
  return env;
}

// Every option gets GREL_<LONG_NAME> as its environment override.
void attach_env_names(CLI::App& app) {
  for (CLI::Option* opt : app.get_options()) {
    const std::string& name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config" || opt->get_positional()) continue;
    opt->envname(env_name(name));
  }
  for (CLI::App* sub : app.get_subcommands({})) attach_env_names(*sub);
}

// CLI11 reads the config file before the environment, and a value from the
// file would then shadow the variable. Dropping file entries whose variable
// is set lets the environment fill them instead.
class EnvOverridesFile : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigTOML::from_config(input);
    std::erase_if(items, [](const CLI::ConfigItem& it) {
      const char* v = std::getenv(env_name(it.name).c_str());
      return v != nullptr && *v != '\0';
    });
    return items;
  }
};

struct Global {
  std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string out_dir;
  SynthParams params;
  std::size_t qualification_items = 30;
  bool binary_features = false;
};

void run_synth(const SynthArgs& a, const Global& g, std::ostream& out) {
  SynthData d = make_synthetic_corpus(a.params, g.seed);
  fs::path dir(a.out_dir);
  auto hdr = header("synth", g.seed, {}).line();
  emit((dir / "clips.tsv").string(), write_clip_table(d.catalog, hdr));
  emit((dir / "captions.tsv").string(), write_caption_table(d.catalog, hdr));
  emit((dir / "similarity.tsv").string(), write_similarity_table(d.catalog, hdr));
  if (a.binary_features) {
    emit((dir / "audio.feat").string(), encode_features_binary(d.audio));
    emit((dir / "text.feat").string(), encode_features_binary(d.text));
  } else {
    emit((dir / "audio.feat").string(), encode_features_text(d.audio, hdr));
    emit((dir / "text.feat").string(), encode_features_text(d.text, hdr));
  }
  auto pool = make_qualification_pool(d.catalog, a.qualification_items, g.seed);
  emit((dir / "qualification.jsonl").string(), hdr + write_qualification_pool(pool));
  out << "synth: " << d.catalog.clips().size() << " clips, " << d.catalog.captions().size()
      << " captions, " << d.selected_captions.size() << " query captions\n";
}

struct CatalogArgs {
  std::string clips;
  std::string captions;
  std::string similarity;

  void add(CLI::App* app, bool with_similarity) {
    app->add_option("--clips", clips, "Clip table")->required()->check(CLI::ExistingFile);
    app->add_option("--captions", captions, "Caption table")->required()->check(CLI::ExistingFile);
    if (with_similarity) {
      app->add_option("--similarity", similarity, "Caption-clip similarity table")
          ->required()
          ->check(CLI::ExistingFile);
    }
  }
  Catalog load() const {
    return load_catalog(clips, captions,
                        similarity.empty() ? std::nullopt : std::optional<std::string>(similarity));
  }
};

struct SelectArgs {
  CatalogArgs cat;
  std::string caption_list;
  std::string out;
  SelectionParams params;
};

void run_select(const SelectArgs& a, const Global& g, std::ostream& out) {
  Catalog c = a.cat.load();
  std::vector<std::string> ids;
  if (!a.caption_list.empty()) {
    ids = read_id_list(a.caption_list);
  } else {
    for (const auto& [cap, _] : c.similarity_table()) ids.push_back(cap);
  }
  auto sets = select_all(c, ids, a.params, g.seed);
  auto h = header("select", g.seed, {a.cat.clips, a.cat.captions, a.cat.similarity, a.caption_list});
  emit(a.out, write_candidates(sets, h.line()));
  out << "select: " << sets.size() << " candidate sets\n";
}

struct ConfirmArgs {
  std::string candidates;
  std::string verified_list;
  bool accept_all = false;
  std::string out;
};

void run_confirm(const ConfirmArgs& a, const Global& g, std::ostream& out) {
  if (a.accept_all == !a.verified_list.empty()) {
    throw CLI::ValidationError("confirm-tn", "give exactly one of --accept-all or --verified");
  }
  auto sets = parse_candidates(read_file(a.candidates), a.candidates);
  std::set<std::string> ok;
  if (!a.verified_list.empty()) {
    for (auto& id : read_id_list(a.verified_list)) ok.insert(id);
  }
  std::size_t n = 0;
  for (auto& cs : sets) {
    if (a.accept_all || ok.count(cs.caption_id)) cs.tn_verified = true;
    n += cs.tn_verified;
  }
  auto h = header("confirm-tn", g.seed, {a.candidates, a.verified_list});
  emit(a.out, write_candidates(sets, h.line()));
  out << "confirm-tn: " << n << " of " << sets.size() << " TNs verified\n";
}

struct BuildHitsArgs {
  std::string candidates;
  std::string out;
  bool allow_unverified = false;
};

void run_build_hits(const BuildHitsArgs& a, const Global& g, std::ostream& out) {
  auto sets = parse_candidates(read_file(a.candidates), a.candidates);
  std::vector<Hit> hits;
  for (const auto& cs : sets) {
    if (!cs.tn_verified && !a.allow_unverified) {
      throw DataError("TN of caption '" + cs.caption_id +
                      "' is unverified; run confirm-tn or pass --allow-unverified");
    }
    auto batch = build_hits(cs, g.seed);
    hits.insert(hits.end(), batch.begin(), batch.end());
  }
  auto h = header("build-hits", g.seed, {a.candidates});
  emit(a.out, write_hits(hits, h.line()));
  out << "build-hits: " << hits.size() << " HITs\n";
}

struct ServeArgs {
  CatalogArgs cat;
  std::string hits;
  std::string qualification;
  ServiceConfig cfg;
  long long timeout_s = 1800;
};

void run_serve(ServeArgs a, const Global& g, std::ostream& out) {
  a.cfg.seed = g.seed;
  a.cfg.assignment_timeout = std::chrono::seconds(a.timeout_s);
  Catalog c = a.cat.load();
  auto hits = parse_hits(read_file(a.hits), a.hits);
  auto pool = parse_qualification_pool(read_file(a.qualification), a.qualification);
  AnnotationStore store(c, std::move(hits), std::move(pool), a.cfg);
  HttpService http(store);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  int port = http.bind(a.cfg.host, a.cfg.port);
  out << "serve: listening on http://" << a.cfg.host << ":" << port << std::endl;
  std::thread worker([&] { http.serve(); });
  int sig = 0;
  sigwait(&signals, &sig);
  http.stop();
  worker.join();
  out << "serve: stopped\n";
}

struct SimulateArgs {
  std::string hits;
  std::vector<std::string> workers = {"honest:10:5"};
  int redundancy = 5;
  std::string out;
};

void run_simulate(const SimulateArgs& a, const Global& g, std::ostream& out) {
  auto hits = parse_hits(read_file(a.hits), a.hits);
  std::vector<SimWorker> workers;
  for (const auto& spec : a.workers) {
    for (auto& w : parse_worker_spec(spec)) workers.push_back(std::move(w));
  }
  auto plan = plan_assignments(hits, a.redundancy);
  auto latent = default_latent(hits, g.seed);
  auto answers = simulate(plan, hits, workers, latent, g.seed);
  auto h = header("simulate", g.seed, {a.hits});
  h.add_input("workers", [&] {
    std::string s;
    for (const auto& w : a.workers) s += w + ";";
    return s;
  }());
  emit(a.out, write_answers(answers, h.line()));
  out << "simulate: " << answers.size() << " answers from " << workers.size() << " workers\n";
}

struct QcArgs {
  std::string answers;
  std::string hits;
  std::string out;
  std::string report;
  bool pooled = false;
};

void run_qc(const QcArgs& a, const Global& g, std::ostream& out) {
  auto answers = read_answers(a.answers);
  auto hits = parse_hits(read_file(a.hits), a.hits);
  HitIndex index(hits);
  FilterOptions opts;
  opts.per_split = !a.pooled;
  auto r = filter_answers(answers, index, opts);
  auto h = header("qc", g.seed, {a.answers, a.hits}).line();
  emit(a.out, write_answers(r.retained, h));
  emit(a.report, write_rejection_report(r.report, h));
  out << "qc: " << r.retained.size() << " of " << answers.size() << " answers retained, "
      << r.rejected_workers() << " worker groups rejected\n";
}

struct AggregateArgs {
  std::string answers;
  std::string hits;
  std::string out;
};

void run_aggregate(const AggregateArgs& a, const Global& g, std::ostream& out) {
  auto answers = read_answers(a.answers);
  auto hits = parse_hits(read_file(a.hits), a.hits);
  auto aggs = aggregate_scores(answers, HitIndex(hits));
  auto h = header("aggregate", g.seed, {a.answers, a.hits});
  emit(a.out, write_aggregates(aggs, h.line()));
  out << "aggregate: " << aggs.size() << " (caption, clip) pairs\n";
}

struct ReportArgs {
  std::string aggregates;
  std::string answers;
  std::string out_dir;
  int bin_width = 10;
};

void run_report(const ReportArgs& a, const Global& g, std::ostream& out) {
  auto aggs = read_aggregates(a.aggregates);
  std::optional<double> thr;
  bool has_tp = std::any_of(aggs.begin(), aggs.end(),
                            [](const AggregatedRelevance& x) { return x.role == Role::TP; });
  if (has_tp) thr = tp_mean_threshold(aggs);
  std::vector<Histogram> hs;
  std::vector<AnswerRecord> answers;
  if (!a.answers.empty()) answers = read_answers(a.answers);
  for (Role r : {Role::TP, Role::TN, Role::C15}) {
    std::string role(to_string(r));
    if (!a.answers.empty()) {
      auto raw = raw_scores_for(answers, r);
      hs.push_back(distribution_report(raw, "raw/" + role, a.bin_width, thr));
    }
    auto agg = agg_scores_for(aggs, r);
    hs.push_back(distribution_report(agg, "agg/" + role, a.bin_width, thr));
  }
  auto h = header("report", g.seed, {a.aggregates, a.answers}).line();
  fs::path dir(a.out_dir);
  emit((dir / "histograms.tsv").string(), write_histograms(hs, h));
  emit((dir / "headlines.tsv").string(), write_headlines(hs, h));
  out << "report: " << hs.size() << " distributions";
  if (thr) out << ", TP-mean threshold " << format_double(*thr);
  out << "\n";
}

struct PairsArgs {
  std::string aggregates;
  CatalogArgs cat;
  std::optional<double> threshold;
  bool rule2_selected_only = false;
  std::string out;
};

void run_pairs(const PairsArgs& a, const Global& g, std::ostream& out) {
  auto aggs = read_aggregates(a.aggregates);
  Catalog c = a.cat.load();
  double thr = a.threshold ? *a.threshold : tp_mean_threshold(aggs);
  HighGradedSet hg = binarize(aggs, thr);
  std::set<Split> splits;
  for (const auto& x : aggs) splits.insert(x.split);
  BiCrRelOptions opts;
  opts.rule2_selected_only = a.rule2_selected_only;
  std::vector<PairSet> sets;
  for (Split s : splits) {
    PairSet cr = build_bicrrel(hg, c, s, opts);
    PairSet rel = build_birel(cr, c);
    auto ov = overlap(cr, rel);
    out << "pairs: " << to_string(s) << " " << kBiCrRel << "=" << cr.size() << " " << kBiRel
        << "=" << rel.size() << " overlap=" << ov.size() << "\n";
    PairSet un = union_pairs(cr, rel);
    sets.push_back(std::move(cr));
    sets.push_back(std::move(rel));
    sets.push_back(std::move(un));
  }
  auto h = header("pairs", g.seed, {a.aggregates, a.cat.clips, a.cat.captions});
  h.add_input("threshold", format_double(thr));
  emit(a.out, write_pairs(sets, h.line()));
  out << "pairs: threshold " << format_double(thr) << "\n";
}

struct FeatureArgs {
  std::string audio;
  std::string text;
  void add(CLI::App* app) {
    app->add_option("--audio-features", audio, "Audio embedding table")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--text-features", text, "Text embedding table")
        ->required()
        ->check(CLI::ExistingFile);
  }
};

struct TrainArgs {
  std::string pairs;
  FeatureArgs feats;
  std::string regime = std::string(kBiCrRel);
  std::string train_split = "development";
  std::string val_split = "validation";
  std::string out;
  std::string history;
  TrainConfig cfg;
  bool serial = false;
};

void run_train(TrainArgs a, const Global& g, std::ostream& out) {
  a.cfg.seed = g.seed;
  a.cfg.exec = a.serial ? Exec::serial : Exec::parallel;
  a.cfg.validate();
  auto sets = read_pairs(a.pairs);
  const PairSet& tr = find_pairs(sets, a.regime, split_arg(a.train_split));
  const PairSet& va = find_pairs(sets, a.regime, split_arg(a.val_split));
  auto audio = read_features(a.feats.audio);
  auto text = read_features(a.feats.text);
  TrainResult r = train(tr, audio, text, a.cfg, va);
  Checkpoint ck{r.model, a.cfg, a.regime, r.best_epoch};
  auto h = header("train", g.seed, {a.pairs, a.feats.audio, a.feats.text});
  h.add_input("regime", a.regime);
  emit(a.out, encode_checkpoint(ck, h.line()));
  if (!a.history.empty()) emit(a.history, write_history(r.history, h.line()));
  out << "train: " << r.history.size() << " epochs, best epoch " << r.best_epoch
      << (r.early_stopped ? " (early stop)" : "") << "\n";
}

struct EvalArgs {
  std::string model;
  std::string pairs;
  FeatureArgs feats;
  std::string split = "evaluation";
  std::size_t k = 10;
  std::string out;
  bool serial = false;
};

void run_eval(const EvalArgs& a, const Global& g, std::ostream& out) {
  Checkpoint ck = decode_checkpoint(read_file(a.model), a.model);
  auto sets = read_pairs(a.pairs);
  Split s = split_arg(a.split);
  std::vector<PairSet> eval_sets;
  for (const auto& name : regime_names()) eval_sets.push_back(find_pairs(sets, name, s));
  auto audio = read_features(a.feats.audio);
  auto text = read_features(a.feats.text);
  EvalOptions opts;
  opts.k = a.k;
  opts.exec = a.serial ? Exec::serial : Exec::parallel;
  auto rows = evaluate(ck.model, ck.train_regime, eval_sets, audio, text, opts);
  auto h = header("eval", g.seed, {a.model, a.pairs, a.feats.audio, a.feats.text});
  emit(a.out, write_metrics(rows, h.line()));
  for (const auto& r : rows) {
    out << "eval: " << r.train_regime << " -> " << r.eval_regime << " R@" << r.k << "="
        << format_double(r.mean_recall) << " (" << r.n_queries << " queries, " << r.n_excluded
        << " excluded)\n";
  }
}

struct IngestArgs {
  std::string input;
  CatalogArgs cat;
  IngestColumns cols;
  std::string out_answers;
  std::string out_hits;
};

void run_ingest(const IngestArgs& a, const Global& g, std::ostream& out) {
  Catalog c = a.cat.load();
  IngestResult r = ingest_long_table(read_table(a.input), c, a.cols);
  auto h = header("ingest", g.seed, {a.input, a.cat.clips, a.cat.captions}).line();
  emit(a.out_answers, write_answers(r.answers, h));
  emit(a.out_hits, write_hits(r.hits, h));
  std::map<Split, std::size_t> per_split;
  for (const auto& x : r.answers) ++per_split[x.split];
  out << "ingest: " << r.answers.size() << " answers over " << r.hits.size() << " HITs";
  for (const auto& [s, n] : per_split) out << ", " << to_string(s) << "=" << n;
  out << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graded audio-text relevance toolkit", "grel"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "TOML/INI file of option values, one [section] per subcommand");
  app.config_formatter(std::make_shared<EnvOverridesFile>());
  app.require_subcommand(1);

  Global g;
  app.add_option("--seed", g.seed, "Global random seed, recorded in every artifact header");

  SynthArgs synth;
  auto* s_synth = app.add_subcommand("synth", "Write a synthetic catalog, features and qualification pool");
  s_synth->add_option("--out-dir", synth.out_dir, "Output directory")->required();
  s_synth->add_option("--clips-per-split", synth.params.clips_per_split)->check(CLI::Range(17, 1000000));
  s_synth->add_option("--selected-per-split", synth.params.selected_per_split)->check(CLI::PositiveNumber);
  s_synth->add_option("--captions-per-clip", synth.params.captions_per_clip)->check(CLI::Range(1, 5));
  s_synth->add_option("--qualification-items", synth.qualification_items)->check(CLI::PositiveNumber);
  s_synth->add_flag("--binary-features", synth.binary_features, "Write features in binary form");

  SelectArgs sel;
  auto* s_select = app.add_subcommand("select", "Choose TP, TN and C15 candidates per caption");
  sel.cat.add(s_select, true);
  s_select->add_option("--caption-list", sel.caption_list, "Captions to process (default: all with similarity rows)")
      ->check(CLI::ExistingFile);
  s_select->add_option("--top-k", sel.params.top_k)->check(CLI::NonNegativeNumber);
  s_select->add_option("--random-k", sel.params.random_k)->check(CLI::NonNegativeNumber);
  s_select->add_option("--out", sel.out, "Candidate file")->required();

  ConfirmArgs conf;
  auto* s_conf = app.add_subcommand("confirm-tn", "Record manual verification of TN clips");
  s_conf->add_option("--candidates", conf.candidates)->required()->check(CLI::ExistingFile);
  s_conf->add_option("--verified", conf.verified_list, "File of caption ids whose TN was checked")
      ->check(CLI::ExistingFile);
  s_conf->add_flag("--accept-all", conf.accept_all, "Mark every TN verified");
  s_conf->add_option("--out", conf.out)->required();

  BuildHitsArgs bh;
  auto* s_bh = app.add_subcommand("build-hits", "Split candidate sets into five HITs each");
  s_bh->add_option("--candidates", bh.candidates)->required()->check(CLI::ExistingFile);
  s_bh->add_option("--out", bh.out)->required();
  s_bh->add_flag("--allow-unverified", bh.allow_unverified, "Accept TNs not yet confirmed");

  ServeArgs sv;
  auto* s_serve = app.add_subcommand("serve", "Run the annotation HTTP service");
  sv.cat.add(s_serve, false);
  s_serve->add_option("--hits", sv.hits)->required()->check(CLI::ExistingFile);
  s_serve->add_option("--qualification", sv.qualification, "Qualification item pool")
      ->required()
      ->check(CLI::ExistingFile);
  s_serve->add_option("--host", sv.cfg.host);
  s_serve->add_option("--port", sv.cfg.port)->check(CLI::Range(0, 65535));
  s_serve->add_option("--redundancy", sv.cfg.redundancy)->check(CLI::PositiveNumber);
  s_serve->add_option("--assignment-timeout-s", sv.timeout_s)->check(CLI::PositiveNumber);
  s_serve->add_option("--qual-threshold", sv.cfg.qualification_threshold)->check(CLI::Range(0.0, 1.0));
  s_serve->add_option("--qual-items", sv.cfg.qualification_items)->check(CLI::PositiveNumber);
  s_serve->add_option("--answers-log", sv.cfg.answers_log, "Append-only answer log");
  s_serve->add_option("--static-dir", sv.cfg.static_dir, "Annotation UI bundle");
  s_serve->add_option("--media-root", sv.cfg.media_root, "Base directory of clip media paths");

  SimulateArgs sim;
  auto* s_sim = app.add_subcommand("simulate", "Generate answers from simulated workers");
  s_sim->add_option("--hits", sim.hits)->required()->check(CLI::ExistingFile);
  s_sim->add_option("--workers", sim.workers, "kind[:count[:param]], repeatable")->delimiter(',');
  s_sim->add_option("--redundancy", sim.redundancy)->check(CLI::PositiveNumber);
  s_sim->add_option("--out", sim.out)->required();

  QcArgs qc;
  auto* s_qc = app.add_subcommand("qc", "Drop answers of workers failing the consistency check");
  s_qc->add_option("--answers", qc.answers)->required()->check(CLI::ExistingFile);
  s_qc->add_option("--hits", qc.hits)->required()->check(CLI::ExistingFile);
  s_qc->add_option("--out", qc.out, "Retained answers")->required();
  s_qc->add_option("--report", qc.report, "Per-worker verdicts")->required();
  s_qc->add_flag("--pooled", qc.pooled, "Judge each worker over all splits at once");

  AggregateArgs ag;
  auto* s_ag = app.add_subcommand("aggregate", "Trimmed-mean aggregation per (caption, clip)");
  s_ag->add_option("--answers", ag.answers)->required()->check(CLI::ExistingFile);
  s_ag->add_option("--hits", ag.hits)->required()->check(CLI::ExistingFile);
  s_ag->add_option("--out", ag.out)->required();

  ReportArgs rep;
  auto* s_rep = app.add_subcommand("report", "Score histograms and headline fractions");
  s_rep->add_option("--aggregates", rep.aggregates)->required()->check(CLI::ExistingFile);
  s_rep->add_option("--answers", rep.answers, "Raw answers, for raw-score distributions")
      ->check(CLI::ExistingFile);
  s_rep->add_option("--bin-width", rep.bin_width)->check(CLI::IsMember({1, 2, 4, 5, 10, 20, 25, 50, 100}));
  s_rep->add_option("--out-dir", rep.out_dir)->required();

  PairsArgs pa;
  auto* s_pairs = app.add_subcommand("pairs", "Binarize and build the three pair sets");
  s_pairs->add_option("--aggregates", pa.aggregates)->required()->check(CLI::ExistingFile);
  pa.cat.add(s_pairs, false);
  s_pairs->add_option("--threshold", pa.threshold, "Override the TP-mean threshold")
      ->check(CLI::Range(0.0, 100.0));
  s_pairs->add_flag("--rule2-selected-only", pa.rule2_selected_only,
                    "Restrict rule 2 to captions that were queries");
  s_pairs->add_option("--out", pa.out)->required();

  TrainArgs tr;
  auto* s_train = app.add_subcommand("train", "Train the projection heads with InfoNCE");
  s_train->add_option("--pairs", tr.pairs)->required()->check(CLI::ExistingFile);
  tr.feats.add(s_train);
  s_train->add_option("--regime", tr.regime, "Training pair set")->check(CLI::IsMember(regime_names()));
  s_train->add_option("--train-split", tr.train_split);
  s_train->add_option("--val-split", tr.val_split);
  s_train->add_option("--batch-size", tr.cfg.batch_size)->check(CLI::PositiveNumber);
  s_train->add_option("--lr", tr.cfg.lr0)->check(CLI::PositiveNumber);
  s_train->add_option("--plateau-factor", tr.cfg.plateau_factor);
  s_train->add_option("--plateau-patience", tr.cfg.plateau_patience)->check(CLI::PositiveNumber);
  s_train->add_option("--early-stop-patience", tr.cfg.early_stop_patience)->check(CLI::PositiveNumber);
  s_train->add_option("--tau", tr.cfg.tau)->check(CLI::PositiveNumber);
  s_train->add_option("--max-epochs", tr.cfg.max_epochs)->check(CLI::PositiveNumber);
  s_train->add_option("--embed-dim", tr.cfg.embed_dim)->check(CLI::PositiveNumber);
  s_train->add_flag("--serial", tr.serial, "Use the single-threaded kernels");
  s_train->add_option("--out", tr.out, "Checkpoint")->required();
  s_train->add_option("--history", tr.history, "Per-epoch losses");

  EvalArgs ev;
  auto* s_eval = app.add_subcommand("eval", "Recall@k of a checkpoint on each pair set");
  s_eval->add_option("--model", ev.model)->required()->check(CLI::ExistingFile);
  s_eval->add_option("--pairs", ev.pairs)->required()->check(CLI::ExistingFile);
  ev.feats.add(s_eval);
  s_eval->add_option("--split", ev.split);
  s_eval->add_option("--k", ev.k)->check(CLI::PositiveNumber);
  s_eval->add_flag("--serial", ev.serial, "Use the single-threaded kernels");
  s_eval->add_option("--out", ev.out)->required();

  IngestArgs in;
  auto* s_in = app.add_subcommand("ingest", "Import long-format answers (one row per scored clip)");
  s_in->add_option("--input", in.input)->required()->check(CLI::ExistingFile);
  in.cat.add(s_in, false);
  s_in->add_option("--col-hit", in.cols.hit_id);
  s_in->add_option("--col-worker", in.cols.worker_id);
  s_in->add_option("--col-caption", in.cols.caption_id);
  s_in->add_option("--col-clip", in.cols.clip_id);
  s_in->add_option("--col-score", in.cols.score);
  s_in->add_option("--col-role", in.cols.role);
  s_in->add_option("--out-answers", in.out_answers)->required();
  s_in->add_option("--out-hits", in.out_hits)->required();

  attach_env_names(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, 1, "usage", e.what());
    return 1;
  }

  try {
    if (*s_synth) run_synth(synth, g, out);
    else if (*s_select) run_select(sel, g, out);
    else if (*s_conf) run_confirm(conf, g, out);
    else if (*s_bh) run_build_hits(bh, g, out);
    else if (*s_serve) run_serve(sv, g, out);
    else if (*s_sim) run_simulate(sim, g, out);
    else if (*s_qc) run_qc(qc, g, out);
    else if (*s_ag) run_aggregate(ag, g, out);
    else if (*s_rep) run_report(rep, g, out);
    else if (*s_pairs) run_pairs(pa, g, out);
    else if (*s_train) run_train(tr, g, out);
    else if (*s_eval) run_eval(ev, g, out);
    else if (*s_in) run_ingest(in, g, out);
  } catch (const CLI::ParseError& e) {
    report_error(err, 1, "usage", e.what());
    return 1;
  } catch (const DataError& e) {
    report_error(err, 2, e.kind(), e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error(err, 3, "internal", e.what());
    return 3;
  }
  return 0;
}

}  // namespace grel
