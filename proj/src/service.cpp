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

#include "grel/service.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <numeric>

#include "json.hpp"

#include "grel/util.hpp"
#include "jsonl.hpp"

namespace grel {

using nlohmann::json;

void check_qualification_item(const QualificationItem& item) {
  if (item.item_id.empty()) throw InvalidArgument("qualification item has an empty id");
  const auto& c = item.candidates;
  if (c[0] == c[1] || c[0] == c[2] || c[1] == c[2]) {
    throw InvalidArgument("qualification item '" + item.item_id + "' repeats a candidate");
  }
  if (std::find(c.begin(), c.end(), item.correct) == c.end()) {
    throw InvalidArgument("qualification item '" + item.item_id +
                          "' has a correct clip outside its candidates");
  }
}

std::vector<QualificationItem> parse_qualification_pool(std::string_view text,
                                                        const std::string& source) {
  std::vector<QualificationItem> pool;
  std::set<std::string> seen;
  detail::for_each_json_line(text, source, [&](const json& j, std::size_t line) {
    QualificationItem q;
    q.item_id = j.at("item_id").get<std::string>();
    q.caption = j.at("caption").get<std::string>();
    const auto& cands = j.at("candidates");
    if (!cands.is_array() || cands.size() != 3) {
      throw ParseError(source, line, "candidates must list exactly 3 clips");
    }
    for (std::size_t i = 0; i < 3; ++i) q.candidates[i] = cands[i].get<std::string>();
    q.correct = j.at("correct").get<std::string>();
    try {
      check_qualification_item(q);
    } catch (const InvalidArgument& e) {
      throw ParseError(source, line, e.what());
    }
    if (!seen.insert(q.item_id).second) {
      throw ParseError(source, line, "duplicate item_id '" + q.item_id + "'");
    }
    pool.push_back(std::move(q));
  });
  return pool;
}

std::string write_qualification_pool(const std::vector<QualificationItem>& pool) {
  std::string out;
  for (const auto& q : pool) {
    json j = {{"item_id", q.item_id},
              {"caption", q.caption},
              {"candidates", q.candidates},
              {"correct", q.correct}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<QualificationItem> make_qualification_pool(const Catalog& catalog, std::size_t n,
                                                       std::uint64_t seed) {
  std::vector<std::string> captions;
  for (const auto& c : catalog.captions()) captions.push_back(c.caption_id);
  Rng rng(derive_seed(seed, "qualification-pool"));
  rng.shuffle(captions);
  std::vector<QualificationItem> pool;
  for (const auto& cid : captions) {
    if (pool.size() >= n) break;
    const CaptionItem* cap = catalog.find_caption(cid);
    std::vector<std::string> others;
    for (const auto& clip : catalog.clips_in_split(cap->split)) {
      if (clip != cap->source_clip_id) others.push_back(clip);
    }
    if (others.size() < 2) continue;
    for (std::size_t i = 0; i < 2; ++i) {
      std::size_t j = i + rng.below(others.size() - i);
      std::swap(others[i], others[j]);
    }
    QualificationItem q;
    q.item_id = "q-" + cid;
    q.caption = cap->text;
    q.correct = cap->source_clip_id;
    q.candidates = {cap->source_clip_id, others[0], others[1]};
    rng.shuffle(std::span<std::string>(q.candidates));
    pool.push_back(std::move(q));
  }
  return pool;
}

namespace {

void apply_config_json(ServiceConfig& c, const json& j) {
  if (j.contains("host")) c.host = j["host"].get<std::string>();
  if (j.contains("port")) c.port = j["port"].get<int>();
  if (j.contains("redundancy")) c.redundancy = j["redundancy"].get<int>();
  if (j.contains("assignment_timeout_s")) {
    c.assignment_timeout = std::chrono::seconds(j["assignment_timeout_s"].get<long long>());
  }
  if (j.contains("qualification_threshold")) {
    c.qualification_threshold = j["qualification_threshold"].get<double>();
  }
  if (j.contains("qualification_items")) {
    c.qualification_items = j["qualification_items"].get<std::size_t>();
  }
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("answers_log")) c.answers_log = j["answers_log"].get<std::string>();
  if (j.contains("static_dir")) c.static_dir = j["static_dir"].get<std::string>();
  if (j.contains("media_root")) c.media_root = j["media_root"].get<std::string>();
}

long long env_int(const char* name, const char* v) {
  try {
    std::size_t used = 0;
    long long x = std::stoll(v, &used);
    if (used != std::string_view(v).size()) throw std::invalid_argument(name);
    return x;
  } catch (const std::exception&) {
    throw InvalidArgument(std::string(name) + " is not an integer: '" + v + "'");
  }
}

double env_real(const char* name, const char* v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != std::string_view(v).size()) throw std::invalid_argument(name);
    return x;
  } catch (const std::exception&) {
    throw InvalidArgument(std::string(name) + " is not a number: '" + v + "'");
  }
}

void check_config(const ServiceConfig& c) {
  if (c.port < 0 || c.port > 65535) throw InvalidArgument("port out of range");
  if (c.redundancy < 1) throw InvalidArgument("redundancy must be at least 1");
  if (c.assignment_timeout.count() <= 0) {
    throw InvalidArgument("assignment timeout must be positive");
  }
  if (!(c.qualification_threshold >= 0.0 && c.qualification_threshold <= 1.0)) {
    throw InvalidArgument("qualification threshold must lie in [0, 1]");
  }
  if (c.qualification_items < 1) throw InvalidArgument("qualification needs at least 1 item");
}

long long to_millis(TimePoint t) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
}

}  // namespace

ServiceConfig load_service_config(const std::optional<std::string>& path,
                                  const std::function<const char*(const char*)>& getenv_fn) {
  ServiceConfig c;
  auto env = [&](const char* name) -> const char* {
    const char* v = getenv_fn ? getenv_fn(name) : nullptr;
    return (v && *v) ? v : nullptr;
  };
  if (path) {
    json j;
    try {
      j = json::parse(read_file(*path));
      apply_config_json(c, j);
    } catch (const json::exception& e) {
      throw ParseError(*path, 0, std::string("bad service config: ") + e.what());
    }
  }
  if (auto v = env("GREL_HOST")) c.host = v;
  if (auto v = env("GREL_PORT")) c.port = static_cast<int>(env_int("GREL_PORT", v));
  if (auto v = env("GREL_REDUNDANCY")) {
    c.redundancy = static_cast<int>(env_int("GREL_REDUNDANCY", v));
  }
  if (auto v = env("GREL_ASSIGNMENT_TIMEOUT_S")) {
    c.assignment_timeout = std::chrono::seconds(env_int("GREL_ASSIGNMENT_TIMEOUT_S", v));
  }
  if (auto v = env("GREL_QUAL_THRESHOLD")) {
    c.qualification_threshold = env_real("GREL_QUAL_THRESHOLD", v);
  }
  if (auto v = env("GREL_QUAL_ITEMS")) {
    auto n = env_int("GREL_QUAL_ITEMS", v);
    if (n < 1) throw InvalidArgument("GREL_QUAL_ITEMS must be positive");
    c.qualification_items = static_cast<std::size_t>(n);
  }
  if (auto v = env("GREL_ANSWERS_LOG")) c.answers_log = v;
  if (auto v = env("GREL_STATIC_DIR")) c.static_dir = v;
  if (auto v = env("GREL_MEDIA_ROOT")) c.media_root = v;
  check_config(c);
  return c;
}

std::string_view to_string(AssignmentState s) {
  switch (s) {
    case AssignmentState::open: return "open";
    case AssignmentState::submitted: return "submitted";
    case AssignmentState::expired: return "expired";
  }
  return "?";
}

std::string_view to_string(SubmitError e) {
  switch (e) {
    case SubmitError::none: return "none";
    case SubmitError::not_found: return "not_found";
    case SubmitError::not_open: return "not_open";
    case SubmitError::coverage: return "coverage";
    case SubmitError::range: return "range";
    case SubmitError::listen: return "listen";
  }
  return "?";
}

AnnotationStore::AnnotationStore(const Catalog& catalog, std::vector<Hit> hits,
                                 std::vector<QualificationItem> pool, ServiceConfig cfg,
                                 Clock clock)
    : catalog_(catalog), pool_(std::move(pool)), cfg_(std::move(cfg)), clock_(std::move(clock)) {
  check_config(cfg_);
  for (const auto& q : pool_) check_qualification_item(q);
  std::sort(hits.begin(), hits.end(),
            [](const Hit& a, const Hit& b) { return a.hit_id < b.hit_id; });
  hits_.reserve(hits.size());
  for (auto& h : hits) {
    if (!catalog_.find_caption(h.caption_id)) {
      throw DanglingReference("HIT references unknown caption '" + h.caption_id + "'", h.caption_id);
    }
    if (!hit_index_.emplace(h.hit_id, hits_.size()).second) {
      throw DataError("duplicate HIT id '" + h.hit_id + "'");
    }
    hits_.push_back(HitState{std::move(h), 0, 0, {}});
  }
  if (!cfg_.answers_log.empty()) {
    replay_log();
    log_.open(cfg_.answers_log, std::ios::app | std::ios::binary);
    if (!log_) throw DataError("cannot open answers log '" + cfg_.answers_log + "'");
  }
}

void AnnotationStore::replay_log() {
  if (!std::filesystem::exists(cfg_.answers_log)) return;
  std::string text = read_file(cfg_.answers_log);
  HitIndex index;
  detail::for_each_json_line(text, cfg_.answers_log, [&](const json& j, std::size_t line) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "qualification") {
      WorkerProfile& w = workers_[j.at("worker_id").get<std::string>()];
      w.worker_id = j["worker_id"].get<std::string>();
      w.attempted = true;
      w.qualified = j.at("qualified").get<bool>();
      w.qualification_score = j.at("score").get<double>();
      w.issued_items = j.at("items").get<std::vector<std::string>>();
    } else if (type == "answer") {
      const std::string hit_id = j.at("hit_id").get<std::string>();
      auto it = hit_index_.find(hit_id);
      if (it == hit_index_.end()) {
        throw ParseError(cfg_.answers_log, line, "answer for unknown HIT '" + hit_id + "'");
      }
      HitState& hs = hits_[it->second];
      const std::string worker = j.at("worker_id").get<std::string>();
      std::map<std::string, int, std::less<>> scores;
      for (auto& [clip, v] : j.at("scores").items()) scores[clip] = v.get<int>();
      answers_.push_back(make_answer_record(hs.hit, worker, scores));
      ++hs.submitted;
      hs.holders.insert(worker);
      WorkerProfile& w = workers_[worker];
      w.worker_id = worker;
      ++w.answers_submitted;
      Assignment a;
      a.assignment_id = j.at("assignment_id").get<std::string>();
      a.hit_id = hit_id;
      a.worker_id = worker;
      a.issued_at = TimePoint(std::chrono::milliseconds(j.at("issued_at").get<long long>()));
      a.state = AssignmentState::submitted;
      if (a.assignment_id.size() > 1 && a.assignment_id[0] == 'a') {
        try {
          next_assignment_ =
              std::max<std::uint64_t>(next_assignment_, std::stoull(a.assignment_id.substr(1)) + 1);
        } catch (const std::exception&) {
        }
      }
      assignments_[a.assignment_id] = std::move(a);
    } else {
      throw ParseError(cfg_.answers_log, line, "unknown record type '" + type + "'");
    }
  });
}

void AnnotationStore::append_log_locked(const std::string& line) {
  if (!log_.is_open()) return;
  log_ << line << '\n';
  log_.flush();
  if (!log_) throw DataError("failed to append to answers log '" + cfg_.answers_log + "'");
}

std::string AnnotationStore::new_assignment_id_locked() {
  std::string digits = std::to_string(next_assignment_++);
  if (digits.size() < 8) digits.insert(0, 8 - digits.size(), '0');
  return "a" + digits;
}

void AnnotationStore::expire_stale_locked(TimePoint now) {
  for (auto it = open_by_worker_.begin(); it != open_by_worker_.end();) {
    Assignment& a = assignments_.at(it->second);
    if (now - a.issued_at >= cfg_.assignment_timeout) {
      a.state = AssignmentState::expired;
      HitState& hs = hits_[hit_index_.at(a.hit_id)];
      --hs.open;
      hs.holders.erase(a.worker_id);
      it = open_by_worker_.erase(it);
    } else {
      ++it;
    }
  }
}

QualificationStart AnnotationStore::qualification_start(const std::string& worker_id) {
  if (worker_id.empty()) throw ServiceError(400, "bad_request", "worker id is empty");
  std::lock_guard lock(mu_);
  QualificationStart out;
  auto wit = workers_.find(worker_id);
  if (wit != workers_.end() && wit->second.qualified) {
    out.already_qualified = true;
    return out;
  }
  if (wit != workers_.end() && wit->second.attempted) {
    throw ServiceError(403, "qualification_failed",
                       "worker '" + worker_id + "' did not pass the qualification test");
  }
  if (pool_.empty()) throw ServiceError(503, "empty_pool", "qualification pool is empty");

  std::vector<std::size_t> order(pool_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(cfg_.seed, "qual:" + worker_id));
  std::size_t k = std::min(cfg_.qualification_items, pool_.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + rng.below(order.size() - i);
    std::swap(order[i], order[j]);
  }
  WorkerProfile& w = workers_[worker_id];
  w.worker_id = worker_id;
  w.issued_items.clear();
  for (std::size_t i = 0; i < k; ++i) {
    out.items.push_back(pool_[order[i]]);
    w.issued_items.push_back(pool_[order[i]].item_id);
  }
  return out;
}

GradeResult AnnotationStore::qualification_grade(
    const std::string& worker_id, const std::map<std::string, std::string>& choices) {
  std::lock_guard lock(mu_);
  auto wit = workers_.find(worker_id);
  if (wit == workers_.end() || wit->second.issued_items.empty()) {
    throw ServiceError(404, "unknown_worker",
                       "no qualification items were issued to '" + worker_id + "'");
  }
  WorkerProfile& w = wit->second;
  if (w.attempted) {
    return GradeResult{w.qualified, w.qualification_score};
  }
  for (const auto& [item, _] : choices) {
    if (std::find(w.issued_items.begin(), w.issued_items.end(), item) == w.issued_items.end()) {
      throw ServiceError(400, "not_issued", "item '" + item + "' was not issued to this worker");
    }
  }
  std::size_t correct = 0;
  for (const auto& id : w.issued_items) {
    auto q = std::find_if(pool_.begin(), pool_.end(),
                          [&](const QualificationItem& x) { return x.item_id == id; });
    auto c = choices.find(id);
    if (q != pool_.end() && c != choices.end() && c->second == q->correct) ++correct;
  }
  double score = static_cast<double>(correct) / static_cast<double>(w.issued_items.size());
  w.attempted = true;
  w.qualification_score = score;
  w.qualified = score >= cfg_.qualification_threshold;
  json rec = {{"type", "qualification"}, {"worker_id", worker_id}, {"score", score},
              {"qualified", w.qualified},    {"items", w.issued_items},
              {"at", to_millis(clock_())}};
  append_log_locked(rec.dump());
  return GradeResult{w.qualified, score};
}

IssuedAssignment AnnotationStore::issue_payload_locked(const Assignment& a) const {
  const Hit& h = hits_[hit_index_.at(a.hit_id)].hit;
  IssuedAssignment out;
  out.assignment = a;
  out.payload.caption_text = catalog_.find_caption(h.caption_id)->text;
  for (const auto& c : h.clips) out.payload.clips.push_back({c.clip_id, c.position});
  return out;
}

std::optional<IssuedAssignment> AnnotationStore::next_assignment(const std::string& worker_id) {
  std::lock_guard lock(mu_);
  auto wit = workers_.find(worker_id);
  if (wit == workers_.end() || !wit->second.qualified) {
    throw ServiceError(403, "not_qualified", "worker '" + worker_id + "' is not qualified");
  }
  TimePoint now = clock_();
  expire_stale_locked(now);
  if (auto o = open_by_worker_.find(worker_id); o != open_by_worker_.end()) {
    return issue_payload_locked(assignments_.at(o->second));
  }
  const auto target = static_cast<std::size_t>(cfg_.redundancy);
  HitState* best = nullptr;
  for (auto& hs : hits_) {
    if (hs.submitted + hs.open >= target) continue;
    if (hs.holders.count(worker_id)) continue;
    if (!best || hs.submitted + hs.open < best->submitted + best->open) best = &hs;
  }
  if (!best) return std::nullopt;
  Assignment a;
  a.assignment_id = new_assignment_id_locked();
  a.hit_id = best->hit.hit_id;
  a.worker_id = worker_id;
  a.issued_at = now;
  ++best->open;
  best->holders.insert(worker_id);
  open_by_worker_[worker_id] = a.assignment_id;
  assignments_[a.assignment_id] = a;
  return issue_payload_locked(a);
}

SubmitResult AnnotationStore::submit_answer(const std::string& assignment_id,
                                            const std::map<std::string, int>& scores,
                                            const std::map<std::string, bool>& listen_complete) {
  auto reject = [](SubmitError e, std::string field, std::string msg) {
    return SubmitResult{false, e, std::move(field), std::move(msg)};
  };
  std::lock_guard lock(mu_);
  TimePoint now = clock_();
  expire_stale_locked(now);
  auto ait = assignments_.find(assignment_id);
  if (ait == assignments_.end()) {
    return reject(SubmitError::not_found, {}, "unknown assignment '" + assignment_id + "'");
  }
  Assignment& a = ait->second;
  if (a.state != AssignmentState::open) {
    return reject(SubmitError::not_open, {},
                  "assignment is " + std::string(to_string(a.state)));
  }
  HitState& hs = hits_[hit_index_.at(a.hit_id)];
  for (const auto& c : hs.hit.clips) {
    if (!scores.count(c.clip_id)) return reject(SubmitError::coverage, c.clip_id, "missing score");
  }
  for (const auto& [clip, _] : scores) {
    if (!hs.hit.find(clip)) return reject(SubmitError::coverage, clip, "clip is not in this HIT");
  }
  for (const auto& [clip, s] : scores) {
    if (s < kMinScore || s > kMaxScore) {
      return reject(SubmitError::range, clip, "score must lie in [0, 100]");
    }
  }
  for (const auto& c : hs.hit.clips) {
    auto l = listen_complete.find(c.clip_id);
    if (l == listen_complete.end() || !l->second) {
      return reject(SubmitError::listen, c.clip_id, "clip was not listened to completely");
    }
  }
  std::map<std::string, int, std::less<>> sc(scores.begin(), scores.end());
  AnswerRecord rec = make_answer_record(hs.hit, a.worker_id, sc);
  json line = {{"type", "answer"},          {"assignment_id", a.assignment_id},
               {"hit_id", a.hit_id},        {"worker_id", a.worker_id},
               {"scores", scores},          {"issued_at", to_millis(a.issued_at)},
               {"submitted_at", to_millis(now)}};
  append_log_locked(line.dump());
  a.state = AssignmentState::submitted;
  --hs.open;
  ++hs.submitted;
  open_by_worker_.erase(a.worker_id);
  ++workers_[a.worker_id].answers_submitted;
  answers_.push_back(std::move(rec));
  return SubmitResult{true, SubmitError::none, {}, {}};
}

std::vector<AnswerRecord> AnnotationStore::export_answers(const std::string& split) const {
  auto s = parse_split(split);
  if (!s) throw InvalidArgument("unknown split '" + split + "'");
  std::vector<AnswerRecord> out;
  {
    std::lock_guard lock(mu_);
    for (const auto& a : answers_) {
      if (a.split == *s) out.push_back(a);
    }
  }
  sort_answers(out);
  return out;
}

std::map<Split, SplitStats> AnnotationStore::stats() const {
  std::lock_guard lock(mu_);
  std::map<Split, SplitStats> out;
  for (Split s : kAllSplits) out[s];
  const auto target = static_cast<std::size_t>(cfg_.redundancy);
  for (const auto& hs : hits_) {
    SplitStats& st = out[hs.hit.split];
    ++st.hits;
    if (hs.submitted >= target) ++st.hits_complete;
    st.answers += hs.submitted;
    st.open_assignments += hs.open;
  }
  return out;
}

bool AnnotationStore::complete() const {
  std::lock_guard lock(mu_);
  const auto target = static_cast<std::size_t>(cfg_.redundancy);
  return std::all_of(hits_.begin(), hits_.end(),
                     [&](const HitState& h) { return h.submitted >= target; });
}

std::optional<WorkerProfile> AnnotationStore::worker(const std::string& worker_id) const {
  std::lock_guard lock(mu_);
  auto it = workers_.find(worker_id);
  if (it == workers_.end()) return std::nullopt;
  return it->second;
}

std::optional<Assignment> AnnotationStore::assignment(const std::string& assignment_id) const {
  std::lock_guard lock(mu_);
  auto it = assignments_.find(assignment_id);
  if (it == assignments_.end()) return std::nullopt;
  return it->second;
}

std::string AnnotationStore::media_path(const std::string& clip_id) const {
  const AudioClip* c = catalog_.find_clip(clip_id);
  if (!c || c->media_path.empty()) return {};
  std::filesystem::path p(c->media_path);
  if (p.is_relative() && !cfg_.media_root.empty()) p = std::filesystem::path(cfg_.media_root) / p;
  return p.string();
}

}  // namespace grel
