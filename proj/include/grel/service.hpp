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

#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "grel/answers.hpp"
#include "grel/catalog.hpp"
#include "grel/error.hpp"
#include "grel/hits.hpp"

namespace grel {

/// Failure reported to an HTTP client. `code` is a stable tag.
class ServiceError : public DataError {
 public:
  ServiceError(int status, std::string code, const std::string& what)
      : DataError(what), status_(status), code_(std::move(code)) {}
  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }

 private:
  int status_;
  std::string code_;
};

struct QualificationItem {
  std::string item_id;
  std::string caption;
  std::array<std::string, 3> candidates;
  std::string correct;
};

/// Throws InvalidArgument unless candidates are distinct and contain `correct`.
void check_qualification_item(const QualificationItem& item);
std::vector<QualificationItem> parse_qualification_pool(std::string_view text,
                                                        const std::string& source);
std::string write_qualification_pool(const std::vector<QualificationItem>& pool);

/// Up to `n` items built from the catalog: a caption, its source clip and two
/// other clips of the same split, in shuffled order.
std::vector<QualificationItem> make_qualification_pool(const Catalog& catalog, std::size_t n,
                                                       std::uint64_t seed);

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  int redundancy = 5;
  std::chrono::seconds assignment_timeout{30 * 60};
  double qualification_threshold = 1.0;
  std::size_t qualification_items = 3;
  std::uint64_t seed = 0;
  std::string answers_log;  // empty: in-memory only
  std::string static_dir;   // annotation UI bundle, optional
  std::string media_root;   // base for relative clip media paths
};

/// Defaults, then the JSON config file (if any), then GREL_* environment
/// overrides: GREL_HOST, GREL_PORT, GREL_REDUNDANCY, GREL_ASSIGNMENT_TIMEOUT_S,
/// GREL_QUAL_THRESHOLD, GREL_QUAL_ITEMS, GREL_ANSWERS_LOG, GREL_STATIC_DIR,
/// GREL_MEDIA_ROOT.
ServiceConfig load_service_config(const std::optional<std::string>& path,
                                  const std::function<const char*(const char*)>& getenv_fn);

struct WorkerProfile {
  std::string worker_id;
  bool qualified = false;
  bool attempted = false;  // graded at least once
  double qualification_score = 0.0;
  std::size_t answers_submitted = 0;
  std::vector<std::string> issued_items;
};

enum class AssignmentState { open, submitted, expired };
std::string_view to_string(AssignmentState s);

using TimePoint = std::chrono::system_clock::time_point;
using Clock = std::function<TimePoint()>;

struct Assignment {
  std::string assignment_id;
  std::string hit_id;
  std::string worker_id;
  TimePoint issued_at;
  AssignmentState state = AssignmentState::open;
};

/// What an annotator sees: the caption and the five clips in display order.
struct HitPayload {
  std::string caption_text;
  struct Clip {
    std::string clip_id;
    int position = 0;
  };
  std::vector<Clip> clips;
};

struct QualificationStart {
  bool already_qualified = false;
  std::vector<QualificationItem> items;  // callers must not expose `correct`
};

struct GradeResult {
  bool qualified = false;
  double score = 0.0;
};

struct IssuedAssignment {
  Assignment assignment;
  HitPayload payload;
};

enum class SubmitError { none, not_found, not_open, coverage, range, listen };
std::string_view to_string(SubmitError e);

struct SubmitResult {
  bool accepted = false;
  SubmitError error = SubmitError::none;
  std::string field;  // offending clip id, when applicable
  std::string message;
};

struct SplitStats {
  std::size_t hits = 0;
  std::size_t hits_complete = 0;
  std::size_t answers = 0;
  std::size_t open_assignments = 0;
};

/// In-process state of the annotation service. Every public member is safe
/// to call concurrently; issuance and submission are serialized by one mutex
/// so reserving a HIT slot is an atomic check-and-reserve.
class AnnotationStore {
 public:
  AnnotationStore(const Catalog& catalog, std::vector<Hit> hits,
                  std::vector<QualificationItem> pool, ServiceConfig cfg,
                  Clock clock = [] { return std::chrono::system_clock::now(); });

  QualificationStart qualification_start(const std::string& worker_id);
  /// `choices`: item_id -> chosen clip. Missing items count as wrong.
  GradeResult qualification_grade(const std::string& worker_id,
                                  const std::map<std::string, std::string>& choices);

  /// The worker's current open assignment if any, otherwise a fresh one on the
  /// least-served HIT they have not held; nullopt when no work remains.
  std::optional<IssuedAssignment> next_assignment(const std::string& worker_id);

  SubmitResult submit_answer(const std::string& assignment_id,
                             const std::map<std::string, int>& scores,
                             const std::map<std::string, bool>& listen_complete);

  /// Answers of one split joined with roles, sorted by (hit_id, worker_id).
  /// Throws InvalidArgument for an unknown split name.
  std::vector<AnswerRecord> export_answers(const std::string& split) const;

  std::map<Split, SplitStats> stats() const;
  /// Every HIT has at least `redundancy` submitted answers.
  bool complete() const;

  std::optional<WorkerProfile> worker(const std::string& worker_id) const;
  std::optional<Assignment> assignment(const std::string& assignment_id) const;
  const ServiceConfig& config() const { return cfg_; }
  /// Media locator of a clip, empty when unknown.
  std::string media_path(const std::string& clip_id) const;

 private:
  struct HitState {
    Hit hit;
    std::size_t submitted = 0;
    std::size_t open = 0;
    std::set<std::string> holders;  // workers with an open or submitted copy
  };

  void expire_stale_locked(TimePoint now);
  void replay_log();
  void append_log_locked(const std::string& line);
  std::string new_assignment_id_locked();
  IssuedAssignment issue_payload_locked(const Assignment& a) const;

  const Catalog& catalog_;
  std::vector<QualificationItem> pool_;
  ServiceConfig cfg_;
  Clock clock_;

  mutable std::mutex mu_;
  std::vector<HitState> hits_;
  std::map<std::string, std::size_t, std::less<>> hit_index_;
  std::map<std::string, WorkerProfile, std::less<>> workers_;
  std::map<std::string, Assignment, std::less<>> assignments_;
  std::map<std::string, std::string, std::less<>> open_by_worker_;
  std::vector<AnswerRecord> answers_;
  std::uint64_t next_assignment_ = 1;
  std::ofstream log_;
};

}  // namespace grel
