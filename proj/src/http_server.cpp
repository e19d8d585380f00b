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

#include "grel/http_server.hpp"

#include <filesystem>

#include "httplib.h"
#include "json.hpp"

#include "grel/util.hpp"

namespace grel {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", code}, {"message", message}}.dump(), kJson);
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e.status(), e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "bad_request", e.what());
    } catch (const InvalidArgument& e) {
      send_error(res, 400, "bad_request", e.what());
    } catch (const DataError& e) {
      send_error(res, 422, e.kind(), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body);
  if (!j.is_object()) throw ServiceError(400, "bad_request", "body must be a JSON object");
  return j;
}

std::string audio_url(const std::string& clip_id) { return "/api/audio/" + clip_id; }

std::string content_type_for(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  if (ext == ".wav") return "audio/wav";
  if (ext == ".mp3") return "audio/mpeg";
  if (ext == ".flac") return "audio/flac";
  if (ext == ".ogg") return "audio/ogg";
  return "application/octet-stream";
}

long long millis(TimePoint t) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
}

}  // namespace

struct HttpService::Impl {
  AnnotationStore& store;
  httplib::Server server;
  explicit Impl(AnnotationStore& s) : store(s) {}
  void routes();
};

void HttpService::Impl::routes() {
  server.Post("/api/qualification/:worker/start",
              guarded([this](const httplib::Request& req, httplib::Response& res) {
                auto started = store.qualification_start(req.path_params.at("worker"));
                json items = json::array();
                for (const auto& q : started.items) {
                  json cands = json::array();
                  for (const auto& c : q.candidates) {
                    cands.push_back({{"clip_id", c}, {"audio_url", audio_url(c)}});
                  }
                  items.push_back(
                      {{"item_id", q.item_id}, {"caption", q.caption}, {"candidates", cands}});
                }
                res.set_content(
                    json{{"already_qualified", started.already_qualified}, {"items", items}}.dump(),
                    kJson);
              }));

  server.Post("/api/qualification/:worker/grade",
              guarded([this](const httplib::Request& req, httplib::Response& res) {
                json body = parse_body(req);
                auto choices =
                    body.value("choices", json::object()).get<std::map<std::string, std::string>>();
                auto g = store.qualification_grade(req.path_params.at("worker"), choices);
                res.set_content(json{{"qualified", g.qualified}, {"score", g.score}}.dump(), kJson);
              }));

  server.Get("/api/assignment",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               std::string worker = req.get_param_value("worker");
               if (worker.empty()) throw ServiceError(400, "bad_request", "missing worker");
               auto issued = store.next_assignment(worker);
               if (!issued) {
                 res.set_content(json{{"no_work", true}}.dump(), kJson);
                 return;
               }
               const Assignment& a = issued->assignment;
               json clips = json::array();
               for (const auto& c : issued->payload.clips) {
                 clips.push_back({{"clip_id", c.clip_id},
                                  {"position", c.position},
                                  {"audio_url", audio_url(c.clip_id)}});
               }
               auto expires = a.issued_at + store.config().assignment_timeout;
               res.set_content(json{{"no_work", false},
                                    {"assignment_id", a.assignment_id},
                                    {"caption", issued->payload.caption_text},
                                    {"clips", clips},
                                    {"issued_at_ms", millis(a.issued_at)},
                                    {"expires_at_ms", millis(expires)}}
                                   .dump(),
                               kJson);
             }));

  server.Post("/api/answer/:assignment_id",
              guarded([this](const httplib::Request& req, httplib::Response& res) {
                json body = parse_body(req);
                std::map<std::string, int> scores;
                const json raw_scores = body.value("scores", json::object());
                if (!raw_scores.is_object()) {
                  throw ServiceError(400, "bad_request", "scores must be an object");
                }
                for (const auto& [clip, v] : raw_scores.items()) {
                  if (!v.is_number_integer()) {
                    throw ServiceError(422, "range", "score for '" + clip + "' is not an integer");
                  }
                  auto x = v.get<long long>();
                  scores[clip] = x < -1 ? -1 : (x > 101 ? 101 : static_cast<int>(x));
                }
                auto listened = body.value("listen_complete", json::object())
                                    .get<std::map<std::string, bool>>();
                auto r = store.submit_answer(req.path_params.at("assignment_id"), scores, listened);
                if (r.accepted) {
                  res.set_content(json{{"accepted", true}}.dump(), kJson);
                  return;
                }
                switch (r.error) {
                  case SubmitError::not_found: res.status = 404; break;
                  case SubmitError::not_open: res.status = 409; break;
                  default: res.status = 422; break;
                }
                res.set_content(json{{"accepted", false},
                                     {"error", std::string(to_string(r.error))},
                                     {"field", r.field},
                                     {"message", r.message}}
                                    .dump(),
                                kJson);
              }));

  server.Get("/api/audio/:clip_id",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               const std::string& clip = req.path_params.at("clip_id");
               std::string path = store.media_path(clip);
               if (path.empty() || !std::filesystem::is_regular_file(path)) {
                 throw ServiceError(404, "not_found", "no audio for clip '" + clip + "'");
               }
               res.set_content(read_file(path), content_type_for(path));
             }));

  server.Get("/api/export", guarded([this](const httplib::Request& req, httplib::Response& res) {
               if (!req.has_param("split")) throw ServiceError(400, "bad_request", "missing split");
               auto answers = store.export_answers(req.get_param_value("split"));
               res.set_content(write_answers(answers), "text/tab-separated-values");
             }));

  server.Get("/api/stats", guarded([this](const httplib::Request&, httplib::Response& res) {
               json splits = json::object();
               for (const auto& [s, st] : store.stats()) {
                 splits[std::string(to_string(s))] = {{"hits", st.hits},
                                                      {"hits_complete", st.hits_complete},
                                                      {"answers", st.answers},
                                                      {"open_assignments", st.open_assignments}};
               }
               res.set_content(json{{"redundancy", store.config().redundancy},
                                    {"complete", store.complete()},
                                    {"splits", splits}}
                                   .dump(),
                               kJson);
             }));

  if (!store.config().static_dir.empty()) {
    if (!server.set_mount_point("/", store.config().static_dir)) {
      throw DataError("static directory '" + store.config().static_dir + "' does not exist");
    }
  }
}

HttpService::HttpService(AnnotationStore& store) : impl_(std::make_unique<Impl>(store)) {
  impl_->routes();
}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) {
    int p = impl_->server.bind_to_any_port(host);
    if (p < 0) throw DataError("cannot bind " + host);
    return p;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw DataError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpService::serve() { impl_->server.listen_after_bind(); }

void HttpService::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool HttpService::running() const { return impl_->server.is_running(); }

}  // namespace grel
