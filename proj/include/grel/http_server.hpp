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

#include <memory>
#include <string>

#include "grel/service.hpp"

namespace grel {

/// JSON-over-HTTP front end of an AnnotationStore.
///
///   POST /api/qualification/{worker}/start
///   POST /api/qualification/{worker}/grade     {"choices": {item_id: clip_id}}
///   GET  /api/assignment?worker=
///   POST /api/answer/{assignment_id}           {"scores": {...}, "listen_complete": {...}}
///   GET  /api/audio/{clip_id}                  byte ranges supported
///   GET  /api/export?split=
///   GET  /api/stats
///
/// Errors are JSON objects {"error": code, "message": text}.
class HttpService {
 public:
  explicit HttpService(AnnotationStore& store);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Binds `host`:`port`; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call after bind().
  void serve();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace grel
