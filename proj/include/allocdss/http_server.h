// Copyright 2026 The AllocDSS Authors
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

// JSON-over-HTTP binding of PlannerService.
//
//   POST /instance                     body: instance document
//   GET  /warehouses                   ?session=<token>
//   POST /runs                         body: run request
//   GET  /runs/{id}                    run status
//   GET  /runs/{id}/result             allocation result + KPI report
//   GET  /runs/{id}/day2               simulated day-2 result
//   GET  /runs/{id}/exports/{wh}       dispatch CSV (text/csv)
//
// The session token may also be passed in the X-Session header. Errors are
//   {"error": {"code": ..., "message": ..., "fields": [...]}}
// with 400 (malformed), 404 (not found), 409 (precondition / empty session),
// 422 (validation) or 500.

#ifndef ALLOCDSS_HTTP_SERVER_H_
#define ALLOCDSS_HTTP_SERVER_H_

#include <memory>
#include <string>

#include "allocdss/service.h"

namespace allocdss {

inline constexpr char kAddrEnvVar[] = "ALLOCDSS_ADDR";
inline constexpr char kDefaultAddr[] = "127.0.0.1:8080";

struct ListenAddress {
  std::string host;
  int port = 0;
};

// Parses "host:port" (port 0 picks a free port).
ListenAddress ParseListenAddress(const std::string& text);

// Flag value if set, else $ALLOCDSS_ADDR, else kDefaultAddr.
std::string ResolveListenAddress(const std::string& flag_value);

class HttpServer {
 public:
  explicit HttpServer(PlannerService& service);
  ~HttpServer();

  // Binds and returns the bound port; throws InputError on failure.
  int Bind(const ListenAddress& address);
  // Serves until Stop(); call after Bind.
  void Serve();
  // Blocks until Serve() is accepting connections.
  void WaitUntilReady();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace allocdss

#endif  // ALLOCDSS_HTTP_SERVER_H_
