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

#include "allocdss/http_server.h"

#include <charconv>
#include <cstdlib>

#include "allocdss/io.h"
#include "httplib.h"

namespace allocdss {

namespace {

constexpr char kJsonType[] = "application/json";

void SendJson(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", kJsonType);
}

void SendError(httplib::Response& res, int status, std::string_view code,
               std::string_view message,
               const std::vector<FieldError>& fields = {}) {
  Json error = {{"code", code}, {"message", message}};
  error["fields"] = Json::array();
  for (const FieldError& f : fields) {
    error["fields"].push_back(
        {{"field", f.field}, {"rule", f.rule}, {"message", f.message}});
  }
  SendJson(res, status, {{"error", std::move(error)}});
}

// Runs `body`, translating service exceptions into error responses.
template <typename F>
void Guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const ValidationError& e) {
    SendError(res, 422, "validation_error", e.what(), e.fields());
  } catch (const NotFoundError& e) {
    SendError(res, 404, "not_found", e.what());
  } catch (const EmptySessionError& e) {
    SendError(res, 409, "empty_session", e.what());
  } catch (const PreconditionError& e) {
    SendError(res, 409, "precondition_failed", e.what());
  } catch (const InputError& e) {
    SendError(res, 400, "bad_request", e.what());
  } catch (const std::exception& e) {
    SendError(res, 500, "internal_error", e.what());
  }
}

std::string SessionOf(const httplib::Request& req) {
  if (req.has_param("session")) return req.get_param_value("session");
  return req.get_header_value("X-Session");
}

Json StatusToJson(const RunStatus& s) {
  Json j = {{"run_id", s.run_id},
            {"state", ToString(s.state)},
            {"instance_hash", s.instance_hash},
            {"plan", PlanToJson(s.plan)},
            {"timings",
             {{"filter_ms", s.timings.filter_ms},
              {"sort_ms", s.timings.sort_ms},
              {"allocate_ms", s.timings.allocate_ms},
              {"export_ms", s.timings.export_ms}}}};
  j["error"] = s.error.empty() ? Json(nullptr) : Json(s.error);
  return j;
}

Json OutputToJson(const std::string& run_id, const RunOutput& out) {
  Json j = {{"kind", "run_result"},
            {"schema_version", kSchemaVersion},
            {"run_id", run_id},
            {"result", ResultToJson(out.result)}};
  j["kpi"] = out.kpi ? KpiReportToJson(*out.kpi) : Json(nullptr);
  j["records"] = Json::array();
  for (const DailyServiceRecord& r : out.records) {
    j["records"].push_back({{"date", FormatDate(r.date)},
                            {"store_id", r.store_id},
                            {"requested", r.requested},
                            {"shipped", r.shipped},
                            {"limit", r.store_limit}});
  }
  return j;
}

// Plans on the wire may omit the document header.
PlanConfig PlanFromWire(Json plan) {
  if (plan.is_object()) {
    if (!plan.contains("schema_version")) plan["schema_version"] = kSchemaVersion;
    if (!plan.contains("kind")) plan["kind"] = "plan";
  }
  try {
    return PlanFromJson(plan);
  } catch (const InputError& e) {
    throw ValidationError({{"plan", "malformed", e.what()}});
  }
}

RunRequest RunRequestFromJson(const Json& j) {
  if (!j.is_object()) throw InputError("run request must be a JSON object");
  RunRequest request;
  auto text = [&](const char* key) -> std::string {
    if (!j.contains(key) || j[key].is_null()) return "";
    if (!j[key].is_string()) {
      throw ValidationError({{key, "type", "expected a string"}});
    }
    return j[key].get<std::string>();
  };
  request.session = text("session");
  request.instance_hash = text("instance_hash");
  request.instance_path = text("instance_path");
  if (!j.contains("plan")) {
    throw ValidationError({{"plan", "required", "missing required field"}});
  }
  request.plan = PlanFromWire(j["plan"]);
  if (j.contains("simulate_second_day")) {
    if (!j["simulate_second_day"].is_boolean()) {
      throw ValidationError(
          {{"simulate_second_day", "type", "expected a boolean"}});
    }
    request.simulate_second_day = j["simulate_second_day"].get<bool>();
  }
  return request;
}

}  // namespace

ListenAddress ParseListenAddress(const std::string& text) {
  const size_t colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw InputError("listen address '" + text + "' is not host:port");
  }
  ListenAddress out;
  out.host = text.substr(0, colon);
  const std::string port = text.substr(colon + 1);
  auto [ptr, ec] =
      std::from_chars(port.data(), port.data() + port.size(), out.port);
  if (ec != std::errc() || ptr != port.data() + port.size() || out.port < 0 ||
      out.port > 65535) {
    throw InputError("listen address '" + text + "' has an invalid port");
  }
  return out;
}

std::string ResolveListenAddress(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv(kAddrEnvVar); env != nullptr && *env) {
    return env;
  }
  return kDefaultAddr;
}

struct HttpServer::Impl {
  explicit Impl(PlannerService& s) : service(s) {}
  PlannerService& service;
  httplib::Server server;
};

HttpServer::HttpServer(PlannerService& service)
    : impl_(std::make_unique<Impl>(service)) {
  PlannerService& svc = impl_->service;
  httplib::Server& server = impl_->server;

  server.Post("/instance", [&svc](const httplib::Request& req,
                                  httplib::Response& res) {
    Guarded(res, [&] {
      std::vector<std::string> warnings;
      Instance instance =
          InstanceFromJson(ParseJsonText(req.body, "request body"), &warnings);
      const SessionInfo info = svc.LoadInstance(std::move(instance),
                                                SessionOf(req));
      SendJson(res, 201,
               {{"session", info.session},
                {"instance_hash", info.instance_hash},
                {"warnings", warnings}});
    });
  });

  server.Get("/warehouses", [&svc](const httplib::Request& req,
                                   httplib::Response& res) {
    Guarded(res, [&] {
      Json list = Json::array();
      for (const WarehouseDescriptor& w : svc.ListWarehouses(SessionOf(req))) {
        list.push_back({{"id", w.id},
                        {"label", w.label},
                        {"active", w.active},
                        {"rank", w.rank}});
      }
      SendJson(res, 200, {{"warehouses", std::move(list)}});
    });
  });

  server.Post("/runs", [&svc](const httplib::Request& req,
                              httplib::Response& res) {
    Guarded(res, [&] {
      RunRequest request =
          RunRequestFromJson(ParseJsonText(req.body, "request body"));
      if (request.session.empty()) request.session = SessionOf(req);
      const std::string id = svc.SubmitRun(request);
      SendJson(res, 202, StatusToJson(svc.GetRun(id)));
    });
  });

  server.Get("/runs/:id", [&svc](const httplib::Request& req,
                                 httplib::Response& res) {
    Guarded(res, [&] {
      SendJson(res, 200, StatusToJson(svc.GetRun(req.path_params.at("id"))));
    });
  });

  server.Get("/runs/:id/result", [&svc](const httplib::Request& req,
                                        httplib::Response& res) {
    Guarded(res, [&] {
      const std::string& id = req.path_params.at("id");
      SendJson(res, 200, OutputToJson(id, svc.GetResult(id)));
    });
  });

  server.Get("/runs/:id/day2", [&svc](const httplib::Request& req,
                                      httplib::Response& res) {
    Guarded(res, [&] {
      SendJson(res, 200,
               ResultToJson(svc.WhatIfSecondDay(req.path_params.at("id"))));
    });
  });

  server.Get("/runs/:id/exports/:warehouse", [&svc](const httplib::Request& req,
                                                    httplib::Response& res) {
    Guarded(res, [&] {
      const std::string& wh = req.path_params.at("warehouse");
      res.status = 200;
      res.set_header("Content-Disposition",
                     "attachment; filename=\"" + DispatchFileName(wh) + "\"");
      res.set_content(svc.GetExport(req.path_params.at("id"), wh),
                      "text/csv");
    });
  });
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const ListenAddress& address) {
  httplib::Server& server = impl_->server;
  int port = address.port;
  if (port == 0) {
    port = server.bind_to_any_port(address.host);
  } else if (!server.bind_to_port(address.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw InputError("cannot listen on " + address.host + ":" +
                     std::to_string(address.port));
  }
  return port;
}

void HttpServer::Serve() { impl_->server.listen_after_bind(); }

void HttpServer::WaitUntilReady() { impl_->server.wait_until_ready(); }

void HttpServer::Stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace allocdss
