// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <thread>

#include <httplib.h>

#include "ivedit/adapters/adapters.hpp"
#include "ivedit/core/errors.hpp"
#include "ivedit/core/rng.hpp"

using nlohmann::json;

namespace ivedit::adapters {

using core::ConfigError;
using core::ParameterError;
using core::TransportError;

std::string_view capability_name(Capability c) {
  switch (c) {
    case Capability::Caption: return "caption";
    case Capability::DetectSegment: return "detect_segment";
    case Capability::LocalDescribe: return "local_describe";
    case Capability::Depth: return "depth";
    case Capability::ImageEdit: return "image_edit";
    case Capability::ControlledVideo: return "controlled_video";
    case Capability::I2V: return "i2v";
    case Capability::Inpaint: return "inpaint";
    case Capability::MultiShotGenerate: return "multi_shot_generate";
    case Capability::InstructionGenerate: return "instruction_generate";
    case Capability::Judge: return "judge";
    case Capability::EditModelUnderTest: return "edit_model_under_test";
  }
  return "?";
}

std::optional<Capability> parse_capability(std::string_view name) {
  for (int i = 0; i < kCapabilityCount; ++i) {
    Capability c = static_cast<Capability>(i);
    if (capability_name(c) == name) return c;
  }
  return std::nullopt;
}

json EndpointConfig::to_json() const {
  return json{{"capability", std::string(capability_name(capability))},
              {"transport", transport == Transport::InProcessMock ? "in_process_mock" : "http"},
              {"base_url", base_url},
              {"timeout_s", timeout_s},
              {"max_retries", max_retries},
              {"backoff_s", backoff_s},
              {"rate_limit_per_s", rate_limit_per_s},
              {"options", options}};
}

EndpointConfig EndpointConfig::from_json(const json& j) {
  EndpointConfig c;
  auto cap = parse_capability(j.at("capability").get<std::string>());
  if (!cap) throw ConfigError("unknown capability: " + j.at("capability").dump());
  c.capability = *cap;
  std::string tr = j.value("transport", "in_process_mock");
  if (tr == "in_process_mock") {
    c.transport = Transport::InProcessMock;
  } else if (tr == "http") {
    c.transport = Transport::Http;
  } else {
    throw ConfigError("unknown transport: " + tr);
  }
  c.base_url = j.value("base_url", "");
  c.timeout_s = j.value("timeout_s", 10.0);
  c.max_retries = j.value("max_retries", 2);
  c.backoff_s = j.value("backoff_s", 0.0);
  c.rate_limit_per_s = j.value("rate_limit_per_s", 0.0);
  c.options = j.value("options", json::object());
  if (c.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  return c;
}

namespace {

struct FieldSpec {
  const char* name;
  json::value_t type;
};

struct Schema {
  std::vector<FieldSpec> request;
  std::vector<FieldSpec> response;
};

const Schema& schema_for(Capability cap) {
  using vt = json::value_t;
  static const std::map<Capability, Schema> schemas = {
      {Capability::Caption,
       {{{"clip", vt::string}}, {{"caption", vt::string}, {"object_names", vt::array}}}},
      {Capability::DetectSegment, {{{"clip", vt::string}}, {{"objects", vt::array}}}},
      {Capability::LocalDescribe,
       {{{"clip", vt::string}, {"name", vt::string}}, {{"caption", vt::string}}}},
      {Capability::Depth, {{{"clip", vt::string}}, {{"depth", vt::string}}}},
      {Capability::ImageEdit,
       {{{"image", vt::string}, {"instruction", vt::string}}, {{"image", vt::string}}}},
      {Capability::ControlledVideo,
       {{{"control", vt::string}, {"first_frame", vt::string}, {"prompt", vt::string}},
        {{"video", vt::string}}}},
      {Capability::I2V,
       {{{"image", vt::string}, {"prompt", vt::string}, {"frames", vt::number_unsigned}},
        {{"video", vt::string}}}},
      {Capability::Inpaint,
       {{{"clip", vt::string}, {"mask", vt::string}}, {{"video", vt::string}}}},
      {Capability::MultiShotGenerate,
       {{{"image", vt::string}, {"prompts", vt::array}},
        {{"video", vt::string}, {"shot_order", vt::array}}}},
      {Capability::InstructionGenerate,
       {{{"category", vt::string}, {"seed", vt::number_unsigned}, {"context", vt::object}},
        {{"instruction", vt::string}, {"extras", vt::object}}}},
      {Capability::Judge,
       {{{"source", vt::string}, {"edited", vt::string}, {"prompt", vt::string}},
        {{"raw", vt::string}}}},
      {Capability::EditModelUnderTest,
       {{{"source", vt::string}, {"instruction", vt::string}}, {{"video", vt::string}}}},
  };
  return schemas.at(cap);
}

bool type_matches(const json& v, json::value_t t) {
  if (t == json::value_t::number_unsigned) return v.is_number();
  return v.type() == t;
}

void check_fields(const json& payload, const std::vector<FieldSpec>& fields,
                  const std::string& what) {
  if (!payload.is_object()) throw ParameterError(what + ": payload must be a JSON object");
  for (const auto& f : fields) {
    if (!payload.contains(f.name)) {
      throw ParameterError(what + ": missing field '" + f.name + "'");
    }
    if (!type_matches(payload.at(f.name), f.type)) {
      throw ParameterError(what + ": field '" + f.name + "' has wrong type");
    }
  }
}

}  // namespace

void validate_request(Capability cap, const Request& req) {
  check_fields(req.payload, schema_for(cap).request,
               "request(" + std::string(capability_name(cap)) + ")");
}

void validate_response(Capability cap, const Response& resp) {
  check_fields(resp.payload, schema_for(cap).response,
               "response(" + std::string(capability_name(cap)) + ")");
}

Endpoint::Endpoint(EndpointConfig cfg, pipeline::ArtifactStore* store)
    : cfg_(std::move(cfg)), store_(store) {}

void Endpoint::rate_limit_acquire() {
  if (cfg_.rate_limit_per_s <= 0.0) return;
  double wait_s = 0.0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto now = std::chrono::duration<double>(
                   std::chrono::steady_clock::now().time_since_epoch())
                   .count();
    double interval = 1.0 / cfg_.rate_limit_per_s;
    double slot = std::max(now, next_slot_s_);
    next_slot_s_ = slot + interval;
    wait_s = slot - now;
  }
  if (wait_s > 0) {
    std::this_thread::sleep_for(std::chrono::duration<double>(wait_s));
  }
}

bool Endpoint::next_attempt_faulted() {
  std::lock_guard<std::mutex> lock(mu_);
  const auto& sched = cfg_.options.find("fault_schedule");
  if (sched == cfg_.options.end() || !sched->is_array()) return false;
  if (fault_cursor_ >= sched->size()) return false;
  std::string v = (*sched)[fault_cursor_++].get<std::string>();
  return v == "fail";
}

Response Endpoint::dispatch(const Request& req) {
  if (cfg_.transport == EndpointConfig::Transport::InProcessMock) {
    if (!store_) throw ConfigError("mock endpoint requires an artifact store");
    return mock_dispatch(cfg_.capability, req, cfg_.options, *store_);
  }
  httplib::Client client(cfg_.base_url);
  client.set_connection_timeout(std::chrono::duration<double>(cfg_.timeout_s));
  client.set_read_timeout(std::chrono::duration<double>(cfg_.timeout_s));
  json body{{"id", req.id}, {"payload", req.payload}};
  std::string path = "/" + std::string(capability_name(cfg_.capability));
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) {
    throw TransportError("http " + cfg_.base_url + path + ": " +
                         httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("http " + cfg_.base_url + path + ": status " +
                         std::to_string(res->status));
  }
  json parsed = json::parse(res->body, nullptr, false);
  if (parsed.is_discarded() || !parsed.contains("id") || !parsed.contains("payload")) {
    throw TransportError("http response is not a valid envelope");
  }
  return Response{parsed.at("id").get<std::string>(), parsed.at("payload")};
}

Response Endpoint::call(const Request& req) {
  validate_request(cfg_.capability, req);
  rate_limit_acquire();
  int attempts = cfg_.max_retries + 1;
  std::string last_error;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0 && cfg_.backoff_s > 0) {
      std::this_thread::sleep_for(
          std::chrono::duration<double>(cfg_.backoff_s * static_cast<double>(1 << (attempt - 1))));
    }
    try {
      if (next_attempt_faulted()) {
        throw TransportError("injected fault");
      }
      Response resp = dispatch(req);
      validate_response(cfg_.capability, resp);
      return resp;
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  throw TransportError(std::string(capability_name(cfg_.capability)) + ": exhausted " +
                       std::to_string(attempts) + " attempts; last error: " + last_error);
}

bool Endpoint::mock_determinism_check(const Request& req, int n) {
  if (cfg_.transport != EndpointConfig::Transport::InProcessMock) {
    throw ParameterError("mock_determinism_check: endpoint is not a mock");
  }
  if (n < 1) throw ParameterError("mock_determinism_check: n must be >= 1");
  std::string first;
  for (int i = 0; i < n; ++i) {
    Response r = call(req);
    std::string dumped = r.payload.dump();
    if (i == 0) {
      first = dumped;
    } else if (dumped != first) {
      return false;
    }
  }
  return true;
}

AdapterSet AdapterSet::desk_mocks(uint64_t seed, pipeline::ArtifactStore* store) {
  AdapterSet set;
  for (int i = 0; i < kCapabilityCount; ++i) {
    Capability cap = static_cast<Capability>(i);
    EndpointConfig cfg;
    cfg.capability = cap;
    cfg.transport = EndpointConfig::Transport::InProcessMock;
    cfg.options["seed"] = core::mix64(seed, core::fnv1a64(capability_name(cap)));
    if (cap == Capability::Judge) cfg.options["policy"] = "lenient";
    if (cap == Capability::EditModelUnderTest) cfg.options["mode"] = "identity";
    set.add(std::move(cfg), store);
  }
  return set;
}

AdapterSet AdapterSet::from_registry(const json& registry, pipeline::ArtifactStore* store) {
  AdapterSet set;
  if (!registry.contains("endpoints") || !registry.at("endpoints").is_array()) {
    throw ConfigError("adapter registry must contain an 'endpoints' array");
  }
  for (const auto& e : registry.at("endpoints")) {
    set.add(EndpointConfig::from_json(e), store);
  }
  return set;
}

void AdapterSet::add(EndpointConfig cfg, pipeline::ArtifactStore* store) {
  Capability cap = cfg.capability;
  endpoints_[cap] = std::make_shared<Endpoint>(std::move(cfg), store);
}

bool AdapterSet::has(Capability cap) const { return endpoints_.count(cap) > 0; }

Endpoint& AdapterSet::endpoint(Capability cap) {
  auto it = endpoints_.find(cap);
  if (it == endpoints_.end()) {
    throw ConfigError("no endpoint registered for capability " +
                      std::string(capability_name(cap)));
  }
  return *it->second;
}

Response AdapterSet::call(Capability cap, const Request& req) {
  return endpoint(cap).call(req);
}

bool AdapterSet::any_http() const {
  for (const auto& [cap, ep] : endpoints_) {
    if (ep->config().transport == EndpointConfig::Transport::Http) return true;
  }
  return false;
}

json AdapterSet::registry_json() const {
  json endpoints = json::array();
  for (const auto& [cap, ep] : endpoints_) endpoints.push_back(ep->config().to_json());
  return json{{"endpoints", endpoints}};
}

}  // namespace ivedit::adapters
