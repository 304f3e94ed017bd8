// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Uniform client layer over every external model capability. Requests and
// responses are JSON records; media travels by store ref, never inline.
// Each capability has a documented request/response schema validated on
// both sides. Transports: deterministic in-process mocks (pure functions of
// request, seed, and fault schedule) and JSON-over-HTTP.

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "ivedit/pipeline/store.hpp"

namespace ivedit::adapters {

enum class Capability {
  Caption = 0,
  DetectSegment,
  LocalDescribe,
  Depth,
  ImageEdit,
  ControlledVideo,
  I2V,
  Inpaint,
  MultiShotGenerate,
  InstructionGenerate,
  Judge,
  EditModelUnderTest,
};

inline constexpr int kCapabilityCount = 12;

std::string_view capability_name(Capability c);
std::optional<Capability> parse_capability(std::string_view name);

struct EndpointConfig {
  Capability capability = Capability::Caption;
  enum class Transport { InProcessMock, Http } transport = Transport::InProcessMock;
  std::string base_url;           // http only
  double timeout_s = 10.0;        // http only
  int max_retries = 2;
  double backoff_s = 0.0;         // base delay, doubled per retry
  double rate_limit_per_s = 0.0;  // 0 = unlimited
  // Mock knobs: seed, judge policy/script, model mode, fault_schedule.
  nlohmann::json options = nlohmann::json::object();

  nlohmann::json to_json() const;
  static EndpointConfig from_json(const nlohmann::json& j);
};

struct Request {
  std::string id;
  nlohmann::json payload;
};

struct Response {
  std::string id;
  nlohmann::json payload;
};

void validate_request(Capability cap, const Request& req);
void validate_response(Capability cap, const Response& resp);

class Endpoint {
 public:
  Endpoint(EndpointConfig cfg, pipeline::ArtifactStore* store);

  // Validates, rate-limits, dispatches with retry/backoff.
  Response call(const Request& req);

  // True iff n repeated calls return identical payloads. Mock endpoints
  // only; http endpoints violate the precondition.
  bool mock_determinism_check(const Request& req, int n);

  const EndpointConfig& config() const { return cfg_; }

 private:
  Response dispatch(const Request& req);
  void rate_limit_acquire();
  bool next_attempt_faulted();

  EndpointConfig cfg_;
  pipeline::ArtifactStore* store_;
  std::mutex mu_;
  double next_slot_s_ = 0.0;
  size_t fault_cursor_ = 0;
};

class AdapterSet {
 public:
  AdapterSet() = default;

  // One deterministic mock endpoint per capability; judge policy "lenient".
  static AdapterSet desk_mocks(uint64_t seed, pipeline::ArtifactStore* store);
  static AdapterSet from_registry(const nlohmann::json& registry,
                                  pipeline::ArtifactStore* store);

  void add(EndpointConfig cfg, pipeline::ArtifactStore* store);
  bool has(Capability cap) const;
  Endpoint& endpoint(Capability cap);
  Response call(Capability cap, const Request& req);
  bool any_http() const;

  nlohmann::json registry_json() const;

 private:
  std::map<Capability, std::shared_ptr<Endpoint>> endpoints_;
};

// In-process mock behavior; exposed for direct unit testing.
Response mock_dispatch(Capability cap, const Request& req, const nlohmann::json& options,
                       pipeline::ArtifactStore& store);

}  // namespace ivedit::adapters
