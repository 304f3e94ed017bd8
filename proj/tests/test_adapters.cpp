// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <thread>

#include <httplib.h>

#include "ivedit/adapters/adapters.hpp"
#include "ivedit/adapters/mock_world.hpp"
#include "ivedit/core/errors.hpp"
#include "ivedit/filtering/judge.hpp"

using namespace ivedit;
using namespace ivedit::adapters;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct StoreFixture {
  fs::path root;
  std::unique_ptr<pipeline::ArtifactStore> store;

  explicit StoreFixture(const std::string& tag) {
    root = fs::temp_directory_path() / ("ivedit_adapters_" + tag);
    fs::remove_all(root);
    store = std::make_unique<pipeline::ArtifactStore>(root);
  }
  ~StoreFixture() { fs::remove_all(root); }
};

}  // namespace

TEST_CASE("capability names round trip") {
  for (int i = 0; i < kCapabilityCount; ++i) {
    Capability c = static_cast<Capability>(i);
    CHECK(parse_capability(capability_name(c)) == c);
  }
  CHECK_FALSE(parse_capability("warp_drive").has_value());
}

TEST_CASE("mock world: scene render and mask agree") {
  auto scene = mockworld::make_scene(99, 2, 32, 32);
  auto clip = mockworld::render_scene(scene, 6, 32, 32, 8.0f);
  CHECK(mockworld::parse_scene_clip_id(clip.id).has_value());
  auto mask = mockworld::object_mask(scene, 0, 6, 32, 32);
  CHECK(mask.count() > 0);
  // every masked pixel carries the object color at that frame
  const auto& obj = scene.objects[0];
  int mismatches = 0;
  for (int f = 0; f < 6; ++f) {
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) {
        if (!mask.at(f, y, x)) continue;
        bool match = true;
        for (int c = 0; c < 3; ++c) {
          match = match && clip.at(f, y, x, c) == obj.color[static_cast<size_t>(c)];
        }
        // a later object may overlap this one
        mismatches += !match;
      }
    }
  }
  CHECK(mismatches < mask.count() / 2);
}

TEST_CASE("mocks are deterministic; caption mock contract") {
  StoreFixture fx("det");
  AdapterSet set = AdapterSet::desk_mocks(7, fx.store.get());
  auto scene = mockworld::make_scene(5, 2, 32, 32);
  auto clip = mockworld::render_scene(scene, 4, 32, 32, 8.0f);
  std::string ref = fx.store->put_clip(clip);
  Request req{"r1", json{{"clip", ref}}};
  CHECK(set.endpoint(Capability::Caption).mock_determinism_check(req, 5));
  auto resp = set.call(Capability::Caption, req);
  CHECK(resp.id == "r1");
  CHECK(resp.payload.at("caption").get<std::string>().size() > 10);
  CHECK(resp.payload.at("object_names").size() == 2);
}

TEST_CASE("fault schedule: succeeds on the third attempt with retries") {
  StoreFixture fx("fault");
  EndpointConfig cfg;
  cfg.capability = Capability::LocalDescribe;
  cfg.max_retries = 2;
  cfg.options = json{{"seed", 3},
                     {"fault_schedule", json::array({"fail", "fail", "ok"})}};
  Endpoint ep(cfg, fx.store.get());
  Request req{"r", json{{"clip", "none"}, {"name", "the teal block"}}};
  auto resp = ep.call(req);
  CHECK(resp.payload.at("caption").get<std::string>().find("teal") != std::string::npos);

  // with max_retries = 1 the same schedule exhausts the attempts
  EndpointConfig cfg2 = cfg;
  cfg2.max_retries = 1;
  Endpoint ep2(cfg2, fx.store.get());
  CHECK_THROWS_AS(ep2.call(req), core::TransportError);
}

TEST_CASE("schema validation rejects malformed requests") {
  StoreFixture fx("schema");
  AdapterSet set = AdapterSet::desk_mocks(1, fx.store.get());
  Request missing{"r", json{{"nope", 1}}};
  CHECK_THROWS_AS(set.call(Capability::Caption, missing), core::ParameterError);
  Request wrong_type{"r", json{{"clip", 42}}};
  CHECK_THROWS_AS(set.call(Capability::Caption, wrong_type), core::ParameterError);
}

TEST_CASE("judge mock: canonical format parses; scripted judge is verbatim") {
  StoreFixture fx("judge");
  AdapterSet set = AdapterSet::desk_mocks(11, fx.store.get());
  Request req{"r", json{{"source", "a"}, {"edited", "b"}, {"prompt", "rate this"}}};
  auto resp = set.call(Capability::Judge, req);
  auto triple = filtering::parse_judge_response(resp.payload.at("raw").get<std::string>());
  CHECK(triple.compliance >= 3);  // lenient policy
  CHECK(triple.consistency <= triple.compliance);

  EndpointConfig scripted;
  scripted.capability = Capability::Judge;
  scripted.options =
      json{{"seed", 0},
           {"policy", "script"},
           {"script", json::array({"Brief reasoning: fixed.\nInstruction Compliance: 1\n"
                                   "Consistency & Detail Fidelity: 1\n"
                                   "Visual Quality & Stability: 1\n"})}};
  Endpoint ep(scripted, fx.store.get());
  auto r2 = ep.call(req);
  auto t2 = filtering::parse_judge_response(r2.payload.at("raw").get<std::string>());
  CHECK(t2.compliance == 1);
  CHECK(t2.consistency == 1);
  CHECK(t2.quality == 1);
}

TEST_CASE("image edit mock: add instructions publish rectangle geometry") {
  StoreFixture fx("imgedit");
  AdapterSet set = AdapterSet::desk_mocks(21, fx.store.get());
  auto scene = mockworld::make_scene(8, 1, 32, 32);
  auto clip = mockworld::render_scene(scene, 1, 32, 32, 8.0f);
  std::string ref = fx.store->put_clip(clip);
  auto resp = set.call(Capability::ImageEdit,
                       {"r", json{{"image", ref}, {"instruction", "Add a red kite."}}});
  auto edited = fx.store->get_clip(resp.payload.at("image").get<std::string>());
  CHECK(edited.id.find("addrect-") != std::string::npos);
  // detect_segment recovers exactly that rectangle
  auto det = set.call(Capability::DetectSegment,
                      {"r2", json{{"clip", resp.payload.at("image").get<std::string>()}}});
  REQUIRE(det.payload.at("objects").size() == 1);
  auto mask = fx.store->get_mask(det.payload.at("objects")[0].at("mask").get<std::string>());
  CHECK(mask.count() > 0);
  // the mask support matches pixels that differ from the original frame
  int64_t diff_outside_mask = 0;
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      bool differs = false;
      for (int c = 0; c < 3; ++c) differs = differs || edited.at(0, y, x, c) != clip.at(0, y, x, c);
      if (differs && !mask.at(0, y, x)) ++diff_outside_mask;
    }
  }
  CHECK(diff_outside_mask == 0);
}

TEST_CASE("inpaint mock: fills only the mask, deterministic") {
  StoreFixture fx("inpaint");
  AdapterSet set = AdapterSet::desk_mocks(31, fx.store.get());
  auto scene = mockworld::make_scene(13, 1, 16, 16);
  auto clip = mockworld::render_scene(scene, 3, 16, 16, 8.0f);
  auto mask = mockworld::object_mask(scene, 0, 3, 16, 16);
  std::string clip_ref = fx.store->put_clip(clip);
  std::string mask_ref = fx.store->put_mask(mask);
  Request req{"r", json{{"clip", clip_ref}, {"mask", mask_ref}}};
  CHECK(set.endpoint(Capability::Inpaint).mock_determinism_check(req, 3));
  auto resp = set.call(Capability::Inpaint, req);
  auto filled = fx.store->get_clip(resp.payload.at("video").get<std::string>());
  for (int f = 0; f < 3; ++f) {
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 16; ++x) {
        for (int c = 0; c < 3; ++c) {
          if (!mask.at(f, y, x)) {
            CHECK(filled.at(f, y, x, c) == clip.at(f, y, x, c));
          }
        }
      }
    }
  }
}

TEST_CASE("multi-shot mock: three detectable segments in declared order") {
  StoreFixture fx("multishot");
  AdapterSet set = AdapterSet::desk_mocks(41, fx.store.get());
  auto scene = mockworld::make_scene(17, 2, 32, 32);
  auto frame = mockworld::render_scene(scene, 1, 32, 32, 8.0f);
  std::string ref = fx.store->put_clip(frame);
  auto resp = set.call(
      Capability::MultiShotGenerate,
      {"r", json{{"image", ref},
                 {"prompts", json::array({"close-up", "medium", "wide"})}}});
  CHECK(resp.payload.at("shot_order") == json::array({"close", "medium", "wide"}));
  auto video = fx.store->get_clip(resp.payload.at("video").get<std::string>());
  CHECK(video.t == 12);
}

TEST_CASE("http transport: loopback echo stub round-trips the request id") {
  StoreFixture fx("http");
  httplib::Server server;
  server.Post("/caption", [](const httplib::Request& req, httplib::Response& res) {
    json body = json::parse(req.body);
    json reply{{"id", body.at("id")},
               {"payload",
                {{"caption", "echoed caption for " + body.at("id").get<std::string>()},
                 {"object_names", json::array()}}}};
    res.set_content(reply.dump(), "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  EndpointConfig cfg;
  cfg.capability = Capability::Caption;
  cfg.transport = EndpointConfig::Transport::Http;
  cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
  cfg.max_retries = 0;
  Endpoint ep(cfg, nullptr);
  auto resp = ep.call({"req-123", json{{"clip", "clips/whatever"}}});
  CHECK(resp.id == "req-123");
  CHECK(resp.payload.at("caption").get<std::string>().find("req-123") != std::string::npos);
  CHECK_THROWS_AS(ep.mock_determinism_check({"x", json{{"clip", "c"}}}, 2),
                  core::ParameterError);

  // unreachable endpoint surfaces a transport error after retries
  EndpointConfig dead = cfg;
  dead.base_url = "http://127.0.0.1:1";
  dead.timeout_s = 0.2;
  Endpoint ep_dead(dead, nullptr);
  CHECK_THROWS_AS(ep_dead.call({"r", json{{"clip", "c"}}}), core::TransportError);

  server.stop();
  server_thread.join();
}

TEST_CASE("registry json round trip") {
  StoreFixture fx("registry");
  AdapterSet set = AdapterSet::desk_mocks(3, fx.store.get());
  json registry = set.registry_json();
  AdapterSet back = AdapterSet::from_registry(registry, fx.store.get());
  for (int i = 0; i < kCapabilityCount; ++i) {
    CHECK(back.has(static_cast<Capability>(i)));
  }
  CHECK_FALSE(back.any_http());
  json bad = json{{"endpoints", json::array({json{{"capability", "nope"}}})}};
  CHECK_THROWS_AS(AdapterSet::from_registry(bad, fx.store.get()), core::ConfigError);
}

TEST_CASE("artifact store: content addressing dedupes and checksums") {
  StoreFixture fx("store");
  std::vector<uint8_t> payload = {1, 2, 3, 4};
  auto r1 = fx.store->put_bytes(payload);
  auto r2 = fx.store->put_bytes(payload);
  CHECK(r1 == r2);
  auto scene = mockworld::make_scene(51, 1, 16, 16);
  auto clip = mockworld::render_scene(scene, 2, 16, 16, 8.0f);
  auto c1 = fx.store->put_clip(clip);
  auto checksum1 = fx.store->tree_checksum();
  auto c2 = fx.store->put_clip(clip);
  CHECK(c1 == c2);
  CHECK(fx.store->tree_checksum() == checksum1);
  auto loaded = fx.store->get_clip(c1);
  CHECK(loaded.data == core::snap_to_u8_grid(clip).data);
}

TEST_CASE("rate limiter: single-caller request order is preserved") {
  StoreFixture fx("rate");
  EndpointConfig cfg;
  cfg.capability = Capability::LocalDescribe;
  cfg.rate_limit_per_s = 2000.0;  // fast enough for tests, slow enough to engage
  cfg.options = json{{"seed", 1}};
  Endpoint ep(cfg, fx.store.get());
  std::vector<std::string> order;
  for (int i = 0; i < 10; ++i) {
    auto resp = ep.call({"r" + std::to_string(i),
                         json{{"clip", "none"}, {"name", "object " + std::to_string(i)}}});
    order.push_back(resp.id);
  }
  for (int i = 0; i < 10; ++i) CHECK(order[static_cast<size_t>(i)] == "r" + std::to_string(i));
}
