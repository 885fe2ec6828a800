#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "gdeval/agents.hpp"
#include "gdeval/record.hpp"
#include "gdeval/world.hpp"

namespace gdeval {

struct RemoteTransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RemoteAgentConfig {
  std::string id = "remote";
  std::string base_url;              // e.g. "http://localhost:8080"
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key_env = "GDEVAL_API_KEY";  // never the key itself
  std::optional<double> temperature;           // provider default when unset
  int max_attempts = 3;
  int backoff_base_ms = 500;         // doubles per retry
  int timeout_seconds = 120;
  std::string request_log_dir;       // outbound bodies persisted here
};

// Generic chat-completion client. The running transcript is rendered as a
// messages array: the system prompt as a system turn, environment text as
// user turns, agent replies as assistant turns.
class RemoteAgent : public Agent {
 public:
  explicit RemoteAgent(RemoteAgentConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty())
      throw ConfigError("remote agent needs a base URL");
  }

  std::string id() const override { return config_.id; }

  void begin_episode(const TaskBrief& brief, std::uint64_t seed) override {
    episode_seed_ = seed;
    request_counter_ = 0;
    messages_ = json::array();
    messages_.push_back({{"role", "system"}, {"content", brief.system_text}});
  }

  std::string next_message(const AgentView& view) override {
    messages_.push_back({{"role", "user"}, {"content", view.text}});
    json body;
    body["model"] = config_.model;
    body["messages"] = messages_;
    if (config_.temperature) body["temperature"] = *config_.temperature;

    persist_request(body);

    std::string reply = post_with_retries(body.dump());
    messages_.push_back({{"role", "assistant"}, {"content", reply}});
    return reply;
  }

 private:
  void persist_request(const json& body) const {
    if (config_.request_log_dir.empty()) return;
    std::filesystem::create_directories(config_.request_log_dir);
    std::string name = "req_" + std::to_string(episode_seed_) + "_" +
                       std::to_string(request_counter_) + ".json";
    std::ofstream out(std::filesystem::path(config_.request_log_dir) / name);
    out << body.dump(2) << "\n";
  }

  std::string post_with_retries(const std::string& body) {
    ++request_counter_;
    std::string last_error;
    for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
      if (attempt > 0)
        std::this_thread::sleep_for(std::chrono::milliseconds(
            config_.backoff_base_ms << (attempt - 1)));
      httplib::Client client(config_.base_url);
      client.set_read_timeout(config_.timeout_seconds, 0);
      httplib::Headers headers;
      if (const char* key = std::getenv(config_.api_key_env.c_str()))
        headers.insert({"Authorization", std::string("Bearer ") + key});
      auto res =
          client.Post(config_.path, headers, body, "application/json");
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 401 || res->status == 403)
        throw RemoteTransportError("authentication rejected (HTTP " +
                                   std::to_string(res->status) + ")");
      if (res->status != 200) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      try {
        json parsed = json::parse(res->body);
        return parsed.at("choices").at(0).at("message").at("content")
            .get<std::string>();
      } catch (const json::exception& e) {
        last_error = std::string("malformed response: ") + e.what();
      }
    }
    throw RemoteTransportError("chat completion failed after " +
                               std::to_string(config_.max_attempts) +
                               " attempts: " + last_error);
  }

  RemoteAgentConfig config_;
  json messages_;
  std::uint64_t episode_seed_ = 0;
  int request_counter_ = 0;
};

// Replays the agent turns of a stored transcript verbatim. Re-running an
// episode with the same seed reproduces the identical record, which is how
// remote runs are re-scored offline.
class ReplayAgent : public Agent {
 public:
  explicit ReplayAgent(Transcript transcript, std::string id = "replay")
      : id_(std::move(id)) {
    for (auto& e : transcript.entries)
      if (e.role == "agent") replies_.push_back(std::move(e.text));
  }

  std::string id() const override { return id_; }

  void begin_episode(const TaskBrief&, std::uint64_t) override { next_ = 0; }

  std::string next_message(const AgentView&) override {
    if (next_ >= replies_.size())
      throw ConfigError("replay transcript exhausted");
    return replies_[next_++];
  }

 private:
  std::string id_;
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
};

}  // namespace gdeval
