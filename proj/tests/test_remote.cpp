#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "gdeval/episode.hpp"
#include "gdeval/remote.hpp"

using namespace gdeval;
namespace fs = std::filesystem;

namespace {

// Minimal chat-completion stub running on a local port.
class StubServer {
 public:
  explicit StubServer(int fail_first = 0) : fail_first_(fail_first) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      last_body = req.body;
      auth = req.get_header_value("Authorization");
      int n = ++requests;
      if (n <= fail_first_) {
        res.status = 500;
        return;
      }
      if (reject_auth) {
        res.status = 401;
        return;
      }
      json reply{{"choices",
                  {{{"message", {{"role", "assistant"}, {"content", "<done>"}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::atomic<int> requests{0};
  std::string last_body;
  std::string auth;
  bool reject_auth = false;

 private:
  httplib::Server server_;
  int fail_first_;
  int port_;
  std::thread thread_;
};

RemoteAgentConfig config_for(const StubServer& server) {
  RemoteAgentConfig c;
  c.base_url = server.url();
  c.model = "stub-model";
  c.backoff_base_ms = 10;
  return c;
}

TaskBrief simple_brief() {
  TaskBrief brief;
  brief.id = TaskId::GenerateConfigurations;
  brief.blocks = {"a", "b", "c"};
  brief.system_text = "system text";
  brief.task_text = "task text";
  return brief;
}

}  // namespace

TEST_CASE("remote agent renders the transcript as chat messages") {
  StubServer server;
  RemoteAgent agent(config_for(server));
  agent.begin_episode(simple_brief(), 1);

  AgentView view;
  view.text = "task text";
  REQUIRE(agent.next_message(view) == "<done>");

  json body = json::parse(server.last_body);
  REQUIRE(body.at("model") == "stub-model");
  auto& messages = body.at("messages");
  REQUIRE(messages.size() == 2);
  REQUIRE(messages[0].at("role") == "system");
  REQUIRE(messages[0].at("content") == "system text");
  REQUIRE(messages[1].at("role") == "user");
  REQUIRE(messages[1].at("content") == "task text");

  // The next turn carries the assistant's previous reply.
  view.text = "status update";
  agent.next_message(view);
  body = json::parse(server.last_body);
  REQUIRE(body.at("messages").size() == 4);
  REQUIRE(body.at("messages")[2].at("role") == "assistant");
  REQUIRE(body.at("messages")[2].at("content") == "<done>");
  REQUIRE(body.at("messages")[3].at("role") == "user");
}

TEST_CASE("transient failures are retried with backoff") {
  StubServer server(/*fail_first=*/2);
  RemoteAgent agent(config_for(server));
  agent.begin_episode(simple_brief(), 1);
  AgentView view;
  view.text = "task text";
  REQUIRE(agent.next_message(view) == "<done>");
  REQUIRE(server.requests == 3);
}

TEST_CASE("persistent failure surfaces after three attempts") {
  StubServer server(/*fail_first=*/10);
  RemoteAgent agent(config_for(server));
  agent.begin_episode(simple_brief(), 1);
  AgentView view;
  REQUIRE_THROWS_AS(agent.next_message(view), RemoteTransportError);
  REQUIRE(server.requests == 3);
}

TEST_CASE("authentication rejection aborts immediately") {
  StubServer server;
  server.reject_auth = true;
  RemoteAgent agent(config_for(server));
  agent.begin_episode(simple_brief(), 1);
  AgentView view;
  REQUIRE_THROWS_AS(agent.next_message(view), RemoteTransportError);
  REQUIRE(server.requests == 1);  // no retry on auth errors
}

TEST_CASE("api key is read from the configured environment variable") {
  StubServer server;
  auto cfg = config_for(server);
  cfg.api_key_env = "GDEVAL_TEST_KEY";
  setenv("GDEVAL_TEST_KEY", "sk-stub", 1);
  RemoteAgent agent(cfg);
  agent.begin_episode(simple_brief(), 1);
  AgentView view;
  agent.next_message(view);
  REQUIRE(server.auth == "Bearer sk-stub");
  unsetenv("GDEVAL_TEST_KEY");
}

TEST_CASE("outbound request bodies are persisted before the call") {
  StubServer server;
  auto cfg = config_for(server);
  fs::path dir = fs::temp_directory_path() / "gdeval_test_reqlog";
  fs::remove_all(dir);
  cfg.request_log_dir = dir.string();
  RemoteAgent agent(cfg);
  agent.begin_episode(simple_brief(), 42);
  AgentView view;
  view.text = "task text";
  agent.next_message(view);
  fs::path logged = dir / "req_42_0.json";
  REQUIRE(fs::exists(logged));
  std::ifstream in(logged);
  json body = json::parse(in);
  REQUIRE(body.at("messages").size() == 2);
}

TEST_CASE("replaying a transcript reproduces the identical record") {
  auto oracle = make_oracle_agent(5);
  std::uint64_t seed = Rng::derive_seed(9, "replay-test");
  Transcript transcript;
  auto original =
      run_episode(TaskId::Combined, 4, 0, seed, *oracle, {}, &transcript);

  ReplayAgent replay(transcript, original.agent_id);
  Transcript replayed_transcript;
  auto replayed = run_episode(TaskId::Combined, 4, 0, seed, replay, {},
                              &replayed_transcript);
  REQUIRE(json(replayed) == json(original));
  REQUIRE(replayed_transcript.entries.size() == transcript.entries.size());
}

TEST_CASE("replay agent refuses to improvise past its transcript") {
  Transcript t;
  t.add("agent", "<done>");
  ReplayAgent agent(t);
  agent.begin_episode(simple_brief(), 1);
  AgentView view;
  agent.next_message(view);
  REQUIRE_THROWS_AS(agent.next_message(view), ConfigError);
}
