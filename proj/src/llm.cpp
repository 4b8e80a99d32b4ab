#include <cstdlib>
#include <regex>

#include "dyncausal/explain.hpp"
#include "httplib.h"

namespace dyncausal {

std::optional<LlmEndpoint> llm_endpoint_from_env() {
  const char* url = std::getenv("EXPLAIN_LLM_URL");
  if (url == nullptr || *url == '\0') return std::nullopt;
  const char* key = std::getenv("EXPLAIN_LLM_KEY");
  return LlmEndpoint{url, key ? key : ""};
}

Narration narrate(const PromptBundle& bundle, const Explanation& fallback,
                  const std::optional<LlmEndpoint>& endpoint, int max_tokens) {
  if (!endpoint) return Narration{fallback.text, "template", true};

  static const std::regex url_re(R"(^(https?)://([^/:]+)(:(\d+))?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(endpoint->url, m, url_re)) {
    throw Error(ErrorKind::Configuration, "EXPLAIN_LLM_URL is not an http URL: " + endpoint->url);
  }
  if (m[1] == "https") {
    throw Error(ErrorKind::Configuration, "https endpoints are not supported by this build");
  }
  const int port = m[4].matched ? std::stoi(m[4].str()) : 80;
  const std::string path = m[5].matched ? m[5].str() : "/";

  httplib::Client client(m[2].str(), port);
  client.set_connection_timeout(10);
  client.set_read_timeout(60);
  httplib::Headers headers;
  if (!endpoint->key.empty()) headers.emplace("Authorization", "Bearer " + endpoint->key);

  const nlohmann::json body{{"prompt", flatten(bundle)}, {"max_tokens", max_tokens}};
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) throw Error(ErrorKind::Input, "language-model request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw Error(ErrorKind::Input, "language-model endpoint returned HTTP " + std::to_string(res->status));
  }
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
    return Narration{reply.at("text").get<std::string>(), "llm", false};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("language-model reply is not {\"text\": ...}: ") + e.what());
  }
}

}  // namespace dyncausal
