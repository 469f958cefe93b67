#include "sportsnews/service_client.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>

#include <json.hpp>

#include "sportsnews/error.h"

namespace sportsnews {

using json = nlohmann::json;

ServiceAddress ServiceAddress::Parse(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidConfig,
                "service address must be host:port, got '" + std::string(text) + "'");
  }
  ServiceAddress addr;
  if (colon > 0) addr.host = std::string(text.substr(0, colon));
  try {
    addr.port = std::stoi(std::string(text.substr(colon + 1)));
  } catch (const std::exception &) {
    addr.port = -1;
  }
  if (addr.port <= 0 || addr.port > 65535) {
    throw Error(ErrorCode::kInvalidConfig,
                "bad service port in '" + std::string(text) + "'");
  }
  return addr;
}

std::string ServiceAddress::ToString() const {
  return host + ":" + std::to_string(port);
}

ServiceClient::ServiceClient(ServiceAddress address,
                             std::chrono::milliseconds timeout)
    : address_(std::move(address)), timeout_(timeout) {}

ServiceClient::~ServiceClient() { Disconnect(); }

void ServiceClient::Disconnect() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
  buffer_.clear();
}

void ServiceClient::Connect() {
  if (fd_ >= 0) return;
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo *res = nullptr;
  const std::string port = std::to_string(address_.port);
  if (::getaddrinfo(address_.host.c_str(), port.c_str(), &hints, &res) != 0) {
    throw Error(ErrorCode::kServiceUnavailable,
                "cannot resolve " + address_.ToString());
  }
  int fd = -1;
  for (addrinfo *p = res; p != nullptr; p = p->ai_next) {
    fd = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, p->ai_addr, p->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw Error(ErrorCode::kServiceUnavailable,
                "cannot connect to " + address_.ToString());
  }
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(timeout_.count() / 1000);
  tv.tv_usec = static_cast<suseconds_t>((timeout_.count() % 1000) * 1000);
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
  fd_ = fd;
}

void ServiceClient::WriteAll(const std::string &data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      Disconnect();
      throw Error(ErrorCode::kServiceUnavailable,
                  "write to " + address_.ToString() + " failed");
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string ServiceClient::ReadLine() {
  for (;;) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    char chunk[4096];
    ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      Disconnect();
      throw Error(ErrorCode::kServiceUnavailable,
                  n == 0 ? "service closed the connection"
                         : "read from " + address_.ToString() + " failed");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string ServiceClient::Call(std::string_view op,
                                const std::string &payload_json,
                                std::size_t expected) {
  std::lock_guard<std::mutex> lock(mu_);
  const std::string id = std::to_string(++next_id_);
  json request;
  request["op"] = op;
  request["id"] = id;
  request["payload"] = json::parse(payload_json);
  Connect();
  WriteAll(request.dump() + "\n");
  const std::string line = ReadLine();

  json response;
  try {
    response = json::parse(line);
  } catch (const std::exception &e) {
    Disconnect();
    throw Error(ErrorCode::kProtocolError, std::string("bad response: ") + e.what());
  }
  if (!response.is_object() || !response.contains("id") ||
      response["id"] != id) {
    Disconnect();
    throw Error(ErrorCode::kProtocolError, "response id does not match request " + id);
  }
  const bool has_values = response.contains("values");
  const bool has_error = response.contains("error");
  if (has_values == has_error) {
    throw Error(ErrorCode::kProtocolError,
                "response must carry exactly one of values/error");
  }
  if (has_error) {
    const json &err = response["error"];
    throw Error(ErrorCode::kProtocolError,
                std::string(op) + " failed: " + err.value("code", "unknown") +
                    ": " + err.value("message", ""));
  }
  const json &values = response["values"];
  if (!values.is_array() || values.size() != expected) {
    throw Error(ErrorCode::kProtocolError,
                std::string(op) + " returned " +
                    std::to_string(values.is_array() ? values.size() : 0) +
                    " values for " + std::to_string(expected) + " items");
  }
  return values.dump();
}

std::vector<double> ServiceClient::CallNumeric(std::string_view op,
                                               const std::string &payload_json,
                                               std::size_t expected) {
  json values = json::parse(Call(op, payload_json, expected));
  std::vector<double> out;
  out.reserve(values.size());
  for (const json &v : values) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kProtocolError, std::string(op) + " value is not a number");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<double> ServiceClient::SemanticSimilarity(
    std::span<const TextPair> pairs) {
  if (pairs.empty()) return {};
  json payload;
  payload["pairs"] = json::array();
  for (const TextPair &p : pairs) payload["pairs"].push_back({p.first, p.second});
  return CallNumeric("semantic_similarity", payload.dump(), pairs.size());
}

std::vector<double> ServiceClient::Perplexity(std::span<const std::string> texts) {
  if (texts.empty()) return {};
  json payload;
  payload["texts"] = json(std::vector<std::string>(texts.begin(), texts.end()));
  return CallNumeric("perplexity", payload.dump(), texts.size());
}

std::vector<double> ServiceClient::Importance(std::span<const std::string> windows) {
  if (windows.empty()) return {};
  json payload;
  payload["windows"] = json(std::vector<std::string>(windows.begin(), windows.end()));
  return CallNumeric("importance", payload.dump(), windows.size());
}

std::vector<std::optional<std::string>> ServiceClient::Rewrite(
    std::span<const std::string> sources) {
  if (sources.empty()) return {};
  json payload;
  payload["sources"] = json(std::vector<std::string>(sources.begin(), sources.end()));
  json values = json::parse(Call("rewrite", payload.dump(), sources.size()));
  std::vector<std::optional<std::string>> out;
  out.reserve(values.size());
  for (const json &v : values) {
    if (v.is_string() && !v.get<std::string>().empty()) {
      out.emplace_back(v.get<std::string>());
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

RemoteSemanticScorer::RemoteSemanticScorer(std::shared_ptr<ServiceClient> client)
    : client_(std::move(client)) {}

std::vector<double> RemoteSemanticScorer::ScorePairs(
    std::span<const TextPair> pairs) const {
  std::vector<double> values = client_->SemanticSimilarity(pairs);
  for (double &v : values) {
    if (std::isnan(v)) throw Error(ErrorCode::kProtocolError, "similarity is NaN");
    v = std::clamp(v, 0.0, 1.0);
  }
  return values;
}

RemoteFluencyScorer::RemoteFluencyScorer(std::shared_ptr<ServiceClient> client)
    : client_(std::move(client)) {}

std::vector<double> RemoteFluencyScorer::Perplexities(
    std::span<const std::string> texts) const {
  std::vector<double> values = client_->Perplexity(texts);
  for (double v : values) {
    if (!(v > 0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kProtocolError, "perplexity must be finite and > 0");
    }
  }
  return values;
}

}  // namespace sportsnews
