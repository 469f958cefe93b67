// In-process line-protocol server for exercising the service client.
#ifndef SPORTSNEWS_TESTS_FAKE_SERVICE_H_
#define SPORTSNEWS_TESTS_FAKE_SERVICE_H_

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

namespace fake {

using nlohmann::json;

// Returns the response line for a request, or nullopt to drop the connection.
using Handler = std::function<std::optional<std::string>(const json &request)>;

inline std::string Values(const json &req, json values) {
  return json{{"id", req.at("id")}, {"values", std::move(values)}}.dump();
}

inline std::string ErrorReply(const json &req, const std::string &code, const std::string &msg) {
  return json{{"id", req.value("id", json(nullptr))},
              {"error", {{"code", code}, {"message", msg}}}}
      .dump();
}

// Deterministic echo behaviour: rewrite returns its sources, similarity is
// 1 for equal texts and 0 otherwise, perplexity is 1 + byte length,
// importance is 0.75.
inline std::optional<std::string> Echo(const json &req) {
  const std::string op = req.value("op", "");
  if (!req.contains("payload") || !req["payload"].is_object()) {
    return ErrorReply(req, "bad_request", "missing payload");
  }
  const json &p = req["payload"];
  json values = json::array();
  if (op == "rewrite" && p.contains("sources")) {
    for (const auto &s : p["sources"]) values.push_back(s);
  } else if (op == "semantic_similarity" && p.contains("pairs")) {
    for (const auto &pair : p["pairs"]) values.push_back(pair.at(0) == pair.at(1) ? 1.0 : 0.0);
  } else if (op == "perplexity" && p.contains("texts")) {
    for (const auto &t : p["texts"]) values.push_back(1.0 + t.get<std::string>().size());
  } else if (op == "importance" && p.contains("windows")) {
    for (std::size_t i = 0; i < p["windows"].size(); ++i) values.push_back(0.75);
  } else {
    return ErrorReply(req, "unknown_op", "unsupported op '" + op + "'");
  }
  return Values(req, std::move(values));
}

class Server {
 public:
  explicit Server(Handler handler) : handler_(std::move(handler)) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    ::bind(listen_fd_, reinterpret_cast<sockaddr *>(&addr), sizeof(addr));
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr *>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    ::listen(listen_fd_, 16);
    acceptor_ = std::thread([this] { AcceptLoop(); });
  }

  ~Server() {
    stopping_ = true;
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    acceptor_.join();
    std::lock_guard<std::mutex> lock(mu_);
    for (int fd : clients_) ::shutdown(fd, SHUT_RDWR);
    for (auto &t : workers_) t.join();
  }

  int port() const { return port_; }
  std::string address() const { return "127.0.0.1:" + std::to_string(port_); }
  int requests() const { return requests_; }
  int connections() const { return connections_; }

 private:
  void AcceptLoop() {
    while (!stopping_) {
      int fd = ::accept(listen_fd_, nullptr, nullptr);
      if (fd < 0) return;
      ++connections_;
      std::lock_guard<std::mutex> lock(mu_);
      clients_.push_back(fd);
      workers_.emplace_back([this, fd] { Serve(fd); });
    }
  }

  void Serve(int fd) {
    std::string buf;
    char chunk[4096];
    for (;;) {
      auto nl = buf.find('\n');
      if (nl == std::string::npos) {
        ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
        if (n <= 0) break;
        buf.append(chunk, static_cast<std::size_t>(n));
        continue;
      }
      std::string line = buf.substr(0, nl);
      buf.erase(0, nl + 1);
      ++requests_;
      std::optional<std::string> reply;
      try {
        reply = handler_(json::parse(line));
      } catch (const std::exception &e) {
        reply = json{{"id", nullptr}, {"error", {{"code", "bad_request"}, {"message", e.what()}}}}
                    .dump();
      }
      if (!reply) break;
      *reply += '\n';
      if (::send(fd, reply->data(), reply->size(), MSG_NOSIGNAL) < 0) break;
    }
    ::shutdown(fd, SHUT_RDWR);
    ::close(fd);
  }

  Handler handler_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<int> requests_{0};
  std::atomic<int> connections_{0};
  std::thread acceptor_;
  std::mutex mu_;
  std::vector<int> clients_;
  std::vector<std::thread> workers_;
};

// A port with nothing listening on it.
inline int DeadPort() {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ::bind(fd, reinterpret_cast<sockaddr *>(&addr), sizeof(addr));
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr *>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

}  // namespace fake

#endif  // SPORTSNEWS_TESTS_FAKE_SERVICE_H_
