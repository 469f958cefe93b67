#ifndef SPORTSNEWS_SERVICE_CLIENT_H_
#define SPORTSNEWS_SERVICE_CLIENT_H_

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sportsnews/scorers.h"

namespace sportsnews {

struct ServiceAddress {
  std::string host = "127.0.0.1";
  int port = 0;

  // "host:port" or ":port".
  static ServiceAddress Parse(std::string_view text);
  std::string ToString() const;
};

// Client for the neural scorer service. One JSON request per line, one JSON
// response per line, over a TCP connection:
//   request  {"op": ..., "id": ..., "payload": {...}}
//   response {"id": ..., "values": [...]} | {"id": ..., "error": {"code", "message"}}
// Calls are serialised on a single connection, which is reopened after a
// failure. Throws Error(kServiceUnavailable) when the service cannot be
// reached and Error(kProtocolError) for malformed, mismatched or error
// responses.
class ServiceClient {
 public:
  explicit ServiceClient(ServiceAddress address,
                         std::chrono::milliseconds timeout = std::chrono::seconds(60));
  ~ServiceClient();

  ServiceClient(const ServiceClient &) = delete;
  ServiceClient &operator=(const ServiceClient &) = delete;

  std::vector<double> SemanticSimilarity(std::span<const TextPair> pairs);
  std::vector<double> Perplexity(std::span<const std::string> texts);
  std::vector<double> Importance(std::span<const std::string> windows);
  // std::nullopt marks an item the service could not rewrite (null or empty).
  std::vector<std::optional<std::string>> Rewrite(
      std::span<const std::string> sources);

  const ServiceAddress &address() const { return address_; }

 private:
  // Sends one request and returns the dumped "values" array.
  std::string Call(std::string_view op, const std::string &payload_json,
                   std::size_t expected);
  std::vector<double> CallNumeric(std::string_view op,
                                  const std::string &payload_json,
                                  std::size_t expected);
  void Connect();
  void Disconnect();
  void WriteAll(const std::string &data);
  std::string ReadLine();

  ServiceAddress address_;
  std::chrono::milliseconds timeout_;
  std::mutex mu_;
  int fd_ = -1;
  std::string buffer_;
  unsigned long next_id_ = 0;
};

// SemanticScorer backed by the service; values are clamped to [0,1].
class RemoteSemanticScorer : public SemanticScorer {
 public:
  explicit RemoteSemanticScorer(std::shared_ptr<ServiceClient> client);
  std::vector<double> ScorePairs(std::span<const TextPair> pairs) const override;

 private:
  std::shared_ptr<ServiceClient> client_;
};

// FluencyScorer backed by the service; rejects non-positive perplexities.
class RemoteFluencyScorer : public FluencyScorer {
 public:
  explicit RemoteFluencyScorer(std::shared_ptr<ServiceClient> client);
  std::vector<double> Perplexities(
      std::span<const std::string> texts) const override;

 private:
  std::shared_ptr<ServiceClient> client_;
};

}  // namespace sportsnews

#endif  // SPORTSNEWS_SERVICE_CLIENT_H_
