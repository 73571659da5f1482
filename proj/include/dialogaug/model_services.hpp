#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dialogaug {

struct GenerationRequest {
  std::string prompt;
  int num_beams = 25;
  int num_return = 20;
  int max_new_tokens = 64;

  // Throws std::invalid_argument unless 1 <= num_return <= num_beams and
  // max_new_tokens >= 1.
  void validate() const;
};

// Fast preset matching the 4-beam decoding setting; not the default.
GenerationRequest fast_generation_preset();

struct GenerationCandidate {
  std::string text;
  double gen_score = 0.0;  // log-probability, higher is better
  std::size_t rank = 0;    // position in backend order

  bool operator==(const GenerationCandidate&) const = default;
};

enum class ScoreMetric { Bleurt, Perplexity };

std::string to_string(ScoreMetric metric);

struct ScoreRequest {
  ScoreMetric metric = ScoreMetric::Bleurt;
  std::optional<std::string> reference;
  std::vector<std::string> candidates;

  void validate() const;
};

// ---- errors ---------------------------------------------------------------

class ServiceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Connection refused, timeout, reset. The only retryable kind.
class TransportError : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

class MalformedResponseError : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

class ServerStatusError : public ServiceError {
 public:
  ServerStatusError(int status, const std::string& message)
      : ServiceError(message), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class UnsupportedMetricError : public ServerStatusError {
 public:
  using ServerStatusError::ServerStatusError;
};

// ---- backend interfaces ---------------------------------------------------

class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::vector<GenerationCandidate> generate(const GenerationRequest& request) = 0;
  virtual std::string identity() const = 0;
};

class ScoreService {
 public:
  virtual ~ScoreService() = default;
  // One score per candidate, aligned by index.
  virtual std::vector<double> score(const ScoreRequest& request) = 0;
  virtual std::string identity() const = 0;
};

// ---- stub generator -------------------------------------------------------

// The fixed 256-word vocabulary the stub draws from.
std::span<const std::string_view> stub_word_list();

// Candidate i: PCG32 seeded with fnv1a64(prompt) ^ (seed_salt + i), length
// L uniform in [5, 12], then L words uniform over stub_word_list(),
// gen_score = -i.
std::vector<GenerationCandidate> stub_generate(std::string_view prompt, int num_return,
                                               std::uint64_t seed_salt);

class StubGenerator final : public Generator {
 public:
  explicit StubGenerator(std::uint64_t seed_salt = 0) : seed_salt_(seed_salt) {}
  std::vector<GenerationCandidate> generate(const GenerationRequest& request) override;
  std::string identity() const override { return "stub"; }

 private:
  std::uint64_t seed_salt_;
};

// Scores candidates by exact lookup; unknown candidates raise ServiceError.
class FixedTableScorer final : public ScoreService {
 public:
  explicit FixedTableScorer(std::map<std::string, double> table) : table_(std::move(table)) {}
  std::vector<double> score(const ScoreRequest& request) override;
  std::string identity() const override { return "fixed-table"; }

 private:
  std::map<std::string, double> table_;
};

// ---- HTTP clients ---------------------------------------------------------

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{250};
  double backoff_multiplier = 2.0;
};

struct HttpClientOptions {
  RetryPolicy retry;
  std::size_t max_in_flight = 4;
  std::chrono::seconds connect_timeout{10};
  std::chrono::seconds read_timeout{300};
};

// "http://host:port[/prefix]" split into origin and path prefix.
struct Endpoint {
  std::string origin;
  std::string path_prefix;

  static Endpoint parse(std::string_view url);
};

class HttpTransport;

class HttpGenerator final : public Generator {
 public:
  explicit HttpGenerator(std::string_view url, HttpClientOptions options = {});
  ~HttpGenerator() override;
  std::vector<GenerationCandidate> generate(const GenerationRequest& request) override;
  std::string identity() const override;

 private:
  std::unique_ptr<HttpTransport> transport_;
};

class HttpScoreService final : public ScoreService {
 public:
  explicit HttpScoreService(std::string_view url, HttpClientOptions options = {});
  ~HttpScoreService() override;
  std::vector<double> score(const ScoreRequest& request) override;
  std::string identity() const override;

 private:
  std::unique_ptr<HttpTransport> transport_;
};

// Wire encoding, exposed for protocol tests.
std::string encode_generate_request(const GenerationRequest& request);
std::vector<GenerationCandidate> decode_generate_response(std::string_view body, int num_return);
std::string encode_score_request(const ScoreRequest& request);
std::vector<double> decode_score_response(std::string_view body, const ScoreRequest& request);

}  // namespace dialogaug
