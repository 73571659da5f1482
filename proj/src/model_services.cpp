#include "dialogaug/model_services.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <cmath>
#include <semaphore>
#include <thread>

namespace dialogaug {

using nlohmann::json;

void GenerationRequest::validate() const {
  if (num_return < 1) throw std::invalid_argument("num_return must be >= 1");
  if (num_return > num_beams) throw std::invalid_argument("num_return must not exceed num_beams");
  if (max_new_tokens < 1) throw std::invalid_argument("max_new_tokens must be >= 1");
}

GenerationRequest fast_generation_preset() {
  GenerationRequest r;
  r.num_beams = 4;
  r.num_return = 4;
  return r;
}

std::string to_string(ScoreMetric metric) {
  return metric == ScoreMetric::Bleurt ? "bleurt" : "perplexity";
}

void ScoreRequest::validate() const {
  if (candidates.empty()) throw std::invalid_argument("score request needs at least one candidate");
  if (metric == ScoreMetric::Bleurt && !reference) {
    throw std::invalid_argument("bleurt score request needs a reference");
  }
}

std::vector<double> FixedTableScorer::score(const ScoreRequest& request) {
  request.validate();
  std::vector<double> out;
  out.reserve(request.candidates.size());
  for (const auto& c : request.candidates) {
    auto it = table_.find(c);
    if (it == table_.end()) throw ServiceError("fixed-table scorer has no entry for '" + c + "'");
    out.push_back(it->second);
  }
  return out;
}

// ---- wire encoding --------------------------------------------------------

std::string encode_generate_request(const GenerationRequest& request) {
  json body = {{"prompt", request.prompt},
               {"num_beams", request.num_beams},
               {"num_return", request.num_return},
               {"max_new_tokens", request.max_new_tokens}};
  return body.dump();
}

namespace {

json parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw MalformedResponseError(std::string("response is not JSON: ") + e.what());
  }
}

}  // namespace

std::vector<GenerationCandidate> decode_generate_response(std::string_view body, int num_return) {
  const json root = parse_body(body);
  if (!root.is_object() || !root.contains("candidates") || !root["candidates"].is_array()) {
    throw MalformedResponseError("generate response lacks a 'candidates' array");
  }
  const json& items = root["candidates"];
  std::vector<GenerationCandidate> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const json& item = items[i];
    if (!item.is_object() || !item.contains("text") || !item["text"].is_string() ||
        !item.contains("score") || !item["score"].is_number()) {
      throw MalformedResponseError("candidate " + std::to_string(i) + " lacks string 'text' / numeric 'score'");
    }
    const double score = item["score"].get<double>();
    if (!std::isfinite(score)) throw MalformedResponseError("candidate " + std::to_string(i) + " has a non-finite score");
    if (!out.empty() && score > out.back().gen_score) {
      throw MalformedResponseError("candidate scores increase at rank " + std::to_string(i));
    }
    out.push_back({item["text"].get<std::string>(), score, i});
  }
  const auto wanted = static_cast<std::size_t>(num_return);
  if (out.size() > wanted) {
    spdlog::warn("generate: backend returned {} candidates, keeping the first {}", out.size(), wanted);
    out.resize(wanted);
  } else if (out.size() < wanted) {
    spdlog::warn("generate: backend returned {} of {} requested candidates", out.size(), wanted);
  }
  return out;
}

std::string encode_score_request(const ScoreRequest& request) {
  json body = {{"metric", to_string(request.metric)}, {"candidates", request.candidates}};
  if (request.reference) body["reference"] = *request.reference;
  return body.dump();
}

std::vector<double> decode_score_response(std::string_view body, const ScoreRequest& request) {
  const json root = parse_body(body);
  if (!root.is_object() || !root.contains("scores") || !root["scores"].is_array()) {
    throw MalformedResponseError("score response lacks a 'scores' array");
  }
  const json& items = root["scores"];
  if (items.size() != request.candidates.size()) {
    throw MalformedResponseError("score response has " + std::to_string(items.size()) + " scores for " +
                                 std::to_string(request.candidates.size()) + " candidates");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].is_number()) throw MalformedResponseError("score " + std::to_string(i) + " is not a number");
    const double s = items[i].get<double>();
    if (!std::isfinite(s)) throw MalformedResponseError("score " + std::to_string(i) + " is not finite");
    if (request.metric == ScoreMetric::Perplexity && s <= 0.0) {
      throw MalformedResponseError("perplexity " + std::to_string(i) + " is not positive");
    }
    out.push_back(s);
  }
  return out;
}

// ---- transport ------------------------------------------------------------

Endpoint Endpoint::parse(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw std::invalid_argument("endpoint '" + std::string(url) + "' must start with http://");
  }
  if (url.substr(0, scheme_end) != "http") {
    throw std::invalid_argument("endpoint '" + std::string(url) + "': only plain http is supported");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint e;
  if (path_start == std::string_view::npos) {
    e.origin = std::string(url);
  } else {
    e.origin = std::string(url.substr(0, path_start));
    e.path_prefix = std::string(url.substr(path_start));
    while (!e.path_prefix.empty() && e.path_prefix.back() == '/') e.path_prefix.pop_back();
  }
  if (e.origin.size() == scheme_end + 3) throw std::invalid_argument("endpoint '" + std::string(url) + "' has no host");
  return e;
}

class HttpTransport {
 public:
  HttpTransport(std::string_view url, HttpClientOptions options)
      : endpoint_(Endpoint::parse(url)),
        url_(url),
        options_(options),
        slots_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, options.max_in_flight))) {
    if (options_.retry.max_attempts < 1) throw std::invalid_argument("retry.max_attempts must be >= 1");
  }

  const std::string& url() const { return url_; }

  // POSTs a JSON body; returns the 200 response body.
  std::string post(const std::string& path, const std::string& body) {
    auto backoff = options_.retry.initial_backoff;
    std::string last_error;
    for (int attempt = 1; attempt <= options_.retry.max_attempts; ++attempt) {
      httplib::Result res = [&] {
        slots_.acquire();
        struct Release {
          std::counting_semaphore<>& s;
          ~Release() { s.release(); }
        } release{slots_};
        httplib::Client client(endpoint_.origin);
        client.set_connection_timeout(options_.connect_timeout);
        client.set_read_timeout(options_.read_timeout);
        client.set_write_timeout(options_.read_timeout);
        return client.Post(endpoint_.path_prefix + path, body, "application/json");
      }();

      if (!res) {
        last_error = httplib::to_string(res.error());
        if (attempt < options_.retry.max_attempts) {
          spdlog::warn("POST {}{}: transport failure ({}), attempt {}/{}, retrying in {} ms", url_, path,
                       last_error, attempt, options_.retry.max_attempts, backoff.count());
          std::this_thread::sleep_for(backoff);
          backoff = std::chrono::milliseconds(
              static_cast<long long>(static_cast<double>(backoff.count()) * options_.retry.backoff_multiplier));
        }
        continue;
      }
      const int status = res->status;
      if (status == 200) return std::move(res->body);
      const std::string msg = "POST " + url_ + path + " returned HTTP " + std::to_string(status) +
                              (res->body.empty() ? "" : ": " + res->body);
      if (status == 422) throw UnsupportedMetricError(status, msg);
      throw ServerStatusError(status, msg);
    }
    throw TransportError("POST " + url_ + path + " failed after " + std::to_string(options_.retry.max_attempts) +
                         " attempts: " + last_error);
  }

 private:
  Endpoint endpoint_;
  std::string url_;
  HttpClientOptions options_;
  std::counting_semaphore<> slots_;
};

HttpGenerator::HttpGenerator(std::string_view url, HttpClientOptions options)
    : transport_(std::make_unique<HttpTransport>(url, options)) {}
HttpGenerator::~HttpGenerator() = default;

std::string HttpGenerator::identity() const { return transport_->url(); }

std::vector<GenerationCandidate> HttpGenerator::generate(const GenerationRequest& request) {
  request.validate();
  const std::string body = transport_->post("/generate", encode_generate_request(request));
  return decode_generate_response(body, request.num_return);
}

HttpScoreService::HttpScoreService(std::string_view url, HttpClientOptions options)
    : transport_(std::make_unique<HttpTransport>(url, options)) {}
HttpScoreService::~HttpScoreService() = default;

std::string HttpScoreService::identity() const { return transport_->url(); }

std::vector<double> HttpScoreService::score(const ScoreRequest& request) {
  request.validate();
  const std::string body = transport_->post("/score", encode_score_request(request));
  return decode_score_response(body, request);
}

}  // namespace dialogaug
