// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harass/classifier.hpp"

namespace harass {

/// Address of an HTTP inference service, e.g. "http://127.0.0.1:8500/predict".
struct Endpoint {
  std::string host;
  int port = 80;
  std::string path = "/predict";
  std::chrono::milliseconds timeout{10000};
  /// Texts per request; larger inputs are split and reassembled in order.
  std::size_t max_batch = 64;

  /// Only plain http is supported; TLS belongs in a fronting proxy.
  static Endpoint parse(std::string_view url);
};

/// POSTs `body` as JSON and returns the decoded response. Connection
/// failures and timeouts throw NetworkError; non-2xx statuses and non-JSON
/// bodies throw SchemaError.
nlohmann::json post_json(const Endpoint& endpoint, const nlohmann::json& body);

/// Wire format: request {"texts": [...]}, response
/// {"predictions": [{"menacing": p, "profiling": p}, ...]}. One prediction per
/// text, in order; a missing field, wrong count, or probability outside
/// [0,1] throws SchemaError.
std::vector<Prediction> external_predict(const Endpoint& endpoint,
                                         std::span<const std::string> texts);

class RemoteScorer final : public Scorer {
 public:
  explicit RemoteScorer(Endpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::vector<Prediction> predict_batch(std::span<const std::string> texts) const override {
    return external_predict(endpoint_, texts);
  }

 private:
  Endpoint endpoint_;
};

}  // namespace harass
