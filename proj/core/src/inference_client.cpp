// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/inference_client.hpp"

#include <fmt/format.h>
#include <httplib.h>

#include <charconv>
#include <cmath>
#include <nlohmann/json.hpp>

#include "harass/error.hpp"

namespace harass {

Endpoint Endpoint::parse(std::string_view url) {
  constexpr std::string_view kScheme = "http://";
  if (url.substr(0, kScheme.size()) != kScheme) {
    throw DomainError(fmt::format("endpoint '{}' must start with http://", url));
  }
  auto rest = url.substr(kScheme.size());
  Endpoint ep;
  const auto slash = rest.find('/');
  auto authority = rest.substr(0, slash);
  if (slash != std::string_view::npos) ep.path = std::string(rest.substr(slash));
  const auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    const auto port_str = authority.substr(colon + 1);
    int port = 0;
    const auto [ptr, ec] = std::from_chars(port_str.data(), port_str.data() + port_str.size(), port);
    if (ec != std::errc{} || ptr != port_str.data() + port_str.size() || port <= 0 || port > 65535) {
      throw DomainError(fmt::format("endpoint '{}' has a bad port", url));
    }
    ep.port = port;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) throw DomainError(fmt::format("endpoint '{}' has no host", url));
  ep.host = std::string(authority);
  return ep;
}

nlohmann::json post_json(const Endpoint& endpoint, const nlohmann::json& body) {
  httplib::Client client(endpoint.host, endpoint.port);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(endpoint.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  auto res = client.Post(endpoint.path, body.dump(), "application/json");
  if (!res) {
    throw NetworkError(fmt::format("POST {}:{}{} failed: {}", endpoint.host, endpoint.port,
                                   endpoint.path, httplib::to_string(res.error())));
  }
  if (res->status < 200 || res->status >= 300) {
    throw SchemaError(fmt::format("inference service returned HTTP {}", res->status));
  }
  auto parsed = nlohmann::json::parse(res->body, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) throw SchemaError("inference service returned non-JSON body");
  return parsed;
}

namespace {

double probability_field(const nlohmann::json& obj, const char* name, std::size_t index) {
  const auto it = obj.find(name);
  if (it == obj.end() || !it->is_number()) {
    throw SchemaError(fmt::format("prediction {}: missing numeric '{}'", index, name));
  }
  const double v = it->get<double>();
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw SchemaError(fmt::format("prediction {}: '{}' = {} outside [0,1]", index, name, v));
  }
  return v;
}

}  // namespace

std::vector<Prediction> external_predict(const Endpoint& endpoint,
                                         std::span<const std::string> texts) {
  std::vector<Prediction> out;
  out.reserve(texts.size());
  const std::size_t batch = std::max<std::size_t>(1, endpoint.max_batch);
  for (std::size_t start = 0; start < texts.size(); start += batch) {
    const auto chunk = texts.subspan(start, std::min(batch, texts.size() - start));
    nlohmann::json request = {{"texts", nlohmann::json::array()}};
    for (const auto& t : chunk) request["texts"].push_back(t);

    const auto response = post_json(endpoint, request);
    const auto preds = response.find("predictions");
    if (!response.is_object() || preds == response.end() || !preds->is_array()) {
      throw SchemaError("response lacks a 'predictions' array");
    }
    if (preds->size() != chunk.size()) {
      throw SchemaError(fmt::format("sent {} texts but received {} predictions", chunk.size(),
                                    preds->size()));
    }
    for (std::size_t i = 0; i < preds->size(); ++i) {
      const auto& p = (*preds)[i];
      if (!p.is_object()) throw SchemaError(fmt::format("prediction {} is not an object", start + i));
      out.push_back({probability_field(p, "menacing", start + i),
                     probability_field(p, "profiling", start + i)});
    }
  }
  return out;
}

}  // namespace harass
