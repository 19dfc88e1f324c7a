// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/inference_client.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <nlohmann/json.hpp>

#include "harass/error.hpp"
#include "mock_server.hpp"

using testing_support::MockServer;

namespace {

harass::Endpoint local(int port, std::size_t max_batch = 64) {
  harass::Endpoint ep;
  ep.host = "127.0.0.1";
  ep.port = port;
  ep.timeout = std::chrono::milliseconds(2000);
  ep.max_batch = max_batch;
  return ep;
}

void reply(httplib::Response& res, const nlohmann::json& body) {
  res.set_content(body.dump(), "application/json");
}

}  // namespace

TEST(Endpoint, Parse) {
  const auto ep = harass::Endpoint::parse("http://models.internal:9000/v1/score");
  EXPECT_EQ(ep.host, "models.internal");
  EXPECT_EQ(ep.port, 9000);
  EXPECT_EQ(ep.path, "/v1/score");
  const auto bare = harass::Endpoint::parse("http://localhost");
  EXPECT_EQ(bare.port, 80);
  EXPECT_EQ(bare.path, "/predict");
  EXPECT_THROW(harass::Endpoint::parse("https://x"), harass::DomainError);
  EXPECT_THROW(harass::Endpoint::parse("http://x:0"), harass::DomainError);
  EXPECT_THROW(harass::Endpoint::parse("http://:80"), harass::DomainError);
}

TEST(ExternalPredict, EchoHalf) {
  MockServer server("/predict", [](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    nlohmann::json preds = nlohmann::json::array();
    for (std::size_t i = 0; i < body.at("texts").size(); ++i) {
      preds.push_back({{"menacing", 0.5}, {"profiling", 0.5}});
    }
    reply(res, {{"predictions", preds}});
  });
  const std::vector<std::string> texts = {"a", "b", "c", "d"};
  const auto out = harass::external_predict(local(server.port()), texts);
  ASSERT_EQ(out.size(), 4u);
  for (const auto& p : out) EXPECT_EQ(p, (harass::Prediction{0.5, 0.5}));
}

TEST(ExternalPredict, OrderPreservedAcrossBatches) {
  std::atomic<int> calls{0};
  MockServer server("/predict", [&](const httplib::Request& req, httplib::Response& res) {
    ++calls;
    const auto body = nlohmann::json::parse(req.body);
    nlohmann::json preds = nlohmann::json::array();
    for (const auto& t : body.at("texts")) {
      const double v = std::stod(t.get<std::string>()) / 10.0;
      preds.push_back({{"menacing", v}, {"profiling", 1.0 - v}});
    }
    reply(res, {{"predictions", preds}});
  });
  const std::vector<std::string> three = {"1", "2", "3"};
  const auto out = harass::external_predict(local(server.port(), 2), three);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(calls.load(), 2);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(out[i].p_menacing, static_cast<double>(i + 1) / 10.0);
  }
}

TEST(ExternalPredict, OutOfRangeIsSchemaError) {
  MockServer server("/predict", [](const httplib::Request&, httplib::Response& res) {
    reply(res, {{"predictions", {{{"menacing", 1.2}, {"profiling", 0.1}}}}});
  });
  const std::vector<std::string> one = {"x"};
  EXPECT_THROW(harass::external_predict(local(server.port()), one), harass::SchemaError);
}

TEST(ExternalPredict, WrongArityIsSchemaError) {
  MockServer server("/predict", [](const httplib::Request&, httplib::Response& res) {
    reply(res, {{"predictions", {{{"menacing", 0.2}, {"profiling", 0.1}}}}});
  });
  const std::vector<std::string> two = {"x", "y"};
  EXPECT_THROW(harass::external_predict(local(server.port()), two), harass::SchemaError);
}

TEST(ExternalPredict, MalformedBodies) {
  MockServer server("/predict", [](const httplib::Request& req, httplib::Response& res) {
    const auto t = nlohmann::json::parse(req.body).at("texts").at(0).get<std::string>();
    if (t == "html") {
      res.set_content("<html>", "text/html");
    } else if (t == "500") {
      res.status = 500;
    } else if (t == "missing") {
      reply(res, {{"predictions", {{{"menacing", 0.2}}}}});
    } else {
      reply(res, {{"scores", nlohmann::json::array()}});
    }
  });
  for (const std::string t : {"html", "500", "missing", "other"}) {
    const std::vector<std::string> one = {t};
    EXPECT_THROW(harass::external_predict(local(server.port()), one), harass::SchemaError) << t;
  }
}

TEST(ExternalPredict, UnreachableIsNetworkError) {
  int port = 0;
  {
    MockServer server("/predict", [](const httplib::Request&, httplib::Response&) {});
    port = server.port();
  }
  const std::vector<std::string> one = {"x"};
  EXPECT_THROW(harass::external_predict(local(port), one), harass::NetworkError);
}

TEST(ExternalPredict, EmptyInputMakesNoRequest) {
  EXPECT_TRUE(harass::external_predict(local(1), {}).empty());
}
