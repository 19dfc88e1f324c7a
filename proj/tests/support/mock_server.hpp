// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

// Loopback HTTP server for client tests. Runs on an ephemeral port until
// destroyed.

#pragma once

#include <httplib.h>

#include <functional>
#include <string>
#include <thread>

namespace testing_support {

class MockServer {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  MockServer(const std::string& path, Handler handler) {
    server_.Post(path, std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  int port() const { return port_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace testing_support
