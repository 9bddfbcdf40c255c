#pragma once

// Small synchronous client for exercising BridgeServer from tests.

#include <cstdint>
#include <string>
#include <thread>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <json.hpp>

#include "hribench/bridge_server.hpp"

namespace hribench::testing {

namespace beast = boost::beast;
namespace net = boost::asio;
using tcp = net::ip::tcp;

/// Runs a server on a background thread for the lifetime of the object.
class ServerThread {
 public:
  ServerThread(Scenario scenario, BridgeOptions options) : server_(std::move(scenario), options) {
    server_.listen();
    thread_ = std::thread([this] { server_.run(); });
  }
  ~ServerThread() {
    server_.stop();
    thread_.join();
  }
  std::uint16_t port() const { return server_.port(); }

 private:
  BridgeServer server_;
  std::thread thread_;
};

inline std::string http_get(std::uint16_t port, const std::string& target) {
  net::io_context ioc;
  beast::tcp_stream stream(ioc);
  stream.connect(tcp::endpoint(net::ip::make_address("127.0.0.1"), port));
  beast::http::request<beast::http::empty_body> req{beast::http::verb::get, target, 11};
  req.set(beast::http::field::host, "127.0.0.1");
  beast::http::write(stream, req);
  beast::flat_buffer buffer;
  beast::http::response<beast::http::string_body> res;
  beast::http::read(stream, buffer, res);
  return res.body();
}

class WsClient {
 public:
  explicit WsClient(std::uint16_t port) : ws_(ioc_) {
    net::connect(beast::get_lowest_layer(ws_),
                 std::array{tcp::endpoint(net::ip::make_address("127.0.0.1"), port)});
    ws_.handshake("127.0.0.1:" + std::to_string(port), "/");
  }
  ~WsClient() {
    beast::error_code ec;
    ws_.close(beast::websocket::close_code::normal, ec);
  }

  nlohmann::json read() {
    beast::flat_buffer buffer;
    ws_.read(buffer);
    return nlohmann::json::parse(beast::buffers_to_string(buffer.data()));
  }

  /// Reads until a message of the given type arrives.
  nlohmann::json read_type(const std::string& type) {
    for (;;) {
      nlohmann::json m = read();
      if (m["type"] == type) return m;
    }
  }

  void send(const nlohmann::json& msg) {
    ws_.text(true);
    ws_.write(net::buffer(msg.dump()));
  }

 private:
  net::io_context ioc_;
  beast::websocket::stream<tcp::socket> ws_;
};

}  // namespace hribench::testing
