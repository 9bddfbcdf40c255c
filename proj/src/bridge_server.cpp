#include "hribench/bridge_server.hpp"

#include <chrono>
#include <deque>
#include <string>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "hribench/error.hpp"
#include "hribench/trace_io.hpp"

namespace hribench {
namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

}  // namespace

struct BridgeServer::Impl {
  class WsConnection;
  class HttpConnection;

  Impl(Scenario scenario, BridgeOptions opts)
      : options(opts),
        session(std::move(scenario), opts),
        acceptor(ioc),
        timer(ioc),
        period(std::chrono::milliseconds(opts.tick_ms > 0 ? opts.tick_ms
                                                          : session.config().dt_ms)) {}

  void do_accept();
  void schedule_tick();
  void on_tick();
  void broadcast(const std::string& text, bool is_state);
  void attach(const std::shared_ptr<WsConnection>& c);
  void detach(const WsConnection* c);
  http::response<http::string_body> handle_http(const http::request<http::string_body>& req);

  BridgeOptions options;
  LiveSession session;
  net::io_context ioc;
  tcp::acceptor acceptor;
  net::steady_timer timer;
  std::chrono::steady_clock::duration period;
  std::chrono::steady_clock::time_point next_tick;
  std::vector<std::shared_ptr<WsConnection>> connections;
  const WsConnection* controller = nullptr;
};

class BridgeServer::Impl::WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket socket, Impl& server) : ws_(std::move(socket)), server_(server) {}

  void start(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->server_.attach(self);
      self->send(self->server_.session.hello().dump(), false);
      self->send(self->server_.session.state_message().dump(), true);
      self->do_read();
    });
  }

  /// State frames supersede any older state frame still waiting to go out.
  void send(std::string text, bool is_state) {
    if (closed_) return;
    if (is_state) {
      for (auto it = queue_.begin() + (writing_ ? 1 : 0); it != queue_.end();) {
        it = it->is_state ? queue_.erase(it) : it + 1;
      }
    }
    queue_.push_back({std::move(text), is_state});
    if (!writing_) do_write();
  }

  void close() {
    closed_ = true;
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  struct Outgoing {
    std::string text;
    bool is_state;
  };

  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->closed_ = true;
        self->server_.detach(self.get());
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      const bool controls = self->server_.controller == self.get();
      if (auto reply = self->server_.session.submit(text, controls)) {
        self->send(reply->dump(), false);
      }
      self->do_read();
    });
  }

  void do_write() {
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front().text),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      self->queue_.pop_front();
                      self->writing_ = false;
                      if (ec) {
                        self->closed_ = true;
                        return;
                      }
                      if (!self->queue_.empty()) self->do_write();
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  Impl& server_;
  beast::flat_buffer buffer_;
  std::deque<Outgoing> queue_;
  bool writing_ = false;
  bool closed_ = false;
};

class BridgeServer::Impl::HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket socket, Impl& server) : stream_(std::move(socket)), server_(server) {}

  void start() {
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       if (ec) return;
                       self->on_request();
                     });
  }

 private:
  void on_request() {
    if (websocket::is_upgrade(req_)) {
      stream_.expires_never();
      std::make_shared<WsConnection>(stream_.release_socket(), server_)->start(std::move(req_));
      return;
    }
    res_ = server_.handle_http(req_);
    http::async_write(stream_, res_, [self = shared_from_this()](beast::error_code, std::size_t) {
      beast::error_code ec;
      self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
    });
  }

  beast::tcp_stream stream_;
  Impl& server_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  http::response<http::string_body> res_;
};

void BridgeServer::Impl::do_accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;
    std::make_shared<HttpConnection>(std::move(socket), *this)->start();
    do_accept();
  });
}

void BridgeServer::Impl::schedule_tick() {
  next_tick += period;
  timer.expires_at(next_tick);
  timer.async_wait([this](beast::error_code ec) {
    if (ec) return;
    on_tick();
  });
}

void BridgeServer::Impl::on_tick() {
  if (auto msg = session.tick()) broadcast(msg->dump(), true);
  schedule_tick();
}

void BridgeServer::Impl::broadcast(const std::string& text, bool is_state) {
  for (const auto& c : connections) c->send(text, is_state);
}

void BridgeServer::Impl::attach(const std::shared_ptr<WsConnection>& c) {
  connections.push_back(c);
  if (controller == nullptr) controller = c.get();
}

void BridgeServer::Impl::detach(const WsConnection* c) {
  std::erase_if(connections, [c](const auto& p) { return p.get() == c; });
  if (controller == c) {
    controller = nullptr;
    session.request_pause();
  }
}

http::response<http::string_body> BridgeServer::Impl::handle_http(
    const http::request<http::string_body>& req) {
  http::response<http::string_body> res{http::status::ok, req.version()};
  res.keep_alive(false);
  const std::string target(req.target());
  if (req.method() != http::verb::get) {
    res.result(http::status::method_not_allowed);
    res.body() = "GET only\n";
  } else if (target == "/health") {
    res.set(http::field::content_type, "text/plain");
    res.body() = "ok\n";
  } else if (target == "/trace") {
    res.set(http::field::content_type, "application/x-ndjson");
    res.body() = to_jsonl(session.trace());
  } else if (target == "/inputs") {
    nlohmann::json steer = nlohmann::json::array();
    for (const SteerInput& s : session.steer_log()) {
      steer.push_back({{"tick", s.tick}, {"vx", s.velocity.x}, {"vy", s.velocity.y}});
    }
    const Scenario rec = session.recorded_scenario();
    nlohmann::json start = nullptr;
    if (!rec.pedestrians.empty()) {
      const Vec2 p = rec.pedestrians.front().script.waypoints().front().position;
      start = {p.x, p.y};
    }
    nlohmann::json body = {{"dt_ms", session.config().dt_ms},
                           {"ticks", session.current_tick()},
                           {"start", start},
                           {"steer", steer}};
    res.set(http::field::content_type, "application/json");
    res.body() = body.dump();
  } else if (target == "/scenario") {
    res.set(http::field::content_type, "application/json");
    res.body() = to_json(session.recorded_scenario()).dump();
  } else {
    res.result(http::status::not_found);
    res.body() = "not found\n";
  }
  res.prepare_payload();
  return res;
}

BridgeServer::BridgeServer(Scenario scenario, BridgeOptions options)
    : impl_(std::make_unique<Impl>(std::move(scenario), options)) {}

BridgeServer::~BridgeServer() = default;

void BridgeServer::listen() {
  beast::error_code ec;
  const auto address = net::ip::make_address(impl_->options.bind_address, ec);
  if (ec) throw Error(ErrorKind::Io, "bad bind address " + impl_->options.bind_address);
  const tcp::endpoint ep{address, impl_->options.port};
  auto& acc = impl_->acceptor;
  acc.open(ep.protocol(), ec);
  if (!ec) acc.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) acc.bind(ep, ec);
  if (!ec) acc.listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    throw Error(ErrorKind::Io, "cannot listen on " + impl_->options.bind_address + ":" +
                                   std::to_string(impl_->options.port) + ": " + ec.message());
  }
}

std::uint16_t BridgeServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void BridgeServer::run() {
  net::signal_set signals(impl_->ioc);
  if (impl_->options.handle_signals) {
    signals.add(SIGINT);
    signals.add(SIGTERM);
    signals.async_wait([this](beast::error_code ec, int) {
      if (!ec) impl_->ioc.stop();
    });
  }
  impl_->do_accept();
  impl_->next_tick = std::chrono::steady_clock::now();
  impl_->schedule_tick();
  impl_->ioc.run();
  for (const auto& c : impl_->connections) c->close();
  impl_->connections.clear();
}

void BridgeServer::stop() { impl_->ioc.stop(); }

}  // namespace hribench
