// Copyright 2026 The SlopeLink Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "slopelink/tools/server.hpp"

#include <spdlog/spdlog.h>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "slopelink/protocol.hpp"
#include "slopelink/session.hpp"

namespace slopelink::tools {
namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

constexpr std::string_view kSocketPath = "/ws";
constexpr std::string_view kTerrainPath = "/terrain.asc";

}  // namespace

class WsConnection;

struct Server::Impl : std::enable_shared_from_this<Server::Impl> {
  Impl(net::io_context& ioc, ServerOptions opts);

  void accept();
  void on_frame(const std::shared_ptr<WsConnection>& conn, const std::string& frame);
  void on_closed(const std::shared_ptr<WsConnection>& conn);
  void shutdown();

  net::io_context& ioc;
  ServerOptions options;
  std::shared_ptr<const TerrainGrid> grid;
  std::unique_ptr<Session> session;
  std::size_t replayed = 0;
  std::ofstream log;
  tcp::acceptor acceptor;
  bool stopped = false;
  std::set<std::shared_ptr<WsConnection>> connections;
  std::map<std::string, std::weak_ptr<WsConnection>, std::less<>> by_id;
};

class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(std::shared_ptr<Server::Impl> hub, tcp::socket socket)
      : hub_(std::move(hub)), ws_(std::move(socket)), idle_(ws_.get_executor()) {}

  void start(http::request<http::string_body> req) {
    websocket::stream_base::timeout t{};
    t.handshake_timeout = std::chrono::seconds(30);
    t.idle_timeout = websocket::stream_base::none();
    t.keep_alive_pings = false;
    ws_.set_option(t);
    ws_.text(true);
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec) {
        spdlog::debug("websocket handshake failed: {}", ec.message());
        return;
      }
      self->hub_->connections.insert(self);
      self->arm_idle();
      self->read();
    });
  }

  void send(std::string frame) {
    if (closed_) return;
    queue_.push_back(std::move(frame));
    if (queue_.size() == 1) write();
  }

  void close_after_flush() {
    close_requested_ = true;
    if (queue_.empty()) close(websocket::close_code::policy_error);
  }

  void close(websocket::close_code code) {
    if (closed_) return;
    closed_ = true;
    idle_.cancel();
    ws_.async_close(code, [self = shared_from_this()](beast::error_code) { self->finish(); });
  }

  const std::string& id() const { return id_; }
  void set_id(std::string id) { id_ = std::move(id); }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->closed_ = true;
        self->finish();
        return;
      }
      std::string frame = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->arm_idle();
      self->hub_->on_frame(self, frame);
      if (!self->closed_) self->read();
    });
  }

  void write() {
    ws_.async_write(net::buffer(queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->queue_.clear();
                        return;
                      }
                      self->queue_.pop_front();
                      if (!self->queue_.empty()) {
                        self->write();
                      } else if (self->close_requested_) {
                        self->close(websocket::close_code::policy_error);
                      }
                    });
  }

  void arm_idle() {
    idle_.expires_after(hub_->options.idle_timeout);
    idle_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      spdlog::info("closing idle connection '{}'", self->id_);
      self->close(websocket::close_code::going_away);
    });
  }

  void finish() {
    if (finished_) return;
    finished_ = true;
    idle_.cancel();
    hub_->on_closed(shared_from_this());
  }

  std::shared_ptr<Server::Impl> hub_;
  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  net::steady_timer idle_;
  std::deque<std::string> queue_;
  std::string id_;
  bool close_requested_ = false;
  bool closed_ = false;
  bool finished_ = false;
};

namespace {

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(std::shared_ptr<Server::Impl> hub, tcp::socket socket)
      : hub_(std::move(hub)), stream_(std::move(socket)) {}

  void read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       if (!ec) self->route();
                     });
  }

 private:
  void route() {
    const std::string_view target(req_.target().data(), req_.target().size());
    if (websocket::is_upgrade(req_)) {
      if (target == kSocketPath) {
        stream_.expires_never();
        std::make_shared<WsConnection>(hub_, stream_.release_socket())->start(std::move(req_));
        return;
      }
      return reply(http::status::not_found, "text/plain", "no such endpoint\n");
    }
    if (req_.method() == http::verb::get && target == kTerrainPath) {
      return reply(http::status::ok, "text/plain", hub_->options.terrain_text);
    }
    reply(http::status::not_found, "text/plain", "no such endpoint\n");
  }

  void reply(http::status status, std::string_view type, std::string body) {
    auto res = std::make_shared<http::response<http::string_body>>(status, req_.version());
    res->set(http::field::content_type, beast::string_view(type.data(), type.size()));
    res->keep_alive(req_.keep_alive());
    res->body() = std::move(body);
    res->prepare_payload();
    http::async_write(stream_, *res,
                      [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
                        if (ec) return;
                        if (res->keep_alive()) {
                          self->read();
                        } else {
                          beast::error_code ignored;
                          self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
                        }
                      });
  }

  std::shared_ptr<Server::Impl> hub_;
  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
};

}  // namespace

Server::Impl::Impl(net::io_context& io, ServerOptions opts)
    : ioc(io), options(std::move(opts)), acceptor(io) {
  std::istringstream text(options.terrain_text);
  grid = std::make_shared<const TerrainGrid>(load_terrain(text));
  const std::string ref = terrain_hash(options.terrain_text);

  std::vector<Envelope> previous;
  if (std::filesystem::exists(options.log_path)) {
    previous = read_event_log_file(options.log_path);
  }
  session = std::make_unique<Session>(
      replay_log(previous, grid, ref, SessionConfig{}, options.initial));
  replayed = previous.size();
  log.open(options.log_path, std::ios::app);
  if (!log) throw std::runtime_error("cannot open event log " + options.log_path.string());

  const tcp::endpoint endpoint(net::ip::make_address(options.address), options.port);
  acceptor.open(endpoint.protocol());
  acceptor.set_option(net::socket_base::reuse_address(true));
  acceptor.bind(endpoint);
  acceptor.listen(net::socket_base::max_listen_connections);
}

void Server::Impl::accept() {
  acceptor.async_accept(ioc, [self = shared_from_this()](
                                                   beast::error_code ec, tcp::socket socket) {
    if (self->stopped) return;
    if (!ec) {
      spdlog::debug("connection from {}", socket.remote_endpoint(ec).address().to_string());
      std::make_shared<HttpConnection>(self, std::move(socket))->read();
    }
    self->accept();
  });
}

void Server::Impl::on_frame(const std::shared_ptr<WsConnection>& conn, const std::string& frame) {
  spdlog::debug("<- {}", frame);
  const std::size_t logged = session->log().size();
  const std::vector<Outbound> out = session->handle_frame(frame);
  for (std::size_t i = logged; i < session->log().size(); ++i) {
    append_event_log(log, session->log()[i]);
  }
  log.flush();

  for (const Outbound& o : out) {
    std::shared_ptr<WsConnection> target = conn;
    if (!o.to.empty()) {
      auto it = by_id.find(o.to);
      target = it == by_id.end() ? nullptr : it->second.lock();
      if (!target) continue;  // recipient is offline
    } else if (o.envelope.type == MessageType::kWelcome) {
      const std::string id = o.envelope.payload.at("sender_id").get<std::string>();
      if (auto it = by_id.find(id); it != by_id.end()) {
        if (auto old = it->second.lock(); old && old != conn) old->set_id({});
      }
      conn->set_id(id);
      by_id[id] = conn;
      spdlog::info("'{}' joined as {}", id, o.envelope.payload.at("role").get<std::string>());
    }
    const std::string text = encode(o.envelope);
    spdlog::debug("-> {}: {}", target->id(), text);
    target->send(text);
    if (o.close_after) target->close_after_flush();
  }
}

void Server::Impl::on_closed(const std::shared_ptr<WsConnection>& conn) {
  connections.erase(conn);
  if (conn->id().empty()) return;
  if (auto it = by_id.find(conn->id()); it != by_id.end() && it->second.lock() == conn) {
    by_id.erase(it);
    session->mark_disconnected(conn->id());
    spdlog::info("'{}' disconnected", conn->id());
  }
}

void Server::Impl::shutdown() {
  if (stopped) return;
  stopped = true;
  beast::error_code ignored;
  acceptor.close(ignored);
  for (const auto& conn : std::vector(connections.begin(), connections.end())) {
    conn->close(websocket::close_code::going_away);
  }
}

Server::Server(net::io_context& ioc, ServerOptions options)
    : impl_(std::make_shared<Impl>(ioc, std::move(options))) {}

Server::~Server() {
  if (impl_) impl_->stopped = true;
}

std::uint16_t Server::port() const { return impl_->acceptor.local_endpoint().port(); }

std::size_t Server::replayed() const { return impl_->replayed; }

void Server::start() {
  spdlog::info("listening on {}:{} (ws {}, terrain {})", impl_->options.address, port(),
               kSocketPath, kTerrainPath);
  impl_->accept();
}

void Server::stop() { impl_->shutdown(); }

}  // namespace slopelink::tools
