// Copyright 2026 The driveadapt Authors
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

#include "service/server.hpp"

#include <chrono>
#include <csignal>
#include <deque>
#include <fstream>
#include <vector>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/signal_set.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "common/error.hpp"
#include "service/live_session.hpp"

namespace driveadapt::service {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

namespace {

constexpr std::size_t kMaxBacklog = 256;

class Connection;

}  // namespace

struct Server::Impl : std::enable_shared_from_this<Server::Impl> {
  explicit Impl(const ServerOptions& o)
      : opts(o), session(o.session), acceptor(ioc), timer(ioc), signals(ioc) {}

  void open();
  void accept();
  void schedule_tick();
  void on_tick();
  void broadcast(const std::string& msg, bool droppable);
  void attach(const std::shared_ptr<Connection>& c);
  void detach(const Connection* c);
  void on_message(Connection& c, const std::string& text);
  void write_record();
  void shutdown();

  ServerOptions opts;
  asio::io_context ioc;
  LiveSession session;
  tcp::acceptor acceptor;
  asio::steady_timer timer;
  asio::signal_set signals;
  std::vector<std::shared_ptr<Connection>> connections;
  const Connection* controller = nullptr;
  std::chrono::steady_clock::time_point next_tick;
  bool last_paused = false;
  bool recorded = false;
  bool stopping = false;
};

namespace {

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, Server::Impl& server)
      : ws_(std::move(socket)), server_(server) {}

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(beast::bind_front_handler(&Connection::on_accept, shared_from_this()));
  }

  void send(std::string msg, bool droppable) {
    if (!open_) return;
    if (droppable && out_.size() >= kMaxBacklog) return;
    out_.push_back(std::move(msg));
    if (out_.size() == 1) write();
  }

  void close() {
    if (!open_) return;
    open_ = false;
    ws_.async_close(websocket::close_code::going_away,
                    [self = shared_from_this()](beast::error_code) {});
  }

  bool open() const { return open_; }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    open_ = true;
    ws_.text(true);
    server_.attach(shared_from_this());
    read();
  }

  void read() {
    ws_.async_read(buf_, beast::bind_front_handler(&Connection::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      lost();
      return;
    }
    const auto text = beast::buffers_to_string(buf_.data());
    buf_.consume(buf_.size());
    server_.on_message(*this, text);
    if (open_) read();
  }

  void write() {
    ws_.async_write(asio::buffer(out_.front()),
                    beast::bind_front_handler(&Connection::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      lost();
      return;
    }
    out_.pop_front();
    if (!out_.empty()) write();
  }

  void lost() {
    open_ = false;
    out_.clear();
    server_.detach(this);
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buf_;
  std::deque<std::string> out_;
  Server::Impl& server_;
  bool open_ = false;
};

}  // namespace

void Server::Impl::open() {
  beast::error_code ec;
  const auto addr = asio::ip::make_address(opts.address, ec);
  if (ec) throw invalid_argument("bad listen address '" + opts.address + "'");
  const tcp::endpoint ep(addr, opts.port);
  acceptor.open(ep.protocol(), ec);
  if (!ec) acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  if (!ec) acceptor.bind(ep, ec);
  if (!ec) acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec)
    throw io_error("cannot listen on " + opts.address + ":" + std::to_string(opts.port) + ": " +
                   ec.message());
}

void Server::Impl::accept() {
  acceptor.async_accept([self = shared_from_this()](beast::error_code ec, tcp::socket s) {
    if (self->stopping) return;
    if (!ec) std::make_shared<Connection>(std::move(s), *self)->start();
    self->accept();
  });
}

void Server::Impl::schedule_tick() {
  const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(opts.session.sim.tick / opts.time_scale));
  next_tick += period;
  const auto now = std::chrono::steady_clock::now();
  if (next_tick < now - 10 * period) next_tick = now;  // do not race to catch up
  timer.expires_at(next_tick);
  timer.async_wait([self = shared_from_this()](beast::error_code ec) {
    if (!ec && !self->stopping) self->on_tick();
  });
}

void Server::Impl::on_tick() {
  try {
    session.step();
  } catch (const std::exception&) {
    // Commands are validated on arrival; a failure here ends the tick only.
  }
  const bool paused = session.engine().paused();
  const bool finished = session.engine().finished();
  if (session.frame_due() || paused != last_paused || finished) {
    if (!(finished && recorded)) broadcast(session.frame().dump(), true);
    last_paused = paused;
  }
  if (finished && !recorded) write_record();
  schedule_tick();
}

void Server::Impl::broadcast(const std::string& msg, bool droppable) {
  for (const auto& c : connections) c->send(msg, droppable);
}

void Server::Impl::attach(const std::shared_ptr<Connection>& c) {
  connections.push_back(c);
  const bool read_only = controller != nullptr;
  if (!read_only) controller = c.get();
  c->send(session.hello(read_only).dump(), false);
  c->send(session.frame().dump(), false);
}

void Server::Impl::detach(const Connection* c) {
  std::erase_if(connections, [c](const auto& p) { return p.get() == c; });
  if (controller == c) controller = nullptr;
}

void Server::Impl::on_message(Connection& c, const std::string& text) {
  json reply;
  if (&c != controller) {
    reply = {{"v", kWireVersion}, {"type", "error"}, {"reason", "read-only connection"}};
    try {
      const auto msg = json::parse(text);
      if (msg.is_object() && msg.contains("id")) reply["id"] = msg["id"];
    } catch (const json::exception&) {
    }
  } else {
    reply = session.submit_text(text);
  }
  c.send(reply.dump(), false);
}

void Server::Impl::write_record() {
  recorded = true;
  if (!opts.record_dir) return;
  std::filesystem::create_directories(*opts.record_dir);
  std::ofstream rec(*opts.record_dir / "session.json", std::ios::binary);
  rec << session.engine().record().dump(2) << '\n';
  std::ofstream ticks(*opts.record_dir / "ticks.jsonl", std::ios::binary);
  session.engine().log().write_jsonl(ticks);
}

void Server::Impl::shutdown() {
  if (stopping) return;
  stopping = true;
  if (!recorded) write_record();
  beast::error_code ec;
  acceptor.close(ec);
  timer.cancel();
  signals.cancel(ec);
  for (const auto& c : std::vector(connections)) c->close();
  connections.clear();
  controller = nullptr;
}

Server::Server(const ServerOptions& opts) {
  if (!(opts.time_scale > 0.0)) throw invalid_argument("time scale must be positive");
  impl_ = std::make_shared<Impl>(opts);
  impl_->open();
}

Server::~Server() = default;

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() {
  auto& s = *impl_;
  if (s.opts.handle_signals) {
    s.signals.add(SIGINT);
    s.signals.add(SIGTERM);
    s.signals.async_wait([self = impl_](beast::error_code ec, int) {
      if (!ec) self->shutdown();
    });
  }
  s.accept();
  s.next_tick = std::chrono::steady_clock::now();
  s.schedule_tick();
  s.ioc.run();
}

void Server::stop() {
  asio::post(impl_->ioc, [self = impl_] { self->shutdown(); });
}

}  // namespace driveadapt::service
