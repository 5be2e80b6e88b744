#include "emo20q/service/server.hpp"

#include <deque>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <json.hpp>

namespace emo20q {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

constexpr const char* kPlaceholderPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>EMO20Q</title></head>
<body><h1>EMO20Q</h1>
<p>The chat service is running. Connect a client to <code>/ws</code>, or start the
server with <code>--static-dir</code> pointing at the web UI build.</p>
</body></html>
)";

std::string mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html") return "text/html; charset=utf-8";
  if (ext == ".js") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  return "application/octet-stream";
}

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, std::shared_ptr<ChatService> service)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), service_(std::move(service)) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    arm_timer();
    do_read();
  }

  void arm_timer() {
    timer_.expires_after(service_->config().idle_timeout);
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->closing_) return;
      if (!self->bound_.empty()) self->deliver(self->service_->timeout(self->bound_));
      if (!self->closing_) self->arm_timer();
    });
  }

  void do_read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      timer_.cancel();
      if (!bound_.empty()) service_->detach(bound_);
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    deliver(service_->handle_text(bound_, text));
    if (closing_) return;
    arm_timer();
    do_read();
  }

  void deliver(ChatService::Outcome out) {
    bound_ = out.session_id;
    for (const auto& m : out.replies) queue_.push_back(encode(m));
    if (out.close) {
      closing_ = true;
      timer_.cancel();
    }
    if (!writing_) do_write();
  }

  void do_write() {
    if (queue_.empty()) {
      writing_ = false;
      if (closing_)
        ws_.async_close(websocket::close_code::normal,
                        [self = shared_from_this()](beast::error_code) {});
      return;
    }
    writing_ = true;
    ws_.text(true);
    ws_.async_write(asio::buffer(queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->timer_.cancel();
                        if (!self->bound_.empty()) self->service_->detach(self->bound_);
                        return;
                      }
                      self->queue_.pop_front();
                      self->do_write();
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  asio::steady_timer timer_;
  beast::flat_buffer buffer_;
  std::shared_ptr<ChatService> service_;
  std::string bound_;
  std::deque<std::string> queue_;
  bool writing_ = false;
  bool closing_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, std::shared_ptr<ChatService> service,
              std::filesystem::path static_dir)
      : stream_(std::move(socket)), service_(std::move(service)), static_dir_(std::move(static_dir)) {}

  void run() {
    asio::dispatch(stream_.get_executor(),
                   beast::bind_front_handler(&HttpSession::do_read, shared_from_this()));
  }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      if (req_.target() == "/ws") {
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), service_)->run(std::move(req_));
        return;
      }
      return send(text_response(http::status::not_found, "text/plain", "not found\n"));
    }
    send(route());
  }

  http::response<http::string_body> text_response(http::status status, const std::string& type,
                                                   std::string body) {
    http::response<http::string_body> res{status, req_.version()};
    res.set(http::field::server, "emo20q");
    res.set(http::field::content_type, type);
    res.keep_alive(req_.keep_alive());
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  }

  http::response<http::string_body> route() {
    if (req_.method() != http::verb::get)
      return text_response(http::status::method_not_allowed, "text/plain", "method not allowed\n");
    std::string target(req_.target());
    if (auto q = target.find('?'); q != std::string::npos) target.resize(q);

    if (target == "/healthz") {
      const bool store_ok = service_->transcripts_healthy();
      nlohmann::ordered_json j = {{"status", store_ok ? "ok" : "degraded"},
                                  {"transcripts", store_ok ? "ok" : "degraded"},
                                  {"sessions", service_->session_count()}};
      return text_response(http::status::ok, "application/json", j.dump() + "\n");
    }
    if (target == "/") target = "/index.html";
    if (target.find("..") != std::string::npos)
      return text_response(http::status::bad_request, "text/plain", "bad path\n");
    if (!static_dir_.empty()) {
      const auto path = static_dir_ / target.substr(1);
      std::ifstream in(path, std::ios::binary);
      if (in) {
        std::ostringstream body;
        body << in.rdbuf();
        return text_response(http::status::ok, mime_type(path), body.str());
      }
    }
    if (target == "/index.html")
      return text_response(http::status::ok, "text/html; charset=utf-8", kPlaceholderPage);
    return text_response(http::status::not_found, "text/plain", "not found\n");
  }

  void send(http::response<http::string_body> res) {
    auto sp = std::make_shared<http::response<http::string_body>>(std::move(res));
    http::async_write(stream_, *sp,
                      [self = shared_from_this(), sp](beast::error_code ec, std::size_t) {
                        if (ec) return;
                        if (!sp->keep_alive()) {
                          beast::error_code ignored;
                          self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
                          return;
                        }
                        self->do_read();
                      });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  std::shared_ptr<ChatService> service_;
  std::filesystem::path static_dir_;
};

}  // namespace

struct Server::Impl {
  std::shared_ptr<ChatService> service;
  ServerConfig config;
  asio::io_context ioc;
  tcp::acceptor acceptor{ioc};
  asio::steady_timer eviction{ioc};
  std::vector<std::thread> threads;
  std::mutex mu;
  bool stopped = false;

  void accept() {
    acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<HttpSession>(std::move(socket), service, config.static_dir)->run();
      accept();
    });
  }

  void schedule_eviction() {
    eviction.expires_after(std::chrono::seconds(5));
    eviction.async_wait([this](beast::error_code ec) {
      if (ec) return;
      service->evict_expired();
      schedule_eviction();
    });
  }
};

Server::Server(std::shared_ptr<ChatService> service, ServerConfig config)
    : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  impl_->config = std::move(config);
}

Server::~Server() {
  stop();
  wait();
}

void Server::start() {
  auto& im = *impl_;
  const tcp::endpoint ep{asio::ip::make_address(im.config.address), im.config.port};
  im.acceptor.open(ep.protocol());
  im.acceptor.set_option(asio::socket_base::reuse_address(true));
  im.acceptor.bind(ep);
  im.acceptor.listen(asio::socket_base::max_listen_connections);
  im.accept();
  im.schedule_eviction();
  const unsigned n = std::max(1u, im.config.threads);
  for (unsigned i = 0; i < n; ++i) im.threads.emplace_back([&im] { im.ioc.run(); });
}

void Server::wait() {
  for (auto& t : impl_->threads)
    if (t.joinable()) t.join();
  impl_->threads.clear();
}

void Server::stop() {
  std::lock_guard lock(impl_->mu);
  if (impl_->stopped) return;
  impl_->stopped = true;
  impl_->ioc.stop();
}

std::uint16_t Server::port() const { return impl_->acceptor.local_endpoint().port(); }

}  // namespace emo20q
