#pragma once

#include <sys/socket.h>
#include <sys/time.h>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "emo20q/service/wire.hpp"

namespace emo20q::testing {

namespace beast = boost::beast;
namespace net = boost::asio;
using tcp = net::ip::tcp;

// Sets a receive timeout on a blocking socket so a hung server fails a test
// instead of hanging it.
inline void set_read_timeout(tcp::socket& s, int seconds) {
  timeval tv{seconds, 0};
  ::setsockopt(s.native_handle(), SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
}

// Blocking websocket client speaking the WireMessage protocol.
class WsClient {
 public:
  explicit WsClient(std::uint16_t port, int read_timeout_secs = 10) : ws_(ioc_) {
    tcp::resolver resolver(ioc_);
    net::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    set_read_timeout(ws_.next_layer(), read_timeout_secs);
    ws_.handshake("127.0.0.1", "/ws");
  }

  void send_raw(const std::string& text) { ws_.write(net::buffer(text)); }
  void send(const WireMessage& m) { send_raw(encode(m)); }

  // Empty once the server closed the connection or the read timed out.
  std::optional<WireMessage> read() {
    beast::flat_buffer buf;
    beast::error_code ec;
    ws_.read(buf, ec);
    if (ec) return std::nullopt;
    return decode(beast::buffers_to_string(buf.data()));
  }

  // Reads up to and including the next game.state (or the game.end that
  // follows a final game.state), or an error.
  std::vector<WireMessage> read_batch() {
    std::vector<WireMessage> out;
    while (auto m = read()) {
      out.push_back(*m);
      if (m->type == MessageType::GameEnd || m->type == MessageType::Error) break;
      if (m->type == MessageType::GameState &&
          nlohmann::json::parse(m->text).value("state", "") != "GameEnd")
        break;
    }
    return out;
  }

  // Drops the TCP connection without a websocket close handshake.
  void drop() {
    beast::error_code ec;
    ws_.next_layer().shutdown(tcp::socket::shutdown_both, ec);
    ws_.next_layer().close(ec);
  }

 private:
  net::io_context ioc_;
  beast::websocket::stream<tcp::socket> ws_;
};

struct HttpReply {
  int status = 0;
  std::string content_type;
  std::string body;
};

inline HttpReply http_get(std::uint16_t port, const std::string& target) {
  net::io_context ioc;
  tcp::resolver resolver(ioc);
  beast::tcp_stream stream(ioc);
  stream.connect(resolver.resolve("127.0.0.1", std::to_string(port)));
  stream.expires_after(std::chrono::seconds(10));
  beast::http::request<beast::http::empty_body> req{beast::http::verb::get, target, 11};
  req.set(beast::http::field::host, "127.0.0.1");
  beast::http::write(stream, req);
  beast::flat_buffer buf;
  beast::http::response<beast::http::string_body> res;
  beast::http::read(stream, buf, res);
  beast::error_code ec;
  stream.socket().shutdown(tcp::socket::shutdown_both, ec);
  return {static_cast<int>(res.result_int()), std::string(res[beast::http::field::content_type]),
          res.body()};
}

}  // namespace emo20q::testing
