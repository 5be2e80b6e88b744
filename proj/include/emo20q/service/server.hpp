#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "emo20q/service/chat_service.hpp"

namespace emo20q {

struct ServerConfig {
  std::string address = "0.0.0.0";
  std::uint16_t port = 8080;  // 0 picks a free port
  std::filesystem::path static_dir;  // served at "/"; empty serves a placeholder page
  unsigned threads = 2;
};

// HTTP + websocket front door:
//   GET /        static UI
//   GET /healthz service and transcript-store status
//   /ws          websocket upgrade; one JSON WireMessage per text frame
class Server {
 public:
  Server(std::shared_ptr<ChatService> service, ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts worker threads; returns immediately.
  void start();
  // Blocks until stop() is called from another thread or a signal handler.
  void wait();
  void stop();

  std::uint16_t port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace emo20q
