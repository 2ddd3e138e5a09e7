#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "posewire/wire.hpp"

namespace posewire::stream {

class StreamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

/// Parses "host:port". Throws std::invalid_argument.
Endpoint parse_endpoint(const std::string& text);

struct ServerOptions {
  Endpoint bind;
  std::size_t queue_depth = 64;
  // SO_SNDBUF for subscriber sockets; 0 keeps the kernel default.
  int send_buffer_bytes = 0;
  // How long stop() lets subscribers drain queued frames.
  std::chrono::milliseconds drain_timeout{2000};
};

struct ServerStats {
  std::uint64_t published = 0;
  std::uint64_t accepted = 0;
  std::uint64_t dropped_slow = 0;  // disconnected because their queue overflowed
  std::uint64_t write_failures = 0;
};

/// TCP fan-out of fixed-size pose frames.
///
/// Each subscriber gets a bounded queue and a writer thread. publish()
/// encodes once and enqueues to every live subscriber; a subscriber whose
/// queue is full is disconnected so it cannot stall the producer. New
/// subscribers receive frames published after they were accepted.
class PoseServer {
 public:
  /// Binds and starts accepting. Throws StreamError if the endpoint cannot
  /// be bound.
  explicit PoseServer(ServerOptions options);
  ~PoseServer();

  PoseServer(const PoseServer&) = delete;
  PoseServer& operator=(const PoseServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }

  void publish(const PoseFrame& frame);

  /// Live subscribers (accepted and not disconnected).
  std::size_t subscriber_count() const;
  bool wait_for_subscribers(std::size_t n, std::chrono::milliseconds timeout) const;
  ServerStats stats() const;

  /// Stops accepting, drains queues up to drain_timeout, closes everything.
  void stop();

 private:
  struct Subscriber;

  void accept_loop();
  void reap_closed();

  ServerOptions options_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;

  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  std::vector<std::shared_ptr<Subscriber>> subscribers_;
  ServerStats stats_;
};

/// Publishes every frame from `source` at `fps` (0 = unpaced), stamping seq
/// as a running counter and timestamp_us as time since the first frame.
/// Returns the number of frames published.
std::uint64_t serve(PoseServer& server, const std::function<std::optional<PoseFrame>()>& source, double fps);

/// Blocking reference client.
class PoseClient {
 public:
  /// Throws StreamError if the connection fails. A nonzero `recv_buffer_bytes`
  /// sets SO_RCVBUF before connecting.
  explicit PoseClient(const Endpoint& endpoint, int recv_buffer_bytes = 0);
  ~PoseClient();

  PoseClient(const PoseClient&) = delete;
  PoseClient& operator=(const PoseClient&) = delete;

  /// Next raw frame, or nullopt on a clean end of stream. A stream that ends
  /// inside a frame throws wire::WireError (short read).
  std::optional<wire::FrameBytes> next_bytes();
  std::optional<PoseFrame> next();

  /// Gives up on reads that block longer than `timeout` (StreamError).
  void set_timeout(std::chrono::milliseconds timeout);

 private:
  int fd_ = -1;
};

}  // namespace posewire::stream
